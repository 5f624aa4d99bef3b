use crate::error::{Error, Result};
use crate::group::{Dihedral, DihedralElement};

/// A dense `rows × cols` grid of elements of `D_k`, row-major.
///
/// `block_side` is set when the grid is a `2m × 2m` square assembled from
/// four `m × m` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupGrid {
    group: Dihedral,
    rows: usize,
    cols: usize,
    block_side: Option<usize>,
    cells: Vec<DihedralElement>,
}

impl GroupGrid {
    pub fn new(group: Dihedral, rows: usize, cols: usize, cells: Vec<DihedralElement>) -> Result<Self> {
        if rows == 0 || cols == 0 || cells.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} cells for a {rows}x{cols} grid",
                cells.len()
            )));
        }
        if let Some((n, bad)) = cells.iter().enumerate().find(|(_, c)| !group.contains(**c)) {
            return Err(Error::ExponentRange {
                token: format!("{bad} at cell ({}, {})", n / cols, n % cols),
                k: group.k(),
            });
        }
        Ok(GroupGrid {
            group,
            rows,
            cols,
            block_side: None,
            cells,
        })
    }

    pub fn from_rows(group: Dihedral, rows: Vec<Vec<DihedralElement>>) -> Result<Self> {
        let n = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        GroupGrid::new(group, n, c, rows.into_iter().flatten().collect())
    }

    /// Mark the grid as four `m × m` blocks. Requires a `2m × 2m` square.
    pub fn with_block_side(mut self, m: usize) -> Result<Self> {
        if m == 0 || self.rows != 2 * m || self.cols != 2 * m {
            return Err(Error::Dimension(format!(
                "block side {m} does not split a {}x{} grid",
                self.rows, self.cols
            )));
        }
        self.block_side = Some(m);
        Ok(self)
    }

    pub fn group(&self) -> Dihedral {
        self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn block_side(&self) -> Option<usize> {
        self.block_side
    }

    pub fn get(&self, i: usize, j: usize) -> DihedralElement {
        self.cells[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: DihedralElement) {
        assert!(self.group.contains(a));
        self.cells[i * self.cols + j] = a;
    }

    pub fn cells(&self) -> &[DihedralElement] {
        &self.cells
    }

    pub fn row(&self, i: usize) -> &[DihedralElement] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` top to bottom.
    pub fn col(&self, j: usize) -> Vec<DihedralElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<DihedralElement>> {
        self.cells.chunks(self.cols).map(<[DihedralElement]>::to_vec).collect()
    }

    /// The `m × m` block `(u, v)` with `u, v ∈ {0, 1}`.
    pub fn block(&self, u: usize, v: usize) -> Option<GroupGrid> {
        let m = self.block_side?;
        let cells = (0..m)
            .flat_map(|i| (0..m).map(move |j| (u * m + i, v * m + j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Some(GroupGrid {
            group: self.group,
            rows: m,
            cols: m,
            block_side: None,
            cells,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        let g = Dihedral::new(2).unwrap();
        let cells = g.enumerate_elements();
        let grid = GroupGrid::new(g, 2, 2, cells.clone()).unwrap();
        assert_eq!(grid.col(1), vec![cells[1], cells[3]]);
        assert!(GroupGrid::new(g, 3, 2, cells.clone()).is_err());
        assert!(GroupGrid::new(g, 0, 0, vec![]).is_err());
        let grid = grid.with_block_side(1).unwrap();
        assert_eq!(grid.block(1, 0).unwrap().cells(), &[cells[2]]);
        assert!(GroupGrid::new(g, 1, 4, cells).unwrap().with_block_side(2).is_err());
    }

    #[test]
    fn rejects_foreign_elements() {
        let big = Dihedral::new(8).unwrap();
        let small = Dihedral::new(2).unwrap();
        let err = GroupGrid::new(small, 1, 1, vec![big.rotation(5)]).unwrap_err();
        assert!(err.to_string().contains("cell (0, 0)"));
    }
}
