//! Row, column and diagonal products of group grids under the four ordering
//! classes.
//!
//! Conventions used throughout:
//!
//! * rows are read left to right, columns by *descending* row index;
//! * a cyclic product "starting at `p`" begins with the cell at `p`, so a
//!   row started at column `j` is `a_{i,j} a_{i,j+1} … a_{i,j−1}` and a
//!   column started at row `i` is `a_{i,j} a_{i−1,j} … a_{i+1,j}`;
//! * a semi-circular line is the product of its two halves, left half then
//!   right half for rows and top half then bottom half for columns, each
//!   taken cyclically within its half;
//! * existential searches try starts by increasing offset from the
//!   diagonal (row `i` from column `i + c`, column `j` from row `j − c`),
//!   so reported witnesses are the smallest shifts that work.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GroupGrid;
use crate::group::{Dihedral, DihedralElement, FiniteGroup};

/// Longest line for which [`OrderingClass::Arbitrary`] tries every order.
pub const MAX_ARBITRARY_LINE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingClass {
    /// Rows left to right, columns bottom to top.
    Linear,
    /// One cyclic start per line.
    Circular,
    /// Independent cyclic starts in each half of a `2m × 2m` square.
    SemiCircular { block_side: usize },
    /// Any order of each line.
    Arbitrary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    MagicSquare,
    SemiMagicSquare,
    MagicRectangle,
    NotMagic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub ok: bool,
    /// Cell count equals the group order.
    pub size_matches: bool,
    pub missing: Vec<DihedralElement>,
    /// Elements occurring more than once (listed once per surplus copy).
    pub extra: Vec<DihedralElement>,
}

/// Per-line half products `[first half, second half]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfProducts {
    pub rows: Vec<[DihedralElement; 2]>,
    pub cols: Vec<[DihedralElement; 2]>,
}

/// Outcome of checking one grid under one ordering class.
///
/// Witnesses are index lists whose meaning depends on the ordering: empty
/// for linear, `[start]` for circular, `[start, start']` (absolute indices)
/// for semi-circular, and the cell order for arbitrary.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub ordering: OrderingClass,
    pub verdict: Verdict,
    pub row_products: Vec<DihedralElement>,
    pub col_products: Vec<DihedralElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_products: Option<HalfProducts>,
    pub row_witnesses: Vec<Vec<usize>>,
    pub col_witnesses: Vec<Vec<usize>>,
    pub coverage: Coverage,
    /// Values every row can reach.
    pub row_constants: Vec<DihedralElement>,
    /// Values every column can reach.
    pub col_constants: Vec<DihedralElement>,
    /// Values every row and every column can reach.
    pub common_constants: Vec<DihedralElement>,
    pub row_constant: Option<DihedralElement>,
    pub col_constant: Option<DihedralElement>,
    pub magic_constant: Option<DihedralElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonal_products: Option<[DihedralElement; 2]>,
}

impl VerificationReport {
    pub fn is_semi_magic(&self) -> bool {
        matches!(self.verdict, Verdict::SemiMagicSquare | Verdict::MagicSquare)
    }

    pub fn is_magic_rectangle(&self) -> bool {
        self.verdict != Verdict::NotMagic
    }

    /// Add diagonal products and upgrade a semi-magic verdict to magic when
    /// both diagonals give the magic constant.
    pub fn with_diagonals(mut self, grid: &GroupGrid) -> Result<Self> {
        let diag = diagonal_products(grid)?;
        if self.verdict == Verdict::SemiMagicSquare
            && self.magic_constant.is_some_and(|mu| diag.iter().all(|d| *d == mu))
        {
            self.verdict = Verdict::MagicSquare;
        }
        self.diagonal_products = Some(diag);
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One way to evaluate a line.
#[derive(Clone, Debug)]
struct LineOption {
    product: DihedralElement,
    witness: Vec<usize>,
    halves: Option<[DihedralElement; 2]>,
}

/// Options for one line, most preferred first.
type LineOptions = Vec<LineOption>;

pub fn check_coverage(grid: &GroupGrid) -> Coverage {
    let g = grid.group();
    let mut counts = vec![0usize; 2 * g.k() as usize];
    for c in grid.cells() {
        counts[g.index_of(*c)] += 1;
    }
    let all = g.enumerate_elements();
    let missing: Vec<_> = all.iter().zip(&counts).filter(|(_, n)| **n == 0).map(|(a, _)| *a).collect();
    let extra: Vec<_> = all
        .iter()
        .zip(&counts)
        .flat_map(|(a, n)| std::iter::repeat(*a).take(n.saturating_sub(1)))
        .collect();
    let size_matches = grid.cells().len() == counts.len();
    Coverage {
        ok: size_matches && missing.is_empty() && extra.is_empty(),
        size_matches,
        missing,
        extra,
    }
}

fn product(g: Dihedral, seq: impl IntoIterator<Item = DihedralElement>) -> DihedralElement {
    g.sequence_product(seq).expect("lines are nonempty")
}

/// `line[start] line[start+1] … line[start−1]`.
pub fn cyclic_product(g: Dihedral, line: &[DihedralElement], start: usize) -> DihedralElement {
    let n = line.len();
    product(g, (0..n).map(|d| line[(start + d) % n]))
}

/// `line[start] line[start−1] … line[start+1]`, for columns given top to
/// bottom.
pub fn descending_cyclic_product(g: Dihedral, line: &[DihedralElement], start: usize) -> DihedralElement {
    let n = line.len();
    product(g, (0..n).map(|d| line[(start + n - d) % n]))
}

fn pick(lines: &[&LineOptions], candidates: &BTreeSet<DihedralElement>) -> Option<DihedralElement> {
    let first = lines.first()?.first()?.product;
    if candidates.contains(&first) && lines.iter().all(|l| l[0].product == first) {
        return Some(first);
    }
    candidates.first().copied()
}

fn reachable(lines: &[LineOptions]) -> BTreeSet<DihedralElement> {
    let mut it = lines.iter().map(|l| l.iter().map(|o| o.product).collect::<BTreeSet<_>>());
    let first = it.next().unwrap_or_default();
    it.fold(first, |acc, s| &acc & &s)
}

fn choose(line: &LineOptions, target: Option<DihedralElement>) -> &LineOption {
    target
        .and_then(|t| line.iter().find(|o| o.product == t))
        .unwrap_or(&line[0])
}

/// Combine per-line options into a report.
fn resolve(grid: &GroupGrid, ordering: OrderingClass, rows: Vec<LineOptions>, cols: Vec<LineOptions>) -> VerificationReport {
    let row_set = reachable(&rows);
    let col_set = reachable(&cols);
    let common: BTreeSet<_> = &row_set & &col_set;
    let all_lines: Vec<&LineOptions> = rows.iter().chain(&cols).collect();
    let row_refs: Vec<&LineOptions> = rows.iter().collect();
    let col_refs: Vec<&LineOptions> = cols.iter().collect();

    let (row_constant, col_constant, magic_constant) = match pick(&all_lines, &common) {
        Some(mu) if grid.is_square() => (Some(mu), Some(mu), Some(mu)),
        _ => (pick(&row_refs, &row_set), pick(&col_refs, &col_set), None),
    };

    let row_choice: Vec<&LineOption> = rows.iter().map(|l| choose(l, row_constant)).collect();
    let col_choice: Vec<&LineOption> = cols.iter().map(|l| choose(l, col_constant)).collect();
    let half_products = row_choice[0].halves.map(|_| HalfProducts {
        rows: row_choice.iter().map(|o| o.halves.expect("halves")).collect(),
        cols: col_choice.iter().map(|o| o.halves.expect("halves")).collect(),
    });

    let coverage = check_coverage(grid);
    let verdict = match (row_constant, col_constant, magic_constant) {
        _ if !coverage.ok => Verdict::NotMagic,
        (_, _, Some(_)) => Verdict::SemiMagicSquare,
        (Some(_), Some(_), None) => Verdict::MagicRectangle,
        _ => Verdict::NotMagic,
    };
    VerificationReport {
        ordering,
        verdict,
        row_products: row_choice.iter().map(|o| o.product).collect(),
        col_products: col_choice.iter().map(|o| o.product).collect(),
        half_products,
        row_witnesses: row_choice.iter().map(|o| o.witness.clone()).collect(),
        col_witnesses: col_choice.iter().map(|o| o.witness.clone()).collect(),
        coverage,
        row_constants: row_set.into_iter().collect(),
        col_constants: col_set.into_iter().collect(),
        common_constants: common.into_iter().collect(),
        row_constant,
        col_constant,
        magic_constant,
        diagonal_products: None,
    }
}

fn fixed(product: DihedralElement, witness: Vec<usize>) -> LineOptions {
    vec![LineOption {
        product,
        witness,
        halves: None,
    }]
}

/// Rows in written order, columns from the bottom row up.
pub fn linear_products(grid: &GroupGrid) -> VerificationReport {
    let g = grid.group();
    let rows = (0..grid.rows())
        .map(|i| fixed(product(g, grid.row(i).iter().copied()), vec![]))
        .collect();
    let cols = (0..grid.cols())
        .map(|j| fixed(product(g, grid.col(j).into_iter().rev()), vec![]))
        .collect();
    resolve(grid, OrderingClass::Linear, rows, cols)
}

fn check_starts(starts: &[usize], lines: usize, len: usize) -> Result<()> {
    if starts.len() != lines {
        return Err(Error::Dimension(format!("{} starts for {lines} lines", starts.len())));
    }
    match starts.iter().find(|s| **s >= len) {
        Some(s) => Err(Error::BadIndex { index: *s, len }),
        None => Ok(()),
    }
}

/// Circular products with the given start per row (a column index) and per
/// column (a row index).
pub fn circular_products(grid: &GroupGrid, row_starts: &[usize], col_starts: &[usize]) -> Result<VerificationReport> {
    check_starts(row_starts, grid.rows(), grid.cols())?;
    check_starts(col_starts, grid.cols(), grid.rows())?;
    let g = grid.group();
    let rows = (0..grid.rows())
        .map(|i| fixed(cyclic_product(g, grid.row(i), row_starts[i]), vec![row_starts[i]]))
        .collect();
    let cols = (0..grid.cols())
        .map(|j| fixed(descending_cyclic_product(g, &grid.col(j), col_starts[j]), vec![col_starts[j]]))
        .collect();
    Ok(resolve(grid, OrderingClass::Circular, rows, cols))
}

fn dedup_options(options: impl Iterator<Item = LineOption>) -> LineOptions {
    let mut seen = BTreeSet::new();
    options.filter(|o| seen.insert(o.product)).collect()
}

/// Search every cyclic start of every line.
pub fn exists_circular(grid: &GroupGrid) -> VerificationReport {
    let g = grid.group();
    let (nr, nc) = (grid.rows(), grid.cols());
    let rows = (0..nr)
        .map(|i| {
            let row = grid.row(i);
            dedup_options((0..nc).map(|c| {
                let s = (i + c) % nc;
                LineOption {
                    product: cyclic_product(g, row, s),
                    witness: vec![s],
                    halves: None,
                }
            }))
        })
        .collect();
    let cols = (0..nc)
        .map(|j| {
            let col = grid.col(j);
            dedup_options((0..nr).map(|c| {
                let s = (j % nr + nr - c) % nr;
                LineOption {
                    product: descending_cyclic_product(g, &col, s),
                    witness: vec![s],
                    halves: None,
                }
            }))
        })
        .collect();
    resolve(grid, OrderingClass::Circular, rows, cols)
}

fn check_block_side(grid: &GroupGrid, m: usize) -> Result<()> {
    if m == 0 || grid.rows() != 2 * m || grid.cols() != 2 * m {
        return Err(Error::Dimension(format!(
            "semi-circular ordering with block side {m} needs a {0}x{0} grid, got {1}x{2}",
            2 * m,
            grid.rows(),
            grid.cols()
        )));
    }
    Ok(())
}

fn half_option(g: Dihedral, line: &[DihedralElement], m: usize, starts: (usize, usize), descending: bool) -> LineOption {
    let eval = |half: &[DihedralElement], s: usize| {
        if descending {
            descending_cyclic_product(g, half, s)
        } else {
            cyclic_product(g, half, s)
        }
    };
    let a = eval(&line[..m], starts.0);
    let b = eval(&line[m..], starts.1 - m);
    LineOption {
        product: g.multiply(a, b),
        witness: vec![starts.0, starts.1],
        halves: Some([a, b]),
    }
}

/// Start pairs at the block diagonals: row `i` starts at columns `i mod m`
/// and `m + i mod m`, and likewise for columns.
pub fn diagonal_starts(m: usize) -> Vec<(usize, usize)> {
    (0..2 * m).map(|i| (i % m, m + i % m)).collect()
}

/// Semi-circular products with explicit start pairs. Row starts are column
/// indices `(j, j')` with `j < m ≤ j'`; column starts are row indices.
pub fn semicircular_products(
    grid: &GroupGrid,
    m: usize,
    row_starts: &[(usize, usize)],
    col_starts: &[(usize, usize)],
) -> Result<VerificationReport> {
    check_block_side(grid, m)?;
    for starts in [row_starts, col_starts] {
        if starts.len() != 2 * m {
            return Err(Error::Dimension(format!("{} start pairs for {} lines", starts.len(), 2 * m)));
        }
        for &(a, b) in starts {
            if a >= m {
                return Err(Error::BadIndex { index: a, len: m });
            }
            if !(m..2 * m).contains(&b) {
                return Err(Error::BadIndex { index: b, len: 2 * m });
            }
        }
    }
    let g = grid.group();
    let rows = (0..2 * m)
        .map(|i| vec![half_option(g, grid.row(i), m, row_starts[i], false)])
        .collect();
    let cols = (0..2 * m)
        .map(|j| vec![half_option(g, &grid.col(j), m, col_starts[j], true)])
        .collect();
    Ok(resolve(grid, OrderingClass::SemiCircular { block_side: m }, rows, cols))
}

/// Search all `m²` start pairs of every line.
pub fn exists_semicircular(grid: &GroupGrid, m: usize) -> Result<VerificationReport> {
    check_block_side(grid, m)?;
    let g = grid.group();
    let options = |line: &[DihedralElement], d: usize, descending: bool| {
        let shift = |c: usize| {
            if descending {
                (d + m - c) % m
            } else {
                (d + c) % m
            }
        };
        dedup_options(
            (0..m)
                .cartesian_product(0..m)
                .map(|(a, b)| half_option(g, line, m, (shift(a), m + shift(b)), descending)),
        )
    };
    let rows = (0..2 * m).map(|i| options(grid.row(i), i % m, false)).collect();
    let cols = (0..2 * m).map(|j| options(&grid.col(j), j % m, true)).collect();
    Ok(resolve(grid, OrderingClass::SemiCircular { block_side: m }, rows, cols))
}

/// Row and column products of a square block shifted `c` places from its
/// diagonal: row `i` starts at column `i + c`, column `j` at row `j − c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedProducts {
    pub shift: usize,
    pub rows: Vec<DihedralElement>,
    pub cols: Vec<DihedralElement>,
}

pub fn shifted_block_products(block: &GroupGrid, c: usize) -> Result<ShiftedProducts> {
    let m = block.rows();
    if block.cols() != m {
        return Err(Error::Dimension("shifted products need a square block".into()));
    }
    if c >= m {
        return Err(Error::BadIndex { index: c, len: m });
    }
    let g = block.group();
    Ok(ShiftedProducts {
        shift: c,
        rows: (0..m).map(|i| cyclic_product(g, block.row(i), (i + c) % m)).collect(),
        cols: (0..m)
            .map(|j| descending_cyclic_product(g, &block.col(j), (j + m - c) % m))
            .collect(),
    })
}

/// Main diagonal top-left to bottom-right, anti-diagonal top-right to
/// bottom-left, each in written order.
pub fn diagonal_products(grid: &GroupGrid) -> Result<[DihedralElement; 2]> {
    if !grid.is_square() {
        return Err(Error::Dimension("diagonals need a square grid".into()));
    }
    let (g, n) = (grid.group(), grid.rows());
    Ok([
        product(g, (0..n).map(|i| grid.get(i, i))),
        product(g, (0..n).map(|i| grid.get(i, n - 1 - i))),
    ])
}

/// Every value a line can take over all orders, each with the
/// lexicographically smallest order reaching it. The identity order comes
/// first.
pub fn arbitrary_line_products<G: FiniteGroup>(g: &G, line: &[G::Elem]) -> Result<Vec<(G::Elem, Vec<usize>)>> {
    if line.len() > MAX_ARBITRARY_LINE {
        return Err(Error::LineTooLong(line.len()));
    }
    let mut seen = BTreeSet::new();
    Ok((0..line.len())
        .permutations(line.len())
        .filter_map(|p| {
            let v = g.product(p.iter().map(|&i| line[i]))?;
            seen.insert(v).then_some((v, p))
        })
        .collect())
}

/// Row and column values reachable under arbitrary orders for a row-major
/// grid over any small group: `(values all rows reach, values all columns
/// reach)`.
pub fn arbitrary_constants<G: FiniteGroup>(
    g: &G,
    rows: usize,
    cols: usize,
    cells: &[G::Elem],
) -> Result<(BTreeSet<G::Elem>, BTreeSet<G::Elem>)> {
    let sets = |lines: Vec<Vec<G::Elem>>| -> Result<BTreeSet<G::Elem>> {
        let mut acc: Option<BTreeSet<G::Elem>> = None;
        for line in lines {
            let s: BTreeSet<_> = arbitrary_line_products(g, &line)?.into_iter().map(|(v, _)| v).collect();
            acc = Some(match acc {
                Some(a) => &a & &s,
                None => s,
            });
        }
        Ok(acc.unwrap_or_default())
    };
    let row_lines = (0..rows).map(|i| cells[i * cols..(i + 1) * cols].to_vec()).collect();
    let col_lines = (0..cols).map(|j| (0..rows).map(|i| cells[i * cols + j]).collect()).collect();
    Ok((sets(row_lines)?, sets(col_lines)?))
}

fn arbitrary_report(grid: &GroupGrid) -> Result<VerificationReport> {
    let g = grid.group();
    let to_options = |line: &[DihedralElement]| -> Result<LineOptions> {
        Ok(arbitrary_line_products(&g, line)?
            .into_iter()
            .map(|(product, witness)| LineOption {
                product,
                witness,
                halves: None,
            })
            .collect())
    };
    let rows = (0..grid.rows()).map(|i| to_options(grid.row(i))).collect::<Result<_>>()?;
    let cols = (0..grid.cols()).map(|j| to_options(&grid.col(j))).collect::<Result<_>>()?;
    Ok(resolve(grid, OrderingClass::Arbitrary, rows, cols))
}

/// Check a grid under an ordering class, searching witnesses where the
/// class is existential.
pub fn verify_rectangle(grid: &GroupGrid, ordering: OrderingClass) -> Result<VerificationReport> {
    match ordering {
        OrderingClass::Linear => Ok(linear_products(grid)),
        OrderingClass::Circular => Ok(exists_circular(grid)),
        OrderingClass::SemiCircular { block_side } => exists_semicircular(grid, block_side),
        OrderingClass::Arbitrary => arbitrary_report(grid),
    }
}

/// Distinct values `ρ_{i,c}` (rows) and `σ_{j,c}` (columns) reachable from
/// each shift of a block, keyed by shift.
pub fn shift_table(block: &GroupGrid) -> Result<BTreeMap<usize, ShiftedProducts>> {
    (0..block.rows()).map(|c| Ok((c, shifted_block_products(block, c)?))).collect()
}
