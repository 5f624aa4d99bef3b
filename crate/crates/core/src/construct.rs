//! Block constructions of semi-magic squares over `D_{2m²}`.
//!
//! Four `m × m` blocks are assembled from the power squares and glued as
//!
//! ```text
//! Q11 | Q12
//! ----+----
//! Q21 | Q22
//! ```
//!
//! For even `m`, `Q11`/`Q22` hold rotations and `Q12`/`Q21` reflections,
//! alternating between the `e`/`o` (resp. `e`/`t`) squares by the parity of
//! `i + j`; `Q22` and `Q21` read their exponents one column to the right.
//!
//! For odd `m`, `Q11` is all `e` rotations; `Q22` has reflections `e` on the
//! diagonal and `t` just right of it, `o` rotations elsewhere; `Q12` and
//! `Q21` have an `o` rotation on the diagonal and reflections elsewhere,
//! alternating `e`, `t`, `e`, … cyclically to the right of the diagonal, so
//! each row reduces to the telescoping pairs `e_{i,l} − t_{i,l+1}`. `Q21`
//! reads exponents one column to the right.

use serde::Serialize;

use crate::base::{generate, IntMagicSquare};
use crate::error::{Error, Result};
use crate::grid::GroupGrid;
use crate::group::{Dihedral, DihedralElement};
use crate::power::{Kind, PowerSquares};

/// The four `m × m` blocks of a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub q11: GroupGrid,
    pub q12: GroupGrid,
    pub q21: GroupGrid,
    pub q22: GroupGrid,
}

impl Blocks {
    pub fn side(&self) -> usize {
        self.q11.rows()
    }

    /// Reflection blocks are `Q12` and `Q21`.
    pub fn get(&self, u: usize, v: usize) -> &GroupGrid {
        match (u, v) {
            (0, 0) => &self.q11,
            (0, 1) => &self.q12,
            (1, 0) => &self.q21,
            _ => &self.q22,
        }
    }
}

fn group_for(m: usize) -> Dihedral {
    Dihedral::new((2 * m * m) as u32).expect("k > 0")
}

fn block(m: usize, f: impl Fn(usize, usize) -> DihedralElement) -> GroupGrid {
    let g = group_for(m);
    let cells = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
    GroupGrid::new(g, m, m, cells).expect("block shape")
}

/// Blocks for even `m ≥ 4`.
pub fn build_even_blocks(ps: &PowerSquares) -> Result<Blocks> {
    let m = ps.m();
    if m % 2 == 1 || m < 4 {
        return Err(Error::Usage(format!("even construction needs even m >= 4, got {m}")));
    }
    let g = group_for(m);
    let rot = |i: usize, j: usize, shift: usize| {
        let kind = if (i + j) % 2 == 0 { Kind::E } else { Kind::O };
        g.rotation(ps.at(kind, i, j + shift))
    };
    let refl = |i: usize, j: usize, shift: usize| {
        let kind = if (i + j) % 2 == 0 { Kind::E } else { Kind::T };
        g.reflection(ps.at(kind, i, j + shift))
    };
    Ok(Blocks {
        q11: block(m, |i, j| rot(i, j, 0)),
        q12: block(m, |i, j| refl(i, j, 0)),
        q21: block(m, |i, j| refl(i, j, 1)),
        q22: block(m, |i, j| rot(i, j, 1)),
    })
}

/// Which power square feeds the off-diagonal reflection at `(i, j)` of the
/// odd-`m` blocks `Q12`/`Q21`.
///
/// Right of the diagonal: `e` when `i + j` is odd, `t` when even. Left of
/// it the parities swap. Both amount to `e` at odd cyclic distance
/// `(j − i) mod m` and `t` at even distance.
fn odd_reflection_kind(i: usize, j: usize) -> Kind {
    let odd = (i + j) % 2 == 1;
    match (j > i, odd) {
        (true, true) | (false, false) => Kind::E,
        _ => Kind::T,
    }
}

/// Blocks for odd `m ≥ 3`.
pub fn build_odd_blocks(ps: &PowerSquares) -> Result<Blocks> {
    let m = ps.m();
    if m % 2 == 0 || m < 3 {
        return Err(Error::Usage(format!("odd construction needs odd m >= 3, got {m}")));
    }
    let g = group_for(m);
    let mixed = |i: usize, j: usize, shift: usize| {
        if i == j {
            g.rotation(ps.o(i, j + shift))
        } else {
            g.reflection(ps.at(odd_reflection_kind(i, j), i, j + shift))
        }
    };
    Ok(Blocks {
        q11: block(m, |i, j| g.rotation(ps.e(i, j))),
        q12: block(m, |i, j| mixed(i, j, 0)),
        q21: block(m, |i, j| mixed(i, j, 1)),
        q22: block(m, |i, j| {
            if j == i {
                g.reflection(ps.e(i, j))
            } else if j == (i + 1) % m {
                g.reflection(ps.t(i, j))
            } else {
                g.rotation(ps.o(i, j))
            }
        }),
    })
}

/// Glue four equal blocks into a `2m × 2m` square.
pub fn glue(blocks: &Blocks) -> Result<GroupGrid> {
    let m = blocks.side();
    let group = blocks.q11.group();
    for (u, v) in [(0, 1), (1, 0), (1, 1)] {
        let b = blocks.get(u, v);
        if b.rows() != m || b.cols() != m || b.group() != group {
            return Err(Error::Dimension(format!(
                "block Q{}{} is {}x{} over D_{}, expected {m}x{m} over D_{}",
                u + 1,
                v + 1,
                b.rows(),
                b.cols(),
                b.group().k(),
                group.k()
            )));
        }
    }
    if blocks.q11.cols() != m {
        return Err(Error::Dimension("block Q11 is not square".into()));
    }
    let n = 2 * m;
    let cells = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| blocks.get(i / m, j / m).get(i % m, j % m))
        .collect();
    GroupGrid::new(group, n, n, cells)?.with_block_side(m)
}

/// The blocks for the base square of side `m`, translated by `x`.
pub fn build_blocks(m: usize, x: i64, base: Option<&IntMagicSquare>) -> Result<Blocks> {
    if m <= 2 {
        return Err(Error::ConstructionGap(m));
    }
    let base = match base {
        Some(b) if b.side() != m => {
            return Err(Error::InvalidBase(format!("base has side {}, expected {m}", b.side())))
        }
        Some(b) => b.clone(),
        None => generate(m)?,
    };
    let ps = PowerSquares::build(&base.translate(x));
    if m % 2 == 0 {
        build_even_blocks(&ps)
    } else {
        build_odd_blocks(&ps)
    }
}

/// A semi-magic square of side `2m` over `D_{2m²}`.
///
/// Uses `base` when given, otherwise the generated square of side `m`;
/// the base is translated by `x` first.
pub fn build(m: usize, x: i64, base: Option<&IntMagicSquare>) -> Result<GroupGrid> {
    glue(&build_blocks(m, x, base)?)
}

/// The constant under diagonal starts and the one obtained by shifting the
/// reflection blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantPair {
    pub primary: DihedralElement,
    pub dual: DihedralElement,
    pub primary_formula: String,
    pub dual_formula: String,
}

/// Closed-form constants for side `m` and base constant `mu`.
///
/// Even `m`: `r^{4μ}` and `r^m`. Odd `m`, with `X = (m−2)(m−1)/2`:
/// `r^{4μ − X + 1}` and `r^{X − 1}`.
pub fn expected_constant(m: usize, mu: i64) -> Result<ConstantPair> {
    if m <= 2 {
        return Err(Error::ConstructionGap(m));
    }
    let g = group_for(m);
    let mi = m as i64;
    Ok(if m % 2 == 0 {
        ConstantPair {
            primary: g.rotation(4 * mu),
            dual: g.rotation(mi),
            primary_formula: format!("r^(4*{mu} mod {})", g.k()),
            dual_formula: format!("r^{m}"),
        }
    } else {
        let x = (mi - 2) * (mi - 1) / 2;
        ConstantPair {
            primary: g.rotation(4 * mu - x + 1),
            dual: g.rotation(x - 1),
            primary_formula: format!("r^((4*{mu} - {x} + 1) mod {})", g.k()),
            dual_formula: format!("r^({x} - 1)"),
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Admissibility {
    /// Ruled out; `reason` says why.
    Inadmissible { reason: String },
    /// Built by [`build`] with this block side.
    Constructible { m: usize },
    /// Not ruled out and not covered by a construction.
    Open,
}

/// Classify a side `n` over `D_k`.
pub fn admissibility(n: usize, k: usize) -> Admissibility {
    let no = |r: &str| Admissibility::Inadmissible { reason: r.to_string() };
    if n % 2 == 1 {
        return no("odd side");
    }
    if k % 2 == 1 {
        return no("odd k");
    }
    if 2 * k != n * n {
        return no("group order 2k differs from the n² cells");
    }
    match n {
        2 => no("no semi-magic square of side 2 exists"),
        4 => Admissibility::Open,
        _ => Admissibility::Constructible { m: n / 2 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::io;

    fn tokens(grid: &GroupGrid, i: usize) -> Vec<String> {
        grid.row(i).iter().map(ToString::to_string).collect()
    }

    #[test]
    fn even_blocks_match_reference_cells() {
        let ps = PowerSquares::build(&fixtures::base_m4());
        let b = build_even_blocks(&ps).unwrap();
        assert_eq!(tokens(&b.q11, 0), ["r^0", "r^5", "r^6", "r^27"]);
        assert_eq!(b.q12.get(0, 1).to_string(), "r^29.s");
        assert_eq!(b.q21.get(3, 3).to_string(), "r^8.s");
        assert_eq!(tokens(&b.q22, 3), ["r^29", "r^30", "r^3", "r^8"]);
        for (u, v, refl) in [(0, 0, false), (0, 1, true), (1, 0, true), (1, 1, false)] {
            assert!(b.get(u, v).cells().iter().all(|c| c.is_reflection() == refl));
        }
    }

    #[test]
    fn odd_blocks_match_reference_cells() {
        let ps = PowerSquares::build(&fixtures::base_m5());
        let b = build_odd_blocks(&ps).unwrap();
        assert_eq!(tokens(&b.q22, 0)[..3], ["r^34.s", "r^5.s", "r^3"]);
        assert_eq!(tokens(&b.q12, 0)[..3], ["r^35", "r^48.s", "r^1.s"]);
        assert_eq!(tokens(&b.q11, 2), ["r^8", "r^12", "r^26", "r^40", "r^44"]);
        assert_eq!(tokens(&b.q21, 0), ["r^49", "r^2.s", "r^37.s", "r^30.s", "r^19.s"]);
        // every row of Q11 sums to 2μ̃ = 130 ≡ 30
        for i in 0..5 {
            let s: u32 = b.q11.row(i).iter().map(|c| c.exponent()).sum();
            assert_eq!(s % 50, 30);
        }
    }

    #[test]
    fn odd_reflection_kind_is_cyclic_distance_parity() {
        for m in [3usize, 5, 7, 9] {
            for i in 0..m {
                for j in (0..m).filter(|j| *j != i) {
                    let d = (j + m - i) % m;
                    let want = if d % 2 == 1 { Kind::E } else { Kind::T };
                    assert_eq!(odd_reflection_kind(i, j), want, "m={m} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn glued_squares_match_reference_grids() {
        let q = build(4, 0, Some(&fixtures::base_m4())).unwrap();
        assert_eq!(io::serialize_text(&q), fixtures::D32_SIDE8);
        let q = build(5, 0, Some(&fixtures::base_m5())).unwrap();
        assert_eq!(io::serialize_text(&q), fixtures::D50_SIDE10);
        let q = build(5, 1, Some(&fixtures::base_m5())).unwrap();
        assert_eq!(io::serialize_text(&q), fixtures::D50_SIDE10_TRANSLATED);
        // easy to misread: r^39 sits at (9, 6), not (8, 7)
        assert_eq!(q.get(8, 7).to_string(), "r^41");
        assert_eq!(q.get(9, 6).to_string(), "r^39");
    }

    #[test]
    fn coverage_of_built_squares() {
        for m in 3..=9 {
            for x in [0, 1, 2] {
                let q = build(m, x, None).unwrap();
                let mut cells = q.cells().to_vec();
                cells.sort();
                assert_eq!(cells, q.group().enumerate_elements(), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn glue_plumbing() {
        let g = Dihedral::new(2).unwrap();
        let one = |a| GroupGrid::new(g, 1, 1, vec![a]).unwrap();
        let els = g.enumerate_elements();
        let b = Blocks {
            q11: one(els[0]),
            q12: one(els[1]),
            q21: one(els[2]),
            q22: one(els[3]),
        };
        let q = glue(&b).unwrap();
        assert_eq!(q.cells(), &els[..]);
        assert_eq!(q.block_side(), Some(1));

        let mut bad = b.clone();
        bad.q22 = GroupGrid::new(Dihedral::new(3).unwrap(), 1, 1, vec![els[0]]).unwrap();
        assert!(glue(&bad).is_err());
    }

    #[test]
    fn build_errors() {
        assert!(matches!(build(2, 0, None), Err(Error::ConstructionGap(2))));
        assert!(matches!(build(1, 0, None), Err(Error::ConstructionGap(1))));
        assert!(matches!(
            build(5, 0, Some(&fixtures::base_m4())),
            Err(Error::InvalidBase(_))
        ));
        let ps = PowerSquares::build(&fixtures::base_m5());
        assert!(build_even_blocks(&ps).is_err());
        let ps = PowerSquares::build(&fixtures::base_m4());
        assert!(build_odd_blocks(&ps).is_err());
    }

    #[test]
    fn closed_form_constants() {
        let g32 = Dihedral::new(32).unwrap();
        let g50 = Dihedral::new(50).unwrap();
        let c = expected_constant(4, 34).unwrap();
        assert_eq!((c.primary, c.dual), (g32.rotation(8), g32.rotation(4)));
        let c = expected_constant(5, 65).unwrap();
        assert_eq!((c.primary, c.dual), (g50.rotation(5), g50.rotation(5)));
        let c = expected_constant(5, 70).unwrap();
        assert_eq!((c.primary, c.dual), (g50.rotation(25), g50.rotation(5)));
        assert!(expected_constant(2, 5).is_err());
    }

    #[test]
    fn admissibility_classes() {
        assert!(matches!(admissibility(7, 8), Admissibility::Inadmissible { .. }));
        assert!(matches!(admissibility(6, 9), Admissibility::Inadmissible { .. }));
        assert!(matches!(admissibility(2, 2), Admissibility::Inadmissible { .. }));
        assert_eq!(admissibility(4, 8), Admissibility::Open);
        assert_eq!(admissibility(8, 32), Admissibility::Constructible { m: 4 });
        assert_eq!(admissibility(10, 50), Admissibility::Constructible { m: 5 });
        assert!(matches!(admissibility(8, 16), Admissibility::Inadmissible { .. }));
    }
}
