//! The power squares `E`, `O` and `T` derived from a base magic square.
//!
//! With `M̃ = (m̃_{i,j})` and modulus `2m²`:
//! `e = 2m̃`, `o = 2m̃ + 1`, and `t = −2m̃ + 1` for even `m` or
//! `t = −2m̃ + m − 2` for odd `m`. Every line of each square has a constant
//! sum mod `2m²`.

use std::fmt;

use serde::Serialize;

use crate::base::{parse_int_grid, write_rows, IntMagicSquare};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    E,
    O,
    T,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::E => "E",
            Kind::O => "O",
            Kind::T => "T",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSquares {
    m: usize,
    modulus: i64,
    e: Vec<i64>,
    o: Vec<i64>,
    t: Vec<i64>,
    base: IntMagicSquare,
    /// Row sums of the first row of E, O, T (residues).
    sums: [i64; 3],
}

impl PowerSquares {
    pub fn build(base: &IntMagicSquare) -> PowerSquares {
        let m = base.side();
        let modulus = 2 * (m * m) as i64;
        let cells = || (0..m).flat_map(move |i| (0..m).map(move |j| (i, j)));
        let map = |f: &dyn Fn(i64) -> i64| -> Vec<i64> {
            cells()
                .map(|(i, j)| f(base.get(i, j)).rem_euclid(modulus))
                .collect()
        };
        let e = map(&|v| 2 * v);
        let o = map(&|v| 2 * v + 1);
        let t = if m % 2 == 0 {
            map(&|v| -2 * v + 1)
        } else {
            map(&|v| -2 * v + m as i64 - 2)
        };
        let row_sum = |g: &[i64]| g[..m].iter().sum::<i64>().rem_euclid(modulus);
        let sums = [row_sum(&e), row_sum(&o), row_sum(&t)];
        PowerSquares {
            m,
            modulus,
            e,
            o,
            t,
            base: base.clone(),
            sums,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn base(&self) -> &IntMagicSquare {
        &self.base
    }

    /// `μ̃` of the base square.
    pub fn mu(&self) -> i64 {
        self.base.constant()
    }

    fn grid(&self, kind: Kind) -> &[i64] {
        match kind {
            Kind::E => &self.e,
            Kind::O => &self.o,
            Kind::T => &self.t,
        }
    }

    /// Entry at `(i, j)`, indices taken mod `m`.
    pub fn at(&self, kind: Kind, i: usize, j: usize) -> i64 {
        self.grid(kind)[(i % self.m) * self.m + j % self.m]
    }

    pub fn e(&self, i: usize, j: usize) -> i64 {
        self.at(Kind::E, i, j)
    }

    pub fn o(&self, i: usize, j: usize) -> i64 {
        self.at(Kind::O, i, j)
    }

    pub fn t(&self, i: usize, j: usize) -> i64 {
        self.at(Kind::T, i, j)
    }

    pub fn rows(&self, kind: Kind) -> Vec<Vec<i64>> {
        self.grid(kind).chunks(self.m).map(<[i64]>::to_vec).collect()
    }

    /// Stored line sums `(ẽ, õ, t̃)`.
    pub fn sums(&self) -> [i64; 3] {
        self.sums
    }

    /// Closed forms for `(ẽ, õ, t̃)` in terms of `μ̃`.
    pub fn closed_form_sums(&self) -> [i64; 3] {
        let (m, mu, n) = (self.m as i64, self.mu(), self.modulus);
        let t = if m % 2 == 0 {
            -2 * mu + m
        } else {
            -2 * mu + m * m - 2 * m
        };
        [(2 * mu).rem_euclid(n), (2 * mu + m).rem_euclid(n), t.rem_euclid(n)]
    }

    /// Check every row and column sum of E, O and T against the closed forms.
    pub fn check_sums(&self) -> SumReport {
        let expected = self.closed_form_sums();
        let mut deviations = Vec::new();
        for (kind, want) in [Kind::E, Kind::O, Kind::T].into_iter().zip(expected) {
            let g = self.grid(kind);
            for i in 0..self.m {
                let row: i64 = g[i * self.m..(i + 1) * self.m].iter().sum();
                let col: i64 = (0..self.m).map(|r| g[r * self.m + i]).sum();
                for (what, s) in [("row", row), ("column", col)] {
                    let s = s.rem_euclid(self.modulus);
                    if s != want {
                        deviations.push(format!("{kind} {what} {i} sums to {s}, expected {want}"));
                    }
                }
            }
        }
        SumReport {
            expected,
            ok: deviations.is_empty(),
            deviations,
        }
    }

    pub fn to_text(&self, kind: Kind) -> String {
        let mut out = format!(
            "powersquare m={} modulus={} kind={kind}\n",
            self.m, self.modulus
        );
        write_rows(&mut out, &self.rows(kind));
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SumReport {
    pub expected: [i64; 3],
    pub ok: bool,
    pub deviations: Vec<String>,
}

/// Parse a `powersquare` file, returning its kind and rows.
pub fn parse_power_text(text: &str) -> Result<(Kind, Vec<Vec<i64>>)> {
    let header = text.lines().next().unwrap_or_default();
    let kind = match header.split_whitespace().find_map(|w| w.strip_prefix("kind=")) {
        Some("E") => Kind::E,
        Some("O") => Kind::O,
        Some("T") => Kind::T,
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "header needs kind=E|O|T".into(),
            })
        }
    };
    let m = header
        .split_whitespace()
        .find_map(|w| w.strip_prefix("m="))
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    let modulus = (2 * m * m).to_string();
    let (m, rows) = parse_int_grid(
        text,
        "powersquare",
        &[("modulus", modulus), ("kind", kind.to_string())],
    )?;
    if rows.len() != m {
        return Err(Error::Dimension(format!("expected {m} rows, got {}", rows.len())));
    }
    Ok((kind, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::generate;
    use crate::fixtures;

    #[test]
    fn m4_first_rows_and_sums() {
        let ps = PowerSquares::build(&fixtures::base_m4());
        assert_eq!(ps.rows(Kind::E)[0], vec![0, 4, 6, 26]);
        assert_eq!(ps.rows(Kind::O)[0], vec![1, 5, 7, 27]);
        assert_eq!(ps.rows(Kind::T)[0], vec![1, 29, 27, 7]);
        assert_eq!(ps.sums(), [4, 8, 0]);
        assert_eq!(ps.closed_form_sums(), [4, 8, 0]);
        assert!(ps.check_sums().ok);
    }

    #[test]
    fn m5_sums() {
        let ps = PowerSquares::build(&fixtures::base_m5());
        assert_eq!(ps.rows(Kind::T)[0], vec![19, 5, 1, 37, 23]);
        assert_eq!(ps.sums(), [30, 35, 35]);
        assert!(ps.check_sums().ok);

        let ps = PowerSquares::build(&fixtures::base_m5_translated());
        assert_eq!(ps.rows(Kind::E)[0], vec![36, 0, 4, 18, 32]);
        // õ = 2·70 + 5 mod 50, and the same by summing the first row
        assert_eq!(ps.closed_form_sums()[1], 45);
        assert_eq!(ps.rows(Kind::O)[0].iter().sum::<i64>() % 50, 45);
    }

    #[test]
    fn matches_fixture_files() {
        for (base, files) in [
            (fixtures::base_m4(), fixtures::POWER_M4),
            (fixtures::base_m5(), fixtures::POWER_M5),
            (fixtures::base_m5_translated(), fixtures::POWER_M5_TRANSLATED),
        ] {
            let ps = PowerSquares::build(&base);
            for (kind, text) in [Kind::E, Kind::O, Kind::T].into_iter().zip(files) {
                assert_eq!(ps.to_text(kind), text);
                let (k, rows) = parse_power_text(text).unwrap();
                assert_eq!((k, rows), (kind, ps.rows(kind)));
            }
        }
    }

    #[test]
    fn parity_coverage_and_sums_for_many_sides() {
        for m in 3..=12 {
            for x in [0, 1, 7] {
                let ps = PowerSquares::build(&generate(m).unwrap().translate(x));
                let n = ps.modulus();
                let sorted = |k| {
                    let mut v: Vec<i64> = ps.rows(k).concat();
                    v.sort_unstable();
                    v
                };
                let evens: Vec<i64> = (0..n).step_by(2).collect();
                let odds: Vec<i64> = (1..n).step_by(2).collect();
                assert_eq!(sorted(Kind::E), evens, "m={m}");
                assert_eq!(sorted(Kind::O), odds, "m={m}");
                assert_eq!(sorted(Kind::T), odds, "m={m}");
                let report = ps.check_sums();
                assert!(report.ok, "m={m} x={x}: {:?}", report.deviations);
            }
        }
    }

    #[test]
    fn malformed_power_file() {
        assert!(parse_power_text("powersquare m=4 modulus=32\n").is_err());
        assert!(parse_power_text("powersquare m=4 modulus=31 kind=E\n0 4 6 26\n").is_err());
    }
}
