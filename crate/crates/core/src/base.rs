//! Classical integer magic squares used as the base of every construction.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// `m(m²+1)/2`, the magic constant of a side-`m` square on `1..=m²`.
pub fn classic_constant(m: usize) -> Result<i64> {
    if m < 3 {
        return Err(Error::UnsupportedSide(m));
    }
    let m = m as i64;
    Ok(m * (m * m + 1) / 2)
}

/// A magic square of side `m ≥ 3` whose entries are `m²` consecutive
/// integers `1+x, …, m²+x` (`x = 0` for a classical square).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMagicSquare {
    side: usize,
    entries: Vec<i64>,
    constant: i64,
}

impl IntMagicSquare {
    /// Validate `rows` with [`verify_classic`] and wrap it.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let report = verify_classic(rows);
        if !report.valid {
            return Err(Error::InvalidBase(report.failures.join("; ")));
        }
        Ok(IntMagicSquare {
            side: rows.len(),
            entries: rows.iter().flatten().copied().collect(),
            constant: report.constant.expect("valid report has a constant"),
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.side + j]
    }

    /// The translation `x`: entries run from `1 + x` to `m² + x`.
    pub fn offset(&self) -> i64 {
        self.entries.iter().min().copied().unwrap_or(1) - 1
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.side).map(<[i64]>::to_vec).collect()
    }

    /// Add `x` to every entry; the constant grows by `m·x`.
    pub fn translate(&self, x: i64) -> IntMagicSquare {
        IntMagicSquare {
            side: self.side,
            entries: self.entries.iter().map(|v| v + x).collect(),
            constant: self.constant + self.side as i64 * x,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("intsquare m={}\n", self.side);
        write_rows(&mut out, &self.rows());
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (m, rows) = parse_int_grid(text, "intsquare", &[])?;
        if rows.len() != m {
            return Err(Error::Dimension(format!("header says m={m}, body has {} rows", rows.len())));
        }
        IntMagicSquare::from_rows(&rows)
    }
}

/// Deterministic magic square of side `m`.
///
/// Siamese method for odd `m`, complement-on-diagonals for `m ≡ 0 (mod 4)`,
/// and Conway's LUX method for `m ≡ 2 (mod 4)`.
pub fn generate(m: usize) -> Result<IntMagicSquare> {
    if m < 3 {
        return Err(Error::UnsupportedSide(m));
    }
    let grid = if m % 2 == 1 {
        siamese(m)
    } else if m % 4 == 0 {
        doubly_even(m)
    } else {
        lux(m)
    };
    let rows: Vec<Vec<i64>> = grid.chunks(m).map(<[i64]>::to_vec).collect();
    IntMagicSquare::from_rows(&rows)
}

fn siamese(m: usize) -> Vec<i64> {
    let mut g = vec![0i64; m * m];
    let (mut i, mut j) = (0, m / 2);
    for v in 1..=(m * m) as i64 {
        g[i * m + j] = v;
        let (ni, nj) = ((i + m - 1) % m, (j + 1) % m);
        if g[ni * m + nj] != 0 {
            i = (i + 1) % m;
        } else {
            (i, j) = (ni, nj);
        }
    }
    g
}

fn doubly_even(m: usize) -> Vec<i64> {
    let top = (m * m + 1) as i64;
    (0..m * m)
        .map(|c| {
            let (i, j) = (c / m % 4, c % m % 4);
            let v = c as i64 + 1;
            if i == j || i + j == 3 {
                top - v
            } else {
                v
            }
        })
        .collect()
}

fn lux(m: usize) -> Vec<i64> {
    let h = m / 2;
    let k = (h - 1) / 2;
    let core = siamese(h);
    let mut g = vec![0i64; m * m];
    for bi in 0..h {
        for bj in 0..h {
            let letter = match bi {
                _ if bi == k && bj == k => 'U',
                _ if bi == k + 1 && bj == k => 'L',
                _ if bi <= k => 'L',
                _ if bi == k + 1 => 'U',
                _ => 'X',
            };
            let pattern = match letter {
                'L' => [[4, 1], [2, 3]],
                'U' => [[1, 4], [2, 3]],
                _ => [[1, 4], [3, 2]],
            };
            let base = 4 * (core[bi * h + bj] - 1);
            for (di, prow) in pattern.iter().enumerate() {
                for (dj, p) in prow.iter().enumerate() {
                    g[(2 * bi + di) * m + 2 * bj + dj] = base + p;
                }
            }
        }
    }
    g
}

/// What [`verify_classic`] found.
#[derive(Clone, Debug, Serialize)]
pub struct ClassicReport {
    pub side: usize,
    /// Smallest entry, when the entries form a consecutive run.
    pub run_start: Option<i64>,
    pub row_sums: Vec<i64>,
    pub col_sums: Vec<i64>,
    pub diagonal_sums: (i64, i64),
    pub constant: Option<i64>,
    pub valid: bool,
    pub failures: Vec<String>,
}

/// Check that `grid` is a magic square: `m²` consecutive integers with equal
/// row, column and both diagonal sums.
pub fn verify_classic(grid: &[Vec<i64>]) -> ClassicReport {
    let m = grid.len();
    let mut failures = Vec::new();
    if m == 0 || grid.iter().any(|r| r.len() != m) {
        failures.push("grid is not square".to_string());
        return ClassicReport {
            side: m,
            run_start: None,
            row_sums: vec![],
            col_sums: vec![],
            diagonal_sums: (0, 0),
            constant: None,
            valid: false,
            failures,
        };
    }
    if m < 3 {
        failures.push(format!("side {m} < 3"));
    }
    let mut values: Vec<i64> = grid.iter().flatten().copied().collect();
    values.sort_unstable();
    let run_start = values
        .windows(2)
        .all(|w| w[1] == w[0] + 1)
        .then_some(values[0]);
    if run_start.is_none() {
        failures.push("entries are not consecutive distinct integers".to_string());
    }
    let row_sums: Vec<i64> = grid.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<i64> = (0..m).map(|j| grid.iter().map(|r| r[j]).sum()).collect();
    let main: i64 = (0..m).map(|i| grid[i][i]).sum();
    let anti: i64 = (0..m).map(|i| grid[i][m - 1 - i]).sum();

    let total: i64 = values.iter().sum();
    let constant = (total % m as i64 == 0).then_some(total / m as i64);
    match constant {
        Some(c) => {
            for (i, s) in row_sums.iter().enumerate().filter(|(_, s)| **s != c) {
                failures.push(format!("row {i} sums to {s}, expected {c}"));
            }
            for (j, s) in col_sums.iter().enumerate().filter(|(_, s)| **s != c) {
                failures.push(format!("column {j} sums to {s}, expected {c}"));
            }
            if main != c {
                failures.push(format!("main diagonal sums to {main}, expected {c}"));
            }
            if anti != c {
                failures.push(format!("anti-diagonal sums to {anti}, expected {c}"));
            }
        }
        None => failures.push("total is not divisible by the side".to_string()),
    }
    ClassicReport {
        side: m,
        run_start,
        row_sums,
        col_sums,
        diagonal_sums: (main, anti),
        constant: if failures.is_empty() { constant } else { None },
        valid: failures.is_empty(),
        failures,
    }
}

pub(crate) fn write_rows(out: &mut String, rows: &[Vec<i64>]) {
    for row in rows {
        let line: Vec<String> = row.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
}

/// Parse `<tag> m=<m> [extra keys]` followed by rows of integers. Returns
/// `m`, the rows, and leaves extra header keys to the caller via `expect`.
pub(crate) fn parse_int_grid(
    text: &str,
    tag: &str,
    expect: &[(&str, String)],
) -> Result<(usize, Vec<Vec<i64>>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let mut words = header.split_whitespace();
    if words.next() != Some(tag) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header starting with {tag:?}"),
        });
    }
    let mut m = None;
    let mut seen = Vec::new();
    for w in words {
        let (key, val) = w.split_once('=').ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("bad header field {w:?}"),
        })?;
        if key == "m" {
            m = Some(val.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad side {val:?}"),
            })?);
        } else {
            seen.push((key.to_string(), val.to_string()));
        }
    }
    for (key, val) in expect {
        if !seen.iter().any(|(k, v)| k == key && v == val) {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header field {key}={val} missing or different"),
            });
        }
    }
    let m = m.ok_or(Error::Parse {
        line: 1,
        msg: "header lacks m=".into(),
    })?;
    let mut rows = Vec::new();
    for (n, line) in lines {
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>().map_err(|_| Error::Parse {
                    line: n + 1,
                    msg: format!("bad integer {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != m {
            return Err(Error::Dimension(format!(
                "line {} has {} entries, expected {m}",
                n + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok((m, rows))
}
