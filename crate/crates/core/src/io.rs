//! Text and JSON formats for group grids.
//!
//! Text:
//!
//! ```text
//! dihedral k=4 rows=2 cols=4
//! r^0 r^3 r^0.s r^1.s
//! r^1 r^2 r^3.s r^2.s
//! ```
//!
//! with an optional trailing `block=<m>` header field. Serialization is
//! canonical (single spaces, one trailing newline per line), so a file
//! written by [`serialize_text`] parses and re-serializes to the same bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GroupGrid;
use crate::group::Dihedral;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn serialize_text(grid: &GroupGrid) -> String {
    let mut out = format!(
        "dihedral k={} rows={} cols={}",
        grid.group().k(),
        grid.rows(),
        grid.cols()
    );
    if let Some(m) = grid.block_side() {
        let _ = write!(out, " block={m}");
    }
    out.push('\n');
    for i in 0..grid.rows() {
        let row: Vec<String> = grid.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_text(text: &str) -> Result<GroupGrid> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let header_err = |msg: String| Error::Parse { line: 1, msg };
    let mut words = header.split_whitespace();
    if words.next() != Some("dihedral") {
        return Err(header_err("header must start with \"dihedral\"".into()));
    }
    let (mut k, mut rows, mut cols, mut block) = (None, None, None, None);
    for w in words {
        let (key, val) = w
            .split_once('=')
            .ok_or_else(|| header_err(format!("bad header field {w:?}")))?;
        let n: usize = val
            .parse()
            .map_err(|_| header_err(format!("bad value in {w:?}")))?;
        match key {
            "k" => k = Some(n),
            "rows" => rows = Some(n),
            "cols" => cols = Some(n),
            "block" => block = Some(n),
            _ => return Err(header_err(format!("unknown header field {key:?}"))),
        }
    }
    let missing = |f: &str| header_err(format!("header lacks {f}="));
    let k = k.ok_or_else(|| missing("k"))?;
    let rows = rows.ok_or_else(|| missing("rows"))?;
    let cols = cols.ok_or_else(|| missing("cols"))?;
    let group = Dihedral::new(k as u32)?;

    let mut cells = Vec::with_capacity(rows * cols);
    let mut body_rows = 0;
    for (n, line) in lines {
        let i = body_rows;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != cols {
            return Err(Error::Dimension(format!(
                "line {} has {} cells, expected {cols}",
                n + 1,
                toks.len()
            )));
        }
        for (j, tok) in toks.into_iter().enumerate() {
            let a = group.parse(tok).map_err(|e| Error::Parse {
                line: n + 1,
                msg: format!("cell ({i}, {j}): {e}"),
            })?;
            cells.push(a);
        }
        body_rows += 1;
    }
    if body_rows != rows {
        return Err(Error::Dimension(format!(
            "header says rows={rows}, body has {body_rows}"
        )));
    }
    let grid = GroupGrid::new(group, rows, cols, cells)?;
    match block {
        Some(m) => grid.with_block_side(m),
        None => Ok(grid),
    }
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    e: u32,
    s: bool,
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    k: u32,
    rows: usize,
    cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    block: Option<usize>,
    cells: Vec<Vec<CellJson>>,
}

pub fn serialize_json(grid: &GroupGrid) -> String {
    let doc = GridJson {
        k: grid.group().k(),
        rows: grid.rows(),
        cols: grid.cols(),
        block: grid.block_side(),
        cells: grid
            .to_rows()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|a| CellJson {
                        e: a.exponent(),
                        s: a.is_reflection(),
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("grid serializes")
}

pub fn parse_json(text: &str) -> Result<GroupGrid> {
    let doc: GridJson = serde_json::from_str(text)?;
    let group = Dihedral::new(doc.k)?;
    if doc.cells.len() != doc.rows {
        return Err(Error::Dimension(format!(
            "rows={} but {} rows of cells",
            doc.rows,
            doc.cells.len()
        )));
    }
    let mut cells = Vec::new();
    for (i, row) in doc.cells.iter().enumerate() {
        if row.len() != doc.cols {
            return Err(Error::Dimension(format!("row {i} has {} cells", row.len())));
        }
        for (j, c) in row.iter().enumerate() {
            if c.e >= doc.k {
                return Err(Error::ExponentRange {
                    token: format!("e={} at cell ({i}, {j})", c.e),
                    k: doc.k,
                });
            }
            cells.push(if c.s {
                group.reflection(c.e as i64)
            } else {
                group.rotation(c.e as i64)
            });
        }
    }
    let grid = GroupGrid::new(group, doc.rows, doc.cols, cells)?;
    match doc.block {
        Some(m) => grid.with_block_side(m),
        None => Ok(grid),
    }
}

pub fn serialize(grid: &GroupGrid, format: Format) -> String {
    match format {
        Format::Text => serialize_text(grid),
        Format::Json => {
            let mut s = serialize_json(grid);
            s.push('\n');
            s
        }
    }
}

/// Parse either format, deciding by the first non-blank character.
pub fn parse_any(text: &str) -> Result<GroupGrid> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rectangle_round_trip_is_byte_exact() {
        let text = fixtures::D4_RECT_2X4;
        let grid = parse_text(text).unwrap();
        assert_eq!(grid.rows(), 2);
        assert_eq!(grid.get(0, 2).to_string(), "r^0.s");
        assert_eq!(serialize_text(&grid), text);
    }

    #[test]
    fn block_header_is_kept() {
        let grid = parse_text(fixtures::D32_SIDE8).unwrap();
        assert_eq!(grid.block_side(), Some(4));
        assert_eq!(serialize_text(&grid), fixtures::D32_SIDE8);
        let back = parse_json(&serialize_json(&grid)).unwrap();
        assert_eq!(back, grid);
    }

    #[test]
    fn json_shape() {
        let grid = parse_text(fixtures::D4_RECT_2X4).unwrap();
        let json = serialize_json(&grid);
        assert!(json.starts_with(r#"{"k":4,"rows":2,"cols":4,"cells":[[{"e":0,"s":false}"#));
        assert_eq!(parse_any(&json).unwrap(), grid);
    }

    #[test]
    fn parse_errors() {
        let empty = "dihedral k=4 rows=2 cols=4\n";
        assert!(matches!(parse_text(empty), Err(Error::Dimension(_))));

        let bad = "dihedral k=4 rows=1 cols=2\nr^0 r^4\n";
        let err = parse_text(bad).unwrap_err().to_string();
        assert!(err.contains("cell (0, 1)"), "{err}");
        assert!(err.contains("out of range"), "{err}");

        let bad = "dihedral k=4 rows=1 cols=2\nr^0 r^1s\n";
        assert!(parse_text(bad).unwrap_err().to_string().contains("malformed"));

        let short = "dihedral k=4 rows=1 cols=2\nr^0\n";
        assert!(matches!(parse_text(short), Err(Error::Dimension(_))));
        assert!(parse_text("dihedral k=4 rows=1\nr^0\n").is_err());
        assert!(parse_text("").is_err());
        assert!(parse_json(r#"{"k":4,"rows":1,"cols":1,"cells":[[{"e":9,"s":true}]]}"#).is_err());
    }
}
