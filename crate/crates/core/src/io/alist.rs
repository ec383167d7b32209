//! MacKay alist format.
//!
//! ```text
//! n m
//! max_column_weight max_row_weight
//! column weights (n values)
//! row weights (m values)
//! n lines of 1-based row indices, zero-padded to the maximum column weight
//! m lines of 1-based column indices, zero-padded to the maximum row weight
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Serializes `m` as alist text.
pub fn write_alist(m: &BitMatrix) -> String {
    let cols: Vec<Vec<usize>> = {
        let mut cols = vec![Vec::new(); m.cols()];
        for r in 0..m.rows() {
            for c in m.row_support(r) {
                cols[c].push(r);
            }
        }
        cols
    };
    let rows: Vec<Vec<usize>> = (0..m.rows()).map(|r| m.row_support(r)).collect();
    let max_c = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_r = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.cols(), m.rows());
    let _ = writeln!(out, "{max_c} {max_r}");
    let weights = |lists: &[Vec<usize>]| lists.iter().map(|l| l.len().to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "{}", weights(&cols));
    let _ = writeln!(out, "{}", weights(&rows));
    for (lists, width) in [(&cols, max_c), (&rows, max_r)] {
        for l in lists.iter() {
            let mut entries: Vec<String> = l.iter().map(|x| (x + 1).to_string()).collect();
            entries.resize(width, "0".to_string());
            let _ = writeln!(out, "{}", entries.join(" "));
        }
    }
    out
}

pub fn export_alist(m: &BitMatrix, path: impl AsRef<Path>) -> Result<()> {
    super::atomic_write(path, write_alist(m).as_bytes())
}

pub fn import_alist(path: impl AsRef<Path>) -> Result<BitMatrix> {
    let text = super::read_text(path)?;
    parse_alist(&text)
}

struct Line<'a> {
    offset: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn numbers(&self) -> Result<Vec<(usize, usize)>> {
        let base = self.text.as_ptr() as usize;
        self.text
            .split_whitespace()
            .map(|tok| {
                let at = self.offset + (tok.as_ptr() as usize - base);
                tok.parse::<usize>()
                    .map(|v| (v, at))
                    .map_err(|_| Error::parse_at(at, format!("expected a non-negative integer, found {tok:?}")))
            })
            .collect()
    }
}

fn exact(line: &Line<'_>, count: usize, what: &str) -> Result<Vec<usize>> {
    let nums = line.numbers()?;
    if nums.len() != count {
        return Err(Error::parse_at(
            line.offset,
            format!("{what}: expected {count} values, found {}", nums.len()),
        ));
    }
    Ok(nums.into_iter().map(|(v, _)| v).collect())
}

/// Reads one index list; zeros are padding and may only appear at the end.
fn index_list(line: &Line<'_>, weight: usize, max_weight: usize, bound: usize, what: &str) -> Result<Vec<usize>> {
    let nums = line.numbers()?;
    if nums.len() > max_weight.max(weight) {
        return Err(Error::parse_at(line.offset, format!("{what}: more entries than the maximum weight {max_weight}")));
    }
    let mut out = Vec::with_capacity(weight);
    let mut padding = false;
    for (v, at) in nums {
        if v == 0 {
            padding = true;
            continue;
        }
        if padding {
            return Err(Error::parse_at(at, format!("{what}: index after zero padding")));
        }
        if v > bound {
            return Err(Error::parse_at(at, format!("{what}: index {v} exceeds {bound}")));
        }
        if out.contains(&(v - 1)) {
            return Err(Error::parse_at(at, format!("{what}: repeated index {v}")));
        }
        out.push(v - 1);
    }
    if out.len() != weight {
        return Err(Error::parse_at(
            line.offset,
            format!("{what}: declared weight {weight} but {} indices listed", out.len()),
        ));
    }
    Ok(out)
}

pub fn parse_alist(text: &str) -> Result<BitMatrix> {
    let mut lines = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        lines.push(Line {
            offset,
            text: raw.trim_end_matches(['\n', '\r']),
        });
        offset += raw.len();
    }
    // Blank lines are allowed only where an empty index list is expected, so
    // leading blank lines are skipped and trailing ones ignored.
    let start = lines.iter().position(|l| !l.text.trim().is_empty()).unwrap_or(lines.len());
    let lines = &lines[start..];
    let get = |i: usize| {
        lines
            .get(i)
            .ok_or_else(|| Error::parse_at(text.len(), format!("unexpected end of file (line {} missing)", i + start + 1)))
    };
    let nm = exact(get(0)?, 2, "header")?;
    let (n, m) = (nm[0], nm[1]);
    let maxes = exact(get(1)?, 2, "maximum weights")?;
    let (max_c, max_r) = (maxes[0], maxes[1]);
    let col_w = exact(get(2)?, n, "column weights")?;
    let row_w = exact(get(3)?, m, "row weights")?;
    for (ws, max, what, line) in [(&col_w, max_c, "column", get(2)?), (&row_w, max_r, "row", get(3)?)] {
        let actual = ws.iter().copied().max().unwrap_or(0);
        if actual != max {
            return Err(Error::parse_at(
                line.offset,
                format!("maximum {what} weight declared {max} but largest {what} weight is {actual}"),
            ));
        }
    }
    let mut matrix = BitMatrix::zeros(m, n);
    for (c, &w) in col_w.iter().enumerate() {
        for r in index_list(get(4 + c)?, w, max_c, m, &format!("column {}", c + 1))? {
            matrix.set(r, c, true);
        }
    }
    for (r, &w) in row_w.iter().enumerate() {
        let line = get(4 + n + r)?;
        let listed = index_list(line, w, max_r, n, &format!("row {}", r + 1))?;
        let mut from_rows = listed.clone();
        from_rows.sort_unstable();
        if from_rows != matrix.row_support(r) {
            return Err(Error::parse_at(line.offset, format!("row {} disagrees with the column lists", r + 1)));
        }
    }
    if let Some(extra) = lines[4 + n + m..].iter().find(|l| !l.text.trim().is_empty()) {
        return Err(Error::parse_at(extra.offset, "trailing content after the row lists"));
    }
    Ok(matrix)
}
