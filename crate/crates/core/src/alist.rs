//! MacKay's alist format for sparse parity-check matrices.
//!
//! ```text
//! N M
//! max_col_degree max_row_degree
//! <N column degrees>
//! <M row degrees>
//! <N lines: 1-based row indices of each column, zero padded>
//! <M lines: 1-based column indices of each row, zero padded>
//! ```
//!
//! Zero padding is optional on input and always written on output.

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AlistOptions {
    /// Accept columns of degree zero. Rejected by default since such a bit
    /// is unconstrained by every check.
    pub allow_empty_columns: bool,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Alist { line, msg: msg.into() }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as integers, with its 1-based line number.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| err(i + 1, format!("{what}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            return Ok((i + 1, nums));
        }
        Err(err(self.last + 1, format!("unexpected end of input, expected {what}")))
    }
}

pub fn load_alist(text: &str, opts: AlistOptions) -> Result<BinaryMatrix> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };
    let (line, header) = lines.next_numbers("header")?;
    let [n, m] = header[..] else {
        return Err(err(line, "header must be `N M`"));
    };
    let (line, maxes) = lines.next_numbers("max degrees")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(err(line, "expected two max degrees"));
    };
    let (line, col_deg) = lines.next_numbers("column degrees")?;
    if col_deg.len() != n {
        return Err(err(line, format!("expected {n} column degrees, found {}", col_deg.len())));
    }
    let (line, row_deg) = lines.next_numbers("row degrees")?;
    if row_deg.len() != m {
        return Err(err(line, format!("expected {m} row degrees, found {}", row_deg.len())));
    }
    if col_deg.iter().any(|&d| d > max_col) || row_deg.iter().any(|&d| d > max_row) {
        return Err(err(line, "degree exceeds declared maximum"));
    }

    let mut read_lists = |degrees: &[usize], width: usize, bound: usize, what: &str| -> Result<Vec<Vec<usize>>> {
        let mut lists = Vec::with_capacity(degrees.len());
        for (k, &deg) in degrees.iter().enumerate() {
            if width == 0 {
                lists.push(Vec::new());
                continue;
            }
            let (line, nums) = if deg == 0 {
                // An empty column may be written as a blank or all-zero line.
                match lines.next_numbers(what) {
                    Ok(v) if v.1.iter().all(|&x| x == 0) => v,
                    Ok((line, _)) => return Err(err(line, format!("{what} {} declared empty", k + 1))),
                    Err(e) => return Err(e),
                }
            } else {
                lines.next_numbers(what)?
            };
            let (idx, pad) = nums.split_at(deg.min(nums.len()));
            if idx.len() != deg || pad.iter().any(|&x| x != 0) {
                return Err(err(line, format!("{what} {} should list {deg} indices", k + 1)));
            }
            let mut list = Vec::with_capacity(deg);
            for &x in idx {
                if x == 0 || x > bound {
                    return Err(err(line, format!("index {x} out of range 1..={bound}")));
                }
                list.push(x - 1);
            }
            lists.push(list);
        }
        Ok(lists)
    };

    let cols = read_lists(&col_deg, max_col, m, "column")?;
    let rows = read_lists(&row_deg, max_row, n, "row")?;

    let h = BinaryMatrix::from_rows(n, rows).map_err(|e| err(0, e.to_string()))?;
    if h.columns().iter().zip(&cols).any(|(a, b)| {
        let mut b = b.clone();
        b.sort_unstable();
        *a != b
    }) {
        return Err(err(0, "column and row lists disagree"));
    }
    if !opts.allow_empty_columns {
        if let Some(c) = col_deg.iter().position(|&d| d == 0) {
            return Err(err(0, format!("column {} is empty", c + 1)));
        }
    }
    Ok(h)
}

pub fn save_alist(h: &BinaryMatrix) -> String {
    let cols = h.columns();
    let col_deg: Vec<usize> = cols.iter().map(Vec::len).collect();
    let row_deg = h.row_weights();
    let max_col = col_deg.iter().copied().max().unwrap_or(0);
    let max_row = row_deg.iter().copied().max().unwrap_or(0);

    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let padded = |list: &[usize], width: usize| {
        let mut v: Vec<usize> = list.iter().map(|x| x + 1).collect();
        v.resize(width, 0);
        join(&v)
    };

    let mut out = String::new();
    out.push_str(&format!("{} {}\n", h.num_cols(), h.num_rows()));
    out.push_str(&format!("{max_col} {max_row}\n"));
    out.push_str(&join(&col_deg));
    out.push('\n');
    out.push_str(&join(&row_deg));
    out.push('\n');
    for col in &cols {
        out.push_str(&padded(col, max_col));
        out.push('\n');
    }
    for row in h.rows() {
        out.push_str(&padded(row, max_row));
        out.push('\n');
    }
    out
}
