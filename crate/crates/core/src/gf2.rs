//! Sparse binary matrices and GF(2) row reduction.

use crate::bits::Bits;
use crate::error::{check_len, Error, Result};

/// A sparse 0/1 matrix stored as sorted column indices per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    /// Build from per-row lists of column indices. Rejects out-of-range and
    /// duplicate entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut rows = rows;
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(&c) = row.iter().find(|&&c| c >= cols) {
                return Err(Error::InvalidSpec(format!(
                    "entry ({r}, {c}) outside {cols} columns"
                )));
            }
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidSpec(format!("duplicate entry in row {r}")));
            }
        }
        Ok(BinaryMatrix { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BinaryMatrix {
            cols: n,
            rows: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Parse rows of `0`/`1` characters; whitespace inside a row is ignored.
    pub fn from_dense_str(rows: &[&str]) -> Result<Self> {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::InvalidSpec(format!("bad matrix digit {other:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let cols = parsed.first().map_or(0, Vec::len);
        if parsed.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidSpec("ragged dense matrix".into()));
        }
        let rows = parsed
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &b)| b).map(|(c, _)| c).collect())
            .collect();
        Ok(BinaryMatrix { cols, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for &c in row {
                w[c] += 1;
            }
        }
        w
    }

    /// Per-column lists of row indices, ascending.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    pub fn transpose(&self) -> BinaryMatrix {
        BinaryMatrix {
            cols: self.rows.len(),
            rows: self.columns(),
        }
    }

    pub fn row_bits(&self, r: usize) -> Bits {
        Bits::from_ones(self.cols, &self.rows[r])
    }

    /// `H · v mod 2`.
    pub fn mul_vec(&self, v: &Bits) -> Result<Bits> {
        check_len(self.cols, v.len())?;
        Ok(Bits::from_bools(
            self.rows
                .iter()
                .map(|row| row.iter().filter(|&&c| v.get(c)).count() % 2 == 1),
        ))
    }

    /// `self · otherᵀ mod 2`, dense.
    pub fn mul_transpose(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        check_len(self.cols, other.cols)?;
        let other_bits: Vec<Bits> = (0..other.num_rows()).map(|r| other.row_bits(r)).collect();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, _)| {
                let a = self.row_bits(r);
                other_bits
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| a.dot(b))
                    .map(|(c, _)| c)
                    .collect()
            })
            .collect();
        Ok(BinaryMatrix {
            cols: other.num_rows(),
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &BinaryMatrix) -> BinaryMatrix {
        let mut rows = Vec::with_capacity(self.num_rows() * other.num_rows());
        for a in &self.rows {
            for b in &other.rows {
                let mut row: Vec<usize> = a
                    .iter()
                    .flat_map(|&ca| b.iter().map(move |&cb| ca * other.cols + cb))
                    .collect();
                row.sort_unstable();
                rows.push(row);
            }
        }
        BinaryMatrix {
            cols: self.cols * other.cols,
            rows,
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        check_len(self.num_rows(), other.num_rows())?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&c| c + self.cols)).collect())
            .collect();
        Ok(BinaryMatrix {
            cols: self.cols + other.cols,
            rows,
        })
    }

    /// Drop the rows at the given indices.
    pub fn without_rows(&self, drop: &[usize]) -> BinaryMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(r, _)| !drop.contains(r))
            .map(|(_, row)| row.clone())
            .collect();
        BinaryMatrix {
            cols: self.cols,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        RowSpace::new(self.cols, (0..self.num_rows()).map(|r| self.row_bits(r))).rank()
    }

    pub fn to_dense_string(&self) -> String {
        let mut out = String::new();
        for r in 0..self.num_rows() {
            for c in 0..self.cols {
                out.push(if self.get(r, c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// Reduced basis of a GF(2) row space, supporting membership queries.
#[derive(Clone, Debug)]
pub struct RowSpace {
    len: usize,
    basis: Vec<Bits>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new<I: IntoIterator<Item = Bits>>(len: usize, rows: I) -> Self {
        let mut space = RowSpace {
            len,
            basis: Vec::new(),
            pivots: Vec::new(),
        };
        for row in rows {
            space.insert(row);
        }
        space
    }

    fn reduce(&self, v: &mut Bits) {
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
    }

    /// Add a vector; returns whether it enlarged the space.
    pub fn insert(&mut self, mut v: Bits) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        let Some(p) = v.iter_ones().next() else {
            return false;
        };
        // Keep earlier rows reduced at the new pivot so `reduce` needs one pass.
        for row in &mut self.basis {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        self.basis.push(v);
        self.pivots.push(p);
        true
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &Bits) -> bool {
        assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        self.reduce(&mut v);
        v.is_zero()
    }
}
