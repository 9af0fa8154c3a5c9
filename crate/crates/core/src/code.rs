//! Stabilizer codes, syndromes and decoding outcome classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{check_len, Error, Result};
use crate::gf2::{BinaryMatrix, RowSpace};
use crate::pauli::{Pauli, PauliString};

/// Binary error syndrome, one bit per check.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Syndrome(Bits);

impl Syndrome {
    pub fn new(bits: Bits) -> Self {
        Syndrome(bits)
    }

    pub fn zeros(m: usize) -> Self {
        Syndrome(Bits::zeros(m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, m: usize) -> bool {
        self.0.get(m)
    }

    pub fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Parse a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidSpec(format!("bad syndrome digit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Syndrome(Bits::from_bools(bits)))
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({})", self.0)
    }
}

/// Result class of one decoding trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// Estimate equals the actual error.
    ExactSuccess,
    /// Estimate differs from the actual error by a stabilizer.
    DegenerateSuccess,
    /// Syndrome never matched within the iteration budget.
    DetectedError,
    /// Syndrome matched but the residual is a nontrivial logical operator.
    UndetectedError,
}

impl Outcome {
    pub fn is_success(self) -> bool {
        matches!(self, Outcome::ExactSuccess | Outcome::DegenerateSuccess)
    }
}

/// An `M × N` stabilizer check matrix with its Tanner graph.
///
/// Rows need not be independent. The symplectic row space is reduced once at
/// construction and reused for every stabilizer-membership query.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    n: usize,
    rows: Vec<PauliString>,
    check_adj: Vec<Vec<(usize, Pauli)>>,
    var_adj: Vec<Vec<(usize, Pauli)>>,
    stabilizers: RowSpace,
}

impl StabilizerCode {
    /// Build a code, checking that all rows have length `n` and pairwise commute.
    pub fn new(n: usize, rows: Vec<PauliString>) -> Result<Self> {
        for row in &rows {
            check_len(n, row.len())?;
        }
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if rows[i].inner(&rows[j])? {
                    return Err(Error::NotSelfOrthogonal(i, j));
                }
            }
        }
        Ok(Self::build(n, rows))
    }

    /// Build a code from checks that are not required to commute.
    ///
    /// Decoders only need the Tanner graph; this admits arbitrary check
    /// matrices for message-passing experiments.
    pub fn new_unchecked(n: usize, rows: Vec<PauliString>) -> Result<Self> {
        for row in &rows {
            check_len(n, row.len())?;
        }
        Ok(Self::build(n, rows))
    }

    fn build(n: usize, rows: Vec<PauliString>) -> Self {
        let mut check_adj = Vec::with_capacity(rows.len());
        let mut var_adj = vec![Vec::new(); n];
        for (m, row) in rows.iter().enumerate() {
            let edges: Vec<(usize, Pauli)> = row
                .support()
                .into_iter()
                .map(|q| (q, row.get(q)))
                .collect();
            for &(q, p) in &edges {
                var_adj[q].push((m, p));
            }
            check_adj.push(edges);
        }
        let stabilizers = RowSpace::new(2 * n, rows.iter().map(|r| r.to_symplectic().into_bits()));
        StabilizerCode {
            n,
            rows,
            check_adj,
            var_adj,
            stabilizers,
        }
    }

    /// CSS code with X-type checks on the supports of `hx` rows and Z-type
    /// checks on the supports of `hz` rows. X-type rows come first.
    pub fn css(hx: &BinaryMatrix, hz: &BinaryMatrix) -> Result<Self> {
        check_len(hx.num_cols(), hz.num_cols())?;
        let n = hx.num_cols();
        let typed = |h: &BinaryMatrix, p: Pauli| {
            h.rows()
                .map(|row| {
                    let mut s = PauliString::identity(n);
                    for &q in row {
                        s.set(q, p);
                    }
                    s
                })
                .collect::<Vec<_>>()
        };
        let mut rows = typed(hx, Pauli::X);
        rows.extend(typed(hz, Pauli::Z));
        Self::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Rank of the check matrix over GF(2)².
    pub fn rank(&self) -> usize {
        self.stabilizers.rank()
    }

    /// Number of logical qubits, `N − rank`.
    pub fn k(&self) -> usize {
        self.n - self.rank()
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    /// `N(m)`: the non-identity entries of check `m` as `(qubit, Pauli)`.
    pub fn check_neighbors(&self, m: usize) -> &[(usize, Pauli)] {
        &self.check_adj[m]
    }

    /// `M(n)`: the checks touching qubit `n` as `(check, Pauli)`.
    pub fn var_neighbors(&self, n: usize) -> &[(usize, Pauli)] {
        &self.var_adj[n]
    }

    pub fn num_edges(&self) -> usize {
        self.check_adj.iter().map(Vec::len).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.check_adj.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        self.var_adj.iter().map(Vec::len).collect()
    }

    /// `z_m = ⟨E, S_m⟩`, evaluated on `N(m)` only.
    pub fn syndrome(&self, error: &PauliString) -> Result<Syndrome> {
        check_len(self.n, error.len())?;
        Ok(self.syndrome_unchecked(error))
    }

    pub(crate) fn syndrome_unchecked(&self, error: &PauliString) -> Syndrome {
        Syndrome(Bits::from_bools(self.check_adj.iter().map(|edges| {
            edges
                .iter()
                .fold(false, |acc, &(q, s)| acc ^ error.get(q).inner(s))
        })))
    }

    /// Binary `M × 2N` check matrix whose row `m` is `(z(S_m) ‖ x(S_m))`, so
    /// that `H · (x_E ‖ z_E)` equals the Pauli syndrome of `E`.
    pub fn to_binary_check(&self) -> BinaryMatrix {
        let rows = self
            .check_adj
            .iter()
            .map(|edges| {
                let mut row: Vec<usize> = Vec::with_capacity(2 * edges.len());
                for &(q, p) in edges {
                    if p.z() {
                        row.push(q);
                    }
                    if p.x() {
                        row.push(self.n + q);
                    }
                }
                row
            })
            .collect();
        BinaryMatrix::from_rows(2 * self.n, rows).expect("edges are in range and distinct")
    }

    /// Whether `p` is a stabilizer, i.e. lies in the row space of the checks.
    pub fn stabilizer_membership(&self, p: &PauliString) -> Result<bool> {
        check_len(self.n, p.len())?;
        Ok(self.stabilizers.contains(p.to_symplectic().bits()))
    }

    /// Classify a trial. A decoder that did not converge always yields
    /// [`Outcome::DetectedError`].
    pub fn classify(
        &self,
        actual: &PauliString,
        estimate: &PauliString,
        decoder_converged: bool,
    ) -> Result<Outcome> {
        check_len(self.n, actual.len())?;
        check_len(self.n, estimate.len())?;
        if !decoder_converged {
            return Ok(Outcome::DetectedError);
        }
        if actual == estimate {
            return Ok(Outcome::ExactSuccess);
        }
        let residual = actual.multiply(estimate)?;
        if self.stabilizer_membership(&residual)? {
            Ok(Outcome::DegenerateSuccess)
        } else {
            Ok(Outcome::UndetectedError)
        }
    }

    /// Text form: a header line `N M` followed by one I/X/Y/Z row per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse the text form. Blank lines and lines starting with `#` are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::StabilizerText {
            line: 1,
            msg: "missing header".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::StabilizerText {
                line,
                msg: format!("bad header: {e}"),
            })?;
        let [n, m] = dims[..] else {
            return Err(Error::StabilizerText {
                line,
                msg: "header must be `N M`".into(),
            });
        };
        let mut rows = Vec::with_capacity(m);
        for (line, text) in lines {
            let row: PauliString = text.parse().map_err(|e: Error| Error::StabilizerText {
                line,
                msg: e.to_string(),
            })?;
            if row.len() != n {
                return Err(Error::StabilizerText {
                    line,
                    msg: format!("row has {} qubits, header says {n}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != m {
            return Err(Error::StabilizerText {
                line: 0,
                msg: format!("header says {m} rows, found {}", rows.len()),
            });
        }
        Self::new(n, rows)
    }
}
