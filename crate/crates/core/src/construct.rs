//! Code families: the five-qubit code, cyclic BCH parity checks, hypergraph
//! products and random bicycle codes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;
use crate::code::StabilizerCode;

/// The `[[5,1,3]]` code with checks `XZZXI, IXZZX, XIXZZ, ZXIXZ`.
pub fn five_qubit_code() -> StabilizerCode {
    let rows = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|r| r.parse().expect("static Pauli string"))
        .collect();
    StabilizerCode::new(5, rows).expect("five-qubit checks commute")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BchVariant {
    /// `[7,4,3]`, generator `x³ + x + 1`.
    Hamming7,
    /// `[15,7,5]`, generator `x⁸ + x⁷ + x⁶ + x⁴ + 1`.
    Bch15_7,
}

impl BchVariant {
    fn length_and_generator(self) -> (usize, u64) {
        match self {
            BchVariant::Hamming7 => (7, 0b1011),
            BchVariant::Bch15_7 => (15, 0b1_1101_0001),
        }
    }
}

fn degree(p: u64) -> usize {
    63 - p.leading_zeros() as usize
}

/// Quotient of `a / b` over GF(2)[x]; panics unless the division is exact.
fn poly_div_exact(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    let mut q = 0;
    while a != 0 && degree(a) >= db {
        let shift = degree(a) - db;
        q |= 1 << shift;
        a ^= b << shift;
    }
    assert_eq!(a, 0, "generator does not divide x^n + 1");
    q
}

/// Parity-check matrix of a narrow-sense cyclic BCH code.
///
/// With check polynomial `h(x) = (xⁿ + 1) / g(x)` of degree `k`, row `i` holds
/// the reciprocal coefficients `h_k … h_0` starting at column `i`, for
/// `i = 0 … n−k−1`. These rows are in echelon form and hence full rank.
pub fn bch_parity(variant: BchVariant) -> BinaryMatrix {
    let (n, g) = variant.length_and_generator();
    let h = poly_div_exact((1 << n) | 1, g);
    let k = degree(h);
    let rows = (0..n - k)
        .map(|i| (0..=k).filter(|j| h >> (k - j) & 1 == 1).map(|j| i + j).collect())
        .collect();
    BinaryMatrix::from_rows(n, rows).expect("shifts fit in n columns")
}

/// Hypergraph product of two classical parity-check matrices.
///
/// For `h1` of size `m₁×n₁` and `h2` of size `m₂×n₂` the X checks are
/// `[h1⊗I_{n₂} | I_{m₁}⊗h2ᵀ]` and the Z checks `[I_{n₁}⊗h2 | h1ᵀ⊗I_{m₂}]`,
/// on `n₁n₂ + m₁m₂` qubits.
pub fn hypergraph_product(h1: &BinaryMatrix, h2: &BinaryMatrix) -> Result<StabilizerCode> {
    let (m1, n1) = (h1.num_rows(), h1.num_cols());
    let (m2, n2) = (h2.num_rows(), h2.num_cols());
    let hx = h1
        .kron(&BinaryMatrix::identity(n2))
        .hstack(&BinaryMatrix::identity(m1).kron(&h2.transpose()))?;
    let hz = BinaryMatrix::identity(n1)
        .kron(h2)
        .hstack(&h1.transpose().kron(&BinaryMatrix::identity(m2)))?;
    debug_assert!(hx.mul_transpose(&hz)?.is_zero());
    StabilizerCode::css(&hx, &hz)
}

/// Parameters of a random bicycle code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicycleSpec {
    /// Code length; must be even.
    pub n: usize,
    /// Rows of `[C | Cᵀ]` kept after deletion.
    pub m: usize,
    /// Row weight of the circulant `C`.
    pub circulant_row_weight: usize,
    pub seed: u64,
}

impl BicycleSpec {
    pub fn validate(&self) -> Result<()> {
        let half = self.n / 2;
        if self.n == 0 || self.n % 2 == 1 {
            return Err(Error::InvalidSpec(format!("bicycle length {} must be even and positive", self.n)));
        }
        if self.m == 0 || self.m > half {
            return Err(Error::InvalidSpec(format!("kept rows {} must be in 1..={half}", self.m)));
        }
        if self.circulant_row_weight == 0 {
            return Err(Error::InvalidSpec("circulant row weight must be positive".into()));
        }
        if self.circulant_row_weight > half {
            return Err(Error::InvalidSpec(format!(
                "circulant row weight {} needs that many distinct offsets out of {half}",
                self.circulant_row_weight
            )));
        }
        Ok(())
    }
}

/// Distinct circulant offsets drawn from the seeded generator, ascending.
pub fn circulant_offsets(spec: &BicycleSpec) -> Result<Vec<usize>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut offsets = rand::seq::index::sample(&mut rng, spec.n / 2, spec.circulant_row_weight).into_vec();
    offsets.sort_unstable();
    Ok(offsets)
}

/// The classical matrix `H = [C | Cᵀ]` with rows deleted, before the CSS lift.
pub fn bicycle_matrix(spec: &BicycleSpec) -> Result<BinaryMatrix> {
    let offsets = circulant_offsets(spec)?;
    let half = spec.n / 2;
    // C[i][j] = 1 iff (j − i) mod L is an offset; Cᵀ[i][j] = C[j][i].
    let rows: Vec<Vec<usize>> = (0..half)
        .map(|i| {
            let c = offsets.iter().map(|&o| (i + o) % half);
            let ct = offsets.iter().map(|&o| half + (i + half - o) % half);
            c.chain(ct).collect()
        })
        .collect();
    let full = BinaryMatrix::from_rows(spec.n, rows)?;
    let dropped = balanced_row_deletion(&full, half - spec.m);
    Ok(full.without_rows(&dropped))
}

/// Greedily pick `count` rows whose removal keeps column weights most uniform.
///
/// Each step removes the row minimising the resulting column-weight variance;
/// ties go to the lowest row index.
fn balanced_row_deletion(h: &BinaryMatrix, count: usize) -> Vec<usize> {
    let n = h.num_cols() as i64;
    let mut weights: Vec<i64> = h.col_weights().into_iter().map(|w| w as i64).collect();
    let mut alive = vec![true; h.num_rows()];
    let mut dropped = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best: Option<(i64, usize)> = None;
        let total: i64 = weights.iter().sum();
        let sum_sq: i64 = weights.iter().map(|w| w * w).sum();
        for r in (0..h.num_rows()).filter(|&r| alive[r]) {
            let row = h.row(r);
            let new_total = total - row.len() as i64;
            let new_sum_sq = sum_sq + row.iter().map(|&c| 1 - 2 * weights[c]).sum::<i64>();
            // n² · variance, kept integral.
            let score = n * new_sum_sq - new_total * new_total;
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, r));
            }
        }
        let (_, r) = best.expect("count never exceeds the row count");
        alive[r] = false;
        for &c in h.row(r) {
            weights[c] -= 1;
        }
        dropped.push(r);
    }
    dropped.sort_unstable();
    dropped
}

/// A CSS bicycle code with X and Z checks both given by [`bicycle_matrix`].
pub fn bicycle_code(spec: &BicycleSpec) -> Result<StabilizerCode> {
    let h = bicycle_matrix(spec)?;
    StabilizerCode::css(&h, &h)
}
