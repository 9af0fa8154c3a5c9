//! Phaseless Pauli algebra.
//!
//! A single-qubit Pauli is encoded as the bit pair `(x, z)` with
//! `I = (0,0)`, `X = (1,0)`, `Y = (1,1)`, `Z = (0,1)`. Products drop the
//! global phase, so multiplication is componentwise XOR.

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{check_len, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    #[inline]
    pub fn x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    #[inline]
    pub fn z(self) -> bool {
        matches!(self, Pauli::Y | Pauli::Z)
    }

    /// Index into `[I, X, Y, Z]`.
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// 1 iff `self` and `other` anticommute.
    #[inline]
    pub fn inner(self, other: Pauli) -> bool {
        (self.x() & other.z()) ^ (self.z() & other.x())
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Product up to phase.
impl std::ops::Mul for Pauli {
    type Output = Pauli;

    #[inline]
    fn mul(self, other: Pauli) -> Pauli {
        Pauli::from_bits(self.x() ^ other.x(), self.z() ^ other.z())
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Pauli> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidPauli(other)),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An N-fold Pauli operator stored as paired X and Z bit vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: Bits,
    z: Bits,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: Bits::zeros(n),
            z: Bits::zeros(n),
        }
    }

    pub fn from_bits(x: Bits, z: Bits) -> Result<Self> {
        check_len(x.len(), z.len())?;
        Ok(PauliString { x, z })
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut out = PauliString::identity(paulis.len());
        for (i, &p) in paulis.iter().enumerate() {
            out.set(i, p);
        }
        out
    }

    /// A string with a single non-identity entry.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut out = PauliString::identity(n);
        out.set(qubit, p);
        out
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x_bits(&self) -> &Bits {
        &self.x
    }

    pub fn z_bits(&self) -> &Bits {
        &self.z
    }

    #[inline]
    pub fn get(&self, i: usize) -> Pauli {
        Pauli::from_bits(self.x.get(i), self.z.get(i))
    }

    #[inline]
    pub fn set(&mut self, i: usize, p: Pauli) {
        self.x.set(i, p.x());
        self.z.set(i, p.z());
    }

    pub fn iter(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Indices with a non-identity entry, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.x.get(i) || self.z.get(i))
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Symplectic inner product: 1 iff the operators anticommute.
    pub fn inner(&self, other: &PauliString) -> Result<bool> {
        check_len(self.len(), other.len())?;
        Ok(self.x.dot(&other.z) ^ self.z.dot(&other.x))
    }

    /// Phaseless product.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        check_len(self.len(), other.len())?;
        let mut out = self.clone();
        out.x.xor_assign(&other.x);
        out.z.xor_assign(&other.z);
        Ok(out)
    }

    pub fn to_symplectic(&self) -> SymplecticVector {
        SymplecticVector(self.x.concat(&self.z))
    }

    pub fn from_symplectic(v: &SymplecticVector) -> PauliString {
        let n = v.qubits();
        PauliString {
            x: v.0.slice(0, n),
            z: v.0.slice(n, 2 * n),
        }
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let paulis = s
            .trim()
            .chars()
            .map(Pauli::try_from)
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_paulis(&paulis))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// Binary symplectic form `(x ‖ z)` of an N-qubit Pauli, length 2N.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticVector(Bits);

impl SymplecticVector {
    pub fn new(bits: Bits) -> Result<Self> {
        if bits.len() % 2 == 1 {
            return Err(Error::OddSymplecticLength(bits.len()));
        }
        Ok(SymplecticVector(bits))
    }

    pub fn qubits(&self) -> usize {
        self.0.len() / 2
    }

    pub fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn into_bits(self) -> Bits {
        self.0
    }
}
