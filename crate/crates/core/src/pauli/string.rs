use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// `(x, z)` bits of the axis in symplectic form.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Option<Axis> {
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (true, true) => Some(Axis::Y),
            (false, true) => Some(Axis::Z),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// Power of the imaginary unit, `i^k` with `k` in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn new(exp: i64) -> Self {
        Phase(exp.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// A multi-qubit Pauli operator `i^phase · σ_0 ⊗ σ_1 ⊗ …` in binary
/// symplectic form.
///
/// Qubit `k` is stored at bit `k` of the masks. A set `(x, z)` pair denotes
/// `Y` itself (not `XZ`), so `Y = i·X·Z` and a string with an even phase
/// exponent is Hermitian.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Phase,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            phase: Phase::ONE,
        }
    }

    pub fn single(n: usize, qubit: usize, axis: Axis) -> Result<Self> {
        Self::from_axes(n, [(qubit, axis)])
    }

    /// Builds a string from `(qubit, axis)` pairs. Repeated qubits multiply.
    pub fn from_axes<I>(n: usize, axes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Axis)>,
    {
        let mut out = PauliString::identity(n);
        for (q, a) in axes {
            if q >= n {
                return Err(Error::Index {
                    what: "qubit",
                    index: q,
                    len: n,
                });
            }
            if out.axis(q).is_some() {
                let single = PauliString::from_axes(n, [(q, a)])?;
                out = out.multiply(&single)?;
            } else {
                out.set(q, Some(a));
            }
        }
        Ok(out)
    }

    /// Parses strings such as `"XIZ"` or `"-iYY"`; character `k` is qubit `k`.
    pub fn parse(s: &str) -> Result<Self> {
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (Phase::I, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (Phase::ONE, rest)
        } else {
            (Phase::ONE, s)
        };
        let n = body.chars().count();
        let mut out = PauliString::identity(n);
        for (k, ch) in body.chars().enumerate() {
            let a = match ch {
                'I' | '_' => None,
                'X' => Some(Axis::X),
                'Y' => Some(Axis::Y),
                'Z' => Some(Axis::Z),
                other => {
                    return Err(Error::Construction(format!(
                        "invalid Pauli character {other:?}"
                    )))
                }
            };
            out.set(k, a);
        }
        out.phase = phase;
        Ok(out)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn axis(&self, qubit: usize) -> Option<Axis> {
        let (w, b) = (qubit / 64, qubit % 64);
        Axis::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    fn set(&mut self, qubit: usize, axis: Option<Axis>) {
        let (w, b) = (qubit / 64, qubit % 64);
        let (xb, zb) = axis.map(Axis::bits).unwrap_or((false, false));
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.axis(q).is_some()).collect()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// `true` for the identity with phase `+1`.
    pub fn is_identity(&self) -> bool {
        self.is_identity_up_to_phase() && self.phase == Phase::ONE
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Same Pauli content ignoring the phase.
    pub fn same_support_and_axes(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut plus = 0u32;
        let mut minus = 0u32;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for k in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[k], self.z[k], other.x[k], other.z[k]);
            // XY = iZ, YZ = iX, ZX = iY and the reversed orders with -i.
            plus += ((x1 & !z1 & x2 & z2) | (x1 & z1 & !x2 & z2) | (!x1 & z1 & x2 & !z2))
                .count_ones();
            minus += ((x1 & !z1 & !x2 & z2) | (x1 & z1 & x2 & !z2) | (!x1 & z1 & x2 & z2))
                .count_ones();
            x.push(x1 ^ x2);
            z.push(z1 ^ z2);
        }
        let exp = self.phase.0 as i64 + other.phase.0 as i64 + plus as i64 - minus as i64;
        Ok(PauliString {
            n: self.n,
            x,
            z,
            phase: Phase::new(exp),
        })
    }

    /// Symplectic inner product modulo 2.
    pub fn symplectic_form(&self, other: &PauliString) -> Result<u32> {
        self.check_len(other)?;
        let s: u32 = (0..self.x.len())
            .map(|k| ((self.x[k] & other.z[k]) ^ (self.z[k] & other.x[k])).count_ones())
            .sum();
        Ok(s % 2)
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        Ok(self.symplectic_form(other)? == 0)
    }

    /// Low 64 bits of the masks, for dense state-vector work.
    pub(crate) fn low_masks(&self) -> (u64, u64) {
        (
            self.x.first().copied().unwrap_or(0),
            self.z.first().copied().unwrap_or(0),
        )
    }

    /// Action on a computational basis state given as a bit vector.
    ///
    /// Returns the phase picked up; `bits` is updated in place. Bit value 1
    /// means spin down (σ^z = −1).
    pub fn act_on_basis(&self, bits: &mut [u64]) -> Result<Phase> {
        if bits.len() != self.x.len() {
            return Err(Error::Dimension {
                expected: self.x.len(),
                found: bits.len(),
            });
        }
        // i^p · ∏ σ = i^(p + #Y) · X^x Z^z
        let mut exp = self.phase.0 as i64;
        for ((b, &x), &z) in bits.iter_mut().zip(&self.x).zip(&self.z) {
            exp += (x & z).count_ones() as i64;
            exp += 2 * (*b & z).count_ones() as i64;
            *b ^= x;
        }
        Ok(Phase::new(exp))
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            let c = self.axis(q).map(Axis::symbol).unwrap_or('I');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
