use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::LinearMap;
use crate::pauli::{Phase, PauliString};

/// Largest qubit count accepted by [`OperatorSum::apply`]; a state vector
/// of `2^26` complex amplitudes takes 1 GiB.
pub const APPLY_QUBIT_LIMIT: usize = 26;

const HERMITIAN_TOL: f64 = 1e-12;

/// A linear combination `Σ c_k P_k` of Pauli strings on `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSum {
    n: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl OperatorSum {
    pub fn zero(n: usize) -> Self {
        OperatorSum {
            n,
            terms: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.terms
            .push((Complex64::new(1.0, 0.0), PauliString::identity(n)));
        s
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, PauliString)>,
    {
        let mut s = Self::zero(n);
        for (c, p) in terms {
            s.push(c, p)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, coefficient: Complex64, string: PauliString) -> Result<()> {
        if string.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: string.num_qubits(),
            });
        }
        self.terms.push((coefficient, string));
        Ok(())
    }

    pub fn push_real(&mut self, coefficient: f64, string: PauliString) -> Result<()> {
        self.push(Complex64::new(coefficient, 0.0), string)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Hermitian iff every term's coefficient times its string phase is
    /// real; call [`simplify`](Self::simplify) first for sums that may
    /// contain cancelling terms.
    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|(c, p)| {
            let v = c * p.phase().to_complex();
            v.im.abs() <= HERMITIAN_TOL * v.norm().max(1.0)
        })
    }

    /// Folds string phases into coefficients, merges equal strings and
    /// drops terms with `|c| <= tol`. Term order follows the masks.
    pub fn simplify(&self, tol: f64) -> OperatorSum {
        let mut acc: BTreeMap<(Vec<u64>, Vec<u64>), Complex64> = BTreeMap::new();
        for (c, p) in &self.terms {
            let key = (p.x_words().to_vec(), p.z_words().to_vec());
            *acc.entry(key).or_default() += c * p.phase().to_complex();
        }
        let mut out = OperatorSum::zero(self.n);
        let mut by_key: BTreeMap<(Vec<u64>, Vec<u64>), PauliString> = BTreeMap::new();
        for (_, p) in &self.terms {
            by_key
                .entry((p.x_words().to_vec(), p.z_words().to_vec()))
                .or_insert_with(|| p.clone().with_phase(Phase::ONE));
        }
        for (key, c) in acc {
            if c.norm() > tol {
                out.terms.push((c, by_key[&key].clone()));
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> OperatorSum {
        OperatorSum {
            n: self.n,
            terms: self.terms.iter().map(|(c, p)| (c * factor, p.clone())).collect(),
        }
    }

    pub fn add(&self, other: &OperatorSum) -> Result<OperatorSum> {
        self.check(other.n)?;
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    /// Operator product `self · other`, term by term.
    pub fn compose(&self, other: &OperatorSum) -> Result<OperatorSum> {
        self.check(other.n)?;
        let mut out = OperatorSum::zero(self.n);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                out.terms.push((a * b, p.multiply(q)?));
            }
        }
        Ok(out)
    }

    /// `true` if every pair of terms commutes with `string`.
    pub fn commutes_termwise(&self, string: &PauliString) -> Result<bool> {
        for (_, p) in &self.terms {
            if !p.commutes(string)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }

    /// Matrix-free `op · state` on a little-endian state vector (qubit `k`
    /// is bit `k` of the index, bit value 1 is spin down).
    ///
    /// Each output amplitude is gathered independently, so the parallel
    /// evaluation is deterministic.
    pub fn apply(&self, state: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.n > APPLY_QUBIT_LIMIT {
            return Err(Error::Capacity {
                what: "qubits for state-vector application",
                size: self.n,
                limit: APPLY_QUBIT_LIMIT,
            });
        }
        let dim = 1usize << self.n;
        if state.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: state.len(),
            });
        }
        // P|j> = c · i^(phase + #Y) · (-1)^{|j & z|} |j ^ x>
        let prepared: Vec<(Complex64, u64, u64)> = self
            .terms
            .iter()
            .map(|(c, p)| {
                let (x, z) = p.low_masks();
                let ny = (x & z).count_ones() as i64;
                let ph = Phase::new(p.phase().exponent() as i64 + ny).to_complex();
                (c * ph, x, z)
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        out.par_chunks_mut(1 << 12)
            .enumerate()
            .for_each(|(chunk, slice)| {
                let base = chunk << 12;
                for (k, amp) in slice.iter_mut().enumerate() {
                    let i = (base + k) as u64;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &(c, x, z) in &prepared {
                        let j = i ^ x;
                        let v = state[j as usize];
                        if (j & z).count_ones() % 2 == 1 {
                            acc -= c * v;
                        } else {
                            acc += c * v;
                        }
                    }
                    *amp = acc;
                }
            });
        Ok(out)
    }
}

impl LinearMap for OperatorSum {
    fn dim(&self) -> usize {
        1usize << self.n
    }

    fn column(&self, col: usize, out: &mut Vec<(usize, Complex64)>) {
        let j = col as u64;
        for (c, p) in &self.terms {
            let (x, z) = p.low_masks();
            let exp = p.phase().exponent() as i64
                + (x & z).count_ones() as i64
                + 2 * (j & z).count_ones() as i64;
            out.push(((j ^ x) as usize, c * Phase::new(exp).to_complex()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn basis(dim: usize, k: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0); dim];
        v[k] = c(1.0);
        v
    }

    #[test]
    fn identity_apply() {
        let id = OperatorSum::identity(3);
        let s: Vec<Complex64> = (0..8).map(|k| Complex64::new(k as f64, -1.0)).collect();
        assert_eq!(id.apply(&s).unwrap(), s);
    }

    #[test]
    fn x_flips_lowest_bit() {
        let mut op = OperatorSum::zero(3);
        op.push_real(1.0, PauliString::single(3, 0, Axis::X).unwrap())
            .unwrap();
        assert_eq!(op.apply(&basis(8, 0)).unwrap(), basis(8, 1));
    }

    #[test]
    fn y_phases() {
        let mut op = OperatorSum::zero(1);
        op.push_real(1.0, PauliString::parse("Y").unwrap()).unwrap();
        let out = op.apply(&basis(2, 0)).unwrap();
        assert_eq!(out[1], Complex64::new(0.0, 1.0));
        let out = op.apply(&basis(2, 1)).unwrap();
        assert_eq!(out[0], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn simplify_merges_and_cancels() {
        let mut op = OperatorSum::zero(2);
        op.push_real(1.0, PauliString::parse("XZ").unwrap()).unwrap();
        op.push_real(1.0, PauliString::parse("-XZ").unwrap()).unwrap();
        op.push_real(2.0, PauliString::parse("ZZ").unwrap()).unwrap();
        let s = op.simplify(1e-14);
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].0, c(2.0));
    }

    #[test]
    fn hermiticity_flag() {
        let mut op = OperatorSum::zero(1);
        op.push(Complex64::new(0.0, 1.0), PauliString::parse("iX").unwrap())
            .unwrap();
        assert!(op.is_hermitian());
        op.push_real(1.0, PauliString::parse("iZ").unwrap()).unwrap();
        assert!(!op.is_hermitian());
    }

    #[test]
    fn column_matches_apply() {
        let mut op = OperatorSum::zero(3);
        op.push_real(0.5, PauliString::parse("XYZ").unwrap()).unwrap();
        op.push_real(-1.0, PauliString::parse("ZZI").unwrap()).unwrap();
        for j in 0..8 {
            let dense = op.apply(&basis(8, j)).unwrap();
            let mut col = Vec::new();
            op.column(j, &mut col);
            let mut v = vec![c(0.0); 8];
            for (i, a) in col {
                v[i] += a;
            }
            assert_eq!(v, dense);
        }
    }

    #[test]
    fn dimension_errors() {
        let op = OperatorSum::identity(2);
        assert!(matches!(
            op.apply(&[c(1.0); 3]),
            Err(Error::Dimension { .. })
        ));
        let mut op = OperatorSum::zero(2);
        assert!(op.push_real(1.0, PauliString::identity(3)).is_err());
    }
}
