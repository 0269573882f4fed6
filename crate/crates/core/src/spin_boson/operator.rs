use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Color;
use crate::linalg::LinearMap;
use crate::pauli::Axis;
use crate::spin_boson::local::{Factor, LocalMonomial, LocalSum};

/// `s_x = +1`, `s_y = −1`.
pub fn s_nu(axis: Axis) -> Result<f64> {
    match axis {
        Axis::X => Ok(1.0),
        Axis::Y => Ok(-1.0),
        Axis::Z => Err(Error::Coupling("s_ν is defined for x and y only".into())),
    }
}

/// Closed form of a single-vertex Pauli on a `color` vertex:
/// `σ^z_c = τ^z p_c`, `σ^ν_c = τ^ν (b_c† + b_c + s_ν r_c)`.
pub fn map_vertex_operator(color: Color, axis: Option<Axis>) -> LocalSum {
    let one = Complex64::new(1.0, 0.0);
    match axis {
        None => vec![(one, vec![])],
        Some(Axis::Z) => vec![(one, vec![Factor::TauZ, Factor::P(color)])],
        Some(a) => {
            let t = Factor::tau(a);
            let s = s_nu(a).expect("x or y");
            vec![
                (one, vec![t, Factor::Bdag(color)]),
                (one, vec![t, Factor::B(color)]),
                (one * s, vec![t, Factor::R(color)]),
            ]
        }
    }
}

/// One product term: a coefficient times a product of factors per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveTerm {
    pub coefficient: Complex64,
    pub factors: Vec<(usize, Vec<Factor>)>,
}

impl EffectiveTerm {
    pub fn adjoint(&self) -> EffectiveTerm {
        EffectiveTerm {
            coefficient: self.coefficient.conj(),
            factors: self
                .factors
                .iter()
                .map(|(s, fs)| (*s, fs.iter().rev().map(|f| f.adjoint()).collect()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
struct Compiled {
    coefficient: Complex64,
    sites: Vec<(usize, LocalMonomial)>,
}

/// Operator on `sites` effective sites, basis index `Σ l_s 8^s`.
#[derive(Debug, Clone)]
pub struct EffectiveOperator {
    sites: usize,
    terms: Vec<EffectiveTerm>,
    compiled: Vec<Compiled>,
}

impl EffectiveOperator {
    pub fn zero(sites: usize) -> Self {
        EffectiveOperator {
            sites,
            terms: Vec::new(),
            compiled: Vec::new(),
        }
    }

    pub fn num_sites(&self) -> usize {
        self.sites
    }

    pub fn terms(&self) -> &[EffectiveTerm] {
        &self.terms
    }

    pub fn push(&mut self, term: EffectiveTerm) -> Result<()> {
        let mut sites: Vec<(usize, LocalMonomial)> = Vec::new();
        for (s, fs) in &term.factors {
            if *s >= self.sites {
                return Err(Error::Index {
                    what: "effective site",
                    index: *s,
                    len: self.sites,
                });
            }
            let m = LocalMonomial::product(fs);
            match sites.iter_mut().find(|(t, _)| t == s) {
                // a later entry for the same site multiplies from the right
                Some((_, prev)) => *prev = prev.compose(&m),
                None => sites.push((*s, m)),
            }
        }
        self.compiled.push(Compiled {
            coefficient: term.coefficient,
            sites,
        });
        self.terms.push(term);
        Ok(())
    }

    /// Adds a single-site operator sum at `site`.
    pub fn push_local(&mut self, site: usize, sum: &LocalSum, scale: Complex64) -> Result<()> {
        for (c, fs) in sum {
            self.push(EffectiveTerm {
                coefficient: c * scale,
                factors: vec![(site, fs.clone())],
            })?;
        }
        Ok(())
    }

    /// Matrix element action on one basis state, appending `(row, amp)`.
    pub fn act_on_basis(&self, index: usize, out: &mut Vec<(usize, Complex64)>) {
        'terms: for t in &self.compiled {
            let mut idx = index;
            let mut amp = t.coefficient;
            for (s, m) in &t.sites {
                let shift = 8usize.pow(*s as u32);
                let local = (idx / shift) % 8;
                match m.act(local) {
                    Some((l, a)) => {
                        idx = idx - local * shift + l * shift;
                        amp *= a;
                    }
                    None => continue 'terms,
                }
            }
            out.push((idx, amp));
        }
    }
}

impl LinearMap for EffectiveOperator {
    fn dim(&self) -> usize {
        8usize.pow(self.sites as u32)
    }

    fn column(&self, col: usize, out: &mut Vec<(usize, Complex64)>) {
        self.act_on_basis(col, out);
    }
}
