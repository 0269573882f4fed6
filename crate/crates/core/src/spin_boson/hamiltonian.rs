use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Color, CouplingParams, LatticePatch};
use crate::linalg::LinearMap;
use crate::pauli::Axis;
use crate::spin_boson::local::{conjugate_triangle, spin_pauli_dense, Factor};
use crate::spin_boson::operator::{EffectiveOperator, EffectiveTerm};

pub const EFFECTIVE_SCHEMA: &str = "tcc.effective/1";

/// Signs of the four processes as read off the conjugated two-triangle
/// link operator (see [`derive_process_signs`]).
pub const HOP_SIGN: f64 = 1.0;
pub const PAIR_SIGN: f64 = 1.0;
pub const SWITCH_SIGN: f64 = 1.0;
/// Fusion sign across an x link (`s_x`).
pub const FUSION_SIGN_X: f64 = 1.0;
/// Fusion sign across a y link (`s_y`).
pub const FUSION_SIGN_Y: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Hop,
    Pair,
    Fusion,
    Switch,
}

impl ProcessKind {
    pub const ALL: [ProcessKind; 4] = [
        ProcessKind::Fusion,
        ProcessKind::Hop,
        ProcessKind::Pair,
        ProcessKind::Switch,
    ];

    /// Weight inside `T = u + (t + v)/2 + r/4 + h.c.`
    pub fn weight(self) -> f64 {
        match self {
            ProcessKind::Fusion => 1.0,
            ProcessKind::Hop | ProcessKind::Pair => 0.5,
            ProcessKind::Switch => 0.25,
        }
    }

    pub fn sign(self, link_axis: Axis) -> f64 {
        match self {
            ProcessKind::Hop => HOP_SIGN,
            ProcessKind::Pair => PAIR_SIGN,
            ProcessKind::Switch => SWITCH_SIGN,
            ProcessKind::Fusion => match link_axis {
                Axis::Y => FUSION_SIGN_Y,
                _ => FUSION_SIGN_X,
            },
        }
    }

    /// Boson parts at the reference and the other site.
    fn factors(self, c: Color) -> (Factor, Factor) {
        match self {
            ProcessKind::Hop => (Factor::B(c), Factor::Bdag(c)),
            ProcessKind::Pair => (Factor::B(c), Factor::B(c)),
            ProcessKind::Fusion => (Factor::B(c), Factor::R(c)),
            ProcessKind::Switch => (Factor::R(c), Factor::R(c)),
        }
    }
}

/// One process of `T_c^{c′}` seen from a reference site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessTerm {
    pub kind: ProcessKind,
    pub boson_color: Color,
    pub link_color: Color,
    /// Axis of the microscopic links carrying the process.
    pub link_axis: Axis,
    pub sign: f64,
    /// `[reference, other]`.
    pub sites: [usize; 2],
    /// Full coefficient `−J′·weight·sign` of the term (its conjugate is
    /// added with the conjugate coefficient).
    pub coefficient: f64,
}

impl ProcessTerm {
    /// `coefficient · τ^ν τ^ν · A(ref) B(other)` and its adjoint.
    pub fn expand(&self) -> [EffectiveTerm; 2] {
        let t = Factor::tau(self.link_axis);
        let (a, b) = self.kind.factors(self.boson_color);
        let term = EffectiveTerm {
            coefficient: Complex64::new(self.coefficient, 0.0),
            factors: vec![(self.sites[0], vec![t, a]), (self.sites[1], vec![t, b])],
        };
        let adj = term.adjoint();
        [term, adj]
    }
}

/// Affine map between frames: `E_micro = scale · E_eff + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub scale: f64,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub operator: EffectiveOperator,
    pub process_terms: Vec<ProcessTerm>,
    pub calibration: Calibration,
    pub couplings: CouplingParams,
}

#[derive(Serialize)]
struct EffectiveDocument<'a> {
    schema: &'static str,
    sites: usize,
    constant_per_site: f64,
    boson_energy: f64,
    calibration: Calibration,
    couplings: CouplingParams,
    process_terms: &'a [ProcessTerm],
}

impl EffectiveHamiltonian {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&EffectiveDocument {
            schema: EFFECTIVE_SCHEMA,
            sites: self.operator.num_sites(),
            constant_per_site: -0.75,
            boson_energy: 1.0,
            calibration: self.calibration,
            couplings: self.couplings,
            process_terms: &self.process_terms,
        })?)
    }
}

/// `H_eff = Σ_sites (−3/4 + n) − Σ_links Σ_{c≠c′} J′ (T_c from both ends)`,
/// in units of `4 J_z`; `J′ = J_ν / (4 J_z)` with ν the axis of the
/// microscopic links carrying color `c` across the effective link.
pub fn build_effective_hamiltonian(
    patch: &LatticePatch,
    j: &CouplingParams,
) -> Result<EffectiveHamiltonian> {
    j.check()?;
    if j.jz <= 0.0 {
        return Err(Error::Coupling(format!(
            "J_z = {} must be positive for the triangle mapping",
            j.jz
        )));
    }
    let n = patch.num_sites();
    let mut op = EffectiveOperator::zero(n);
    for s in 0..n {
        op.push(EffectiveTerm {
            coefficient: Complex64::new(-0.75, 0.0),
            factors: vec![(s, vec![])],
        })?;
        for c in Color::ALL {
            op.push(EffectiveTerm {
                coefficient: Complex64::new(1.0, 0.0),
                factors: vec![(s, vec![Factor::N(c)])],
            })?;
        }
    }
    let mut process_terms = Vec::new();
    for link in patch.effective_links() {
        let [a, b] = link.sites;
        for c in Color::ALL {
            if c == link.color {
                continue;
            }
            let axis = c.link_axis(link.color)?;
            let jp = j.for_axis(axis) / (4.0 * j.jz);
            if jp == 0.0 {
                continue;
            }
            for sites in [[a, b], [b, a]] {
                for kind in ProcessKind::ALL {
                    let sign = kind.sign(axis);
                    process_terms.push(ProcessTerm {
                        kind,
                        boson_color: c,
                        link_color: link.color,
                        link_axis: axis,
                        sign,
                        sites,
                        coefficient: -jp * kind.weight() * sign,
                    });
                }
            }
        }
    }
    for p in &process_terms {
        for t in p.expand() {
            op.push(t)?;
        }
    }
    Ok(EffectiveHamiltonian {
        operator: op,
        process_terms,
        calibration: Calibration {
            scale: 4.0 * j.jz,
            offset: 0.0,
        },
        couplings: *j,
    })
}

/// Signs read off by projecting `U (σ^ν_c ⊗ σ^ν_c) U†` onto the four
/// canonical processes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedSign {
    pub boson_color: Color,
    pub link_color: Color,
    /// The `c′|c` label of the pair.
    pub label: Axis,
    pub link_axis: Axis,
    pub kind: ProcessKind,
    pub sign: f64,
    /// Largest entry of the link operator left after subtracting all four
    /// processes with their derived signs.
    pub residual: f64,
}

fn dense<M: LinearMap>(m: &M) -> DMatrix<Complex64> {
    let d = m.dim();
    let mut out = DMatrix::zeros(d, d);
    let mut buf = Vec::new();
    for j in 0..d {
        buf.clear();
        m.column(j, &mut buf);
        for &(i, v) in &buf {
            out[(i, j)] += v;
        }
    }
    out
}

fn inner(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn derive_process_signs() -> Result<Vec<DerivedSign>> {
    let mut out = Vec::new();
    for c in Color::ALL {
        for e in Color::ALL {
            if e == c {
                continue;
            }
            let axis = c.link_axis(e)?;
            let m = conjugate_triangle(&spin_pauli_dense(c, axis));
            // both factors are equal, so the site order of the product is moot
            let link = m.kronecker(&m);
            let mut canon = Vec::new();
            for kind in ProcessKind::ALL {
                let mut op = EffectiveOperator::zero(2);
                for sites in [[0, 1], [1, 0]] {
                    let p = ProcessTerm {
                        kind,
                        boson_color: c,
                        link_color: e,
                        link_axis: axis,
                        sign: 1.0,
                        sites,
                        coefficient: kind.weight(),
                    };
                    for t in p.expand() {
                        op.push(t)?;
                    }
                }
                canon.push((kind, dense(&op)));
            }
            let mut rest = link.clone();
            let mut signs = Vec::new();
            for (kind, cm) in &canon {
                let s = inner(cm, &link) / inner(cm, cm);
                rest -= cm * s;
                signs.push((*kind, s.re));
            }
            let residual = rest.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (kind, sign) in signs {
                out.push(DerivedSign {
                    boson_color: c,
                    link_color: e,
                    label: Color::label_axis(e, c),
                    link_axis: axis,
                    kind,
                    sign,
                    residual,
                });
            }
        }
    }
    Ok(out)
}
