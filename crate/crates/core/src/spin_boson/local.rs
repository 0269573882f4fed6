//! One triangle: three spins ↔ an effective spin plus a colored hard-core
//! boson.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Color;
use crate::pauli::Axis;

/// Effective spin of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tau {
    Up,
    Down,
}

/// Local state `(τ, boson)` of one effective site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SiteState {
    pub tau: Tau,
    pub boson: Option<Color>,
}

impl SiteState {
    pub const fn new(tau: Tau, boson: Option<Color>) -> Self {
        SiteState { tau, boson }
    }

    /// Local index `4·τ + boson` with ⇑ = 0 and none, r, g, b = 0..3.
    pub fn index(self) -> usize {
        let t = match self.tau {
            Tau::Up => 0,
            Tau::Down => 4,
        };
        t + self.boson.map_or(0, |c| c.index() + 1)
    }

    pub fn from_index(k: usize) -> Result<Self> {
        if k >= 8 {
            return Err(Error::Index {
                what: "local effective state",
                index: k,
                len: 8,
            });
        }
        let tau = if k < 4 { Tau::Up } else { Tau::Down };
        let boson = match k % 4 {
            0 => None,
            b => Some(Color::from_index(b - 1)),
        };
        Ok(SiteState { tau, boson })
    }
}

impl fmt::Display for SiteState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.tau {
            Tau::Up => '⇑',
            Tau::Down => '⇓',
        };
        match self.boson {
            None => write!(f, "|{t},0⟩"),
            Some(c) => write!(f, "|{t},{c}⟩"),
        }
    }
}

/// Three-spin label of a triangle: bit `c` is the spin of the `c`-colored
/// vertex, 1 meaning down.
pub type SpinLabel = u8;

// micro label -> effective local index
const ENCODE: [usize; 8] = [0, 5, 6, 3, 7, 2, 1, 4];
const DECODE: [usize; 8] = [0, 6, 5, 3, 7, 1, 2, 4];

/// `|↑↑↑⟩ ↦ |⇑,0⟩`, `|↑↓↓⟩ ↦ |⇑,r⟩`, …; the spin-flipped label gives ⇓.
pub fn encode_triangle(spins: SpinLabel) -> Result<SiteState> {
    if spins >= 8 {
        return Err(Error::Index {
            what: "three-spin label",
            index: spins as usize,
            len: 8,
        });
    }
    SiteState::from_index(ENCODE[spins as usize])
}

pub fn decode_triangle(state: SiteState) -> SpinLabel {
    DECODE[state.index()] as SpinLabel
}

pub(crate) fn encode_index(micro: usize) -> usize {
    ENCODE[micro]
}

pub(crate) fn decode_index(local: usize) -> usize {
    DECODE[local]
}

/// Elementary single-site operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "op", content = "color")]
pub enum Factor {
    TauX,
    TauY,
    TauZ,
    /// `b_c = |0⟩⟨c|`
    B(Color),
    /// `b_c†`
    Bdag(Color),
    /// `n_c = b_c† b_c`
    N(Color),
    /// `p_c = 1 − 2(n_c̄ + n_c̿)`
    P(Color),
    /// `r_c = b_c̄† b_c̿ + b_c̿† b_c̄`
    R(Color),
}

impl Factor {
    pub fn tau(axis: Axis) -> Factor {
        match axis {
            Axis::X => Factor::TauX,
            Axis::Y => Factor::TauY,
            Axis::Z => Factor::TauZ,
        }
    }

    /// Action on a local basis index; every elementary factor maps a basis
    /// state to at most one basis state.
    pub fn act(self, k: usize) -> Option<(usize, Complex64)> {
        let one = Complex64::new(1.0, 0.0);
        let (tau, beta) = (k / 4, k % 4);
        let boson = |c: Color| c.index() + 1;
        match self {
            Factor::TauX => Some((k ^ 4, one)),
            Factor::TauY => Some((
                k ^ 4,
                if tau == 0 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                },
            )),
            Factor::TauZ => Some((k, if tau == 0 { one } else { -one })),
            Factor::B(c) => (beta == boson(c)).then_some((4 * tau, one)),
            Factor::Bdag(c) => (beta == 0).then_some((4 * tau + boson(c), one)),
            Factor::N(c) => (beta == boson(c)).then_some((k, one)),
            Factor::P(c) => Some((
                k,
                if beta == boson(c.bar()) || beta == boson(c.bar2()) {
                    -one
                } else {
                    one
                },
            )),
            Factor::R(c) => {
                if beta == boson(c.bar()) {
                    Some((4 * tau + boson(c.bar2()), one))
                } else if beta == boson(c.bar2()) {
                    Some((4 * tau + boson(c.bar()), one))
                } else {
                    None
                }
            }
        }
    }

    pub fn adjoint(self) -> Factor {
        match self {
            Factor::B(c) => Factor::Bdag(c),
            Factor::Bdag(c) => Factor::B(c),
            f => f,
        }
    }

    pub fn symbol(self) -> String {
        match self {
            Factor::TauX => "τx".into(),
            Factor::TauY => "τy".into(),
            Factor::TauZ => "τz".into(),
            Factor::B(c) => format!("b_{c}"),
            Factor::Bdag(c) => format!("b†_{c}"),
            Factor::N(c) => format!("n_{c}"),
            Factor::P(c) => format!("p_{c}"),
            Factor::R(c) => format!("r_{c}"),
        }
    }
}

/// A product of factors on one site, stored as its action on the eight
/// local basis states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMonomial {
    map: [Option<(u8, Complex64)>; 8],
}

impl LocalMonomial {
    pub fn identity() -> Self {
        let mut map = [None; 8];
        for (k, m) in map.iter_mut().enumerate() {
            *m = Some((k as u8, Complex64::new(1.0, 0.0)));
        }
        LocalMonomial { map }
    }

    /// The operator product `f[0] · f[1] · …`.
    pub fn product(factors: &[Factor]) -> Self {
        let mut map = [None; 8];
        for (k, m) in map.iter_mut().enumerate() {
            let mut state = Some((k, Complex64::new(1.0, 0.0)));
            for f in factors.iter().rev() {
                state = state.and_then(|(s, a)| f.act(s).map(|(t, b)| (t, a * b)));
            }
            *m = state.map(|(s, a)| (s as u8, a));
        }
        LocalMonomial { map }
    }

    /// The product `self · rhs`.
    pub fn compose(&self, rhs: &LocalMonomial) -> LocalMonomial {
        let mut map = [None; 8];
        for (k, out) in map.iter_mut().enumerate() {
            *out = rhs
                .act(k)
                .and_then(|(i, a)| self.act(i).map(|(j, b)| (j as u8, a * b)));
        }
        LocalMonomial { map }
    }

    #[inline]
    pub fn act(&self, k: usize) -> Option<(usize, Complex64)> {
        self.map[k].map(|(s, a)| (s as usize, a))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(8, 8);
        for (j, e) in self.map.iter().enumerate() {
            if let Some((i, a)) = e {
                m[(*i as usize, j)] += a;
            }
        }
        m
    }
}

/// `Σ c_k · (product of factors)` on one site.
pub type LocalSum = Vec<(Complex64, Vec<Factor>)>;

pub fn local_dense(sum: &LocalSum) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(8, 8);
    for (c, fs) in sum {
        m += LocalMonomial::product(fs).to_dense() * *c;
    }
    m
}

/// Single-spin Pauli on the `color` vertex of a triangle, as an 8×8 matrix
/// in the three-spin basis (bit `c` of the row index is vertex `c`).
pub fn spin_pauli_dense(color: Color, axis: Axis) -> DMatrix<Complex64> {
    let bit = 1usize << color.index();
    let mut m = DMatrix::zeros(8, 8);
    for j in 0..8 {
        let down = j & bit != 0;
        let (i, a) = match axis {
            Axis::X => (j ^ bit, Complex64::new(1.0, 0.0)),
            Axis::Y => (
                j ^ bit,
                if down {
                    Complex64::new(0.0, -1.0)
                } else {
                    Complex64::new(0.0, 1.0)
                },
            ),
            Axis::Z => (j, Complex64::new(if down { -1.0 } else { 1.0 }, 0.0)),
        };
        m[(i, j)] = a;
    }
    m
}

/// `U M U†` for an 8×8 matrix in the three-spin basis, giving the matrix
/// in the effective basis.
pub fn conjugate_triangle(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(8, 8, |i, j| m[(DECODE[i], DECODE[j])])
}
