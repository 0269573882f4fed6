//! Logical qubits stored in the bosons of two effective sites.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Color;
use crate::spin_boson::Factor;

/// Dimension of the boson space of two sites (four states each).
pub const PAIR_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// `|1⟩ = |c,0⟩`, `|0⟩ = |0,c⟩`.
    Hopping,
    /// `|0⟩ = |0,0⟩`, `|1⟩ = |c,c⟩`.
    Pair,
    /// `|0⟩ = |c̄,c̿⟩`, `|1⟩ = |c̿,c̄⟩`.
    ColorSwitch,
    /// `|0⟩ = |0,q⟩`, `|1⟩ = |q̄,q̿⟩`.
    Fusion,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Hopping,
        Scheme::Pair,
        Scheme::ColorSwitch,
        Scheme::Fusion,
    ];

    pub fn letter(self) -> char {
        match self {
            Scheme::Hopping => 'A',
            Scheme::Pair => 'B',
            Scheme::ColorSwitch => 'C',
            Scheme::Fusion => 'D',
        }
    }

    /// Control and target colors of the reference gate.
    pub fn reference_colors(self) -> (Color, Color) {
        match self {
            Scheme::ColorSwitch => (Color::B, Color::R),
            _ => (Color::R, Color::G),
        }
    }

    /// Reference controlled-phase diagonal in the order 00, 01, 10, 11
    /// (control bit first).
    pub fn reference_table(self) -> [i8; 4] {
        match self {
            Scheme::ColorSwitch => [1, 1, -1, 1],
            _ => [1, 1, 1, -1],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scheme::Hopping => "hopping",
            Scheme::Pair => "pair",
            Scheme::ColorSwitch => "color-switch",
            Scheme::Fusion => "fusion",
        };
        f.write_str(s)
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "hopping" => Ok(Scheme::Hopping),
            "b" | "pair" => Ok(Scheme::Pair),
            "c" | "color-switch" | "switch" => Ok(Scheme::ColorSwitch),
            "d" | "fusion" => Ok(Scheme::Fusion),
            _ => Err(Error::Encoding(format!("unknown scheme {s:?}"))),
        }
    }
}

/// One logical qubit: a scheme and its color label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitEncoding {
    pub scheme: Scheme,
    pub color: Color,
}

/// Local boson index: none, r, g, b = 0..3.
fn boson(c: Option<Color>) -> usize {
    c.map_or(0, |c| c.index() + 1)
}

pub fn pair_index(first: Option<Color>, second: Option<Color>) -> usize {
    4 * boson(first) + boson(second)
}

fn one_site(f: &[Factor]) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(4, 4);
    for k in 0..4 {
        let mut state = Some((k, Complex64::new(1.0, 0.0)));
        for &x in f.iter().rev() {
            state = state.and_then(|(j, a)| x.act(j).map(|(i, b)| (i, a * b)));
        }
        if let Some((i, a)) = state {
            m[(i, k)] += a;
        }
    }
    m
}

fn two_site(first: &[Factor], second: &[Factor]) -> DMatrix<Complex64> {
    one_site(first).kronecker(&one_site(second))
}

fn plus_adjoint(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let a = m.adjoint();
    m + a
}

fn one_minus_two(n: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(PAIR_DIM, PAIR_DIM);
    id - n * Complex64::new(2.0, 0.0)
}

impl QubitEncoding {
    pub fn new(scheme: Scheme, color: Color) -> Self {
        QubitEncoding { scheme, color }
    }

    /// Boson colors on the two sites for a logical bit.
    pub fn sites(&self, bit: bool) -> [Option<Color>; 2] {
        let c = self.color;
        match (self.scheme, bit) {
            (Scheme::Hopping, false) => [None, Some(c)],
            (Scheme::Hopping, true) => [Some(c), None],
            (Scheme::Pair, false) => [None, None],
            (Scheme::Pair, true) => [Some(c), Some(c)],
            (Scheme::ColorSwitch, false) => [Some(c.bar()), Some(c.bar2())],
            (Scheme::ColorSwitch, true) => [Some(c.bar2()), Some(c.bar())],
            (Scheme::Fusion, false) => [None, Some(c)],
            (Scheme::Fusion, true) => [Some(c.bar()), Some(c.bar2())],
        }
    }

    /// Indices of `|0⟩` and `|1⟩` in the two-site boson space.
    pub fn code_indices(&self) -> [usize; 2] {
        [false, true].map(|b| {
            let [x, y] = self.sites(b);
            pair_index(x, y)
        })
    }

    /// Logical X as a boson operator on the two sites.
    pub fn x_operator(&self) -> DMatrix<Complex64> {
        let c = self.color;
        match self.scheme {
            Scheme::Hopping => plus_adjoint(two_site(&[Factor::B(c)], &[Factor::Bdag(c)])),
            Scheme::Pair => plus_adjoint(two_site(&[Factor::B(c)], &[Factor::B(c)])),
            Scheme::ColorSwitch => two_site(&[Factor::R(c)], &[Factor::R(c)]),
            Scheme::Fusion => {
                let b = c.bar();
                plus_adjoint(two_site(&[Factor::B(b)], &[Factor::R(b)]))
            }
        }
    }

    /// Logical Z as a boson operator on the two sites.
    pub fn z_operator(&self) -> DMatrix<Complex64> {
        let c = self.color;
        let none = || -> &[Factor] { &[] };
        let n = match self.scheme {
            Scheme::Hopping | Scheme::Pair => two_site(&[Factor::N(c)], none()),
            Scheme::ColorSwitch => two_site(&[Factor::N(c.bar2())], none()),
            Scheme::Fusion => Color::ALL
                .iter()
                .map(|&k| two_site(&[Factor::N(k)], none()))
                .fold(DMatrix::zeros(PAIR_DIM, PAIR_DIM), |a, b| a + b),
        };
        one_minus_two(n)
    }

    /// Restriction of a two-site operator to the code space; an error if
    /// it leaks out.
    pub fn logical(&self, op: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if op.shape() != (PAIR_DIM, PAIR_DIM) {
            return Err(Error::Dimension {
                expected: PAIR_DIM,
                found: op.nrows(),
            });
        }
        let code = self.code_indices();
        let mut out = DMatrix::zeros(2, 2);
        for (j, &cj) in code.iter().enumerate() {
            for i in 0..PAIR_DIM {
                let a = op[(i, cj)];
                if a.norm() < 1e-14 {
                    continue;
                }
                match code.iter().position(|&ci| ci == i) {
                    Some(k) => out[(k, j)] = a,
                    None => {
                        return Err(Error::CodeSpace(format!(
                            "{} {} qubit: state {j} leaks to boson index {i}",
                            self.scheme, self.color
                        )))
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Physical two-site state of a logical bit.
pub fn encode(scheme: Scheme, color: Color, bit: bool) -> [Option<Color>; 2] {
    QubitEncoding::new(scheme, color).sites(bit)
}

fn act_logical(
    q: &QubitEncoding,
    op: &DMatrix<Complex64>,
    state: [Option<Color>; 2],
) -> Result<(Complex64, [Option<Color>; 2])> {
    let code = q.code_indices();
    let k = pair_index(state[0], state[1]);
    let j = code.iter().position(|&c| c == k).ok_or_else(|| {
        Error::CodeSpace(format!(
            "{state:?} is not a {} {} basis state",
            q.scheme, q.color
        ))
    })?;
    let m = q.logical(op)?;
    let i = if m[(0, j)].norm() > 0.5 { 0 } else { 1 };
    Ok((m[(i, j)], q.sites(i == 1)))
}

/// Logical X on a code basis state: the amplitude and the new state.
pub fn apply_x(
    q: &QubitEncoding,
    state: [Option<Color>; 2],
) -> Result<(Complex64, [Option<Color>; 2])> {
    act_logical(q, &q.x_operator(), state)
}

/// Logical Z on a code basis state.
pub fn apply_z(
    q: &QubitEncoding,
    state: [Option<Color>; 2],
) -> Result<(Complex64, [Option<Color>; 2])> {
    act_logical(q, &q.z_operator(), state)
}

/// `XZ = −ZX` on the code space, both realizations squaring to one.
pub fn paulis_anticommute(q: &QubitEncoding) -> Result<bool> {
    let x = q.logical(&q.x_operator())?;
    let z = q.logical(&q.z_operator())?;
    let id = DMatrix::<Complex64>::identity(2, 2);
    Ok(max_deviation(&(&x * &z), &(-(&z * &x))) == 0.0
        && max_deviation(&(&x * &x), &id) == 0.0
        && max_deviation(&(&z * &z), &id) == 0.0)
}

pub fn pauli_x() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]).map(|v| Complex64::new(v, 0.0))
}

pub fn pauli_z() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]).map(|v| Complex64::new(v, 0.0))
}

pub fn max_deviation(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realizations_are_logical_paulis() {
        for s in Scheme::ALL {
            for c in Color::ALL {
                let q = QubitEncoding::new(s, c);
                let x = q.logical(&q.x_operator()).unwrap();
                let z = q.logical(&q.z_operator()).unwrap();
                assert_eq!(max_deviation(&x, &pauli_x()), 0.0, "{s} {c}");
                assert_eq!(max_deviation(&z, &pauli_z()), 0.0, "{s} {c}");
            }
        }
    }

    #[test]
    fn basis_assignments() {
        assert_eq!(encode(Scheme::Hopping, Color::R, true), [Some(Color::R), None]);
        assert_eq!(encode(Scheme::Pair, Color::G, false), [None, None]);
        assert_eq!(encode(Scheme::Fusion, Color::R, true), [Some(Color::G), Some(Color::B)]);
        let q = QubitEncoding::new(Scheme::Hopping, Color::R);
        let (a, s) = apply_x(&q, [Some(Color::R), None]).unwrap();
        assert_eq!((a.re, s), (1.0, [None, Some(Color::R)]));
        let (a, _) = apply_z(&q, [Some(Color::R), None]).unwrap();
        assert_eq!(a.re, -1.0);
        let p = QubitEncoding::new(Scheme::Pair, Color::G);
        assert_eq!(apply_x(&p, [Some(Color::G), Some(Color::G)]).unwrap().1, [None, None]);
        let c = QubitEncoding::new(Scheme::ColorSwitch, Color::B);
        let zero = c.sites(false);
        assert_eq!(apply_z(&c, zero).unwrap(), (Complex64::new(1.0, 0.0), zero));
        assert!(matches!(
            apply_x(&q, [Some(Color::G), None]),
            Err(Error::CodeSpace(_))
        ));
        for s in Scheme::ALL {
            for c in Color::ALL {
                let q = QubitEncoding::new(s, c);
                assert!(paulis_anticommute(&q).unwrap());
                for bit in [false, true] {
                    let st = q.sites(bit);
                    let (a, once) = apply_x(&q, st).unwrap();
                    let (b, twice) = apply_x(&q, once).unwrap();
                    assert_eq!((a * b, twice), (Complex64::new(1.0, 0.0), st));
                }
            }
        }
    }

    #[test]
    fn leaking_operator_is_rejected() {
        let q = QubitEncoding::new(Scheme::Pair, Color::R);
        let other = QubitEncoding::new(Scheme::Pair, Color::G).x_operator();
        assert!(matches!(q.logical(&other), Err(Error::CodeSpace(_))));
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
            assert_eq!(s.letter().to_string().parse::<Scheme>().unwrap(), s);
        }
    }
}
