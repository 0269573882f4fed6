use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Axis;

/// Plaquette, link and boson color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "r")]
    R,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "b")]
    B,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::G, Color::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Color {
        Color::ALL[k % 3]
    }

    /// Cyclic successor: r → g → b → r.
    pub fn bar(self) -> Color {
        Color::from_index(self.index() + 1)
    }

    pub fn bar2(self) -> Color {
        self.bar().bar()
    }

    /// The color distinct from both arguments; `None` if they are equal.
    pub fn third(a: Color, b: Color) -> Option<Color> {
        (a != b).then(|| Color::from_index(3 - a.index() - b.index()))
    }

    /// Pauli axis carried by links of this color: r → x, g → y, b → z.
    pub fn axis(self) -> Axis {
        match self {
            Color::R => Axis::X,
            Color::G => Axis::Y,
            Color::B => Axis::Z,
        }
    }

    pub fn from_axis(a: Axis) -> Color {
        match a {
            Axis::X => Color::R,
            Axis::Y => Color::G,
            Axis::Z => Color::B,
        }
    }

    /// Label of the pair `c′|c`: `c|c = x`, `c̄|c = y`, `c̿|c = z`.
    ///
    /// This is a naming convention only. The coupling that actually joins
    /// two triangles is given by [`link_axis`](Self::link_axis).
    pub fn label_axis(c_prime: Color, c: Color) -> Axis {
        if c_prime == c {
            Axis::X
        } else if c_prime == c.bar() {
            Axis::Y
        } else {
            Axis::Z
        }
    }

    /// Axis of the microscopic link between two `self`-colored vertices
    /// across an effective link of color `effective` (which must differ).
    ///
    /// Only x and y links join triangles; `c̄` gives y and `c̿` gives x.
    pub fn link_axis(self, effective: Color) -> Result<Axis> {
        if effective == self {
            Err(Error::Construction(format!(
                "no {self}-colored link crosses an effective {effective} link"
            )))
        } else if effective == self.bar() {
            Ok(Axis::Y)
        } else {
            Ok(Axis::X)
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::R => 'r',
            Color::G => 'g',
            Color::B => 'b',
        }
    }

    pub fn parse(s: &str) -> Result<Color> {
        match s {
            "r" | "R" | "red" => Ok(Color::R),
            "g" | "G" | "green" => Ok(Color::G),
            "b" | "B" | "blue" => Ok(Color::B),
            _ => Err(Error::Encoding(format!("unknown color {s:?}"))),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_cycles() {
        assert_eq!(Color::R.bar(), Color::G);
        assert_eq!(Color::G.bar(), Color::B);
        assert_eq!(Color::B.bar(), Color::R);
        for c in Color::ALL {
            assert_eq!(c.bar().bar().bar(), c);
        }
    }

    #[test]
    fn label_axes() {
        for c in Color::ALL {
            assert_eq!(Color::label_axis(c, c), Axis::X);
            assert_eq!(Color::label_axis(c.bar(), c), Axis::Y);
            assert_eq!(Color::label_axis(c.bar2(), c), Axis::Z);
        }
    }

    #[test]
    fn link_axes() {
        assert_eq!(Color::R.link_axis(Color::G).unwrap(), Axis::Y);
        assert_eq!(Color::R.link_axis(Color::B).unwrap(), Axis::X);
        assert!(Color::R.link_axis(Color::R).is_err());
        assert_eq!(Color::third(Color::R, Color::B), Some(Color::G));
        assert_eq!(Color::third(Color::R, Color::R), None);
    }
}
