//! Two-body color code on the ruby lattice: Pauli algebra, lattice
//! construction, the triangle spin-boson mapping, anyon statistics and
//! braiding gates.

pub mod anyon;
pub mod error;
pub mod gates;
pub mod lattice;
pub mod linalg;
pub mod pauli;
pub mod spin_boson;

pub use error::{Error, Result};
pub use lattice::{Boundary, Color, CouplingParams, LatticePatch};
pub use linalg::{LinearMap, SpectrumReport};
pub use pauli::{Axis, OperatorSum, PauliString, Phase};
