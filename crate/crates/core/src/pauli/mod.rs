//! Pauli strings, operator sums and GF(2) rank.

mod string;
mod sum;
mod symplectic;

pub use string::{Axis, Phase, PauliString};
pub use sum::{OperatorSum, APPLY_QUBIT_LIMIT};
pub use symplectic::{symplectic_dependencies, symplectic_rank};
