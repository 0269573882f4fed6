//! Ruby-lattice patches, the two-body Hamiltonian and plaquette operators.

mod build;
mod color;
mod patch;
mod verify;

pub use color::Color;
pub use patch::{
    Boundary, CouplingParams, EffectiveLink, LatticePatch, Link, Plaquette, Triangle, Vertex,
    PATCH_SCHEMA,
};
pub use verify::{AlgebraReport, Check, OperatorRef, RankReport};

#[cfg(test)]
mod tests;
