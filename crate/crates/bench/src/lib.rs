//! Benchmark fixtures shared by the criterion targets.

use tcc_core::{Axis, Boundary, LatticePatch, PauliString, Result};

/// Deterministic dense string on `n` qubits; `k` shifts the axis pattern.
pub fn dense_string(n: usize, k: usize) -> Result<PauliString> {
    let axes = [Axis::X, Axis::Y, Axis::Z];
    PauliString::from_axes(n, (0..n).map(|q| (q, axes[(q * 7 + k) % 3])))
}

/// Plaquette operators of a periodic patch, three per plaquette.
pub fn torus_operators(rows: usize, cols: usize) -> Result<Vec<PauliString>> {
    LatticePatch::build(rows, cols, Boundary::Periodic)?.all_plaquette_operators()
}
