//! Two-qubit gates from braiding bosons between qubits encoded on pairs
//! of effective sites.

mod circuit;
mod encoding;

pub use circuit::{
    cnot, cnot_reference, controlled_phase, recipe, verify_scheme, BraidStep, CnotReport,
    GateReport, Recipe, Role, TruthRow, TruthTable, TwoQubitLayout, LAYOUT_SIZE, SITE_SPACING,
};
pub use encoding::{
    apply_x, apply_z, encode, max_deviation, pair_index, pauli_x, pauli_z, paulis_anticommute,
    QubitEncoding, Scheme, PAIR_DIM,
};
