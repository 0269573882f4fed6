//! Exact rewriting of each triangle as an effective spin τ plus a colored
//! hard-core boson, and the effective Hamiltonian on the honeycomb of
//! triangles.
//!
//! Local basis order: (⇑,0), (⇑,r), (⇑,g), (⇑,b), (⇓,0), (⇓,r), (⇓,g),
//! (⇓,b). Site `s` occupies octal digit `s` of a global index.

mod equivalence;
mod hamiltonian;
mod local;
mod operator;

pub use equivalence::{
    conjugated_string_action, decode_global, encode_global, verify_mapping_equivalence,
    EquivalenceReport, EQUIVALENCE_TRIANGLE_LIMIT,
};
pub use hamiltonian::{
    build_effective_hamiltonian, derive_process_signs, Calibration, DerivedSign,
    EffectiveHamiltonian, ProcessKind, ProcessTerm, EFFECTIVE_SCHEMA, FUSION_SIGN_X,
    FUSION_SIGN_Y, HOP_SIGN, PAIR_SIGN, SWITCH_SIGN,
};
pub use local::{
    conjugate_triangle, decode_triangle, encode_triangle, local_dense, spin_pauli_dense, Factor,
    LocalMonomial, LocalSum, SiteState, SpinLabel, Tau,
};
pub use operator::{map_vertex_operator, s_nu, EffectiveOperator, EffectiveTerm};

/// A basis state of the effective model.
pub type EffectiveState = Vec<SiteState>;

/// Global index of an effective state.
pub fn state_index(state: &[SiteState]) -> usize {
    state
        .iter()
        .enumerate()
        .map(|(s, l)| l.index() << (3 * s))
        .sum()
}

pub fn state_from_index(index: usize, sites: usize) -> crate::Result<EffectiveState> {
    (0..sites)
        .map(|s| SiteState::from_index((index >> (3 * s)) & 7))
        .collect()
}
