//! The effective Hamiltonian on one hexagonal ring of triangles commutes
//! with the conjugated plaquette operators.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcc_core::lattice::Boundary;
use tcc_core::spin_boson::{build_effective_hamiltonian, conjugated_string_action};
use tcc_core::{CouplingParams, LatticePatch, PauliString};

fn h_column(h: &tcc_core::spin_boson::EffectiveOperator, k: usize) -> Vec<(usize, Complex64)> {
    let mut out = Vec::new();
    h.act_on_basis(k, &mut out);
    out
}

fn check(j: CouplingParams, samples: usize, seed: u64) {
    let ring = LatticePatch::build(1, 1, Boundary::Open).unwrap();
    assert_eq!(ring.num_sites(), 6);
    assert_eq!(ring.plaquettes().len(), 1);
    let h = build_effective_hamiltonian(&ring, &j).unwrap().operator;
    let ops: Vec<PauliString> = ring.plaquette_operators(0).unwrap().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << 18;
    for _ in 0..samples {
        let e = rng.random_range(0..dim);
        for p in &ops {
            let mut hp: HashMap<usize, Complex64> = HashMap::new();
            let (pe, a) = conjugated_string_action(p, e, 6).unwrap();
            for (r, v) in h_column(&h, pe) {
                *hp.entry(r).or_default() += a * v;
            }
            for (r, v) in h_column(&h, e) {
                let (pr, b) = conjugated_string_action(p, r, 6).unwrap();
                *hp.entry(pr).or_default() -= b * v;
            }
            let worst = hp.values().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(worst < 1e-12, "state {e}: [P, H_eff] has entry {worst}");
        }
    }
}

#[test]
fn plaquettes_commute_with_h_eff_isotropic() {
    check(CouplingParams::default(), 300, 1);
}

#[test]
fn plaquettes_commute_with_h_eff_anisotropic() {
    check(CouplingParams::new(0.3, -0.7, 1.9).unwrap(), 300, 2);
}
