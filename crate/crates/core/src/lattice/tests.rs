use super::*;
use crate::pauli::{symplectic_rank, Axis, Phase};

#[test]
fn single_plaquette_patch() {
    let p = LatticePatch::build(1, 1, Boundary::Open).unwrap();
    assert_eq!(p.vertex_count(), 18);
    assert_eq!(p.num_sites(), 6);
    assert_eq!(p.plaquettes().len(), 1);
    assert_eq!(p.raw_plaquette_count(), 7);
    assert!(p.verify().unwrap().passed());
}

#[test]
fn periodic_counts() {
    // frozen: 2x2 torus of three-plaquette cells
    let p = LatticePatch::build(2, 2, Boundary::Periodic).unwrap();
    assert_eq!(p.plaquettes().len(), 12);
    assert_eq!(p.num_sites(), 24);
    assert_eq!(p.vertex_count(), 72);
    assert_eq!(p.links().len(), 144);
    let r = p.verify().unwrap();
    assert!(r.passed(), "{:?}", r.failures());
    assert_eq!(r.rank.rank, 22);
    assert_eq!(r.rank.global_dependencies, 2);
    assert_eq!(r.rank.dependency_basis.len(), 2);
}

#[test]
fn small_tori_are_rejected() {
    assert!(LatticePatch::build(1, 2, Boundary::Periodic).is_err());
    assert!(LatticePatch::build(0, 2, Boundary::Open).is_err());
}

#[test]
fn one_plaquette_algebra() {
    let p = LatticePatch::build(1, 1, Boundary::Open).unwrap();
    let [p1, p2, p3] = p.plaquette_operators(0).unwrap();
    assert_eq!(p1.weight(), 18);
    assert_eq!(p2.weight(), 18);
    assert_eq!(p3.weight(), 6);
    let prod = p1.multiply(&p2).unwrap().multiply(&p3).unwrap();
    assert!(prod.is_identity_up_to_phase());
    assert_eq!(prod.phase(), Phase::MINUS_ONE);
    assert_eq!(symplectic_rank(&[p1, p2, p3]).unwrap(), 2);
    assert!(p.plaquette_operators(1).is_err());
}

#[test]
fn triangle_hamiltonian() {
    let p = LatticePatch::chain(1).unwrap();
    let h = p.hamiltonian(&CouplingParams::new(0.0, 0.0, 1.0).unwrap()).unwrap();
    assert_eq!(h.len(), 3);
    for (c, s) in h.terms() {
        assert_eq!(c.re, -1.0);
        assert_eq!(s.weight(), 2);
        assert!(s.support().iter().all(|&q| s.axis(q) == Some(Axis::Z)));
    }
    let zero = p.hamiltonian(&CouplingParams::new(0.0, 0.0, 0.0).unwrap()).unwrap();
    assert!(zero.is_empty());
}

#[test]
fn two_triangle_cluster_has_eight_terms() {
    let p = LatticePatch::chain(2).unwrap();
    assert_eq!(p.effective_links().len(), 1);
    let h = p.hamiltonian(&CouplingParams::default()).unwrap();
    assert_eq!(h.len(), 8);
}

#[test]
fn string_operator_reproduces_plaquette_operators() {
    let p = LatticePatch::build(4, 4, Boundary::Open).unwrap();
    for k in interior(&p) {
        let pl = &p.plaquettes()[k];
        let [p1, p2, p3] = p.plaquette_operators(k).unwrap();
        let walk = p.closed_walk(&pl.vertices).unwrap();
        assert_eq!(walk.first(), walk.last());
        assert_eq!(p.string_operator(&walk, Color::R).unwrap(), p1);
        assert_eq!(p.string_operator(&walk, Color::G).unwrap(), p2);
        let mut hex = pl.inner.to_vec();
        hex.push(pl.inner[0]);
        assert_eq!(p.string_operator(&hex, Color::B).unwrap(), p3);
    }
}

#[test]
fn string_operator_edge_cases() {
    let p = LatticePatch::build(1, 1, Boundary::Open).unwrap();
    assert!(p.string_operator(&[], Color::R).unwrap().is_identity());
    // vertices 0 and 5 belong to different triangles and are not linked
    let far = p.links().iter().all(|l| l.vertices != [0, 5] && l.vertices != [5, 0]);
    if far {
        assert!(p.string_operator(&[0, 5], Color::R).is_err());
    }
    assert!(p.string_operator(&[999], Color::R).is_err());
}

#[test]
fn json_round_trip() {
    let p = LatticePatch::build(2, 2, Boundary::Periodic).unwrap();
    let s = p.to_json().unwrap();
    let q = LatticePatch::from_json(&s).unwrap();
    assert_eq!(p, q);
    assert!(s.contains(PATCH_SCHEMA));
}

#[test]
fn corrupted_plaquette_is_named() {
    let mut p = LatticePatch::build(1, 1, Boundary::Open).unwrap();
    p.plaquettes[0].p1[0].1 = Axis::Z;
    let r = p.verify().unwrap();
    let names: Vec<&str> = r.failures().iter().map(|c| c.name.as_str()).collect();
    assert!(names.contains(&"P1 P2 P3 = -I"), "{names:?}");
}

#[test]
fn two_plaquette_string_commutes_with_h() {
    let p = LatticePatch::build(4, 4, Boundary::Open).unwrap();
    let links = p.link_strings().unwrap();
    let inner = interior(&p);
    let mut found = 0;
    for &a in &inner {
        for &b in &inner {
            if b <= a {
                continue;
            }
            let pa = p.plaquette_operators(a).unwrap();
            let pb = p.plaquette_operators(b).unwrap();
            let prod = pa[0].multiply(&pb[0]).unwrap();
            let Some(walk) = p.closed_walk(&prod.support()) else { continue };
            for c in Color::ALL {
                if let Ok(s) = p.string_operator(&walk, c) {
                    if s.same_support_and_axes(&prod) {
                        assert!(links.iter().all(|l| l.commutes(&s).unwrap()));
                        found += 1;
                    }
                }
            }
        }
    }
    assert!(found > 0);
}

/// Plaquettes whose corner triangles all have three neighbors.
fn interior(p: &LatticePatch) -> Vec<usize> {
    (0..p.plaquettes().len())
        .filter(|&k| {
            p.plaquettes()[k]
                .triangles
                .iter()
                .all(|&t| p.site_neighbors(t).len() == 3)
        })
        .collect()
}
