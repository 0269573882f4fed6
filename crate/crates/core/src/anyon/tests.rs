use super::*;
use crate::lattice::{Boundary, Color, LatticePatch};
use crate::Error;

fn open(n: usize) -> LatticePatch {
    LatticePatch::build(n, n, Boundary::Open).unwrap()
}

fn interior_site(p: &LatticePatch) -> usize {
    let (_, x) = monodromy_cluster().unwrap();
    assert_eq!(p.shape(), (5, 5));
    x
}

#[test]
fn derived_statistics_match_the_color_code() {
    let d = derive_statistics().unwrap();
    assert_eq!(d.table, StatisticsTable::color_code());
    for m in &d.monodromy {
        assert!(m.loops.len() >= 3);
        assert!(m.samples >= 6);
    }
}

#[test]
fn nothing_enclosed_is_trivial() {
    for m in Color::ALL {
        assert_eq!(derive_monodromy_phase(m, None).unwrap().phase, 1);
    }
}

#[test]
fn single_exchange_of_like_bosons() {
    let p = open(5);
    let x = interior_site(&p);
    let y = p.site_neighbors(x)[0].0;
    let table = StatisticsTable::color_code();
    for c in Color::ALL {
        let cfg = AnyonConfig::new([(x, c), (y, c)]);
        let once = BraidSchedule::new(vec![Move::Exchange { a: x, b: y }]);
        let out = accumulate_phase(&p, &cfg, &once, &table).unwrap();
        assert_eq!(out.phase, -1);
        assert_eq!(out.windings[0].half_turns, 1);
        let twice = BraidSchedule::new(vec![
            Move::Exchange { a: x, b: y },
            Move::Exchange { a: x, b: y },
        ]);
        assert_eq!(accumulate_phase(&p, &cfg, &twice, &table).unwrap().phase, 1);
    }
}

#[test]
fn unlike_exchange_does_not_close() {
    let p = open(5);
    let x = interior_site(&p);
    let y = p.site_neighbors(x)[0].0;
    let cfg = AnyonConfig::new([(x, Color::R), (y, Color::G)]);
    let s = BraidSchedule::new(vec![Move::Exchange { a: x, b: y }]);
    assert!(matches!(
        accumulate_phase(&p, &cfg, &s, &StatisticsTable::color_code()),
        Err(Error::OpenBraid(_))
    ));
}

#[test]
fn loops_around_partners_agree_with_spins() {
    let p = open(5);
    let x = interior_site(&p);
    let table = StatisticsTable::color_code();
    let nb: Vec<usize> = p.site_neighbors(x).iter().map(|n| n.0).collect();
    let start = p
        .site_neighbors(nb[0])
        .iter()
        .map(|n| n.0)
        .find(|&s| s != x)
        .unwrap();
    let path = find_loop(&p, start, &[x], &[], &[], &[]).unwrap();
    for m in Color::ALL {
        for n in Color::ALL {
            let cfg = AnyonConfig::new([(start, m), (x, n)]);
            let s = BraidSchedule::new(vec![Move::Loop {
                site: start,
                path: path.clone(),
            }]);
            let out = accumulate_phase(&p, &cfg, &s, &table).unwrap();
            assert_eq!(out.phase, table.monodromy(m, n));
            assert_eq!(out.windings[0].half_turns.abs(), 2);
            let checks = check_loops_microscopically(&p, &cfg, &s, &table).unwrap();
            assert!(checks.iter().all(LoopCheck::agrees), "{checks:?}");
        }
    }
}

#[test]
fn illegal_moves_are_indexed() {
    let p = open(3);
    let cfg = AnyonConfig::new([(0, Color::R)]);
    let far = (0..p.num_sites())
        .find(|&s| s != 0 && p.effective_link_color(0, s).is_none())
        .unwrap();
    let s = BraidSchedule::new(vec![Move::Transport { from: 0, to: far }]);
    match accumulate_phase(&p, &cfg, &s, &StatisticsTable::color_code()) {
        Err(Error::IllegalMove { index: 0, .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn periodic_patches_are_refused() {
    let p = LatticePatch::build(2, 2, Boundary::Periodic).unwrap();
    let r = accumulate_phase(
        &p,
        &AnyonConfig::default(),
        &BraidSchedule::default(),
        &StatisticsTable::color_code(),
    );
    assert!(matches!(r, Err(Error::Refused(_))));
}
