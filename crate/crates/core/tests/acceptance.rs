//! Acceptance run: one pass/fail line per criterion, nonzero exit if any
//! fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcc_core::anyon::{
    accumulate_phase, check_loops_microscopically, derive_statistics, find_loop, AnyonConfig,
    BraidSchedule, Move, StatisticsTable,
};
use tcc_core::gates::{verify_scheme, Recipe, Scheme, TwoQubitLayout};
use tcc_core::lattice::Boundary;
use tcc_core::linalg::full_spectrum;
use tcc_core::pauli::{Axis, PauliString, Phase};
use tcc_core::spin_boson::{
    conjugate_triangle, local_dense, map_vertex_operator, spin_pauli_dense,
    verify_mapping_equivalence,
};
use tcc_core::{Color, CouplingParams, LatticePatch};

/// Symplectic rank of all plaquette operators on the 2×2 torus.
const TORUS_2X2_RANK: usize = 22;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn plaquette_algebra() -> Outcome {
    let p = LatticePatch::build(2, 2, Boundary::Periodic).map_err(|e| e.to_string())?;
    let r = p.verify().map_err(|e| e.to_string())?;
    if let Some(f) = r.failures().first() {
        return Err(format!("{}: {}", f.name, f.detail));
    }
    for name in ["P_i^2 = I", "P1 P2 P3 = -I", "[P_i, P_j] = 0", "[P_i, H] = 0"] {
        ensure(r.checks.iter().any(|c| c.name == name), format!("check {name} missing"))?;
    }
    Ok(format!(
        "{} plaquettes, {} checks exact",
        r.complete_plaquettes,
        r.checks.len()
    ))
}

fn triangle_spectrum() -> Outcome {
    let tri = LatticePatch::chain(1).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for jz in [0.5, 1.0, 2.0] {
        let j = CouplingParams::new(1.0, 1.0, jz).map_err(|e| e.to_string())?;
        let h = tri.hamiltonian(&j).map_err(|e| e.to_string())?;
        let s = full_spectrum(&h, 1e-12).map_err(|e| e.to_string())?;
        let want: Vec<f64> = [vec![-3.0 * jz; 2], vec![jz; 6]].concat();
        let got = s.expanded();
        ensure(got.len() == 8, "dimension")?;
        for (a, b) in got.iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
        ensure(
            s.degeneracies == vec![2, 6],
            format!("J_z = {jz}: degeneracies {:?}", s.degeneracies),
        )?;
    }
    ensure(worst <= 1e-12, format!("deviation {worst:e}"))?;
    Ok(format!("{{-3J_z x2, +J_z x6}} for J_z in 0.5, 1, 2; max dev {worst:.1e}"))
}

fn mapping_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    for c in Color::ALL {
        for a in [Axis::X, Axis::Y, Axis::Z] {
            let conj = conjugate_triangle(&spin_pauli_dense(c, a));
            let closed = local_dense(&map_vertex_operator(c, Some(a)));
            let d = (&conj - &closed).iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(d);
        }
    }
    ensure(worst <= 1e-14, format!("closed forms off by {worst:e}"))?;
    let j = CouplingParams::default();
    let mut spec: f64 = 0.0;
    for n in [2, 3] {
        let cluster = LatticePatch::chain(n).map_err(|e| e.to_string())?;
        let r = verify_mapping_equivalence(&cluster, &j).map_err(|e| e.to_string())?;
        spec = spec.max(r.spectral_deviation);
    }
    ensure(spec <= 1e-10, format!("spectra differ by {spec:e}"))?;
    Ok(format!("closed forms {worst:.1e}, 2-3 triangle spectra {spec:.1e}"))
}

fn statistics() -> Outcome {
    let d = derive_statistics().map_err(|e| e.to_string())?;
    let mut distinct = 0;
    let mut same = 0;
    for m in &d.monodromy {
        let n = m.enclosed.ok_or("missing partner")?;
        let want = if n == m.mover { 1 } else { -1 };
        ensure(
            m.phase == want,
            format!("{} around {n}: {}", m.mover, m.phase),
        )?;
        ensure(
            m.loops.len() >= 3,
            format!("only {} loops for {} around {n}", m.loops.len(), m.mover),
        )?;
        if n == m.mover {
            same += 1;
        } else {
            distinct += 1;
        }
    }
    ensure(distinct == 6 && same == 3, "wrong number of monodromy cases")?;
    for e in &d.exchange {
        ensure(e.phase == -1, format!("exchange of {}: {}", e.color, e.phase))?;
    }
    ensure(d.exchange.len() == 3, "exchange cases")?;
    let loops = d.monodromy.iter().map(|m| m.loops.len()).min().unwrap_or(0);
    Ok(format!(
        "6 distinct -1, 3 same +1, 3 exchanges -1; >= {loops} loops per case"
    ))
}

fn gate_tables() -> Outcome {
    let layout = TwoQubitLayout::standard().map_err(|e| e.to_string())?;
    let table = StatisticsTable::color_code();
    let mut rows = 0;
    let mut cnot_dev = f64::NAN;
    for s in Scheme::ALL {
        let r = verify_scheme(&layout, s, Recipe::Primary, &table, false)
            .map_err(|e| e.to_string())?;
        rows += r.row_pass.iter().filter(|&&p| p).count();
        ensure(
            r.matches,
            format!("scheme {}: {:?} vs {:?}", s.letter(), r.table.diagonal(), r.expected),
        )?;
        if s == Scheme::Hopping {
            cnot_dev = r.cnot.ok_or("no CNOT for scheme A")?.deviation;
        }
    }
    ensure(rows == 16, format!("{rows}/16 rows"))?;
    ensure(cnot_dev <= 1e-14, format!("CNOT deviation {cnot_dev:e}"))?;
    Ok(format!("16/16 rows; scheme A CNOT deviation {cnot_dev:.1e}"))
}

fn independence() -> Outcome {
    let p = LatticePatch::build(2, 2, Boundary::Periodic).map_err(|e| e.to_string())?;
    let r = p.verify().map_err(|e| e.to_string())?.rank;
    ensure(
        r.rank == 2 * r.plaquettes - r.global_dependencies,
        "rank bookkeeping",
    )?;
    ensure(
        r.rank == TORUS_2X2_RANK,
        format!("rank {} != frozen {TORUS_2X2_RANK}", r.rank),
    )?;
    Ok(format!(
        "rank {} = 2x{} - {}",
        r.rank, r.plaquettes, r.global_dependencies
    ))
}

fn random_pauli(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    let axes: Vec<(usize, Axis)> = (0..n)
        .filter_map(|q| match rng.random_range(0..4) {
            0 => None,
            1 => Some((q, Axis::X)),
            2 => Some((q, Axis::Y)),
            _ => Some((q, Axis::Z)),
        })
        .collect();
    PauliString::from_axes(n, axes)
        .expect("valid qubits")
        .with_phase(Phase::new(rng.random_range(0..4)))
}

fn pauli_cases(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for case in 0..1000 {
        let n = rng.random_range(1..150);
        let (p, q) = (random_pauli(rng, n), random_pauli(rng, n));
        let pq = p.multiply(&q).map_err(|e| e.to_string())?;
        let qp = q.multiply(&p).map_err(|e| e.to_string())?;
        let sign = if p.commutes(&q).map_err(|e| e.to_string())? {
            Phase::ONE
        } else {
            Phase::MINUS_ONE
        };
        let sign_phase = qp.phase() * sign;
        ensure(pq == qp.with_phase(sign_phase), format!("case {case}: pq vs qp"))?;
        let mut a: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.random()).collect();
        if n % 64 != 0 {
            let last = a.len() - 1;
            a[last] &= (1u64 << (n % 64)) - 1;
        }
        let mut b = a.clone();
        let ph = q.act_on_basis(&mut a).map_err(|e| e.to_string())?
            * p.act_on_basis(&mut a).map_err(|e| e.to_string())?;
        let direct = pq.act_on_basis(&mut b).map_err(|e| e.to_string())?;
        ensure(a == b && ph == direct, format!("case {case}: action vs product"))?;
    }
    Ok(1000)
}

fn braid_cases(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let patch = LatticePatch::build(7, 7, Boundary::Open).map_err(|e| e.to_string())?;
    let table = StatisticsTable::color_code();
    let inner: Vec<usize> = (0..patch.num_sites())
        .filter(|&s| patch.site_neighbors(s).len() == 3)
        .collect();
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        if attempts > 5000 {
            return Err(format!("only {done} braid cases after {attempts} draws"));
        }
        let mut pick = inner.clone();
        pick.shuffle(rng);
        let k = rng.random_range(1..=4);
        let mover = pick[0];
        let partners: Vec<usize> = pick[1..=k].to_vec();
        let near = |a: usize, b: usize| {
            a == b
                || patch.effective_link_color(a, b).is_some()
                || patch
                    .site_neighbors(a)
                    .iter()
                    .any(|&(x, _)| patch.effective_link_color(x, b).is_some())
        };
        let all: Vec<usize> = std::iter::once(mover).chain(partners.iter().copied()).collect();
        if all
            .iter()
            .enumerate()
            .any(|(i, &a)| all[i + 1..].iter().any(|&b| near(a, b)))
        {
            continue;
        }
        let inside: Vec<usize> = partners.iter().copied().filter(|_| rng.random()).collect();
        let outside: Vec<usize> = partners
            .iter()
            .copied()
            .filter(|s| !inside.contains(s))
            .collect();
        let Ok(path) = find_loop(&patch, mover, &inside, &outside, &[], &[]) else {
            continue;
        };
        let color = |rng: &mut ChaCha8Rng| Color::from_index(rng.random_range(0..3));
        let mc = color(rng);
        let occ: Vec<(usize, Color)> = std::iter::once((mover, mc))
            .chain(partners.iter().map(|&s| (s, color(rng))))
            .collect();
        let run = |occ: Vec<(usize, Color)>| -> Result<i8, String> {
            let cfg = AnyonConfig::new(occ);
            let s = BraidSchedule::new(vec![Move::Loop {
                site: mover,
                path: path.clone(),
            }]);
            let out = accumulate_phase(&patch, &cfg, &s, &table).map_err(|e| e.to_string())?;
            ensure(out.final_config == cfg, "pure braid changed the configuration")?;
            Ok(out.phase)
        };
        let whole = run(occ.clone())?;
        let mut product = 1;
        for &(s, c) in &occ[1..] {
            product *= run(vec![(mover, mc), (s, c)])?;
        }
        ensure(
            whole == product,
            format!("case {done}: whole {whole} vs product {product}"),
        )?;
        let cfg = AnyonConfig::new(occ);
        let s = BraidSchedule::new(vec![Move::Loop {
            site: mover,
            path: path.clone(),
        }]);
        let micro = check_loops_microscopically(&patch, &cfg, &s, &table)
            .map_err(|e| e.to_string())?;
        ensure(
            micro.iter().all(|c| c.agrees() && c.micro == whole),
            format!("case {done}: spin model disagrees"),
        )?;
        done += 1;
    }
    Ok(done)
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7cc);
    let p = pauli_cases(&mut rng)?;
    let b = braid_cases(&mut rng)?;
    Ok(format!("{p} Pauli cases, {b} braid multiplicativity cases, 0 failures"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("plaquette algebra", plaquette_algebra),
        ("triangle spectrum", triangle_spectrum),
        ("mapping exactness", mapping_exactness),
        ("anyon statistics", statistics),
        ("gate truth tables", gate_tables),
        ("independence counting", independence),
        ("property suites", property_suites),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(msg) => println!("PASS {}. {name}: {msg} ({:.2}s)", k + 1, t.elapsed().as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name}: {msg}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.2}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
