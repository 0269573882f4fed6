use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use tcc_core::anyon::{
    accumulate_phase, check_loops_microscopically, derive_statistics, ScheduleDocument,
    StatisticsTable,
};
use tcc_core::gates::{
    cnot, controlled_phase, verify_scheme, Recipe, Scheme, TruthTable, TwoQubitLayout,
};
use tcc_core::lattice::{AlgebraReport, Boundary, Check};
use tcc_core::linalg::{full_spectrum, SpectrumReport, DEFAULT_CLUSTER_TOLERANCE};
use tcc_core::spin_boson::{build_effective_hamiltonian, verify_mapping_equivalence};
use tcc_core::{Color, CouplingParams, LatticePatch, PauliString};

use crate::output::{fingerprint, Report};
use crate::{BoundaryArg, Couplings, Failure, PatchArgs};

type Outcome = Result<Report, Failure>;

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Failed(e.to_string()))
}

fn load_patch(args: &PatchArgs, default: (usize, usize)) -> Result<LatticePatch, Failure> {
    if let Some(path) = &args.patch_file {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return LatticePatch::from_json(&text).map_err(|e| Failure::Usage(e.to_string()));
    }
    let (r, c) = args.patch.unwrap_or(default);
    let b = match args.boundary {
        BoundaryArg::Open => Boundary::Open,
        BoundaryArg::Periodic => Boundary::Periodic,
    };
    LatticePatch::build(r, c, b).map_err(|e| Failure::Usage(e.to_string()))
}

fn patch_fingerprint(p: &LatticePatch) -> Result<String, Failure> {
    Ok(fingerprint(&p.to_json()?))
}

fn couplings(j: &Couplings) -> Result<CouplingParams, Failure> {
    CouplingParams::new(j.jx, j.jy, j.jz).map_err(|e| Failure::Usage(e.to_string()))
}

pub fn build_patch(args: &PatchArgs) -> Outcome {
    let p = load_patch(args, (1, 1))?;
    Ok(Report {
        command: "build-patch",
        passed: true,
        fingerprint: Some(patch_fingerprint(&p)?),
        body: Value::Null,
        table: String::new(),
        raw: Some(p.to_json()?),
    })
}

/// Products of random plaquette operator subsets must commute with every
/// term of `H(J)`.
fn sampled_products(p: &LatticePatch, h: &tcc_core::OperatorSum, seed: u64) -> Result<Check, Failure> {
    let ops = p.all_plaquette_operators()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let samples = if ops.is_empty() { 0 } else { 64 };
    for k in 0..samples {
        let mut prod = PauliString::identity(p.vertex_count());
        for o in &ops {
            if rng.random::<bool>() {
                prod = prod.multiply(o)?;
            }
        }
        if !h.commutes_termwise(&prod)? {
            failures.push(format!("sample {k}"));
        }
    }
    Ok(Check {
        name: "random products commute with H(J)".into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{samples} sampled products")
        } else {
            format!("failing: {}", failures.join(", "))
        },
    })
}

pub fn verify_algebra(args: &PatchArgs, j: &Couplings, seed: u64) -> Outcome {
    let p = load_patch(args, (1, 1))?;
    let jp = couplings(j)?;
    let mut report: AlgebraReport = p.verify()?;
    let h = p.hamiltonian(&jp)?;
    report.checks.push(sampled_products(&p, &h, seed)?);
    let passed = report.passed();
    let mut t = String::new();
    let _ = writeln!(
        t,
        "patch: {:?} boundary, {} triangles, {} vertices, {} links, {} complete / {} raw plaquettes",
        report.boundary,
        report.triangle_count,
        report.vertex_count,
        report.link_count,
        report.complete_plaquettes,
        report.raw_plaquettes
    );
    let _ = writeln!(t, "couplings: jx={} jy={} jz={}", jp.jx, jp.jy, jp.jz);
    for c in &report.checks {
        let _ = writeln!(
            t,
            "  [{}] {:<36} {}",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let r = &report.rank;
    let _ = writeln!(
        t,
        "symplectic rank {} of {} generators; 2x{} - {} global dependencies",
        r.rank, r.generators, r.plaquettes, r.global_dependencies
    );
    Ok(Report {
        command: "verify-algebra",
        passed,
        fingerprint: Some(patch_fingerprint(&p)?),
        body: json!({ "couplings": jp, "algebra": to_value(&report)? }),
        table: t,
        raw: None,
    })
}

fn spectrum_line(s: &SpectrumReport) -> String {
    s.eigenvalues
        .iter()
        .zip(&s.degeneracies)
        .map(|(e, d)| format!("{e:+.10} x{d}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn spectrum(triangles: usize, args: &PatchArgs, j: &Couplings) -> Outcome {
    let p = if args.patch.is_some() || args.patch_file.is_some() {
        load_patch(args, (1, 1))?
    } else {
        LatticePatch::chain(triangles).map_err(|e| Failure::Usage(e.to_string()))?
    };
    let jp = couplings(j)?;
    let micro = full_spectrum(&p.hamiltonian(&jp)?, DEFAULT_CLUSTER_TOLERANCE)?;
    let mut t = String::new();
    let _ = writeln!(t, "cluster: {} triangles, {} spins", p.num_sites(), p.vertex_count());
    let _ = writeln!(t, "microscopic: {}", spectrum_line(&micro));
    let mut body = json!({
        "couplings": jp,
        "triangles": p.num_sites(),
        "microscopic": micro,
    });
    let mut passed = true;
    if jp.jz > 0.0 {
        let heff = build_effective_hamiltonian(&p, &jp)?;
        let eq = verify_mapping_equivalence(&p, &jp)?;
        passed = eq.spectral_deviation <= 1e-10 && eq.matrix_deviation <= 1e-10;
        let _ = writeln!(
            t,
            "effective (units of {}): {}",
            eq.calibration.scale,
            spectrum_line(&eq.effective_spectrum)
        );
        let _ = writeln!(
            t,
            "calibration: E_micro = {} E_eff + {}; residual offset {:.3e}",
            eq.calibration.scale, eq.calibration.offset, eq.residual_offset
        );
        let _ = writeln!(
            t,
            "deviation: matrix {:.3e}, spectrum {:.3e}",
            eq.matrix_deviation, eq.spectral_deviation
        );
        body["effective_model"] = serde_json::from_str(&heff.to_json()?)
            .map_err(|e| Failure::Failed(e.to_string()))?;
        body["equivalence"] = to_value(&eq)?;
    } else {
        let _ = writeln!(t, "effective model skipped: the mapping needs J_z > 0");
        body["equivalence"] = Value::Null;
    }
    Ok(Report {
        command: "spectrum",
        passed,
        fingerprint: Some(patch_fingerprint(&p)?),
        body,
        table: t,
        raw: None,
    })
}

fn parse_color(s: &str) -> Result<Color, Failure> {
    Color::parse(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn matrix_lines(t: &mut String, title: &str, m: &[Vec<f64>]) {
    let _ = writeln!(t, "  {title}:");
    for row in m {
        let cells: Vec<String> = row.iter().map(|v| format!("{:+.3}", v + 0.0)).collect();
        let _ = writeln!(t, "    [{}]", cells.join(" "));
    }
}

fn table_rows(t: &mut String, table: &TruthTable, expected: Option<[i8; 4]>) {
    for r in &table.rows {
        let k = 2 * r.control as usize + r.target as usize;
        let exp = expected.map_or("-".to_string(), |e| format!("{:+}", e[k]));
        let micro = r.micro_phase.map_or(String::new(), |m| format!("  spin {m:+}"));
        let ok = expected.is_none_or(|e| e[k] == r.phase);
        let _ = writeln!(
            t,
            "  |{}{}>  expected {exp:>2}  actual {:+}{micro}  {}",
            r.control,
            r.target,
            r.phase,
            if ok { "ok" } else { "MISMATCH" }
        );
    }
}

const SWITCH_NOTE: &str = "color-switch table diag(1,1,-1,1) equals controlled-Z after \
relabeling the control basis (X on the control before and after); no CNOT is built from it";

pub fn gates(scheme: &str, colors: Option<(String, String)>, cross_check: bool) -> Outcome {
    let schemes: Vec<Scheme> = if scheme.eq_ignore_ascii_case("all") {
        Scheme::ALL.to_vec()
    } else {
        vec![scheme
            .parse::<Scheme>()
            .map_err(|e| Failure::Usage(e.to_string()))?]
    };
    let layout = TwoQubitLayout::standard()?;
    let table = StatisticsTable::color_code();
    let mut t = String::new();
    let _ = writeln!(
        t,
        "layout: sites C1 C2 T1 T2 = {:?} on an open patch",
        layout.sites
    );
    if let Some((c, g)) = colors {
        let (c, g) = (parse_color(&c)?, parse_color(&g)?);
        let mut reports = Vec::new();
        let mut passed = true;
        for s in schemes {
            match controlled_phase(&layout, s, (c, g), Recipe::Primary, &table, cross_check) {
                Ok(tt) => {
                    let _ = writeln!(t, "scheme {} ({s}), control {c}, target {g}:", s.letter());
                    table_rows(&mut t, &tt, None);
                    let cn = cnot(&tt).ok();
                    if let Some(cn) = &cn {
                        matrix_lines(&mut t, "CNOT", &cn.matrix);
                    }
                    passed &= tt.micro_agrees();
                    reports.push(json!({ "table": to_value(&tt)?, "cnot": to_value(&cn)? }));
                }
                Err(tcc_core::Error::Refused(why)) => {
                    passed = false;
                    let _ = writeln!(t, "scheme {} ({s}): refused: {why}", s.letter());
                    reports.push(json!({ "scheme": s, "refused": why }));
                }
                Err(e) => return Err(e.into()),
            }
        }
        return Ok(Report {
            command: "gates",
            passed,
            fingerprint: Some(patch_fingerprint(layout.patch())?),
            body: json!({ "layout": to_value(&layout)?, "schemes": reports }),
            table: t,
            raw: None,
        });
    }

    let mut reports = Vec::new();
    let mut rows_ok = 0;
    let mut rows = 0;
    let mut passed = true;
    for s in schemes {
        let mut recipes = vec![Recipe::Primary];
        if s == Scheme::ColorSwitch {
            recipes.push(Recipe::Alternative);
        }
        for which in recipes {
            let r = verify_scheme(&layout, s, which, &table, cross_check)?;
            let (c, g) = s.reference_colors();
            let _ = writeln!(
                t,
                "scheme {} ({s}, {which:?} recipe), control {c}, target {g}:",
                s.letter()
            );
            table_rows(&mut t, &r.table, Some(r.expected));
            let _ = writeln!(
                t,
                "  XZ = -ZX on both code spaces: {}",
                if r.paulis_anticommute { "yes" } else { "NO" }
            );
            if which == Recipe::Primary {
                rows += 4;
                rows_ok += r.row_pass.iter().filter(|&&p| p).count();
            }
            match (&r.cnot, &r.cnot_refusal) {
                (Some(cn), _) => {
                    matrix_lines(&mut t, "CNOT = (I x W) CZ (I x W)^dag", &cn.matrix);
                    let _ = writeln!(t, "  deviation from CNOT: {:.3e}", cn.deviation);
                    matrix_lines(&mut t, "CZ X_t", &cn.cz_then_x);
                    matrix_lines(&mut t, "X_t CZ", &cn.x_then_cz);
                    passed &= cn.deviation <= 1e-14;
                }
                (None, Some(why)) => {
                    let _ = writeln!(t, "  no CNOT: {why}");
                }
                _ => {}
            }
            if s == Scheme::ColorSwitch {
                let _ = writeln!(t, "  note: {SWITCH_NOTE}");
            }
            passed &= r.matches;
            reports.push(to_value(&r)?);
        }
    }
    let _ = writeln!(t, "{rows_ok}/{rows} truth-table rows match");
    Ok(Report {
        command: "gates",
        passed,
        fingerprint: Some(patch_fingerprint(layout.patch())?),
        body: json!({
            "layout": to_value(&layout)?,
            "rows_matching": rows_ok,
            "rows": rows,
            "schemes": reports,
            "color_switch_note": SWITCH_NOTE,
        }),
        table: t,
        raw: None,
    })
}

pub fn braid(schedule: &Path, args: &PatchArgs, derived: bool, cross_check: bool) -> Outcome {
    let text = fs::read_to_string(schedule)
        .map_err(|e| Failure::Usage(format!("{}: {e}", schedule.display())))?;
    let doc = ScheduleDocument::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    let p = load_patch(args, (5, 5))?;
    let table = if derived {
        derive_statistics()?.table
    } else {
        StatisticsTable::color_code()
    };
    let config = doc.config();
    let sched = doc.schedule();
    let out = accumulate_phase(&p, &config, &sched, &table)?;
    let mut t = String::new();
    let _ = writeln!(t, "moves: {}", sched.moves.len());
    let _ = writeln!(t, "phase: {:+}", out.phase);
    let finals: Vec<String> = out
        .final_config
        .occupations
        .iter()
        .map(|(s, c)| format!("{s}:{c}"))
        .collect();
    let _ = writeln!(t, "final configuration: {{{}}}", finals.join(", "));
    for w in &out.windings {
        if w.half_turns != 0 {
            let _ = writeln!(
                t,
                "  {}@{} and {}@{}: {} half turns",
                w.colors[0], w.sites[0], w.colors[1], w.sites[1], w.half_turns
            );
        }
    }
    let mut passed = true;
    let mut body = json!({ "table": table, "outcome": to_value(&out)? });
    if cross_check {
        let checks = check_loops_microscopically(&p, &config, &sched, &table)?;
        for c in &checks {
            let _ = writeln!(
                t,
                "  loop move {}: table {:+}, spin model {:+}",
                c.index, c.geometric, c.micro
            );
            passed &= c.agrees();
        }
        body["loop_checks"] = to_value(&checks)?;
    }
    Ok(Report {
        command: "braid",
        passed,
        fingerprint: Some(patch_fingerprint(&p)?),
        body,
        table: t,
        raw: None,
    })
}
