//! Controlled-phase gates from braiding, and CNOT built from them.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::anyon::{
    accumulate_phase, check_loops_microscopically, encloses, find_loop, shortest_path, AnyonConfig,
    BraidSchedule, Move, StatisticsTable,
};
use crate::error::{Error, Result};
use crate::gates::encoding::{max_deviation, paulis_anticommute, QubitEncoding, Scheme};
use crate::lattice::{Boundary, Color, LatticePatch};

/// Side length of the open patch holding the two qubits.
pub const LAYOUT_SIZE: usize = 8;

/// Minimum graph distance between any two qubit sites.
pub const SITE_SPACING: usize = 3;

/// Names the four qubit sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    C1,
    C2,
    T1,
    T2,
}

impl Role {
    const ALL: [Role; 4] = [Role::C1, Role::C2, Role::T1, Role::T2];

    fn index(self) -> usize {
        self as usize
    }
}

/// One braid of a recipe: the boson on `mover` encircles `inside` and
/// leaves the other qubit sites outside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidStep {
    pub mover: Role,
    pub inside: Vec<Role>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    #[default]
    Primary,
    /// Color switch only: C1 around T1, then C1 around C2.
    Alternative,
    /// The primary steps in reverse order, with single-site braids run
    /// the other way round (the enclosed boson moves instead).
    Reversed,
}

pub fn recipe(scheme: Scheme, which: Recipe) -> Result<Vec<BraidStep>> {
    let step = |mover, inside: &[Role]| BraidStep {
        mover,
        inside: inside.to_vec(),
    };
    match (scheme, which) {
        (Scheme::ColorSwitch, Recipe::Primary) => Ok(vec![
            step(Role::C1, &[Role::T1]),
            step(Role::T1, &[Role::C1, Role::C2]),
            step(Role::T2, &[Role::C1, Role::C2]),
        ]),
        (Scheme::ColorSwitch, Recipe::Alternative) => Ok(vec![
            step(Role::C1, &[Role::T1]),
            step(Role::C1, &[Role::C2]),
        ]),
        (_, Recipe::Primary) => Ok(vec![step(Role::C1, &[Role::T1])]),
        (s, Recipe::Reversed) => Ok(recipe(s, Recipe::Primary)?
            .into_iter()
            .rev()
            .map(|st| match st.inside[..] {
                [one] => step(one, &[st.mover]),
                _ => st,
            })
            .collect()),
        (s, Recipe::Alternative) => Err(Error::Refused(format!(
            "scheme {s} has no alternative recipe"
        ))),
    }
}

/// Four well separated sites on an open patch and a precomputed loop for
/// each pair of (mover, enclosed set) used by any recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitLayout {
    #[serde(skip)]
    patch: Option<LatticePatch>,
    /// Sites of C1, C2, T1, T2.
    pub sites: [usize; 4],
    pub loops: Vec<(BraidStep, Vec<usize>)>,
}

fn distances(patch: &LatticePatch, from: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; patch.num_sites()];
    d[from] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for (v, _) in patch.site_neighbors(u) {
            if d[v] == usize::MAX {
                d[v] = d[u] + 1;
                queue.push_back(v);
            }
        }
    }
    d
}

impl TwoQubitLayout {
    /// Deterministic layout: starting from the most central site, take
    /// the nearest sites at distance at least `spacing` from all chosen
    /// ones, widening the spacing from [`SITE_SPACING`] until every recipe
    /// loop can be drawn.
    pub fn standard() -> Result<Self> {
        let mut last = None;
        for spacing in SITE_SPACING..SITE_SPACING + 4 {
            match Self::spaced(spacing) {
                Ok(l) => return Ok(l),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    fn spaced(spacing: usize) -> Result<Self> {
        let patch = LatticePatch::build(LAYOUT_SIZE, LAYOUT_SIZE, Boundary::Open)?;
        let n = patch.num_sites();
        let mid = (0..n).fold([0.0, 0.0], |a, s| {
            let p = patch.site_position(s);
            [a[0] + p[0] / n as f64, a[1] + p[1] / n as f64]
        });
        let dist2 = |s: usize| {
            let p = patch.site_position(s);
            (p[0] - mid[0]).powi(2) + (p[1] - mid[1]).powi(2)
        };
        let mut order: Vec<usize> = (0..n)
            .filter(|&s| patch.site_neighbors(s).len() == 3)
            .collect();
        order.sort_by(|&a, &b| dist2(a).total_cmp(&dist2(b)).then(a.cmp(&b)));
        let mut chosen: Vec<usize> = Vec::new();
        let mut dist: Vec<Vec<usize>> = Vec::new();
        for s in order {
            if dist.iter().all(|d| d[s] >= spacing) {
                dist.push(distances(&patch, s));
                chosen.push(s);
                if chosen.len() == 4 {
                    break;
                }
            }
        }
        let sites: [usize; 4] = chosen
            .try_into()
            .map_err(|_| Error::Construction("no room for four qubit sites".into()))?;
        Self::with_sites(patch, sites)
    }

    /// Layout on given sites; fails if some recipe loop cannot be drawn.
    pub fn with_sites(patch: LatticePatch, sites: [usize; 4]) -> Result<Self> {
        if patch.boundary() != Boundary::Open {
            return Err(Error::Refused("gate layouts need an open patch".into()));
        }
        let distinct: BTreeSet<usize> = sites.iter().copied().collect();
        if distinct.len() != 4 {
            return Err(Error::Construction(format!("qubit sites {sites:?} repeat")));
        }
        for &s in &sites {
            for (v, _) in patch.site_neighbors(s) {
                if sites.contains(&v) {
                    return Err(Error::Construction(format!(
                        "qubit sites {s} and {v} are adjacent"
                    )));
                }
            }
        }
        let mut layout = TwoQubitLayout {
            patch: None,
            sites,
            loops: Vec::new(),
        };
        let mut steps: Vec<BraidStep> = Vec::new();
        for s in Scheme::ALL {
            for r in [Recipe::Primary, Recipe::Alternative, Recipe::Reversed] {
                if let Ok(list) = recipe(s, r) {
                    for st in list {
                        if !steps.contains(&st) {
                            steps.push(st);
                        }
                    }
                }
            }
        }
        for st in steps {
            let path = layout.draw(&patch, &st)?;
            layout.loops.push((st, path));
        }
        layout.patch = Some(patch);
        Ok(layout)
    }

    fn draw(&self, patch: &LatticePatch, step: &BraidStep) -> Result<Vec<usize>> {
        let start = self.site(step.mover);
        let inside: Vec<usize> = step.inside.iter().map(|&r| self.site(r)).collect();
        let outside: Vec<usize> = Role::ALL
            .iter()
            .filter(|r| **r != step.mover && !step.inside.contains(r))
            .map(|&r| self.site(r))
            .collect();
        find_loop(patch, start, &inside, &outside, &[], &[])
    }

    /// Swaps in another loop for a step; it must start at the mover and
    /// enclose exactly the step's sites among the qubit sites.
    pub fn replace_loop(&mut self, step: &BraidStep, path: Vec<usize>) -> Result<()> {
        let patch = self.patch();
        let cycle = &path[..path.len().saturating_sub(1)];
        if path.first() != Some(&self.site(step.mover)) || path.last() != path.first() {
            return Err(Error::Path("loop must start and end at the mover".into()));
        }
        for w in path.windows(2) {
            if patch.effective_link_color(w[0], w[1]).is_none() {
                return Err(Error::Path(format!("{} and {} are not linked", w[0], w[1])));
            }
        }
        for r in Role::ALL {
            if r == step.mover {
                continue;
            }
            let s = self.site(r);
            if cycle.contains(&s) || encloses(patch, cycle, s) != step.inside.contains(&r) {
                return Err(Error::Path(format!("loop does not separate {r:?} correctly")));
            }
        }
        let slot = self
            .loops
            .iter_mut()
            .find(|(s, _)| s == step)
            .ok_or_else(|| Error::Path(format!("no loop drawn for {step:?}")))?;
        slot.1 = path;
        Ok(())
    }

    pub fn site(&self, role: Role) -> usize {
        self.sites[role.index()]
    }

    pub fn patch(&self) -> &LatticePatch {
        self.patch.as_ref().expect("layout patch is set at construction")
    }

    pub fn loop_for(&self, step: &BraidStep) -> Result<&[usize]> {
        self.loops
            .iter()
            .find(|(s, _)| s == step)
            .map(|(_, p)| p.as_slice())
            .ok_or_else(|| Error::Path(format!("no loop drawn for {step:?}")))
    }

    /// Graph distances between the qubit sites.
    pub fn separations(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                out.push(shortest_path(self.patch(), self.sites[a], self.sites[b], &[])?.len() - 1);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub control: u8,
    pub target: u8,
    pub config: AnyonConfig,
    pub phase: i8,
    /// Same phase recomputed from spin string commutators, when asked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micro_phase: Option<i8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub scheme: Scheme,
    pub recipe: Recipe,
    pub control: QubitEncoding,
    pub target: QubitEncoding,
    pub rows: Vec<TruthRow>,
}

impl TruthTable {
    pub fn diagonal(&self) -> [i8; 4] {
        let mut d = [0; 4];
        for r in &self.rows {
            d[2 * r.control as usize + r.target as usize] = r.phase;
        }
        d
    }

    pub fn micro_agrees(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.micro_phase.is_none_or(|m| m == r.phase))
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            4,
            self.diagonal().iter().map(|&p| Complex64::new(p as f64, 0.0)),
        ))
    }
}

/// Runs the braid recipe on each of the four logical basis states. With
/// `cross_check`, every loop is also evaluated on the spin model.
pub fn controlled_phase(
    layout: &TwoQubitLayout,
    scheme: Scheme,
    colors: (Color, Color),
    which: Recipe,
    table: &StatisticsTable,
    cross_check: bool,
) -> Result<TruthTable> {
    if colors.0 == colors.1 {
        return Err(Error::Refused(format!(
            "control and target share color {}",
            colors.0
        )));
    }
    let steps = recipe(scheme, which)?;
    let control = QubitEncoding::new(scheme, colors.0);
    let target = QubitEncoding::new(scheme, colors.1);
    let mut rows = Vec::new();
    for cb in [false, true] {
        for tb in [false, true] {
            let mut occ = Vec::new();
            for (enc, bit, roles) in [
                (control, cb, [Role::C1, Role::C2]),
                (target, tb, [Role::T1, Role::T2]),
            ] {
                for (c, r) in enc.sites(bit).into_iter().zip(roles) {
                    if let Some(c) = c {
                        occ.push((layout.site(r), c));
                    }
                }
            }
            let config = AnyonConfig::new(occ);
            let mut moves = Vec::new();
            for st in &steps {
                let site = layout.site(st.mover);
                if config.color_at(site).is_some() {
                    moves.push(Move::Loop {
                        site,
                        path: layout.loop_for(st)?.to_vec(),
                    });
                }
            }
            let schedule = BraidSchedule::new(moves);
            let outcome = accumulate_phase(layout.patch(), &config, &schedule, table)?;
            let micro = if cross_check {
                Some(
                    check_loops_microscopically(layout.patch(), &config, &schedule, table)?
                        .iter()
                        .map(|c| c.micro)
                        .product(),
                )
            } else {
                None
            };
            rows.push(TruthRow {
                control: cb as u8,
                target: tb as u8,
                config,
                phase: outcome.phase,
                micro_phase: micro,
            });
        }
    }
    Ok(TruthTable {
        scheme,
        recipe: which,
        control,
        target,
        rows,
    })
}

fn kron_id(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::<Complex64>::identity(2, 2).kronecker(m)
}

pub fn cnot_reference() -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(i, j)] = Complex64::new(1.0, 0.0);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CnotReport {
    /// Row-major real parts of `(I⊗W)·CZ·(I⊗W)†`.
    pub matrix: Vec<Vec<f64>>,
    pub deviation: f64,
    /// `CZ·X_t` and `X_t·CZ`, row-major real parts.
    pub cz_then_x: Vec<Vec<f64>>,
    pub x_then_cz: Vec<Vec<f64>>,
}

fn rows(m: &DMatrix<Complex64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect()
}

/// CNOT from a controlled-Z table and the target's X and Z realizations,
/// with `W = (X + Z)/√2`.
pub fn cnot(table: &TruthTable) -> Result<CnotReport> {
    if table.diagonal() != [1, 1, 1, -1] {
        return Err(Error::Refused(format!(
            "table {:?} is not a controlled-Z",
            table.diagonal()
        )));
    }
    if table.control.color == table.target.color {
        return Err(Error::Refused("control and target share a color".into()));
    }
    let t = &table.target;
    let x = t.logical(&t.x_operator())?;
    let z = t.logical(&t.z_operator())?;
    let w = (&x + &z) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let iw = kron_id(&w);
    let cz = table.matrix();
    let m = &iw * &cz * iw.adjoint();
    let xt = kron_id(&x);
    Ok(CnotReport {
        deviation: max_deviation(&m, &cnot_reference()),
        matrix: rows(&m),
        cz_then_x: rows(&(&cz * &xt)),
        x_then_cz: rows(&(&xt * &cz)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub table: TruthTable,
    pub expected: [i8; 4],
    /// Per row (00, 01, 10, 11): actual equals expected.
    pub row_pass: [bool; 4],
    /// X and Z realizations anticommute on both code spaces.
    pub paulis_anticommute: bool,
    pub matches: bool,
    pub cnot: Option<CnotReport>,
    /// Why no CNOT was built, if it was not.
    pub cnot_refusal: Option<String>,
}

/// Truth table of a scheme with its reference colors, compared with the
/// reference diagonal, plus the CNOT when the table is a controlled-Z.
pub fn verify_scheme(
    layout: &TwoQubitLayout,
    scheme: Scheme,
    which: Recipe,
    table: &StatisticsTable,
    cross_check: bool,
) -> Result<GateReport> {
    let t = controlled_phase(
        layout,
        scheme,
        scheme.reference_colors(),
        which,
        table,
        cross_check,
    )?;
    let expected = scheme.reference_table();
    let d = t.diagonal();
    let row_pass = [0, 1, 2, 3].map(|k| d[k] == expected[k]);
    let paulis = paulis_anticommute(&t.control)? && paulis_anticommute(&t.target)?;
    let matches = row_pass.iter().all(|&p| p) && paulis && t.micro_agrees();
    let (cnot, cnot_refusal) = match cnot(&t) {
        Ok(c) => (Some(c), None),
        Err(Error::Refused(why)) => (None, Some(why)),
        Err(e) => return Err(e),
    };
    Ok(GateReport {
        table: t,
        expected,
        row_pass,
        paulis_anticommute: paulis,
        matches,
        cnot,
        cnot_refusal,
    })
}
