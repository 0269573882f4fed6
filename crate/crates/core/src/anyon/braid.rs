//! Geometric braiding: winding angles of boson world lines turned into a
//! phase through a statistics table.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::anyon::config::{AnyonConfig, BraidSchedule, Move};
use crate::anyon::loops::winding_number;
use crate::anyon::oracle::micro_loop_phase;
use crate::anyon::statistics::StatisticsTable;
use crate::error::{Error, Result};
use crate::lattice::{Boundary, Color, LatticePatch};

const INTEGRALITY: f64 = 1e-9;

/// Net winding between two particles, in half turns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairWinding {
    /// Initial sites of the two particles.
    pub sites: [usize; 2],
    pub colors: [Color; 2],
    pub half_turns: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraidOutcome {
    pub phase: i8,
    pub final_config: AnyonConfig,
    pub windings: Vec<PairWinding>,
}

#[derive(Debug, Clone)]
struct Particle {
    color: Color,
    start: usize,
    site: usize,
    pos: [f64; 2],
}

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn rel_angle(p: &[[f64; 2]], i: usize, j: usize) -> f64 {
    (p[j][1] - p[i][1]).atan2(p[j][0] - p[i][0])
}

struct Tracker<'a> {
    patch: &'a LatticePatch,
    particles: Vec<Particle>,
    at: BTreeMap<usize, usize>,
    angle: Vec<Vec<f64>>,
}

impl<'a> Tracker<'a> {
    fn new(patch: &'a LatticePatch, config: &AnyonConfig) -> Result<Self> {
        let mut particles = Vec::new();
        let mut at = BTreeMap::new();
        for (&s, &c) in &config.occupations {
            if s >= patch.num_sites() {
                return Err(Error::Index {
                    what: "site",
                    index: s,
                    len: patch.num_sites(),
                });
            }
            at.insert(s, particles.len());
            particles.push(Particle {
                color: c,
                start: s,
                site: s,
                pos: patch.site_position(s),
            });
        }
        let n = particles.len();
        Ok(Tracker {
            patch,
            particles,
            at,
            angle: vec![vec![0.0; n]; n],
        })
    }

    /// Moves several particles simultaneously along straight segments.
    fn step(&mut self, targets: &[(usize, [f64; 2])]) {
        let before: Vec<[f64; 2]> = self.particles.iter().map(|p| p.pos).collect();
        let mut after = before.clone();
        for &(k, t) in targets {
            after[k] = t;
        }
        let n = before.len();
        for i in 0..n {
            for j in i + 1..n {
                let d = wrap(rel_angle(&after, i, j) - rel_angle(&before, i, j));
                self.angle[i][j] += d;
            }
        }
        for &(k, t) in targets {
            self.particles[k].pos = t;
        }
    }

    fn relocate(&mut self, k: usize, site: usize) {
        self.particles[k].site = site;
    }

    fn transport(&mut self, from: usize, to: usize) -> std::result::Result<(), String> {
        let &k = self.at.get(&from).ok_or(format!("no boson at site {from}"))?;
        if self.at.contains_key(&to) {
            return Err(format!("site {to} is occupied"));
        }
        if self.patch.effective_link_color(from, to).is_none() {
            return Err(format!("sites {from} and {to} are not adjacent"));
        }
        self.step(&[(k, self.patch.site_position(to))]);
        self.at.remove(&from);
        self.at.insert(to, k);
        self.relocate(k, to);
        Ok(())
    }

    fn exchange(&mut self, a: usize, b: usize) -> std::result::Result<(), String> {
        let &ka = self.at.get(&a).ok_or(format!("no boson at site {a}"))?;
        let &kb = self.at.get(&b).ok_or(format!("no boson at site {b}"))?;
        if self.patch.effective_link_color(a, b).is_none() {
            return Err(format!("sites {a} and {b} are not adjacent"));
        }
        let (pa, pb) = (self.patch.site_position(a), self.patch.site_position(b));
        let c = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
        let rot = |p: [f64; 2]| [c[0] - (p[1] - c[1]), c[1] + (p[0] - c[0])];
        self.step(&[(ka, rot(pa)), (kb, rot(pb))]);
        self.step(&[(ka, pb), (kb, pa)]);
        self.at.insert(a, kb);
        self.at.insert(b, ka);
        self.relocate(ka, b);
        self.relocate(kb, a);
        Ok(())
    }

    fn walk(&mut self, site: usize, path: &[usize]) -> std::result::Result<(), String> {
        if path.first() != Some(&site) {
            return Err(format!("loop path must start at site {site}"));
        }
        if !self.at.contains_key(&site) {
            return Err(format!("no boson at site {site}"));
        }
        let mut full = path.to_vec();
        if full.len() < 3 {
            return Err("loop path is too short".into());
        }
        if full.last() != Some(&site) {
            full.push(site);
        }
        for w in full.windows(2) {
            if self.patch.effective_link_color(w[0], w[1]).is_none() {
                return Err(format!("sites {} and {} are not adjacent", w[0], w[1]));
            }
        }
        for &s in &full[1..full.len() - 1] {
            if s == site || self.at.contains_key(&s) {
                return Err(format!("loop passes through occupied site {s}"));
            }
        }
        for w in full.windows(2) {
            self.transport(w[0], w[1])?;
        }
        Ok(())
    }

    fn config(&self) -> BTreeMap<usize, Color> {
        self.at
            .iter()
            .map(|(&s, &k)| (s, self.particles[k].color))
            .collect()
    }
}

fn require_open(patch: &LatticePatch) -> Result<()> {
    if patch.boundary() != Boundary::Open {
        return Err(Error::Refused(
            "winding angles are only defined on open patches".into(),
        ));
    }
    Ok(())
}

/// Runs a schedule and returns the braid phase it accumulates.
///
/// Each pair of particles contributes through the net change of its
/// relative angle: same colors `exchange^(Δθ/π)`, different colors
/// `monodromy^(Δθ/2π)`. The colored configuration has to return to the
/// initial one.
pub fn accumulate_phase(
    patch: &LatticePatch,
    config: &AnyonConfig,
    schedule: &BraidSchedule,
    table: &StatisticsTable,
) -> Result<BraidOutcome> {
    require_open(patch)?;
    let mut t = Tracker::new(patch, config)?;
    for (index, mv) in schedule.moves.iter().enumerate() {
        let r = match mv {
            Move::Transport { from, to } => t.transport(*from, *to),
            Move::Exchange { a, b } => t.exchange(*a, *b),
            Move::Loop { site, path } => t.walk(*site, path),
        };
        r.map_err(|reason| Error::IllegalMove { index, reason })?;
    }
    let end = t.config();
    if end != config.occupations {
        return Err(Error::OpenBraid(format!(
            "final configuration {end:?} differs from the initial {:?}",
            config.occupations
        )));
    }
    let mut phase = 1i8;
    let mut windings = Vec::new();
    let n = t.particles.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&t.particles[i], &t.particles[j]);
            let half = t.angle[i][j] / PI;
            let h = half.round();
            if (half - h).abs() > INTEGRALITY {
                return Err(Error::OpenBraid(format!(
                    "particles from {} and {} wound {half:.6} half turns",
                    a.start, b.start
                )));
            }
            let h = h as i64;
            let factor = if a.color == b.color {
                table.exchange(a.color, b.color)
            } else {
                if h % 2 != 0 {
                    return Err(Error::OpenBraid(format!(
                        "distinct colors from {} and {} exchanged",
                        a.start, b.start
                    )));
                }
                table.monodromy(a.color, b.color)
            };
            let w = if a.color == b.color { h } else { h / 2 };
            if factor == -1 && w.rem_euclid(2) == 1 {
                phase = -phase;
            }
            windings.push(PairWinding {
                sites: [a.start, b.start],
                colors: [a.color, b.color],
                half_turns: h,
            });
        }
    }
    Ok(BraidOutcome {
        phase,
        final_config: AnyonConfig {
            occupations: end,
            background: config.background.clone(),
        },
        windings,
    })
}

/// Spin-level check of one loop move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopCheck {
    pub index: usize,
    /// Phase predicted from winding numbers and the table.
    pub geometric: i8,
    /// Phase from the commutator of spin string operators.
    pub micro: i8,
}

impl LoopCheck {
    pub fn agrees(&self) -> bool {
        self.geometric == self.micro
    }
}

/// Recomputes the phase of every loop move from the spin model.
///
/// Other moves only update the configuration. Loops without room for an
/// anchor outside them are reported as errors.
pub fn check_loops_microscopically(
    patch: &LatticePatch,
    config: &AnyonConfig,
    schedule: &BraidSchedule,
    table: &StatisticsTable,
) -> Result<Vec<LoopCheck>> {
    require_open(patch)?;
    let mut current = config.clone();
    let mut out = Vec::new();
    for (index, mv) in schedule.moves.iter().enumerate() {
        match mv {
            Move::Transport { from, to } => {
                if let Some(c) = current.occupations.remove(from) {
                    current.occupations.insert(*to, c);
                }
            }
            Move::Exchange { a, b } => {
                let ca = current.occupations.remove(a);
                let cb = current.occupations.remove(b);
                if let Some(c) = ca {
                    current.occupations.insert(*b, c);
                }
                if let Some(c) = cb {
                    current.occupations.insert(*a, c);
                }
            }
            Move::Loop { site, path } => {
                let m = current.color_at(*site).ok_or(Error::IllegalMove {
                    index,
                    reason: format!("no boson at site {site}"),
                })?;
                let mut cycle = path.clone();
                if cycle.last() == Some(site) && cycle.len() > 1 {
                    cycle.pop();
                }
                let mut geometric = 1;
                for (&x, &n) in &current.occupations {
                    if x != *site
                        && winding_number(patch, &cycle, x).rem_euclid(2) == 1
                        && table.monodromy(m, n) == -1
                    {
                        geometric = -geometric;
                    }
                }
                let micro = micro_loop_phase(patch, &current, *site, path)?;
                out.push(LoopCheck {
                    index,
                    geometric,
                    micro,
                });
            }
        }
    }
    Ok(out)
}
