//! Microscopic derivation of the anyon statistics.
//!
//! Bosons are moved by products of spin Pauli operators on the ruby
//! lattice, and the phases of the resulting basis states are compared
//! directly. Nothing here consults a statistics table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::anyon::config::AnyonConfig;
use crate::anyon::loops::{face_boundary, plaquettes_around, shortest_path};
use crate::anyon::statistics::StatisticsTable;
use crate::error::{Error, Result};
use crate::lattice::{Boundary, Color, LatticePatch};
use crate::pauli::{PauliString, Phase};
use crate::spin_boson::{decode_triangle, encode_triangle, SiteState};

/// Spin operator that moves a boson of color `m` across the effective
/// link `a – b`.
///
/// Across a link of another color it flips the two `m`-colored vertices
/// joined by that link. Across an `m`-colored link, which has no
/// `m`-vertex bond, it flips the other two vertex pairs instead.
pub fn transport_string(patch: &LatticePatch, m: Color, a: usize, b: usize) -> Result<PauliString> {
    let e = patch
        .effective_link_color(a, b)
        .ok_or_else(|| Error::Path(format!("sites {a} and {b} are not linked")))?;
    let colors: Vec<Color> = if e == m {
        Color::ALL.into_iter().filter(|&c| c != e).collect()
    } else {
        vec![m]
    };
    let mut axes = Vec::new();
    for c in colors {
        let axis = c.link_axis(e)?;
        axes.push((3 * a + c.index(), axis));
        axes.push((3 * b + c.index(), axis));
    }
    PauliString::from_axes(patch.vertex_count(), axes)
}

/// Product of transports along a site path, first hop acting first.
pub fn path_string(patch: &LatticePatch, m: Color, path: &[usize]) -> Result<PauliString> {
    let mut out = PauliString::identity(patch.vertex_count());
    for w in path.windows(2) {
        out = transport_string(patch, m, w[0], w[1])?.multiply(&out)?;
    }
    Ok(out)
}

/// `+1` if the strings commute, `−1` otherwise.
pub fn commutation_sign(p: &PauliString, q: &PauliString) -> Result<i8> {
    Ok(if p.commutes(q)? { 1 } else { -1 })
}

fn real_sign(p: Phase) -> Result<i8> {
    match p.exponent() {
        0 => Ok(1),
        2 => Ok(-1),
        k => Err(Error::OpenBraid(format!("phase i^{k} is not ±1"))),
    }
}

/// A spin basis state with an accumulated phase, moved hop by hop.
#[derive(Debug, Clone)]
pub struct MicroTracker<'a> {
    patch: &'a LatticePatch,
    bits: Vec<u64>,
    phase: Phase,
}

impl<'a> MicroTracker<'a> {
    pub fn new(patch: &'a LatticePatch, config: &AnyonConfig) -> Result<Self> {
        let n = patch.num_sites();
        let mut bits = vec![0u64; patch.vertex_count().div_ceil(64)];
        for s in 0..n {
            let label = decode_triangle(SiteState::new(config.tau_at(s), config.color_at(s)));
            for c in 0..3 {
                if label >> c & 1 == 1 {
                    let v = 3 * s + c;
                    bits[v / 64] |= 1 << (v % 64);
                }
            }
        }
        for &s in config.occupations.keys().chain(config.background.keys()) {
            if s >= n {
                return Err(Error::Index {
                    what: "site",
                    index: s,
                    len: n,
                });
            }
        }
        Ok(MicroTracker {
            patch,
            bits,
            phase: Phase::ONE,
        })
    }

    pub fn site(&self, s: usize) -> SiteState {
        let label = (0..3).fold(0u8, |l, c| {
            let v = 3 * s + c;
            l | ((self.bits[v / 64] >> (v % 64) & 1) as u8) << c
        });
        encode_triangle(label).expect("three-bit label")
    }

    pub fn bosons(&self) -> BTreeMap<usize, Color> {
        (0..self.patch.num_sites())
            .filter_map(|s| self.site(s).boson.map(|c| (s, c)))
            .collect()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    /// Moves the `m` boson from `a` to the empty neighbor `b`, checking
    /// that the spin operator does exactly that.
    pub fn hop(&mut self, m: Color, a: usize, b: usize) -> Result<()> {
        let before = self.bosons();
        if before.get(&a) != Some(&m) || before.contains_key(&b) {
            return Err(Error::Path(format!(
                "cannot move a {m} boson from {a} to {b} in {before:?}"
            )));
        }
        let op = transport_string(self.patch, m, a, b)?;
        self.phase = self.phase * op.act_on_basis(&mut self.bits)?;
        let mut want = before;
        want.remove(&a);
        want.insert(b, m);
        let after = self.bosons();
        if after != want {
            return Err(Error::Path(format!(
                "transport {a}→{b} of {m} produced {after:?}"
            )));
        }
        Ok(())
    }

    pub fn walk(&mut self, m: Color, path: &[usize]) -> Result<()> {
        for w in path.windows(2) {
            self.hop(m, w[0], w[1])?;
        }
        Ok(())
    }
}

/// The cluster used for exchange: a site with three neighbors.
pub fn star_cluster() -> Result<(LatticePatch, [usize; 3])> {
    let parent = LatticePatch::build(3, 3, Boundary::Open)?;
    let center = (0..parent.num_sites())
        .find(|&s| parent.site_neighbors(s).len() == 3)
        .ok_or_else(|| Error::Cluster("no three-fold site".into()))?;
    let legs: Vec<usize> = parent.site_neighbors(center).iter().map(|n| n.0).collect();
    let star = parent.induced(&[center, legs[0], legs[1], legs[2]])?;
    Ok((star, [1, 2, 3]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeDerivation {
    pub color: Color,
    pub phase: i8,
    pub two_particle: u8,
    pub one_particle: u8,
}

/// Exchange phase of two `m` bosons around `center` with legs 1, 2, 3.
///
/// Two bosons on legs 1 and 2 are swapped by the moves 1→c→3, 2→c→1,
/// 3→c→2. A single boson on leg 1 runs the same hops reordered
/// (1→c→3, 3→c→2, 2→c→1) so that every path segment is traversed the
/// same way. The ratio of the two amplitudes is the exchange phase.
pub fn exchange_phase_on(
    patch: &LatticePatch,
    center: usize,
    legs: [usize; 3],
    m: Color,
) -> Result<ExchangeDerivation> {
    let nb: Vec<usize> = patch.site_neighbors(center).iter().map(|n| n.0).collect();
    if nb.len() < 3 || legs.iter().any(|l| !nb.contains(l)) {
        return Err(Error::Cluster(format!(
            "site {center} needs three neighbors, has {nb:?}"
        )));
    }
    let [l1, l2, l3] = legs;
    let (a, b, c) = ([l1, center, l3], [l2, center, l1], [l3, center, l2]);

    let two = AnyonConfig::new([(l1, m), (l2, m)]);
    let mut t2 = MicroTracker::new(patch, &two)?;
    let start = t2.bits().to_vec();
    for p in [a, b, c] {
        t2.walk(m, &p)?;
    }
    let one = AnyonConfig::new([(l1, m)]);
    let mut t1 = MicroTracker::new(patch, &one)?;
    let start1 = t1.bits().to_vec();
    for p in [a, c, b] {
        t1.walk(m, &p)?;
    }
    if t2.bits() != start || t1.bits() != start1 {
        return Err(Error::OpenBraid("exchange did not restore the spins".into()));
    }
    let ratio = Phase::new(t2.phase().exponent() as i64 - t1.phase().exponent() as i64);
    Ok(ExchangeDerivation {
        color: m,
        phase: real_sign(ratio)?,
        two_particle: t2.phase().exponent(),
        one_particle: t1.phase().exponent(),
    })
}

pub fn derive_exchange_phase(m: Color) -> Result<ExchangeDerivation> {
    let (star, legs) = star_cluster()?;
    exchange_phase_on(&star, 0, legs, m)
}

/// Monodromy of a `mover` boson carried around `cycle` (starting and
/// ending at `cycle[0]`) with an `enclosed` boson brought inside from
/// `anchor` along `path` (ending inside the cycle).
///
/// Compares "bring in, go around, take out" with "go around" alone.
pub fn monodromy_phase_on(
    patch: &LatticePatch,
    mover: Color,
    cycle: &[usize],
    enclosed: Color,
    path: &[usize],
) -> Result<i8> {
    let s0 = cycle[0];
    let anchor = path[0];
    let mut around = cycle.to_vec();
    around.push(s0);
    let back: Vec<usize> = path.iter().rev().copied().collect();
    let config = AnyonConfig::new([(s0, mover), (anchor, enclosed)]);

    let mut braided = MicroTracker::new(patch, &config)?;
    braided.walk(enclosed, path)?;
    braided.walk(mover, &around)?;
    braided.walk(enclosed, &back)?;

    let mut plain = MicroTracker::new(patch, &config)?;
    plain.walk(mover, &around)?;
    if braided.bits() != plain.bits() {
        return Err(Error::OpenBraid("braided and plain loops end in different states".into()));
    }
    real_sign(Phase::new(
        braided.phase().exponent() as i64 - plain.phase().exponent() as i64,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyDerivation {
    pub mover: Color,
    pub enclosed: Option<Color>,
    pub phase: i8,
    /// Loop lengths of the regions tried.
    pub loops: Vec<usize>,
    /// Number of (loop, path) combinations, all giving `phase`.
    pub samples: usize,
}

/// Loops around a fully surrounded site of an open patch: the boundary
/// of its three plaquettes and of that union grown by neighboring faces.
pub fn monodromy_regions(patch: &LatticePatch, x: usize) -> Result<Vec<Vec<usize>>> {
    let core = plaquettes_around(patch, x);
    if core.len() != 3 {
        return Err(Error::Cluster(format!("site {x} lies on {} plaquettes", core.len())));
    }
    let mut out = vec![face_boundary(patch, &core)?];
    let grown: Vec<usize> = (0..patch.plaquettes().len())
        .filter(|k| !core.contains(k))
        .collect();
    for &k in &grown {
        let mut region = core.clone();
        region.push(k);
        if let Ok(b) = face_boundary(patch, &region) {
            if b.len() > out[0].len() && !b.contains(&x) {
                out.push(b);
            }
        }
        if out.len() >= 4 {
            break;
        }
    }
    Ok(out)
}

/// The test bed for monodromy: an open 5×5 patch and a central site.
pub fn monodromy_cluster() -> Result<(LatticePatch, usize)> {
    let patch = LatticePatch::build(5, 5, Boundary::Open)?;
    let mid = {
        let n = patch.num_sites() as f64;
        (0..patch.num_sites()).fold([0.0, 0.0], |a, s| {
            let p = patch.site_position(s);
            [a[0] + p[0] / n, a[1] + p[1] / n]
        })
    };
    let x = (0..patch.num_sites())
        .filter(|&s| plaquettes_around(&patch, s).len() == 3)
        .min_by(|&a, &b| {
            let d = |s: usize| {
                let p = patch.site_position(s);
                (p[0] - mid[0]).powi(2) + (p[1] - mid[1]).powi(2)
            };
            d(a).total_cmp(&d(b))
        })
        .ok_or_else(|| Error::Cluster("no surrounded site".into()))?;
    Ok((patch, x))
}

fn bbox(patch: &LatticePatch, sites: &[usize]) -> [f64; 4] {
    sites.iter().fold(
        [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
        |b, &s| {
            let p = patch.site_position(s);
            [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])]
        },
    )
}

/// Sites strictly outside the bounding box of `sites`, nearest to
/// `target` first.
fn outside_sites(patch: &LatticePatch, sites: &[usize], target: usize) -> Vec<usize> {
    let b = bbox(patch, sites);
    let t = patch.site_position(target);
    let mut out: Vec<usize> = (0..patch.num_sites())
        .filter(|&s| {
            let p = patch.site_position(s);
            p[0] < b[0] - 0.1 || p[0] > b[2] + 0.1 || p[1] < b[1] - 0.1 || p[1] > b[3] + 0.1
        })
        .collect();
    out.sort_by(|&a, &c| {
        let d = |s: usize| {
            let p = patch.site_position(s);
            (p[0] - t[0]).powi(2) + (p[1] - t[1]).powi(2)
        };
        d(a).total_cmp(&d(c))
    });
    out
}

/// Monodromy phase of `mover` around `enclosed`, checked for
/// independence of the loop and of the path bringing the enclosed boson
/// in.
pub fn derive_monodromy_phase(mover: Color, enclosed: Option<Color>) -> Result<MonodromyDerivation> {
    let (patch, x) = monodromy_cluster()?;
    let regions = monodromy_regions(&patch, x)?;
    let loops: Vec<usize> = regions.iter().map(Vec::len).collect();
    let Some(n) = enclosed else {
        return Ok(MonodromyDerivation {
            mover,
            enclosed,
            phase: 1,
            loops,
            samples: 0,
        });
    };
    let mut seen = Vec::new();
    for cycle in &regions {
        let anchors = outside_sites(&patch, cycle, x);
        for &o in anchors.iter().take(2).chain(anchors.last()) {
            let direct = shortest_path(&patch, o, x, &[cycle[0]])?;
            let mut detour_block = direct[1..direct.len() - 1].to_vec();
            detour_block.push(cycle[0]);
            let mut paths = vec![direct];
            if let Ok(p) = shortest_path(&patch, o, x, &detour_block) {
                paths.push(p);
            }
            for p in paths {
                seen.push(monodromy_phase_on(&patch, mover, cycle, n, &p)?);
            }
        }
    }
    let phase = seen[0];
    if seen.iter().any(|&s| s != phase) {
        return Err(Error::OpenBraid(format!(
            "monodromy of {mover} around {n} depends on the path: {seen:?}"
        )));
    }
    Ok(MonodromyDerivation {
        mover,
        enclosed,
        phase,
        loops,
        samples: seen.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticsDerivation {
    pub table: StatisticsTable,
    pub exchange: Vec<ExchangeDerivation>,
    pub monodromy: Vec<MonodromyDerivation>,
}

/// The full statistics table from the spin model alone.
pub fn derive_statistics() -> Result<StatisticsDerivation> {
    let mut table = StatisticsTable {
        exchange: [[1; 3]; 3],
        monodromy: [[1; 3]; 3],
    };
    let mut exchange = Vec::new();
    for m in Color::ALL {
        let d = derive_exchange_phase(m)?;
        table.exchange[m.index()][m.index()] = d.phase;
        exchange.push(d);
    }
    let mut monodromy = Vec::new();
    for m in Color::ALL {
        for n in Color::ALL {
            let d = derive_monodromy_phase(m, Some(n))?;
            table.monodromy[m.index()][n.index()] = d.phase;
            monodromy.push(d);
        }
    }
    Ok(StatisticsDerivation {
        table,
        exchange,
        monodromy,
    })
}

/// Micro phase of the boson at `site` walking the closed `path` with the
/// other bosons of `config` held fixed: the product over enclosed-or-not
/// partners of the commutator between the loop string and a string
/// bringing that partner in from outside the loop.
pub fn micro_loop_phase(
    patch: &LatticePatch,
    config: &AnyonConfig,
    site: usize,
    path: &[usize],
) -> Result<i8> {
    let m = config
        .color_at(site)
        .ok_or_else(|| Error::Path(format!("no boson at site {site}")))?;
    let mut walk = path.to_vec();
    if walk.last() != Some(&site) {
        walk.push(site);
    }
    let q = path_string(patch, m, &walk)?;
    let mut sign = 1;
    for (&x, &n) in &config.occupations {
        if x == site {
            continue;
        }
        let Some(&o) = outside_sites(patch, &walk, x).first() else {
            return Err(Error::Cluster(format!(
                "no room outside the loop to anchor site {x}"
            )));
        };
        let s = match shortest_path(patch, o, x, &[site]) {
            Ok(p) => p,
            Err(_) => shortest_path(patch, o, x, &[])?,
        };
        sign *= commutation_sign(&q, &path_string(patch, n, &s)?)?;
    }
    Ok(sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transports_are_hermitian_and_local() {
        let p = LatticePatch::build(2, 2, Boundary::Open).unwrap();
        for e in p.effective_links() {
            for m in Color::ALL {
                let t = transport_string(&p, m, e.sites[0], e.sites[1]).unwrap();
                assert!(t.is_hermitian());
                assert_eq!(t.weight(), if m == e.color { 4 } else { 2 });
            }
        }
    }

    #[test]
    fn hop_moves_exactly_one_boson() {
        let p = LatticePatch::build(2, 2, Boundary::Open).unwrap();
        let e = p.effective_links()[0];
        for m in Color::ALL {
            let cfg = AnyonConfig::new([(e.sites[0], m)]);
            let mut t = MicroTracker::new(&p, &cfg).unwrap();
            t.hop(m, e.sites[0], e.sites[1]).unwrap();
            assert_eq!(t.bosons(), BTreeMap::from([(e.sites[1], m)]));
            assert!(t.hop(m, e.sites[0], e.sites[1]).is_err());
        }
    }

    #[test]
    fn exchange_needs_three_legs() {
        let chain = LatticePatch::chain(3).unwrap();
        assert!(matches!(
            exchange_phase_on(&chain, 1, [0, 2, 0], Color::R),
            Err(Error::Cluster(_))
        ));
    }

    #[test]
    fn regions_are_nested_loops() {
        let (p, x) = monodromy_cluster().unwrap();
        let r = monodromy_regions(&p, x).unwrap();
        assert!(r.len() >= 3);
        assert_eq!(r[0].len(), 12);
    }
}
