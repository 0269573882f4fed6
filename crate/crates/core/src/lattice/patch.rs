use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{build, Color};
use crate::pauli::{Axis, OperatorSum, PauliString};

pub const PATCH_SCHEMA: &str = "tcc.patch/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            _ => Err(Error::Construction(format!("unknown boundary {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl CouplingParams {
    pub fn new(jx: f64, jy: f64, jz: f64) -> Result<Self> {
        let j = CouplingParams { jx, jy, jz };
        j.check()?;
        Ok(j)
    }

    pub fn check(&self) -> Result<()> {
        if ![self.jx, self.jy, self.jz].iter().all(|v| v.is_finite()) {
            return Err(Error::Coupling(format!("non-finite coupling in {self:?}")));
        }
        Ok(())
    }

    pub fn for_axis(&self, a: Axis) -> f64 {
        match a {
            Axis::X => self.jx,
            Axis::Y => self.jy,
            Axis::Z => self.jz,
        }
    }
}

impl Default for CouplingParams {
    fn default() -> Self {
        CouplingParams {
            jx: 1.0,
            jy: 1.0,
            jz: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub triangle: usize,
    pub color: Color,
    pub position: [f64; 2],
}

/// A two-body coupling; its color fixes the axis (r: xx, g: yy, b: zz).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub vertices: [usize; 2],
    pub color: Color,
}

/// Three vertices ordered by color (r, g, b).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [usize; 3],
    pub position: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveLink {
    pub sites: [usize; 2],
    pub color: Color,
}

/// An 18-vertex plaquette with the axis assignments of its three
/// operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plaquette {
    pub color: Color,
    /// Corner triangles, counter-clockwise.
    pub triangles: [usize; 6],
    /// All 18 vertices, corner by corner in (r, g, b) order.
    pub vertices: Vec<usize>,
    /// The inner hexagon: the plaquette-colored vertex of each corner.
    pub inner: [usize; 6],
    pub p1: Vec<(usize, Axis)>,
    pub p2: Vec<(usize, Axis)>,
    pub p3: Vec<(usize, Axis)>,
}

impl Plaquette {
    /// Inner vertices carry x (P1), y (P2) and z (P3). An outer vertex of
    /// color c carries the axis of the links it shares with its neighbor
    /// across the plaquette boundary, the same in P1 and P2.
    pub(crate) fn new(color: Color, triangles: [usize; 6], all: &[Triangle]) -> Result<Self> {
        let mut vertices = Vec::with_capacity(18);
        let mut inner = [0; 6];
        let (mut p1, mut p2, mut p3) = (Vec::new(), Vec::new(), Vec::new());
        for (k, &t) in triangles.iter().enumerate() {
            for c in Color::ALL {
                let v = all[t].vertices[c.index()];
                vertices.push(v);
                if c == color {
                    inner[k] = v;
                    p1.push((v, Axis::X));
                    p2.push((v, Axis::Y));
                    p3.push((v, Axis::Z));
                } else {
                    let a = c.link_axis(color)?;
                    p1.push((v, a));
                    p2.push((v, a));
                }
            }
        }
        Ok(Plaquette {
            color,
            triangles,
            vertices,
            inner,
            p1,
            p2,
            p3,
        })
    }
}

/// A finite piece of the ruby lattice.
///
/// Vertex `3t + c` is the `c`-colored spin of triangle `t`. Links of color
/// b form the triangles; r and g links join neighboring triangles. The
/// triangles are the sites of the effective honeycomb lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticePatch {
    pub(crate) rows: usize,
    pub(crate) cols: usize,
    pub(crate) boundary: Boundary,
    pub(crate) vertices: Vec<Vertex>,
    pub(crate) links: Vec<Link>,
    pub(crate) triangles: Vec<Triangle>,
    /// Complete plaquettes only.
    pub(crate) plaquettes: Vec<Plaquette>,
    /// Plaquettes touched by the patch, complete or not.
    pub(crate) raw_plaquette_count: usize,
    pub(crate) effective_links: Vec<EffectiveLink>,
}

#[derive(Serialize, Deserialize)]
struct PatchDocument {
    schema: String,
    #[serde(flatten)]
    patch: LatticePatch,
}

impl LatticePatch {
    /// Builds and validates a patch.
    ///
    /// Open patches hold `rows × cols` complete plaquettes. Periodic
    /// patches hold `rows × cols` cells of three plaquettes (one per
    /// color) and need both dimensions to be at least 2.
    pub fn build(rows: usize, cols: usize, boundary: Boundary) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Construction(format!(
                "shape {rows}x{cols} must be positive"
            )));
        }
        let patch = match boundary {
            Boundary::Open => build::open(rows, cols)?,
            Boundary::Periodic => build::periodic(rows, cols)?,
        };
        let report = patch.verify()?;
        if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
            return Err(Error::Construction(format!(
                "validation failed: {}: {}",
                bad.name, bad.detail
            )));
        }
        Ok(patch)
    }

    /// Sub-patch on the given triangles (open boundary, renumbered in the
    /// given order). Plaquettes survive only if all six corners are kept.
    pub fn induced(&self, triangles: &[usize]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, &t) in triangles.iter().enumerate() {
            if t >= self.triangles.len() {
                return Err(Error::Index {
                    what: "triangle",
                    index: t,
                    len: self.triangles.len(),
                });
            }
            if map.insert(t, k).is_some() {
                return Err(Error::Construction(format!("triangle {t} listed twice")));
            }
        }
        let vmap = |v: usize| map.get(&(v / 3)).map(|&k| 3 * k + v % 3);
        let vertices = triangles
            .iter()
            .flat_map(|&t| (0..3).map(move |c| 3 * t + c))
            .map(|v| Vertex {
                triangle: map[&(v / 3)],
                ..self.vertices[v].clone()
            })
            .collect();
        let new_triangles: Vec<Triangle> = triangles
            .iter()
            .enumerate()
            .map(|(k, &t)| Triangle {
                vertices: [3 * k, 3 * k + 1, 3 * k + 2],
                position: self.triangles[t].position,
            })
            .collect();
        let mut links: Vec<Link> = self
            .links
            .iter()
            .filter_map(|l| {
                Some(Link {
                    vertices: [vmap(l.vertices[0])?, vmap(l.vertices[1])?],
                    color: l.color,
                })
            })
            .collect();
        links.sort_by_key(|l| (l.color != Color::B, l.vertices));
        let effective_links = self
            .effective_links
            .iter()
            .filter_map(|e| {
                Some(EffectiveLink {
                    sites: [*map.get(&e.sites[0])?, *map.get(&e.sites[1])?],
                    color: e.color,
                })
            })
            .collect();
        let mut plaquettes = Vec::new();
        let mut touched = BTreeSet::new();
        for (k, p) in self.plaquettes.iter().enumerate() {
            let kept: Option<Vec<usize>> = p.triangles.iter().map(|t| map.get(t).copied()).collect();
            if p.triangles.iter().any(|t| map.contains_key(t)) {
                touched.insert(k);
            }
            if let Some(kept) = kept {
                let kept: [usize; 6] = kept.try_into().expect("six corners");
                plaquettes.push(Plaquette::new(p.color, kept, &new_triangles)?);
            }
        }
        Ok(LatticePatch {
            rows: 0,
            cols: 0,
            boundary: Boundary::Open,
            vertices,
            links,
            triangles: new_triangles,
            plaquettes,
            raw_plaquette_count: touched.len(),
            effective_links,
        })
    }

    /// A path of `n` connected triangles taken from an open patch,
    /// starting at a fully coordinated site.
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Construction("a chain needs at least one triangle".into()));
        }
        let parent = LatticePatch::build(4, 4, Boundary::Open)?;
        let start = (0..parent.num_sites())
            .find(|&s| parent.site_neighbors(s).len() == 3)
            .ok_or_else(|| Error::Construction("no interior site".into()))?;
        let mut path = vec![start];
        while path.len() < n {
            let last = *path.last().expect("nonempty");
            let next = parent
                .site_neighbors(last)
                .into_iter()
                .map(|(s, _)| s)
                .filter(|s| !path.contains(s))
                .max_by_key(|&s| parent.site_neighbors(s).len() * 1000 + s)
                .ok_or_else(|| Error::Construction(format!("chain of {n} does not fit")))?;
            path.push(next);
        }
        parent.induced(&path)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// Number of triangles, i.e. effective sites.
    pub fn num_sites(&self) -> usize {
        self.triangles.len()
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn raw_plaquette_count(&self) -> usize {
        self.raw_plaquette_count
    }

    pub fn effective_links(&self) -> &[EffectiveLink] {
        &self.effective_links
    }

    /// Neighbors of an effective site with the connecting link colors.
    pub fn site_neighbors(&self, site: usize) -> Vec<(usize, Color)> {
        let mut out: Vec<(usize, Color)> = self
            .effective_links
            .iter()
            .filter_map(|e| match e.sites {
                [a, b] if a == site => Some((b, e.color)),
                [a, b] if b == site => Some((a, e.color)),
                _ => None,
            })
            .collect();
        out.sort();
        out
    }

    pub fn effective_link_color(&self, a: usize, b: usize) -> Option<Color> {
        self.effective_links
            .iter()
            .find(|e| e.sites == [a, b] || e.sites == [b, a])
            .map(|e| e.color)
    }

    pub fn site_position(&self, site: usize) -> [f64; 2] {
        self.triangles[site].position
    }

    /// Links incident to a vertex.
    pub fn vertex_links(&self, v: usize) -> Vec<Link> {
        self.links
            .iter()
            .filter(|l| l.vertices.contains(&v))
            .copied()
            .collect()
    }

    /// The two-body term `σ^a σ^a` of a link.
    pub fn link_string(&self, link: &Link) -> Result<PauliString> {
        let a = link.color.axis();
        PauliString::from_axes(
            self.vertex_count(),
            [(link.vertices[0], a), (link.vertices[1], a)],
        )
    }

    pub fn link_strings(&self) -> Result<Vec<PauliString>> {
        self.links.iter().map(|l| self.link_string(l)).collect()
    }

    /// `H = −Σ J_x σ^xσ^x − Σ J_y σ^yσ^y − Σ J_z σ^zσ^z` over r, g and b
    /// links. Links whose coupling vanishes are omitted.
    pub fn hamiltonian(&self, j: &CouplingParams) -> Result<OperatorSum> {
        j.check()?;
        let mut h = OperatorSum::zero(self.vertex_count());
        for l in &self.links {
            let c = j.for_axis(l.color.axis());
            if c != 0.0 {
                h.push_real(-c, self.link_string(l)?)?;
            }
        }
        Ok(h)
    }

    fn plaquette(&self, index: usize) -> Result<&Plaquette> {
        self.plaquettes.get(index).ok_or(Error::Index {
            what: "plaquette",
            index,
            len: self.plaquettes.len(),
        })
    }

    /// `(P1, P2, P3)` of a complete plaquette.
    pub fn plaquette_operators(&self, index: usize) -> Result<[PauliString; 3]> {
        let p = self.plaquette(index)?;
        let n = self.vertex_count();
        Ok([
            PauliString::from_axes(n, p.p1.iter().copied())?,
            PauliString::from_axes(n, p.p2.iter().copied())?,
            PauliString::from_axes(n, p.p3.iter().copied())?,
        ])
    }

    pub fn all_plaquette_operators(&self) -> Result<Vec<PauliString>> {
        let mut out = Vec::with_capacity(3 * self.plaquettes.len());
        for k in 0..self.plaquettes.len() {
            out.extend(self.plaquette_operators(k)?);
        }
        Ok(out)
    }

    /// String operator along a walk of linked vertices.
    ///
    /// Every vertex of the walk gets the axis of its links that leave the
    /// walk (red → x, green → y, blue → z). A vertex with no outgoing link
    /// takes the axis of the string color. A vertex whose outgoing links
    /// disagree is an error.
    pub fn string_operator(&self, path: &[usize], color: Color) -> Result<PauliString> {
        let n = self.vertex_count();
        for &v in path {
            if v >= n {
                return Err(Error::Path(format!("vertex {v} outside patch of {n}")));
            }
        }
        let linked = |a: usize, b: usize| {
            self.links
                .iter()
                .any(|l| l.vertices == [a, b] || l.vertices == [b, a])
        };
        for w in path.windows(2) {
            if w[0] != w[1] && !linked(w[0], w[1]) {
                return Err(Error::Path(format!(
                    "vertices {} and {} are not linked",
                    w[0], w[1]
                )));
            }
        }
        let support: BTreeSet<usize> = path.iter().copied().collect();
        let mut axes = Vec::with_capacity(support.len());
        for &v in &support {
            let out: BTreeSet<Color> = self
                .vertex_links(v)
                .iter()
                .filter(|l| l.vertices.iter().any(|u| !support.contains(u)))
                .map(|l| l.color)
                .collect();
            let axis = match out.len() {
                0 => color.axis(),
                1 => out.iter().next().expect("one color").axis(),
                _ => {
                    return Err(Error::Path(format!(
                        "vertex {v} has outgoing links of several colors"
                    )))
                }
            };
            axes.push((v, axis));
        }
        PauliString::from_axes(n, axes)
    }

    /// A closed walk through every vertex of `support` along links inside
    /// it (depth-first Euler tour); `None` if the support is disconnected.
    pub fn closed_walk(&self, support: &[usize]) -> Option<Vec<usize>> {
        let set: BTreeSet<usize> = support.iter().copied().collect();
        let start = *set.iter().next()?;
        let mut seen = BTreeSet::from([start]);
        let mut walk = vec![start];
        fn visit(
            p: &LatticePatch,
            v: usize,
            set: &BTreeSet<usize>,
            seen: &mut BTreeSet<usize>,
            walk: &mut Vec<usize>,
        ) {
            let mut nb: Vec<usize> = p
                .vertex_links(v)
                .iter()
                .map(|l| if l.vertices[0] == v { l.vertices[1] } else { l.vertices[0] })
                .filter(|u| set.contains(u))
                .collect();
            nb.sort();
            for u in nb {
                if seen.insert(u) {
                    walk.push(u);
                    visit(p, u, set, seen, walk);
                    walk.push(v);
                }
            }
        }
        visit(self, start, &set, &mut seen, &mut walk);
        (seen.len() == set.len()).then_some(walk)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PatchDocument {
            schema: PATCH_SCHEMA.to_string(),
            patch: self.clone(),
        })?)
    }

    /// Parses a patch document. Only index ranges are checked; run
    /// [`verify`](Self::verify) for the full invariant suite.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PatchDocument = serde_json::from_str(s)?;
        if doc.schema != PATCH_SCHEMA {
            return Err(Error::Construction(format!(
                "unsupported schema {:?}",
                doc.schema
            )));
        }
        doc.patch.check_indices()?;
        Ok(doc.patch)
    }

    fn check_indices(&self) -> Result<()> {
        let nv = self.vertices.len();
        let nt = self.triangles.len();
        let bad = |what: &'static str, index: usize, len: usize| {
            Err(Error::Index { what, index, len })
        };
        for v in &self.vertices {
            if v.triangle >= nt {
                return bad("triangle", v.triangle, nt);
            }
        }
        for l in &self.links {
            for &v in &l.vertices {
                if v >= nv {
                    return bad("vertex", v, nv);
                }
            }
        }
        for t in &self.triangles {
            for &v in &t.vertices {
                if v >= nv {
                    return bad("vertex", v, nv);
                }
            }
        }
        for e in &self.effective_links {
            for &s in &e.sites {
                if s >= nt {
                    return bad("triangle", s, nt);
                }
            }
        }
        for p in &self.plaquettes {
            for &t in &p.triangles {
                if t >= nt {
                    return bad("triangle", t, nt);
                }
            }
            for &(v, _) in p.p1.iter().chain(&p.p2).chain(&p.p3) {
                if v >= nv {
                    return bad("vertex", v, nv);
                }
            }
            for &v in p.vertices.iter().chain(&p.inner) {
                if v >= nv {
                    return bad("vertex", v, nv);
                }
            }
        }
        Ok(())
    }
}
