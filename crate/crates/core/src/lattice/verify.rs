use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{Boundary, Color, LatticePatch};
use crate::pauli::{symplectic_dependencies, symplectic_rank, PauliString, Phase};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, failures: Vec<String>, ok: String) -> Check {
        Check {
            name: name.to_string(),
            passed: failures.is_empty(),
            detail: match failures.first() {
                None => ok,
                Some(first) if failures.len() == 1 => first.clone(),
                Some(first) => format!("{first} (and {} more)", failures.len() - 1),
            },
        }
    }
}

/// A plaquette operator named by plaquette index and operator number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorRef {
    pub plaquette: usize,
    pub operator: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub generators: usize,
    pub plaquettes: usize,
    pub rank: usize,
    /// `2 × plaquettes − rank`: relations beyond `P1P2P3 = −1`.
    pub global_dependencies: usize,
    /// Subsets of `{P1, P2}` operators multiplying to the identity.
    pub dependency_basis: Vec<Vec<OperatorRef>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub boundary: Boundary,
    pub vertex_count: usize,
    pub triangle_count: usize,
    pub link_count: usize,
    pub complete_plaquettes: usize,
    pub raw_plaquettes: usize,
    pub checks: Vec<Check>,
    pub rank: RankReport,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

const OPS: [&str; 3] = ["P1", "P2", "P3"];

impl LatticePatch {
    /// Runs every structural invariant and the plaquette algebra.
    pub fn verify(&self) -> Result<AlgebraReport> {
        let mut checks = vec![
            self.check_triangles(),
            self.check_degrees(),
            self.check_effective(),
            self.check_coloring(),
        ];
        if self.boundary == Boundary::Periodic {
            let (p, s) = (self.plaquettes.len(), self.num_sites());
            let f = if 2 * p == s {
                vec![]
            } else {
                vec![format!("{p} plaquettes for {s} triangles")]
            };
            checks.push(Check::new(
                "plaquette count",
                f,
                format!("{p} plaquettes = {s}/2"),
            ));
        }
        checks.push(self.check_plaquette_shape());

        let ops = self.all_plaquette_operators()?;
        let n = self.vertex_count();
        let id = PauliString::identity(n);
        let minus_id = id.clone().with_phase(Phase::MINUS_ONE);

        let mut sq = Vec::new();
        let mut prod = Vec::new();
        for (k, trio) in ops.chunks(3).enumerate() {
            for (i, p) in trio.iter().enumerate() {
                if p.multiply(p)? != id {
                    sq.push(format!("plaquette {k}: {}^2 != +I", OPS[i]));
                }
            }
            if trio[0].multiply(&trio[1])?.multiply(&trio[2])? != minus_id {
                prod.push(format!("plaquette {k}: P1 P2 P3 != -I"));
            }
        }
        checks.push(Check::new("P_i^2 = I", sq, "holds on every plaquette".into()));
        checks.push(Check::new(
            "P1 P2 P3 = -I",
            prod,
            "holds on every plaquette".into(),
        ));

        let mut mutual = Vec::new();
        for a in 0..ops.len() {
            for b in a + 1..ops.len() {
                if !ops[a].commutes(&ops[b])? {
                    mutual.push(format!(
                        "{} of plaquette {} and {} of plaquette {} anticommute",
                        OPS[a % 3],
                        a / 3,
                        OPS[b % 3],
                        b / 3
                    ));
                }
            }
        }
        checks.push(Check::new(
            "[P_i, P_j] = 0",
            mutual,
            format!("{} operators commute pairwise", ops.len()),
        ));

        let links = self.link_strings()?;
        let mut with_h = Vec::new();
        for (k, p) in ops.iter().enumerate() {
            for (li, l) in links.iter().enumerate() {
                if !p.commutes(l)? {
                    let lk = &self.links[li];
                    with_h.push(format!(
                        "{} of plaquette {} anticommutes with {}-link {:?}",
                        OPS[k % 3],
                        k / 3,
                        lk.color,
                        lk.vertices
                    ));
                }
            }
        }
        checks.push(Check::new(
            "[P_i, H] = 0",
            with_h,
            format!("every operator commutes with all {} link terms", links.len()),
        ));

        let rank = self.rank_report(&ops)?;
        Ok(AlgebraReport {
            boundary: self.boundary,
            vertex_count: n,
            triangle_count: self.num_sites(),
            link_count: self.links.len(),
            complete_plaquettes: self.plaquettes.len(),
            raw_plaquettes: self.raw_plaquette_count,
            checks,
            rank,
        })
    }

    fn rank_report(&self, ops: &[PauliString]) -> Result<RankReport> {
        let p = self.plaquettes.len();
        let rank = symplectic_rank(ops)?;
        let pairs: Vec<PauliString> = ops
            .chunks(3)
            .flat_map(|t| [t[0].clone(), t[1].clone()])
            .collect();
        let dependency_basis = symplectic_dependencies(&pairs)?
            .into_iter()
            .map(|d| {
                d.into_iter()
                    .map(|k| OperatorRef {
                        plaquette: k / 2,
                        operator: (k % 2 + 1) as u8,
                    })
                    .collect()
            })
            .collect();
        Ok(RankReport {
            generators: ops.len(),
            plaquettes: p,
            rank,
            global_dependencies: 2 * p - rank.min(2 * p),
            dependency_basis,
        })
    }

    fn check_triangles(&self) -> Check {
        let mut f = Vec::new();
        let mut owner = vec![None; self.vertex_count()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for (c, &v) in tri.vertices.iter().enumerate() {
                if let Some(o) = owner[v] {
                    f.push(format!("vertex {v} in triangles {o} and {t}"));
                }
                owner[v] = Some(t);
                let vx = &self.vertices[v];
                if vx.triangle != t || vx.color.index() != c {
                    f.push(format!("vertex {v} mislabeled in triangle {t}"));
                }
            }
            for (a, b) in [(0, 1), (1, 2), (0, 2)] {
                let (u, w) = (tri.vertices[a], tri.vertices[b]);
                let n = self
                    .links
                    .iter()
                    .filter(|l| {
                        (l.vertices == [u, w] || l.vertices == [w, u]) && l.color == Color::B
                    })
                    .count();
                if n != 1 {
                    f.push(format!("triangle {t} has {n} b-links between {u} and {w}"));
                }
            }
        }
        for (v, o) in owner.iter().enumerate() {
            if o.is_none() {
                f.push(format!("vertex {v} in no triangle"));
            }
        }
        let b_links = self.links.iter().filter(|l| l.color == Color::B).count();
        if b_links != 3 * self.num_sites() {
            f.push(format!(
                "{b_links} b-links for {} triangles",
                self.num_sites()
            ));
        }
        Check::new(
            "triangle cover",
            f,
            format!("{} disjoint triangles cover all vertices", self.num_sites()),
        )
    }

    fn check_degrees(&self) -> Check {
        let mut f = Vec::new();
        let mut deg = vec![0usize; self.vertex_count()];
        for l in &self.links {
            if l.vertices[0] == l.vertices[1] {
                f.push(format!("self-link at vertex {}", l.vertices[0]));
            }
            for &v in &l.vertices {
                deg[v] += 1;
            }
        }
        for (v, &d) in deg.iter().enumerate() {
            let site = self.vertices[v].triangle;
            let interior = self.site_neighbors(site).len() == 3;
            if d > 4 || (interior && d != 4) {
                f.push(format!("vertex {v} has degree {d}"));
            }
        }
        Check::new("vertex degree", f, "interior vertices are four-valent".into())
    }

    fn check_effective(&self) -> Check {
        let mut f = Vec::new();
        let mut pairs = BTreeSet::new();
        for e in &self.effective_links {
            let [a, b] = e.sites;
            if a == b || !pairs.insert((a.min(b), a.max(b))) {
                f.push(format!("repeated or degenerate effective link {a}-{b}"));
            }
            // the two microscopic links across it
            let mut found = BTreeMap::new();
            for l in &self.links {
                let [u, w] = l.vertices;
                let (tu, tw) = (self.vertices[u].triangle, self.vertices[w].triangle);
                if (tu, tw) == (a, b) || (tu, tw) == (b, a) {
                    found.insert(self.vertices[u].color, (self.vertices[w].color, l.color));
                }
            }
            for c in Color::ALL {
                let want = c.link_axis(e.color).ok().map(Color::from_axis);
                match (found.get(&c), want) {
                    (None, None) => {}
                    (Some(&(cw, lc)), Some(w)) if cw == c && lc == w => {}
                    _ => f.push(format!(
                        "effective {} link {a}-{b}: wrong {c}-vertex link",
                        e.color
                    )),
                }
            }
        }
        for s in 0..self.num_sites() {
            let nb = self.site_neighbors(s);
            let colors: BTreeSet<Color> = nb.iter().map(|x| x.1).collect();
            if nb.len() > 3 || colors.len() != nb.len() {
                f.push(format!("site {s}: effective links {nb:?}"));
            }
        }
        Check::new(
            "effective honeycomb",
            f,
            "sites have at most three links of distinct colors".into(),
        )
    }

    fn check_coloring(&self) -> Check {
        let mut f = Vec::new();
        let mut edge_owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (k, p) in self.plaquettes.iter().enumerate() {
            for i in 0..6 {
                let (a, b) = (p.triangles[i], p.triangles[(i + 1) % 6]);
                match self.effective_link_color(a, b) {
                    None => f.push(format!("plaquette {k}: corners {a}, {b} not linked")),
                    Some(c) if c == p.color => {
                        f.push(format!("plaquette {k}: boundary link has its own color"))
                    }
                    _ => {}
                }
                if let Some(&o) = edge_owner.get(&(a.min(b), a.max(b))) {
                    if self.plaquettes[o].color == p.color {
                        f.push(format!("adjacent plaquettes {o} and {k} share color {}", p.color));
                    }
                }
                edge_owner.insert((a.min(b), a.max(b)), k);
            }
        }
        Check::new(
            "face 3-coloring",
            f,
            "adjacent plaquettes differ in color".into(),
        )
    }

    fn check_plaquette_shape(&self) -> Check {
        let mut f = Vec::new();
        for (k, p) in self.plaquettes.iter().enumerate() {
            let set: BTreeSet<usize> = p.vertices.iter().copied().collect();
            let tri: BTreeSet<usize> = p.triangles.iter().copied().collect();
            if set.len() != 18 || tri.len() != 6 {
                f.push(format!("plaquette {k} has {} vertices", set.len()));
            }
            let w = |a: &[(usize, crate::pauli::Axis)]| {
                a.iter().map(|x| x.0).collect::<BTreeSet<_>>().len()
            };
            if w(&p.p1) != 18 || w(&p.p2) != 18 || w(&p.p3) != 6 {
                f.push(format!("plaquette {k}: operator weights off"));
            }
            for &v in &p.inner {
                if self.vertices[v].color != p.color {
                    f.push(format!("plaquette {k}: inner vertex {v} has wrong color"));
                }
            }
        }
        Check::new(
            "plaquette shape",
            f,
            "18 vertices around a six-vertex inner hexagon".into(),
        )
    }
}
