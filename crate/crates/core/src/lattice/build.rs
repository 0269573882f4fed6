//! Generation of ruby patches from the underlying honeycomb.
//!
//! Plaquettes sit on the faces of a honeycomb, indexed by triangular
//! lattice coordinates `(i, j)` with center `i·a1 + j·a2`. Each honeycomb
//! vertex becomes a triangle of three spins and each honeycomb edge a pair
//! of links, so every honeycomb face becomes an 18-spin plaquette.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::lattice::{
    Boundary, Color, EffectiveLink, LatticePatch, Link, Plaquette, Triangle, Vertex,
};

const SQRT3: f64 = 1.732_050_807_568_877_2;

pub(crate) type Face = (i64, i64);

/// Honeycomb vertex: `A(i, j)` lies above face `(i, j)`, `B(i, j)` below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Node {
    upper: bool,
    i: i64,
    j: i64,
}

fn face_color((i, j): Face) -> Color {
    Color::from_index((i - j).rem_euclid(3) as usize)
}

fn face_center((i, j): Face) -> [f64; 2] {
    [SQRT3 * (i as f64 + 0.5 * j as f64), 1.5 * j as f64]
}

fn node_position(n: Node) -> [f64; 2] {
    let [x, y] = face_center((n.i, n.j));
    [x, if n.upper { y + 1.0 } else { y - 1.0 }]
}

fn node_faces(n: Node) -> [Face; 3] {
    let (i, j) = (n.i, n.j);
    if n.upper {
        [(i, j), (i, j + 1), (i - 1, j + 1)]
    } else {
        [(i, j), (i, j - 1), (i + 1, j - 1)]
    }
}

/// Corners of a face, counter-clockwise starting at 30°.
fn corners((i, j): Face) -> [Node; 6] {
    let a = |i, j| Node { upper: true, i, j };
    let b = |i, j| Node { upper: false, i, j };
    [b(i, j + 1), a(i, j), b(i - 1, j + 1), a(i, j - 1), b(i, j), a(i + 1, j - 1)]
}

fn upper_neighbors(n: Node) -> [Node; 3] {
    let b = |i, j| Node { upper: false, i, j };
    [b(n.i, n.j + 1), b(n.i - 1, n.j + 1), b(n.i - 1, n.j + 2)]
}

/// Translation-invariant reduction of face coordinates.
trait Frame {
    fn face(&self, f: Face) -> Face;
    fn node(&self, n: Node) -> Node {
        let (i, j) = self.face((n.i, n.j));
        Node { upper: n.upper, i, j }
    }
}

struct Plane;

impl Frame for Plane {
    fn face(&self, f: Face) -> Face {
        f
    }
}

/// Torus spanned by `rows` copies of `(1, 1)` and `cols` copies of
/// `(2, −1)`. Both vectors preserve the face coloring, and the cell they
/// span holds one face of each color.
struct Torus {
    rows: i64,
    cols: i64,
}

impl Frame for Torus {
    fn face(&self, (i, j): Face) -> Face {
        let k = (i - j).rem_euclid(3);
        let v = (i - j - k) / 3;
        let u = (j + v).rem_euclid(self.rows);
        let v = v.rem_euclid(self.cols);
        (u + 2 * v + k, u - v)
    }
}

fn build_with<F: Frame>(
    frame: &F,
    faces: Vec<Face>,
    rows: usize,
    cols: usize,
    boundary: Boundary,
) -> Result<LatticePatch> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut node_index: HashMap<Node, usize> = HashMap::new();
    for &f in &faces {
        for c in corners(f) {
            let c = frame.node(c);
            if let std::collections::hash_map::Entry::Vacant(e) = node_index.entry(c) {
                e.insert(nodes.len());
                nodes.push(c);
            }
        }
    }
    let reduced_faces = |n: Node| -> BTreeSet<Face> {
        node_faces(n).iter().map(|&f| frame.face(f)).collect()
    };

    let mut effective_links = Vec::new();
    for (t, &n) in nodes.iter().enumerate() {
        if !n.upper {
            continue;
        }
        for w in upper_neighbors(n) {
            let w = frame.node(w);
            let Some(&s) = node_index.get(&w) else {
                continue;
            };
            let shared: Vec<Face> = reduced_faces(n)
                .intersection(&reduced_faces(w))
                .copied()
                .collect();
            if shared.len() != 2 || reduced_faces(n).len() != 3 {
                return Err(Error::Construction(format!(
                    "triangles {t} and {s} share {} plaquettes; the torus is too small",
                    shared.len()
                )));
            }
            let color = Color::third(face_color(shared[0]), face_color(shared[1]))
                .ok_or_else(|| Error::Construction("adjacent plaquettes share a color".into()))?;
            effective_links.push(EffectiveLink {
                sites: [t, s],
                color,
            });
        }
    }

    let mut vertices = Vec::with_capacity(3 * nodes.len());
    let mut triangles = Vec::with_capacity(nodes.len());
    let mut links = Vec::new();
    for (t, &n) in nodes.iter().enumerate() {
        let center = node_position(n);
        let mut verts = [0; 3];
        for c in Color::ALL {
            // the c-colored spin points toward the c-colored plaquette
            let f = node_faces(n)
                .into_iter()
                .find(|&f| face_color(f) == c)
                .expect("three distinct colors around a node");
            let fc = face_center(f);
            let d = [fc[0] - center[0], fc[1] - center[1]];
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            let k = 3 * t + c.index();
            verts[c.index()] = k;
            vertices.push(Vertex {
                triangle: t,
                color: c,
                position: [center[0] + 0.3 * d[0] / len, center[1] + 0.3 * d[1] / len],
            });
        }
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            links.push(Link {
                vertices: [verts[a], verts[b]],
                color: Color::B,
            });
        }
        triangles.push(Triangle {
            vertices: verts,
            position: center,
        });
    }
    for el in &effective_links {
        for c in Color::ALL {
            if c == el.color {
                continue;
            }
            let axis = c.link_axis(el.color)?;
            links.push(Link {
                vertices: [3 * el.sites[0] + c.index(), 3 * el.sites[1] + c.index()],
                color: Color::from_axis(axis),
            });
        }
    }

    // every face touched by some triangle; complete when all six corners exist
    let mut touched: BTreeSet<Face> = BTreeSet::new();
    for &n in &nodes {
        touched.extend(reduced_faces(n));
    }
    let mut plaquettes = Vec::new();
    let mut ordered: Vec<Face> = faces.clone();
    ordered.extend(touched.iter().filter(|f| !faces.contains(f)));
    for f in ordered {
        let tri: Option<Vec<usize>> = corners(f)
            .iter()
            .map(|&c| node_index.get(&frame.node(c)).copied())
            .collect();
        let Some(tri) = tri else { continue };
        let distinct: BTreeSet<usize> = tri.iter().copied().collect();
        if distinct.len() != 6 {
            return Err(Error::Construction(format!(
                "plaquette at {f:?} wraps onto itself; the torus is too small"
            )));
        }
        let tri: [usize; 6] = tri.try_into().expect("six corners");
        plaquettes.push(Plaquette::new(face_color(f), tri, &triangles)?);
    }

    Ok(LatticePatch {
        rows,
        cols,
        boundary,
        vertices,
        links,
        triangles,
        plaquettes,
        raw_plaquette_count: touched.len(),
        effective_links,
    })
}

/// Open patch of `rows × cols` complete plaquettes plus the partial
/// plaquettes along its rim.
pub(crate) fn open(rows: usize, cols: usize) -> Result<LatticePatch> {
    let faces = (0..rows as i64)
        .flat_map(|j| (0..cols as i64).map(move |i| (i, j)))
        .collect();
    build_with(&Plane, faces, rows, cols, Boundary::Open)
}

/// Periodic patch of `rows × cols` three-plaquette cells.
pub(crate) fn periodic(rows: usize, cols: usize) -> Result<LatticePatch> {
    if rows < 2 || cols < 2 {
        return Err(Error::Construction(format!(
            "periodic {rows}x{cols}: both dimensions must be at least 2, \
             smaller tori join triangles by more than one edge"
        )));
    }
    let torus = Torus {
        rows: rows as i64,
        cols: cols as i64,
    };
    let mut faces: Vec<Face> = Vec::new();
    for u in 0..rows as i64 {
        for v in 0..cols as i64 {
            for k in 0..3 {
                faces.push(torus.face((u + 2 * v + k, u - v)));
            }
        }
    }
    faces.sort();
    faces.dedup();
    build_with(&torus, faces, rows, cols, Boundary::Periodic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_reduction_is_idempotent_and_color_preserving() {
        let t = Torus { rows: 2, cols: 3 };
        for i in -7..7 {
            for j in -7..7 {
                let f = t.face((i, j));
                assert_eq!(t.face(f), f);
                assert_eq!(face_color(f), face_color((i, j)));
                assert_eq!(t.face((i + 2, j + 2)), f);
                assert_eq!(t.face((i + 6, j - 3)), f);
                assert_ne!(t.face((i + 1, j + 1)), f);
            }
        }
    }

    #[test]
    fn corners_touch_their_face() {
        for f in [(0, 0), (3, -2), (-1, 4)] {
            for c in corners(f) {
                assert!(node_faces(c).contains(&f));
            }
        }
    }

    #[test]
    fn neighbors_share_two_faces() {
        let n = Node { upper: true, i: 2, j: -1 };
        for w in upper_neighbors(n) {
            let a: BTreeSet<Face> = node_faces(n).into_iter().collect();
            let b: BTreeSet<Face> = node_faces(w).into_iter().collect();
            assert_eq!(a.intersection(&b).count(), 2);
        }
    }
}
