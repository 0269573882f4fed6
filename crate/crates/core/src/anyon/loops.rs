//! Closed site paths on the effective honeycomb and their enclosures.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::LatticePatch;

/// Direction of the parity ray, chosen to miss lattice directions.
const RAY_ANGLE: f64 = 0.1234;

/// Most sites whose enclosure parity [`find_loop`] can constrain.
pub const MAX_TRACKED: usize = 20;

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// Does segment `a → b` cross the parity ray leaving `p`?
fn ray_crosses(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let d = [RAY_ANGLE.cos(), RAY_ANGLE.sin()];
    let e = sub(b, a);
    let den = cross(d, e);
    if den.abs() < 1e-12 {
        return false;
    }
    let w = sub(a, p);
    let s = cross(w, e) / den;
    let t = cross(w, d) / den;
    s > 0.0 && (0.0..1.0).contains(&t)
}

/// Parity of the number of times a closed path crosses the ray from `site`.
pub fn encloses(patch: &LatticePatch, cycle: &[usize], site: usize) -> bool {
    let p = patch.site_position(site);
    let n = cycle.len();
    let mut parity = false;
    for k in 0..n {
        let (a, b) = (cycle[k], cycle[(k + 1) % n]);
        if a != b && ray_crosses(p, patch.site_position(a), patch.site_position(b)) {
            parity = !parity;
        }
    }
    parity
}

/// Winding number of a closed path around a site, from the summed angle.
pub fn winding_number(patch: &LatticePatch, cycle: &[usize], site: usize) -> i64 {
    let p = patch.site_position(site);
    let n = cycle.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = sub(patch.site_position(cycle[k]), p);
        let b = sub(patch.site_position(cycle[(k + 1) % n]), p);
        total += cross(a, b).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    (total / std::f64::consts::TAU).round() as i64
}

/// Shortest closed walk from `start` back to `start` that encloses every
/// site of `inside` an odd number of times, every site of `outside` an
/// even number of times, never enters `obstacles`, and passes the
/// `waypoints` in order, visiting `start` only at its ends. The returned
/// path repeats `start` at the end.
pub fn find_loop(
    patch: &LatticePatch,
    start: usize,
    inside: &[usize],
    outside: &[usize],
    obstacles: &[usize],
    waypoints: &[usize],
) -> Result<Vec<usize>> {
    let tracked: Vec<usize> = inside.iter().chain(outside).copied().collect();
    if tracked.len() > MAX_TRACKED {
        return Err(Error::Capacity {
            what: "tracked sites for a loop search",
            size: tracked.len(),
            limit: MAX_TRACKED,
        });
    }
    let n = patch.num_sites();
    for &s in tracked.iter().chain(obstacles).chain(waypoints).chain([&start]) {
        if s >= n {
            return Err(Error::Path(format!("site {s} outside patch of {n}")));
        }
    }
    if tracked.contains(&start) {
        return Err(Error::Path(format!("loop start {start} is itself tracked")));
    }
    let target: u64 = (0..inside.len()).fold(0, |m, k| m | 1 << k);
    let blocked: Vec<bool> = (0..n)
        .map(|s| s != start && (obstacles.contains(&s) || tracked.contains(&s)))
        .collect();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|s| patch.site_neighbors(s).into_iter().map(|x| x.0).collect())
        .collect();
    let mut masks: HashMap<(usize, usize), u64> = HashMap::new();
    let mut mask = |a: usize, b: usize| -> u64 {
        *masks.entry((a, b)).or_insert_with(|| {
            let (pa, pb) = (patch.site_position(a), patch.site_position(b));
            tracked.iter().enumerate().fold(0, |m, (k, &t)| {
                if ray_crosses(patch.site_position(t), pa, pb) {
                    m | 1 << k
                } else {
                    m
                }
            })
        })
    };

    type State = (usize, u64, usize);
    let mut prev: BTreeMap<State, State> = BTreeMap::new();
    let begin: State = (start, 0, 0);
    let mut queue = VecDeque::from([begin]);
    let mut goal = None;
    'search: while let Some(st @ (u, bits, wp)) = queue.pop_front() {
        for &v in &neighbors[u] {
            if blocked[v] {
                continue;
            }
            let nb = bits ^ mask(u, v);
            let nw = if wp < waypoints.len() && v == waypoints[wp] {
                wp + 1
            } else {
                wp
            };
            let next = (v, nb, nw);
            if v == start {
                if nb == target && nw == waypoints.len() {
                    prev.insert(next, st);
                    goal = Some(next);
                    break 'search;
                }
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(next) {
                e.insert(st);
                queue.push_back(next);
            }
        }
    }
    let goal = goal.ok_or_else(|| {
        Error::Path(format!(
            "no loop from site {start} enclosing {inside:?} and avoiding {outside:?}"
        ))
    })?;
    let mut path = vec![goal.0];
    let mut cur = goal;
    while let Some(&p) = prev.get(&cur) {
        path.push(p.0);
        if p == begin {
            break;
        }
        cur = p;
    }
    path.reverse();
    Ok(path)
}

/// Boundary cycle of a union of complete plaquettes, as a site cycle
/// without the repeated endpoint.
pub fn face_boundary(patch: &LatticePatch, plaquettes: &[usize]) -> Result<Vec<usize>> {
    let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &k in plaquettes {
        let p = patch.plaquettes().get(k).ok_or(Error::Index {
            what: "plaquette",
            index: k,
            len: patch.plaquettes().len(),
        })?;
        for i in 0..6 {
            let (a, b) = (p.triangles[i], p.triangles[(i + 1) % 6]);
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let edges: Vec<(usize, usize)> = count
        .into_iter()
        .filter(|&(_, c)| c == 1)
        .map(|(e, _)| e)
        .collect();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if edges.is_empty() || adj.values().any(|v| v.len() != 2) {
        return Err(Error::Path("plaquette union has no simple boundary".into()));
    }
    let start = edges[0].0;
    let mut cycle = vec![start];
    let (mut prev, mut cur) = (start, adj[&start][0]);
    while cur != start {
        cycle.push(cur);
        let next = adj[&cur].iter().copied().find(|&w| w != prev).expect("degree two");
        prev = cur;
        cur = next;
    }
    if cycle.len() != edges.len() {
        return Err(Error::Path("plaquette union boundary is not connected".into()));
    }
    Ok(cycle)
}

/// The three complete plaquettes around a site, if present.
pub fn plaquettes_around(patch: &LatticePatch, site: usize) -> Vec<usize> {
    patch
        .plaquettes()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.triangles.contains(&site))
        .map(|(k, _)| k)
        .collect()
}

/// Shortest site path from `a` to `b` avoiding `blocked` (endpoints
/// allowed).
pub fn shortest_path(
    patch: &LatticePatch,
    a: usize,
    b: usize,
    blocked: &[usize],
) -> Result<Vec<usize>> {
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    prev.insert(a, a);
    while let Some(u) = queue.pop_front() {
        if u == b {
            break;
        }
        for (v, _) in patch.site_neighbors(u) {
            if !prev.contains_key(&v) && (v == b || !blocked.contains(&v)) {
                prev.insert(v, u);
                queue.push_back(v);
            }
        }
    }
    if !prev.contains_key(&b) {
        return Err(Error::Path(format!("no path from site {a} to {b}")));
    }
    let mut path = vec![b];
    while *path.last().expect("nonempty") != a {
        path.push(prev[path.last().expect("nonempty")]);
    }
    path.reverse();
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;

    fn center(p: &LatticePatch) -> usize {
        (0..p.num_sites())
            .find(|&s| plaquettes_around(p, s).len() == 3 && {
                let pos = p.site_position(s);
                pos[0] > 4.0 && pos[1] > 3.0
            })
            .unwrap()
    }

    #[test]
    fn three_face_boundary_is_a_twelve_cycle() {
        let p = LatticePatch::build(4, 4, Boundary::Open).unwrap();
        let x = center(&p);
        let cyc = face_boundary(&p, &plaquettes_around(&p, x)).unwrap();
        assert_eq!(cyc.len(), 12);
        assert!(!cyc.contains(&x));
        assert!(encloses(&p, &cyc, x));
        assert_eq!(winding_number(&p, &cyc, x).abs(), 1);
    }

    #[test]
    fn found_loops_enclose_what_was_asked() {
        let p = LatticePatch::build(5, 5, Boundary::Open).unwrap();
        let x = center(&p);
        let nb: Vec<usize> = p.site_neighbors(x).into_iter().map(|n| n.0).collect();
        let start = p.site_neighbors(nb[0]).into_iter().map(|n| n.0).find(|&s| s != x).unwrap();
        let far = shortest_path(&p, x, p.num_sites() - 1, &[]).unwrap()[3];
        let path = find_loop(&p, start, &[x], &[far], &[], &[]).unwrap();
        assert_eq!(path.first(), path.last());
        let cyc = &path[..path.len() - 1];
        assert!(encloses(&p, cyc, x));
        assert!(!encloses(&p, cyc, far));
        for w in path.windows(2) {
            assert!(p.effective_link_color(w[0], w[1]).is_some());
        }
    }
}
