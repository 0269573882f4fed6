//! Exact spectra of Hermitian operators given column by column.
//!
//! Operators in this crate map each basis state to a handful of basis
//! states, so the matrix is assembled sparsely, split into connected
//! components (invariant subspaces) and each block is diagonalized densely.
//! Above the dense limit only extremal eigenvalues are available, through a
//! matrix-free Lanczos iteration.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest Hilbert-space dimension for which the full spectrum is computed.
pub const FULL_SPECTRUM_LIMIT: usize = 1 << 14;
/// Largest dimension accepted by the extremal (Lanczos) solver.
pub const EXTREMAL_LIMIT: usize = 1 << 20;
/// Default absolute tolerance used to cluster degenerate eigenvalues.
pub const DEFAULT_CLUSTER_TOLERANCE: f64 = 1e-9;

/// A linear operator on `C^dim` exposed through its columns.
pub trait LinearMap: Sync {
    fn dim(&self) -> usize;

    /// Appends the nonzero entries `(row, value)` of column `col` to `out`.
    /// Entries may repeat a row; they are summed.
    fn column(&self, col: usize, out: &mut Vec<(usize, Complex64)>);

    fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        let mut buf = Vec::new();
        for (j, &a) in v.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            buf.clear();
            self.column(j, &mut buf);
            for &(i, h) in &buf {
                out[i] += h * a;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Distinct eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub degeneracies: Vec<usize>,
    pub tolerance: f64,
}

impl SpectrumReport {
    pub fn from_sorted(values: &[f64], tolerance: f64) -> Self {
        let mut eigenvalues = Vec::new();
        let mut degeneracies = Vec::new();
        let mut start = 0;
        for k in 1..=values.len() {
            if k == values.len() || values[k] - values[k - 1] > tolerance {
                let cluster = &values[start..k];
                eigenvalues.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
                degeneracies.push(cluster.len());
                start = k;
            }
        }
        SpectrumReport {
            eigenvalues,
            degeneracies,
            tolerance,
        }
    }

    pub fn dimension(&self) -> usize {
        self.degeneracies.iter().sum()
    }

    pub fn ground_energy(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    /// Eigenvalues repeated according to their degeneracy.
    pub fn expanded(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.degeneracies)
            .flat_map(|(&e, &d)| std::iter::repeat_n(e, d))
            .collect()
    }

    /// Largest deviation between the expanded spectra of two reports;
    /// `None` if the dimensions differ.
    pub fn max_deviation(&self, other: &SpectrumReport) -> Option<f64> {
        let (a, b) = (self.expanded(), other.expanded());
        if a.len() != b.len() {
            return None;
        }
        Some(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    }
}

/// One eigenpair with the eigenvector embedded in the full space.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<Complex64>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Blocks {
    columns: Vec<Vec<(usize, Complex64)>>,
    blocks: Vec<Vec<usize>>,
}

fn blocks_of<M: LinearMap + ?Sized>(op: &M) -> Blocks {
    let dim = op.dim();
    let mut uf = UnionFind((0..dim).collect());
    let mut columns = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut col = Vec::new();
        op.column(j, &mut col);
        for &(i, v) in &col {
            if v.norm() > 0.0 {
                uf.union(i, j);
            }
        }
        columns.push(col);
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for j in 0..dim {
        let r = uf.find(j);
        by_root[r].push(j);
    }
    Blocks {
        columns,
        blocks: by_root.into_iter().filter(|b| !b.is_empty()).collect(),
    }
}

fn dense_block(blocks: &Blocks, block: &[usize], local: &[usize]) -> (DMatrix<Complex64>, bool) {
    let m = block.len();
    let mut h = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    let mut real = true;
    for (cj, &j) in block.iter().enumerate() {
        for &(i, v) in &blocks.columns[j] {
            h[(local[i], cj)] += v;
        }
    }
    for v in h.iter() {
        if v.im != 0.0 {
            real = false;
        }
    }
    (h, real)
}

fn check_hermitian<M: LinearMap + ?Sized>(op: &M, blocks: &Blocks) -> Result<()> {
    let _ = op;
    let mut scale: f64 = 0.0;
    for col in &blocks.columns {
        for &(_, v) in col {
            scale = scale.max(v.norm());
        }
    }
    let tol = 1e-12 * scale.max(1.0);
    let mut acc: std::collections::HashMap<(usize, usize), Complex64> = Default::default();
    for (j, col) in blocks.columns.iter().enumerate() {
        for &(i, v) in col {
            *acc.entry((i, j)).or_default() += v;
        }
    }
    for (&(i, j), &v) in &acc {
        let w = acc.get(&(j, i)).copied().unwrap_or_default();
        if (v - w.conj()).norm() > tol {
            return Err(Error::NotHermitian);
        }
    }
    Ok(())
}

fn eigen_block(h: DMatrix<Complex64>, real: bool) -> (Vec<f64>, DMatrix<Complex64>) {
    if real {
        let hr = h.map(|c| c.re);
        let eig = hr.symmetric_eigen();
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|r| Complex64::new(r, 0.0)),
        )
    } else {
        let eig = h.symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    }
}

fn local_index(dim: usize, block: &[usize], local: &mut [usize]) {
    debug_assert_eq!(local.len(), dim);
    for (k, &j) in block.iter().enumerate() {
        local[j] = k;
    }
}

/// Full spectrum with degeneracy clustering.
pub fn full_spectrum<M: LinearMap + ?Sized>(op: &M, tolerance: f64) -> Result<SpectrumReport> {
    let dim = op.dim();
    if dim > FULL_SPECTRUM_LIMIT {
        return Err(Error::Capacity {
            what: "dimension for a full spectrum",
            size: dim,
            limit: FULL_SPECTRUM_LIMIT,
        });
    }
    let blocks = blocks_of(op);
    check_hermitian(op, &blocks)?;
    let mut local = vec![0usize; dim];
    let mut values = Vec::with_capacity(dim);
    for block in &blocks.blocks {
        local_index(dim, block, &mut local);
        let (h, real) = dense_block(&blocks, block, &local);
        values.extend(eigen_block(h, real).0);
    }
    values.sort_by(f64::total_cmp);
    Ok(SpectrumReport::from_sorted(&values, tolerance))
}

/// All eigenpairs, sorted by eigenvalue.
pub fn eigenpairs<M: LinearMap + ?Sized>(op: &M) -> Result<Vec<Eigenpair>> {
    let dim = op.dim();
    if dim > FULL_SPECTRUM_LIMIT {
        return Err(Error::Capacity {
            what: "dimension for eigenpairs",
            size: dim,
            limit: FULL_SPECTRUM_LIMIT,
        });
    }
    let blocks = blocks_of(op);
    check_hermitian(op, &blocks)?;
    let mut local = vec![0usize; dim];
    let mut pairs = Vec::with_capacity(dim);
    for block in &blocks.blocks {
        local_index(dim, block, &mut local);
        let (h, real) = dense_block(&blocks, block, &local);
        let (vals, vecs) = eigen_block(h, real);
        for (k, &value) in vals.iter().enumerate() {
            let mut vector = vec![Complex64::new(0.0, 0.0); dim];
            for (r, &j) in block.iter().enumerate() {
                vector[j] = vecs[(r, k)];
            }
            pairs.push(Eigenpair { value, vector });
        }
    }
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}

/// Frobenius-style bound `max_j Σ_i |H_ij|` used to scale residual checks.
pub fn column_norm_bound<M: LinearMap + ?Sized>(op: &M) -> f64 {
    let mut buf = Vec::new();
    let mut best: f64 = 0.0;
    for j in 0..op.dim() {
        buf.clear();
        op.column(j, &mut buf);
        best = best.max(buf.iter().map(|(_, v)| v.norm()).sum());
    }
    best
}

struct XorShift(u64);

impl XorShift {
    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest `k` distinct eigenvalues by Lanczos with full reorthogonalization.
///
/// Degenerate eigenvalues appear once; multiplicities are not resolved.
/// `apply` must be a Hermitian map on vectors of length `dim`.
pub fn lowest_eigenvalues<F>(dim: usize, k: usize, apply: F) -> Result<Vec<f64>>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    if dim > EXTREMAL_LIMIT {
        return Err(Error::Capacity {
            what: "dimension for the extremal solver",
            size: dim,
            limit: EXTREMAL_LIMIT,
        });
    }
    if dim == 0 || k == 0 {
        return Ok(Vec::new());
    }
    let steps = dim.min((8 * k).max(160));
    let mut rng = XorShift(0x9E37_79B9_7F4A_7C15);
    let mut q: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.next_f64(), rng.next_f64()))
        .collect();
    let nq = norm(&q);
    q.iter_mut().for_each(|x| *x /= nq);
    let mut basis: Vec<Vec<Complex64>> = vec![q];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for j in 0..steps {
        let mut w = apply(&basis[j]);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        if j + 1 == steps || b < 1e-12 {
            break;
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
    }
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let mut ritz: Vec<f64> = t.symmetric_eigen().eigenvalues.iter().copied().collect();
    ritz.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::new();
    for v in ritz {
        if distinct.last().is_none_or(|&l| v - l > 1e-8) {
            distinct.push(v);
        }
    }
    distinct.truncate(k);
    Ok(distinct)
}

/// Residual `‖Hv − λv‖` for an eigenpair.
pub fn residual<M: LinearMap + ?Sized>(op: &M, pair: &Eigenpair) -> f64 {
    let hv = op.apply_vec(&pair.vector);
    let r: Vec<Complex64> = hv
        .iter()
        .zip(&pair.vector)
        .map(|(h, v)| h - v * pair.value)
        .collect();
    DVector::from_vec(r).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dense(Vec<Vec<f64>>);

    impl LinearMap for Dense {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn column(&self, col: usize, out: &mut Vec<(usize, Complex64)>) {
            for (i, row) in self.0.iter().enumerate() {
                if row[col] != 0.0 {
                    out.push((i, Complex64::new(row[col], 0.0)));
                }
            }
        }
    }

    #[test]
    fn clusters_degeneracies() {
        let r = SpectrumReport::from_sorted(&[-1.0, -1.0 + 1e-12, 0.5, 2.0, 2.0], 1e-9);
        assert_eq!(r.degeneracies, vec![2, 1, 2]);
        assert_eq!(r.dimension(), 5);
    }

    #[test]
    fn block_diagonal_spectrum() {
        // blocks {0,2} and {1}: [[1,1],[1,1]] -> {0,2}; [3]
        let m = Dense(vec![
            vec![1.0, 0.0, 1.0],
            vec![0.0, 3.0, 0.0],
            vec![1.0, 0.0, 1.0],
        ]);
        let r = full_spectrum(&m, 1e-9).unwrap();
        assert_eq!(r.eigenvalues.len(), 3);
        assert!((r.eigenvalues[0]).abs() < 1e-12);
        assert!((r.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert!((r.eigenvalues[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Dense(vec![vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(full_spectrum(&m, 1e-9), Err(Error::NotHermitian)));
    }

    #[test]
    fn lanczos_finds_ground_state_of_chain() {
        // tight-binding ring of 50 sites: -2 cos(2πk/50), min = -2
        let n = 50;
        let apply = |v: &[Complex64]| {
            (0..n)
                .map(|i| -(v[(i + 1) % n] + v[(i + n - 1) % n]))
                .collect::<Vec<_>>()
        };
        let low = lowest_eigenvalues(n, 2, apply).unwrap();
        assert!((low[0] + 2.0).abs() < 1e-10);
        let second = -2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        assert!((low[1] - second).abs() < 1e-10);
    }
}
