//! Sparse Cholesky factorization `P W Pᵀ = L Lᵀ` with an envelope (profile)
//! layout.
//!
//! Fill of an envelope factorization stays inside the row envelope of the
//! permuted matrix, so the quality of the factor depends only on the
//! bandwidth the ordering achieves. Reverse Cuthill–McKee keeps the
//! bandwidth of the five-point grids at `O(m)`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

use super::csr::CsrMatrix;
use super::vector::DenseVector;

/// Below this order the natural ordering is used.
const RCM_MIN_ORDER: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Ordering {
    Natural,
    ReverseCuthillMcKee,
    /// Natural for small matrices, reverse Cuthill–McKee otherwise.
    #[default]
    Auto,
}

/// Cholesky factor of a symmetric positive definite matrix.
#[derive(Clone, Debug)]
pub struct SpdFactor {
    lower: CsrMatrix,
    /// `perm[new] = old`; `None` is the identity.
    perm: Option<Vec<usize>>,
}

impl SpdFactor {
    /// Lower triangular factor `L` of the permuted matrix.
    pub fn lower(&self) -> &CsrMatrix {
        &self.lower
    }

    /// Row permutation with `perm[new] = old`.
    pub fn permutation(&self) -> Vec<usize> {
        match &self.perm {
            Some(p) => p.clone(),
            None => (0..self.dim()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.n_rows()
    }

    /// Solves `W x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Result<DenseVector> {
        Error::check_len(self.dim(), rhs.len())?;
        let mut work: Vec<f64> = match &self.perm {
            Some(p) => p.iter().map(|&old| rhs[old]).collect(),
            None => rhs.to_vec(),
        };
        self.forward(&mut work);
        self.backward(&mut work);
        Ok(match &self.perm {
            Some(p) => {
                let mut x = vec![0.0; work.len()];
                for (new, &old) in p.iter().enumerate() {
                    x[old] = work[new];
                }
                x
            }
            None => work,
        })
    }

    // L y = b, diagonal stored last in each row
    fn forward(&self, b: &mut [f64]) {
        let l = &self.lower;
        for i in 0..b.len() {
            let (cols, vals) = l.row(i);
            let last = cols.len() - 1;
            let s: f64 = cols[..last].iter().zip(&vals[..last]).map(|(&k, &v)| v * b[k]).sum();
            b[i] = (b[i] - s) / vals[last];
        }
    }

    // Lᵀ x = y, column sweep over the rows of L
    fn backward(&self, y: &mut [f64]) {
        let l = &self.lower;
        for i in (0..y.len()).rev() {
            let (cols, vals) = l.row(i);
            let last = cols.len() - 1;
            y[i] /= vals[last];
            let xi = y[i];
            for (&k, &v) in cols[..last].iter().zip(&vals[..last]) {
                y[k] -= v * xi;
            }
        }
    }
}

/// Factors `w` with the default ordering.
pub fn cholesky(w: &CsrMatrix) -> Result<SpdFactor> {
    cholesky_with(w, Ordering::Auto)
}

/// Factors `w`; a non-positive pivot yields [`Error::NotPositiveDefinite`].
///
/// Only the lower triangle of each permuted row is read, so `w` is assumed
/// symmetric.
pub fn cholesky_with(w: &CsrMatrix, ordering: Ordering) -> Result<SpdFactor> {
    if !w.is_square() {
        return Err(Error::NotSquare { n_rows: w.n_rows(), n_cols: w.n_cols() });
    }
    let n = w.n_rows();
    let use_rcm = match ordering {
        Ordering::Natural => false,
        Ordering::ReverseCuthillMcKee => true,
        Ordering::Auto => n > RCM_MIN_ORDER,
    };
    let perm = if use_rcm {
        let p = reverse_cuthill_mckee(w);
        if p.iter().enumerate().all(|(i, &j)| i == j) {
            None
        } else {
            Some(p)
        }
    } else {
        None
    };
    let a = match &perm {
        Some(p) => w.permute_symmetric(p)?,
        None => w.clone(),
    };

    // envelope start of each row
    let first: Vec<usize> = (0..n)
        .map(|i| {
            let (cols, _) = a.row(i);
            cols.first().map_or(i, |&c| c.min(i))
        })
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let fi = first[i];
        let mut row = vec![0.0; i - fi + 1];
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if j <= i {
                row[j - fi] = v;
            }
        }
        for j in fi..i {
            let start = fi.max(first[j]);
            let lj = &rows[j];
            let s: f64 =
                row[start - fi..j - fi].iter().zip(&lj[start - first[j]..j - first[j]]).map(|(a, b)| a * b).sum();
            row[j - fi] = (row[j - fi] - s) / lj[j - first[j]];
        }
        let s: f64 = row[..i - fi].iter().map(|v| v * v).sum();
        let pivot = row[i - fi] - s;
        if !(pivot > 0.0) || !pivot.is_finite() {
            let original = perm.as_ref().map_or(i, |p| p[i]);
            return Err(Error::NotPositiveDefinite { row: original, pivot });
        }
        row[i - fi] = pivot.sqrt();
        rows.push(row);
    }

    let mut row_ptr = Vec::with_capacity(n + 1);
    let nnz: usize = rows.iter().map(Vec::len).sum();
    let mut col_idx = Vec::with_capacity(nnz);
    let mut values = Vec::with_capacity(nnz);
    row_ptr.push(0);
    for (i, row) in rows.into_iter().enumerate() {
        col_idx.extend(first[i]..=i);
        values.extend(row);
        row_ptr.push(col_idx.len());
    }
    let lower = CsrMatrix::from_raw(n, n, row_ptr, col_idx, values)?;
    Ok(SpdFactor { lower, perm })
}

/// Solves `W x = rhs` with a precomputed factor.
pub fn solve_spd(factor: &SpdFactor, rhs: &[f64]) -> Result<DenseVector> {
    factor.solve(rhs)
}

/// Reverse Cuthill–McKee ordering of the symmetrized pattern of `a`,
/// returned as `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n_rows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in a.triplets() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for nb in &mut adj {
        nb.sort_unstable();
        nb.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n).filter(|&v| !visited[v]).min_by_key(|&v| degree[v]).expect("unvisited node");
        let start = pseudo_peripheral(seed, &adj, &degree);

        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&u| !visited[u]).collect();
            next.sort_by_key(|&u| (degree[u], u));
            for u in next {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

// George–Liu search for a node of near-maximal eccentricity
fn pseudo_peripheral(seed: usize, adj: &[Vec<usize>], degree: &[usize]) -> usize {
    let mut current = seed;
    let (mut depth, mut last_level) = bfs_levels(current, adj);
    loop {
        let candidate = *last_level.iter().min_by_key(|&&v| (degree[v], v)).expect("nonempty level");
        let (d, level) = bfs_levels(candidate, adj);
        if d <= depth {
            return current;
        }
        current = candidate;
        depth = d;
        last_level = level;
    }
}

fn bfs_levels(start: usize, adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut depth = 0;
    while let Some(v) = queue.pop_front() {
        depth = depth.max(dist[v]);
        for &u in &adj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    let level = (0..adj.len()).filter(|&v| dist[v] == depth).collect();
    (depth, level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_factorization_two_by_two() {
        let w = CsrMatrix::from_triplets(&[(0, 0, 4.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 3.0)], 2, 2).unwrap();
        let f = cholesky(&w).unwrap();
        let l = f.lower();
        assert!((l.get(0, 0) - 2.0).abs() < 1e-15);
        assert!((l.get(1, 0) - 1.0).abs() < 1e-15);
        assert!((l.get(1, 1) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(l.get(0, 1), 0.0);
        let x = f.solve(&[6.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_factor() {
        let f = cholesky(&CsrMatrix::identity(5)).unwrap();
        assert_eq!(f.lower(), &CsrMatrix::identity(5));
        let rhs = [1.0, -2.0, 3.0, 0.5, 7.0];
        assert_eq!(f.solve(&rhs).unwrap(), rhs.to_vec());
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let w = CsrMatrix::from_triplets(&[(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)], 2, 2).unwrap();
        assert!(matches!(cholesky(&w), Err(Error::NotPositiveDefinite { row: 1, .. })));
    }

    #[test]
    fn rcm_is_a_permutation_and_narrows_grid_bandwidth() {
        let k = CsrMatrix::tridiagonal(12, -1.0, 2.0, -1.0).kron_sum().unwrap();
        // scramble the natural ordering first so RCM has work to do
        let scramble: Vec<usize> = (0..144).map(|i| (i * 37) % 144).collect();
        let a = k.permute_symmetric(&scramble).unwrap();
        let p = reverse_cuthill_mckee(&a);
        let mut seen = p.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..144).collect::<Vec<_>>());
        let b = a.permute_symmetric(&p).unwrap();
        let bandwidth = |m: &CsrMatrix| m.triplets().map(|(i, j, _)| i.abs_diff(j)).max().unwrap();
        assert!(bandwidth(&b) <= 2 * 12, "bandwidth {}", bandwidth(&b));
        assert!(bandwidth(&a) > 2 * 12);
    }

    #[test]
    fn rcm_factor_solves_grid_system() {
        let k = CsrMatrix::tridiagonal(10, -1.0, 2.0, -1.0).kron_sum().unwrap();
        let f = cholesky_with(&k, Ordering::ReverseCuthillMcKee).unwrap();
        let x_true: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        let b = k.spmv(&x_true).unwrap();
        let x = f.solve(&b).unwrap();
        let err = x.iter().zip(&x_true).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn disconnected_pattern_is_ordered() {
        let w = CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let p = reverse_cuthill_mckee(&w);
        assert_eq!(p.len(), 3);
    }
}
