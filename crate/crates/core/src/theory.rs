//! Parameter theory for GSOR and an exact spectrum oracle for small systems.
//!
//! Every eigenvalue `λ ≠ 0` of the GSOR iteration matrix `G_α` is a root of
//!
//! ```text
//! λ² + (α²μ² + 2α - 2) λ + (α - 1)² = 0
//! ```
//!
//! for some eigenvalue `μ` of `S = W⁻¹T`. The eigenvalues of `S` are real
//! because `S` is similar to the symmetric matrix `Z = L⁻¹ T L⁻ᵀ`, where
//! `W = L Lᵀ`. With `ρ = ρ(S)`:
//!
//! - GSOR converges iff `0 < α < 2 / (1 + ρ)`;
//! - the optimal parameter is `α* = 2 / (1 + sqrt(1 + ρ²))`;
//! - the optimal convergence factor is `ρ(G_α*) = 1 - α*`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cholesky_with, CsrMatrix, DenseMatrix, Ordering};

/// Largest relative asymmetry accepted by the symmetric eigensolver.
const EIG_SYMMETRY_TOL: f64 = 1e-10;
const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;
const QL_MAX_ITER: usize = 60;

fn check_rho(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("spectral radius must be finite and nonnegative, got {rho}")))
    }
}

/// `α* = 2 / (1 + sqrt(1 + ρ²))`.
pub fn optimal_alpha(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(2.0 / (1.0 + rho.hypot(1.0)))
}

/// `ρ(G_α*) = 1 - α*`.
pub fn optimal_factor(rho: f64) -> Result<f64> {
    Ok(1.0 - optimal_alpha(rho)?)
}

/// Upper end `2 / (1 + ρ)` of the convergence interval `0 < α < 2/(1+ρ)`.
pub fn convergence_bound(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(2.0 / (1.0 + rho))
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector of `values[k]`.
    pub vectors: DenseMatrix,
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigs_sym(a: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(jacobi_eigen_sym(a)?.values)
}

/// Cyclic Jacobi with eigenvectors. Sweeps until the off-diagonal
/// Frobenius norm is at most `1e-12 ‖A‖_F`.
pub fn jacobi_eigen_sym(a: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = a.n_rows();
    if a.n_cols() != n {
        return Err(Error::NotSquare { n_rows: n, n_cols: a.n_cols() });
    }
    let asymmetry = a.asymmetry();
    if asymmetry > EIG_SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let mut m = a.clone();
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let mut v = DenseMatrix::identity(n);
    let target = JACOBI_OFF_TOL * a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&k| m[(k, k)]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new)] = v[(r, old)];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Eigenvalues of a symmetric matrix, ascending, by Householder reduction to
/// tridiagonal form followed by implicit QL. `O(n³)` with a small constant;
/// use this over [`jacobi_eigs_sym`] beyond a few hundred unknowns.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    check_symmetric(a)?;
    let mut work = a.clone();
    let (mut d, mut e) = tridiagonalize(&mut work, false);
    tridiagonal_ql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder + QL eigen-decomposition with eigenvectors.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    check_symmetric(a)?;
    let n = a.n_rows();
    let mut work = a.clone();
    let (mut d, mut e) = tridiagonalize(&mut work, true);
    // rows of `z` are eigenvectors so the QL rotations touch contiguous memory
    let mut z = work.transpose();
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for (r, &v) in z.row(old).iter().enumerate() {
            vectors[(r, new)] = v;
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

fn check_symmetric(a: &DenseMatrix) -> Result<()> {
    let n = a.n_rows();
    if a.n_cols() != n {
        return Err(Error::NotSquare { n_rows: n, n_cols: a.n_cols() });
    }
    let asymmetry = a.asymmetry();
    if asymmetry > EIG_SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

// Householder reduction using the lower triangle of `m`. Returns (diagonal,
// subdiagonal) with e[i] coupling rows i-1 and i. With `vectors`, `m` is
// overwritten by the orthogonal transform Q (A = Q T Qᵀ).
fn tridiagonalize(m: &mut DenseMatrix, vectors: bool) -> (Vec<f64>, Vec<f64>) {
    let n = m.n_rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| m[(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = m[(i, l)];
            } else {
                for k in 0..=l {
                    m[(i, k)] /= scale;
                    h += m[(i, k)] * m[(i, k)];
                }
                let f = m[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                m[(i, l)] = f - g;
                let u: Vec<f64> = (0..=l).map(|k| m[(i, k)]).collect();
                let mut f = 0.0;
                for j in 0..=l {
                    if vectors {
                        m[(j, i)] = u[j] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += m[(j, k)] * u[k];
                    }
                    for k in j + 1..=l {
                        g += m[(k, j)] * u[k];
                    }
                    e[j] = g / h;
                    f += e[j] * u[j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = u[j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    let row = m.row_mut(j);
                    for k in 0..=j {
                        row[k] -= f * e[k] + g * u[k];
                    }
                }
            }
        } else {
            e[i] = m[(i, l)];
        }
        d[i] = h;
    }
    if n > 0 {
        d[0] = 0.0;
        e[0] = 0.0;
    }
    for i in 0..n {
        if vectors {
            if d[i] != 0.0 {
                let ui: Vec<f64> = m.row(i)[..i].to_vec();
                let ci: Vec<f64> = (0..i).map(|k| m[(k, i)]).collect();
                let mut g = vec![0.0; i];
                for k in 0..i {
                    let row = &m.row(k)[..i];
                    let uik = ui[k];
                    for (gj, &akj) in g.iter_mut().zip(row) {
                        *gj += uik * akj;
                    }
                }
                for k in 0..i {
                    let cki = ci[k];
                    let row = &mut m.row_mut(k)[..i];
                    for (akj, &gj) in row.iter_mut().zip(&g) {
                        *akj -= gj * cki;
                    }
                }
            }
            d[i] = m[(i, i)];
            m[(i, i)] = 1.0;
            for j in 0..i {
                m[(j, i)] = 0.0;
                m[(i, j)] = 0.0;
            }
        } else {
            d[i] = m[(i, i)];
        }
    }
    (d, e)
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix. Rows
// of `z`, if given, are rotated along with it.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut DenseMatrix>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::InvalidParameter("tridiagonal QL failed to converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    rotate_rows(z, i, s, c);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn rotate_rows(z: &mut DenseMatrix, i: usize, s: f64, c: f64) {
    let (upper, lower) = z.adjacent_rows_mut(i);
    for (u, f) in upper.iter_mut().zip(lower.iter_mut()) {
        let old = *f;
        *f = s * *u + c * old;
        *u = c * *u - s * old;
    }
}

// A ← Jᵀ A J, V ← V J with J the (p, q) rotation
fn rotate(m: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.n_rows();
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

fn off_diagonal_norm(m: &DenseMatrix) -> f64 {
    let n = m.n_rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m[(i, j)] * m[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Symmetric matrix `Z = L⁻¹ T L⁻ᵀ` similar to `S = W⁻¹T`, with `W = L Lᵀ`.
///
/// An eigenvector `z` of `Z` maps to the eigenvector `L⁻ᵀ z` of `S`.
#[derive(Clone, Debug)]
pub struct Similarity {
    pub z: DenseMatrix,
    pub lower: DenseMatrix,
}

/// Forms `Z = L⁻¹ T L⁻ᵀ` densely. Intended for a few hundred unknowns.
pub fn s_similarity(w: &CsrMatrix, t: &CsrMatrix) -> Result<Similarity> {
    let n = w.n_rows();
    if !w.is_square() {
        return Err(Error::NotSquare { n_rows: n, n_cols: w.n_cols() });
    }
    if t.n_rows() != n || t.n_cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: t.n_rows() });
    }
    let factor = cholesky_with(w, Ordering::Natural)?;
    let lower = factor.lower().to_dense();

    // X = L⁻¹ T, then Z = L⁻¹ Xᵀ (= X L⁻ᵀ since Z is symmetric)
    let x = forward_solve_columns(&lower, &t.to_dense());
    let mut z = forward_solve_columns(&lower, &x.transpose());
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (z[(i, j)] + z[(j, i)]);
            z[(i, j)] = avg;
            z[(j, i)] = avg;
        }
    }
    Ok(Similarity { z, lower })
}

// L X = B for lower triangular L, column by column
fn forward_solve_columns(lower: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = lower.n_rows();
    let mut x = b.clone();
    for i in 0..n {
        let diag = lower[(i, i)];
        for k in 0..i {
            let lik = lower[(i, k)];
            if lik == 0.0 {
                continue;
            }
            for c in 0..b.n_cols() {
                let xk = x[(k, c)];
                x[(i, c)] -= lik * xk;
            }
        }
        for c in 0..b.n_cols() {
            x[(i, c)] /= diag;
        }
    }
    x
}

/// Eigenvalues of `S = W⁻¹T` (ascending), through the symmetric similarity.
pub fn s_eigenvalues(w: &CsrMatrix, t: &CsrMatrix) -> Result<Vec<f64>> {
    symmetric_eigenvalues(&s_similarity(w, t)?.z)
}

/// `max |μ|` over a list of eigenvalues.
pub fn spectral_radius(mu: &[f64]) -> f64 {
    mu.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Eigenvalue data of GSOR derived from the spectrum of `S`.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub alpha: f64,
    pub mu: Vec<f64>,
    /// Eigenvalues of `G_α`; entries `2k` and `2k + 1` belong to `mu[k]`.
    pub lambda: Vec<Complex64>,
    /// Eigenvalues `(1 - λ)/α` of `P_α⁻¹ A`, aligned with `lambda`.
    pub precond_eigs: Vec<Complex64>,
}

impl SpectrumResult {
    /// `ρ(G_α)`.
    pub fn iteration_radius(&self) -> f64 {
        self.lambda.iter().fold(0.0f64, |m, l| m.max(l.norm()))
    }
}

/// Both roots of `λ² + (α²μ² + 2α - 2)λ + (α - 1)² = 0`.
///
/// Real roots use the cancellation-free form: the larger-magnitude root
/// first, the other from the product `(α - 1)²`.
pub fn gsor_eigenvalue_pair(mu: f64, alpha: f64) -> (Complex64, Complex64) {
    let am2 = alpha * alpha * mu * mu;
    let b = am2 + 2.0 * alpha - 2.0;
    let c = (alpha - 1.0) * (alpha - 1.0);
    let disc = am2 * (am2 + 4.0 * alpha - 4.0);
    if disc >= 0.0 {
        let big = -0.5 * (b + b.signum() * disc.sqrt());
        if big == 0.0 {
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        (Complex64::new(big, 0.0), Complex64::new(c / big, 0.0))
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        (Complex64::new(re, im), Complex64::new(re, -im))
    }
}

/// Spectrum of `G_α` and `P_α⁻¹ A` from the eigenvalues `mu` of `S`.
pub fn gsor_spectrum(mu: &[f64], alpha: f64) -> Result<SpectrumResult> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite and nonzero, got {alpha}")));
    }
    let mut lambda = Vec::with_capacity(2 * mu.len());
    for &m in mu {
        let (l1, l2) = gsor_eigenvalue_pair(m, alpha);
        lambda.push(l1);
        lambda.push(l2);
    }
    let precond_eigs = lambda.iter().map(|l| (Complex64::new(1.0, 0.0) - l) / alpha).collect();
    Ok(SpectrumResult { alpha, mu: mu.to_vec(), lambda, precond_eigs })
}
