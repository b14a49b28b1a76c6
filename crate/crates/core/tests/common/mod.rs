#![allow(dead_code)]

use gsor_core::linalg::DenseMatrix;
use gsor_core::CsrMatrix;
use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn to_na(a: &CsrMatrix) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.n_rows(), a.n_cols());
    for (i, j, v) in a.triplets() {
        m[(i, j)] += v;
    }
    m
}

pub fn dense_to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(a.n_rows(), a.n_cols(), |i, j| a[(i, j)])
}

pub fn from_na(m: &DMatrix<f64>) -> CsrMatrix {
    let mut trip = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)] != 0.0 {
                trip.push((i, j, m[(i, j)]));
            }
        }
    }
    CsrMatrix::from_triplets(&trip, m.nrows(), m.ncols()).unwrap()
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            m[(j, i)] = m[(i, j)];
        }
    }
}

/// `BᵀB + shift I` with `B` uniform in `[-1, 1)`.
pub fn random_spd_na(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let mut w = b.transpose() * &b + DMatrix::identity(n, n) * shift;
    symmetrize(&mut w);
    w
}

pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> CsrMatrix {
    from_na(&random_spd_na(rng, n, 0.5))
}

pub fn random_sym_na(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let mut t = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    symmetrize(&mut t);
    t
}

pub fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> CsrMatrix {
    from_na(&random_sym_na(rng, n))
}

/// Rank-deficient symmetric positive semidefinite matrix `CᵀC`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> CsrMatrix {
    let c = DMatrix::from_fn(rank, n, |_, _| rng.gen_range(-1.0..1.0));
    let mut t = c.transpose() * c;
    symmetrize(&mut t);
    from_na(&t)
}

/// `(W, T, ρ(W⁻¹T))` where `W⁻¹T` has eigenvalues drawn so that the
/// dominant one is separated from the rest by a factor of at least 1.25.
pub fn gapped_pair(rng: &mut ChaCha8Rng, n: usize) -> (CsrMatrix, CsrMatrix, f64) {
    let w = random_spd_na(rng, n, 0.5);
    let l = w.clone().cholesky().unwrap().l();
    let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
    let rho = rng.gen_range(0.5..5.0);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let mut mu = vec![sign * rho];
    for _ in 1..n {
        mu.push(rng.gen_range(-0.8..0.8) * rho);
    }
    let z = &q * DMatrix::from_diagonal(&DVector::from_vec(mu)) * q.transpose();
    let mut t = &l * z * l.transpose();
    symmetrize(&mut t);
    (from_na(&w), from_na(&t), rho)
}

/// Dense `[[W, -T], [T, W]]`.
pub fn block_dense(w: &CsrMatrix, t: &CsrMatrix) -> DMatrix<f64> {
    let n = w.n_rows();
    let (w, t) = (to_na(w), to_na(t));
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    a.view_mut((0, 0), (n, n)).copy_from(&w);
    a.view_mut((0, n), (n, n)).copy_from(&(-&t));
    a.view_mut((n, 0), (n, n)).copy_from(&t);
    a.view_mut((n, n), (n, n)).copy_from(&w);
    a
}

pub fn complex_matrix(w: &CsrMatrix, t: &CsrMatrix) -> DMatrix<Complex<f64>> {
    let (w, t) = (to_na(w), to_na(t));
    DMatrix::from_fn(w.nrows(), w.ncols(), |i, j| Complex::new(w[(i, j)], t[(i, j)]))
}

pub fn complex_vec(re: &[f64], im: &[f64]) -> DVector<Complex<f64>> {
    DVector::from_iterator(re.len(), re.iter().zip(im).map(|(&a, &b)| Complex::new(a, b)))
}

/// Solution of `(W + iT) u = b` by dense complex LU.
pub fn complex_solve(w: &CsrMatrix, t: &CsrMatrix, re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let u = complex_matrix(w, t).lu().solve(&complex_vec(re, im)).expect("nonsingular");
    (u.iter().map(|c| c.re).collect(), u.iter().map(|c| c.im).collect())
}

/// `‖b - (W + iT) u‖ / ‖b‖` in complex arithmetic.
pub fn complex_residual(w: &CsrMatrix, t: &CsrMatrix, b: (&[f64], &[f64]), u: (&[f64], &[f64])) -> f64 {
    let a = complex_matrix(w, t);
    let b = complex_vec(b.0, b.1);
    let r = &b - a * complex_vec(u.0, u.1);
    r.norm() / b.norm()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    max_abs_diff(a, b) / scale
}
