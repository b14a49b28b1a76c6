use crate::error::{Error, Result};

use super::csr::CsrMatrix;
use super::report::SolveReport;
use super::vector::{axpy, dot, norm2, DenseVector};

/// Unpreconditioned conjugate gradients from a zero start.
///
/// Convergence is checked on the recursively updated residual relative to
/// `‖b‖`; a non-positive curvature `pᵀAp` is reported as
/// [`Error::NotPositiveDefinite`].
pub fn cg_solve(a: &CsrMatrix, b: &[f64], tol: f64, maxit: usize) -> Result<(DenseVector, SolveReport)> {
    if !a.is_square() {
        return Err(Error::NotSquare { n_rows: a.n_rows(), n_cols: a.n_cols() });
    }
    Error::check_len(a.n_rows(), b.len())?;
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return Err(Error::ZeroRhs);
    }

    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let mut report = SolveReport::new();

    for it in 1..=maxit {
        a.spmv_into(&p, &mut ap)?;
        let curvature = dot(&p, &ap);
        if !(curvature > 0.0) {
            return Err(Error::NotPositiveDefinite { row: it - 1, pivot: curvature });
        }
        let step = rr / curvature;
        axpy(step, &p, &mut x);
        axpy(-step, &ap, &mut r);
        let rr_next = dot(&r, &r);
        report.iterations = it;
        report.record(rr_next.sqrt() / b_norm);
        if report.final_residual < tol {
            report.converged = true;
            break;
        }
        let beta = rr_next / rr;
        rr = rr_next;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    Ok((x, report))
}
