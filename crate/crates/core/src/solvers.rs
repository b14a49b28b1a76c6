//! Stationary iterations: GSOR on the real block form and MHSS on the
//! complex system.
//!
//! Both stop on the true relative residual `‖b - A u‖₂ / ‖b‖₂`, recomputed
//! from the iterate after every sweep.

use crate::error::{Error, Result};
use crate::linalg::{cholesky, BlockSystem, ComplexVector, CsrMatrix, DenseVector, SolveReport, SpdFactor};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAXIT: usize = 2000;

/// Parameter, tolerance and iteration cap of a stationary solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterParams {
    pub alpha: f64,
    pub tol: f64,
    pub maxit: usize,
}

impl IterParams {
    pub fn new(alpha: f64, tol: f64, maxit: usize) -> Result<Self> {
        let params = Self { alpha, tol, maxit };
        params.validate()?;
        Ok(params)
    }

    /// Default tolerance and cap with the given parameter.
    pub fn with_alpha(alpha: f64) -> Self {
        Self { alpha, tol: DEFAULT_TOL, maxit: DEFAULT_MAXIT }
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha == 0.0 {
            return Err(Error::InvalidParameter(format!("alpha must be finite and nonzero, got {}", self.alpha)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.maxit == 0 {
            return Err(Error::InvalidParameter("maxit must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of a GSOR solve.
#[derive(Clone, Debug)]
pub struct GsorSolution {
    pub x: DenseVector,
    pub y: DenseVector,
    pub report: SolveReport,
}

/// One GSOR sweep
///
/// ```text
/// W x' = (1 - α) W x + α T y  + α p
/// W y' = -α T x' + (1 - α) W y + α q
/// ```
///
/// evaluated as `x' = (1 - α) x + α W⁻¹(T y + p)`, which needs one solve
/// with `W` per half-step and no product with `W`.
pub fn gsor_sweep(
    sys: &BlockSystem,
    factor: &SpdFactor,
    alpha: f64,
    x: &[f64],
    y: &[f64],
    p: &[f64],
    q: &[f64],
) -> Result<(DenseVector, DenseVector)> {
    let n = sys.dim();
    for len in [x.len(), y.len(), p.len(), q.len(), factor.dim()] {
        Error::check_len(n, len)?;
    }
    let mut rhs = p.to_vec();
    sys.t().spmv_acc(1.0, y, &mut rhs);
    let mut x_next = factor.solve(&rhs)?;
    for (xn, xo) in x_next.iter_mut().zip(x) {
        *xn = (1.0 - alpha) * xo + alpha * *xn;
    }

    let mut rhs = q.to_vec();
    sys.t().spmv_acc(-1.0, &x_next, &mut rhs);
    let mut y_next = factor.solve(&rhs)?;
    for (yn, yo) in y_next.iter_mut().zip(y) {
        *yn = (1.0 - alpha) * yo + alpha * *yn;
    }
    Ok((x_next, y_next))
}

/// GSOR iteration on the block system. Factors `W` once.
pub fn gsor_solve(sys: &BlockSystem, params: IterParams, x0: &[f64], y0: &[f64]) -> Result<GsorSolution> {
    let factor = sys.factor_w()?;
    gsor_solve_factored(sys, &factor, params, x0, y0)
}

/// GSOR iteration reusing a factor of `W`.
///
/// Any nonzero `alpha` is accepted; divergence shows up as
/// `converged == false` in the report, and the iteration stops early once
/// the residual is no longer finite.
pub fn gsor_solve_factored(
    sys: &BlockSystem,
    factor: &SpdFactor,
    params: IterParams,
    x0: &[f64],
    y0: &[f64],
) -> Result<GsorSolution> {
    params.validate()?;
    let n = sys.dim();
    Error::check_len(n, x0.len())?;
    Error::check_len(n, y0.len())?;

    let mut x = x0.to_vec();
    let mut y = y0.to_vec();
    let mut report = SolveReport::new();
    for it in 1..=params.maxit {
        let (xn, yn) = gsor_sweep(sys, factor, params.alpha, &x, &y, sys.p(), sys.q())?;
        x = xn;
        y = yn;
        let res = sys.residual(&x, &y)?;
        report.iterations = it;
        report.record(res);
        if res < params.tol {
            report.converged = true;
            break;
        }
        if !res.is_finite() {
            break;
        }
    }
    Ok(GsorSolution { x, y, report })
}

/// Factors of the shifted matrices `αI + W` and `αI + T` used by MHSS.
#[derive(Clone, Debug)]
pub struct MhssFactors {
    pub alpha: f64,
    pub shifted_w: SpdFactor,
    pub shifted_t: SpdFactor,
}

impl MhssFactors {
    pub fn new(w: &CsrMatrix, t: &CsrMatrix, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("MHSS needs alpha > 0, got {alpha}")));
        }
        Ok(Self { alpha, shifted_w: cholesky(&w.shifted(alpha)?)?, shifted_t: cholesky(&t.shifted(alpha)?)? })
    }
}

/// One MHSS sweep in split real arithmetic:
///
/// ```text
/// (αI + W) u½ = (αI - iT) u + b
/// (αI + T) u' = (αI + iW) u½ - i b
/// ```
pub fn mhss_step(
    factors: &MhssFactors,
    w: &CsrMatrix,
    t: &CsrMatrix,
    b: &ComplexVector,
    u: &ComplexVector,
) -> Result<ComplexVector> {
    let n = w.n_rows();
    Error::check_len(n, b.len())?;
    Error::check_len(n, u.len())?;
    let a = factors.alpha;

    // (αI - iT)(x + iy) + b = (αx + Ty + p) + i(αy - Tx + q)
    let mut re: Vec<f64> = u.re.iter().zip(&b.re).map(|(x, p)| a * x + p).collect();
    let mut im: Vec<f64> = u.im.iter().zip(&b.im).map(|(y, q)| a * y + q).collect();
    t.spmv_acc(1.0, &u.im, &mut re);
    t.spmv_acc(-1.0, &u.re, &mut im);
    let half_re = factors.shifted_w.solve(&re)?;
    let half_im = factors.shifted_w.solve(&im)?;

    // (αI + iW)(x + iy) - i(p + iq) = (αx - Wy + q) + i(αy + Wx - p)
    let mut re: Vec<f64> = half_re.iter().zip(&b.im).map(|(x, q)| a * x + q).collect();
    let mut im: Vec<f64> = half_im.iter().zip(&b.re).map(|(y, p)| a * y - p).collect();
    w.spmv_acc(-1.0, &half_im, &mut re);
    w.spmv_acc(1.0, &half_re, &mut im);
    Ok(ComplexVector { re: factors.shifted_t.solve(&re)?, im: factors.shifted_t.solve(&im)? })
}

/// MHSS iteration. One iteration is one full pair of half-steps.
pub fn mhss_solve(
    w: &CsrMatrix,
    t: &CsrMatrix,
    b: &ComplexVector,
    params: IterParams,
    u0: &ComplexVector,
) -> Result<(ComplexVector, SolveReport)> {
    params.validate()?;
    let sys = BlockSystem::from_complex_rhs(w.clone(), t.clone(), b.clone())?;
    Error::check_len(sys.dim(), u0.len())?;
    let factors = MhssFactors::new(w, t, params.alpha)?;

    let mut u = u0.clone();
    let mut report = SolveReport::new();
    for it in 1..=params.maxit {
        u = mhss_step(&factors, w, t, b, &u)?;
        let res = sys.residual(&u.re, &u.im)?;
        report.iterations = it;
        report.record(res);
        if res < params.tol {
            report.converged = true;
            break;
        }
        if !res.is_finite() {
            break;
        }
    }
    Ok((u, report))
}
