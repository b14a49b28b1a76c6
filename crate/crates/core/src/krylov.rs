//! Restarted GMRES and the GSOR-preconditioned block operator.
//!
//! Iteration counts follow the restart-cycle convention: a run that
//! converges during its k-th restart cycle reports `iterations == k`. The
//! total number of Arnoldi steps is reported separately as `inner_steps`.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, BlockSystem, CsrMatrix, DenseVector, SolveReport, SpdFactor};

/// Square linear map on real vectors.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// Writes `A v` into `out`; both have length [`dim`](Self::dim).
    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()>;

    fn apply(&self, v: &[f64]) -> Result<DenseVector> {
        Error::check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; self.dim()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.n_rows()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare { n_rows: self.n_rows(), n_cols: self.n_cols() });
        }
        self.spmv_into(v, out)
    }
}

/// Operator defined by a closure.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        Error::check_len(self.dim, v.len())?;
        Error::check_len(self.dim, out.len())?;
        (self.f)(v, out);
        Ok(())
    }
}

/// The block matrix `[[W, -T], [T, W]]` acting on stacked vectors `(x; y)`.
pub struct BlockOperator<'a> {
    sys: &'a BlockSystem,
}

pub fn block_operator(sys: &BlockSystem) -> BlockOperator<'_> {
    BlockOperator { sys }
}

impl LinearOperator for BlockOperator<'_> {
    fn dim(&self) -> usize {
        2 * self.sys.dim()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        Error::check_len(self.dim(), v.len())?;
        Error::check_len(self.dim(), out.len())?;
        let n = self.sys.dim();
        let (x, y) = v.split_at(n);
        let (top, bottom) = out.split_at_mut(n);
        self.sys.apply_into(x, y, top, bottom);
        Ok(())
    }
}

/// Applies `P_α⁻¹ A` to `(r; s)` with `P_α = [[W, 0], [αT, W]]`:
///
/// 1. `t = W r - T s`
/// 2. `u = T r + W s`
/// 3. solve `W e = t`
/// 4. solve `W f = u - α T e`
pub fn gsor_precond_apply(
    sys: &BlockSystem,
    factor: &SpdFactor,
    alpha: f64,
    r: &[f64],
    s: &[f64],
) -> Result<(DenseVector, DenseVector)> {
    let (t, u) = sys.apply(r, s)?;
    gsor_precond_solve(sys, factor, alpha, &t, &u)
}

/// Solves `P_α (e; f) = (t; u)`.
pub fn gsor_precond_solve(
    sys: &BlockSystem,
    factor: &SpdFactor,
    alpha: f64,
    t: &[f64],
    u: &[f64],
) -> Result<(DenseVector, DenseVector)> {
    Error::check_len(sys.dim(), factor.dim())?;
    Error::check_len(sys.dim(), t.len())?;
    Error::check_len(sys.dim(), u.len())?;
    let e = factor.solve(t)?;
    let mut rhs = u.to_vec();
    sys.t().spmv_acc(-alpha, &e, &mut rhs);
    let f = factor.solve(&rhs)?;
    Ok((e, f))
}

/// `P_α⁻¹ A` as an operator on stacked vectors.
pub struct GsorPreconditioned<'a> {
    sys: &'a BlockSystem,
    factor: &'a SpdFactor,
    alpha: f64,
}

impl<'a> GsorPreconditioned<'a> {
    pub fn new(sys: &'a BlockSystem, factor: &'a SpdFactor, alpha: f64) -> Result<Self> {
        Error::check_len(sys.dim(), factor.dim())?;
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { sys, factor, alpha })
    }

    /// Preconditioned right-hand side `P_α⁻¹ (p; q)`, stacked.
    pub fn precondition_rhs(&self) -> Result<DenseVector> {
        let (e, f) = gsor_precond_solve(self.sys, self.factor, self.alpha, self.sys.p(), self.sys.q())?;
        Ok([e, f].concat())
    }
}

impl LinearOperator for GsorPreconditioned<'_> {
    fn dim(&self) -> usize {
        2 * self.sys.dim()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        Error::check_len(self.dim(), v.len())?;
        Error::check_len(self.dim(), out.len())?;
        let n = self.sys.dim();
        let (r, s) = v.split_at(n);
        let (e, f) = gsor_precond_apply(self.sys, self.factor, self.alpha, r, s)?;
        out[..n].copy_from_slice(&e);
        out[n..].copy_from_slice(&f);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmresConfig {
    /// Krylov dimension per cycle.
    pub restart: usize,
    pub tol: f64,
    /// Cap on restart cycles.
    pub maxit: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self { restart: 10, tol: 1e-6, maxit: 2000 }
    }
}

impl GmresConfig {
    fn validate(&self) -> Result<()> {
        if self.restart == 0 {
            return Err(Error::InvalidParameter("restart must be at least 1".into()));
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

#[derive(Clone, Debug)]
pub struct GmresSolution {
    pub x: DenseVector,
    /// `iterations` counts restart cycles; `residual_history` holds the
    /// monitored residual at every cycle boundary and at termination.
    pub report: SolveReport,
    /// Total Arnoldi steps across all cycles.
    pub inner_steps: usize,
    /// Least-squares residual estimate `|g_{j+1}| / ‖rhs‖` after every
    /// Arnoldi step, for the operator's own system.
    pub ls_residuals: Vec<f64>,
}

/// Restarted GMRES on `op x = rhs`, stopping on the true relative residual
/// of that system.
pub fn gmres_restart(op: &dyn LinearOperator, rhs: &[f64], cfg: GmresConfig, x0: &[f64]) -> Result<GmresSolution> {
    let rhs_norm = norm2(rhs);
    if rhs_norm == 0.0 {
        return Err(Error::ZeroRhs);
    }
    let mut scratch = vec![0.0; op.dim()];
    let mut monitor = |x: &[f64]| -> Result<f64> {
        op.apply_into(x, &mut scratch)?;
        let r2: f64 = rhs.iter().zip(&scratch).map(|(b, ax)| (b - ax) * (b - ax)).sum();
        Ok(r2.sqrt() / rhs_norm)
    };
    gmres_restart_monitored(op, rhs, cfg, x0, &mut monitor)
}

/// Restarted GMRES with modified Gram–Schmidt and Givens rotations.
///
/// `monitor` maps the current iterate to the residual that decides
/// convergence. It is evaluated after every Arnoldi step on the iterate
/// minimizing the least-squares problem so far.
pub fn gmres_restart_monitored(
    op: &dyn LinearOperator,
    rhs: &[f64],
    cfg: GmresConfig,
    x0: &[f64],
    monitor: &mut dyn FnMut(&[f64]) -> Result<f64>,
) -> Result<GmresSolution> {
    cfg.validate()?;
    let dim = op.dim();
    Error::check_len(dim, rhs.len())?;
    Error::check_len(dim, x0.len())?;
    let rhs_norm = norm2(rhs);
    if rhs_norm == 0.0 {
        return Err(Error::ZeroRhs);
    }

    let m = cfg.restart;
    let mut x = x0.to_vec();
    let mut report = SolveReport::new();
    let mut inner_steps = 0;
    let mut ls_residuals = Vec::new();

    let mut basis: Vec<DenseVector> = Vec::with_capacity(m + 1);
    // column j of the rotated Hessenberg matrix holds j + 1 entries
    let mut hess: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut w = vec![0.0; dim];

    for cycle in 1..=cfg.maxit {
        report.iterations = cycle;
        op.apply_into(&x, &mut w)?;
        let mut r: DenseVector = rhs.iter().zip(&w).map(|(b, ax)| b - ax).collect();
        let beta = norm2(&r);
        if beta == 0.0 || !beta.is_finite() {
            let res = monitor(&x)?;
            report.record(res);
            report.converged = res < cfg.tol;
            break;
        }
        r.iter_mut().for_each(|v| *v /= beta);
        basis.clear();
        basis.push(r);
        hess.clear();
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;

        let mut x_trial = x.clone();
        let mut finished = false;
        for j in 0..m {
            op.apply_into(&basis[j], &mut w)?;
            let w_norm = norm2(&w);
            let mut h = vec![0.0; j + 2];
            for (i, v) in basis.iter().enumerate() {
                h[i] = dot(&w, v);
                axpy(-h[i], v, &mut w);
            }
            h[j + 1] = norm2(&w);
            let subdiag = h[j + 1];
            let breakdown = subdiag <= f64::EPSILON * w_norm;

            for i in 0..j {
                let tmp = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = tmp;
            }
            let d = h[j].hypot(h[j + 1]);
            if d == 0.0 {
                // A annihilates the whole Krylov direction; nothing to solve
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = h[j] / d;
                sn[j] = h[j + 1] / d;
            }
            h[j] = d;
            h[j + 1] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            h.truncate(j + 1);
            hess.push(h);
            inner_steps += 1;
            ls_residuals.push(g[j + 1].abs() / rhs_norm);

            let coeffs = back_substitute(&hess, &g[..=j]);
            x_trial.copy_from_slice(&x);
            for (c, v) in coeffs.iter().zip(&basis) {
                axpy(*c, v, &mut x_trial);
            }
            let res = monitor(&x_trial)?;
            if res < cfg.tol || breakdown || !res.is_finite() {
                report.record(res);
                report.converged = res < cfg.tol;
                finished = true;
                break;
            }
            if j + 1 == m {
                report.record(res);
            } else {
                let next: DenseVector = w.iter().map(|v| v / subdiag).collect();
                basis.push(next);
            }
        }
        x = x_trial;
        if finished {
            break;
        }
    }
    Ok(GmresSolution { x, report, inner_steps, ls_residuals })
}

// solve the (j+1)x(j+1) upper triangular system stored column-wise
fn back_substitute(cols: &[Vec<f64>], g: &[f64]) -> Vec<f64> {
    let k = g.len();
    let mut y = g.to_vec();
    for i in (0..k).rev() {
        let diag = cols[i][i];
        y[i] = if diag == 0.0 { 0.0 } else { y[i] / diag };
        for r in 0..i {
            y[r] -= cols[i][r] * y[i];
        }
    }
    y
}

/// Stacked solution `(x; y)` of a block system solved by GMRES.
#[derive(Clone, Debug)]
pub struct BlockGmresSolution {
    pub x: DenseVector,
    pub y: DenseVector,
    pub report: SolveReport,
    pub inner_steps: usize,
}

fn split(sys: &BlockSystem, sol: GmresSolution) -> BlockGmresSolution {
    let mut x = sol.x;
    let y = x.split_off(sys.dim());
    BlockGmresSolution { x, y, report: sol.report, inner_steps: sol.inner_steps }
}

/// GMRES(restart) on the unpreconditioned block system from a zero start.
pub fn gmres_block_solve(sys: &BlockSystem, cfg: GmresConfig) -> Result<BlockGmresSolution> {
    let op = block_operator(sys);
    let rhs = [sys.p(), sys.q()].concat();
    let n = sys.dim();
    let mut monitor = |v: &[f64]| sys.residual(&v[..n], &v[n..]);
    let sol = gmres_restart_monitored(&op, &rhs, cfg, &vec![0.0; 2 * n], &mut monitor)?;
    Ok(split(sys, sol))
}

/// GMRES(restart) on `P_α⁻¹ A u = P_α⁻¹ b` from a zero start, declaring
/// convergence on the residual of the original block system.
pub fn gsor_gmres_solve(sys: &BlockSystem, alpha: f64, cfg: GmresConfig) -> Result<BlockGmresSolution> {
    let factor = sys.factor_w()?;
    gsor_gmres_solve_factored(sys, &factor, alpha, cfg)
}

pub fn gsor_gmres_solve_factored(
    sys: &BlockSystem,
    factor: &SpdFactor,
    alpha: f64,
    cfg: GmresConfig,
) -> Result<BlockGmresSolution> {
    let op = GsorPreconditioned::new(sys, factor, alpha)?;
    let rhs = op.precondition_rhs()?;
    let n = sys.dim();
    let mut monitor = |v: &[f64]| sys.residual(&v[..n], &v[n..]);
    let sol = gmres_restart_monitored(&op, &rhs, cfg, &vec![0.0; 2 * n], &mut monitor)?;
    Ok(split(sys, sol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> FnOperator<impl Fn(&[f64], &mut [f64])> {
        FnOperator::new(n, |v: &[f64], out: &mut [f64]| out.copy_from_slice(v))
    }

    #[test]
    fn identity_operator_converges_in_one_step() {
        let rhs = [1.0, -2.0, 3.0];
        let sol = gmres_restart(&identity(3), &rhs, GmresConfig::default(), &[0.0; 3]).unwrap();
        assert!(sol.report.converged);
        assert_eq!(sol.report.iterations, 1);
        assert_eq!(sol.inner_steps, 1);
        assert_eq!(sol.x, rhs.to_vec());
    }

    #[test]
    fn block_operator_with_identity_w_and_zero_t_is_identity() {
        let sys = BlockSystem::new(CsrMatrix::identity(3), CsrMatrix::zeros(3, 3), vec![1.0; 3], vec![0.0; 3]).unwrap();
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(block_operator(&sys).apply(&v).unwrap(), v.to_vec());
    }

    #[test]
    fn precond_with_zero_t_is_identity_for_any_alpha() {
        let w = CsrMatrix::tridiagonal(4, -1.0, 3.0, -1.0);
        let sys = BlockSystem::new(w, CsrMatrix::zeros(4, 4), vec![1.0; 4], vec![1.0; 4]).unwrap();
        let f = sys.factor_w().unwrap();
        let r = [0.1, 0.2, -0.3, 0.4];
        let s = [1.0, -1.0, 2.0, 0.0];
        for alpha in [0.3, 1.0, 1.7] {
            let (e, ff) = gsor_precond_apply(&sys, &f, alpha, &r, &s).unwrap();
            for (a, b) in e.iter().chain(&ff).zip(r.iter().chain(&s)) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn precond_with_zero_alpha_is_block_jacobi() {
        let w = CsrMatrix::tridiagonal(3, -1.0, 3.0, -1.0);
        let t = CsrMatrix::tridiagonal(3, 0.5, 1.0, 0.5);
        let sys = BlockSystem::new(w.clone(), t, vec![1.0; 3], vec![1.0; 3]).unwrap();
        let f = sys.factor_w().unwrap();
        let r = [1.0, 0.0, -1.0];
        let s = [0.5, 0.5, 2.0];
        let (e, ff) = gsor_precond_apply(&sys, &f, 0.0, &r, &s).unwrap();
        let (t_, u_) = sys.apply(&r, &s).unwrap();
        let we = w.spmv(&e).unwrap();
        let wf = w.spmv(&ff).unwrap();
        for k in 0..3 {
            assert!((we[k] - t_[k]).abs() < 1e-13);
            assert!((wf[k] - u_[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn exhausted_cycles_are_not_converged() {
        let a = CsrMatrix::tridiagonal(40, -1.0, 2.0, -1.0);
        let cfg = GmresConfig { restart: 2, tol: 1e-12, maxit: 3 };
        let sol = gmres_restart(&a, &vec![1.0; 40], cfg, &vec![0.0; 40]).unwrap();
        assert!(!sol.report.converged);
        assert_eq!(sol.report.iterations, 3);
        assert_eq!(sol.inner_steps, 6);
        assert_eq!(sol.report.residual_history.len(), 3);
    }

    #[test]
    fn cycle_count_is_ceiling_of_inner_steps_over_restart() {
        let a = CsrMatrix::tridiagonal(30, -1.0, 2.5, -1.0);
        let cfg = GmresConfig { restart: 4, tol: 1e-10, maxit: 500 };
        let sol = gmres_restart(&a, &vec![1.0; 30], cfg, &vec![0.0; 30]).unwrap();
        assert!(sol.report.converged);
        assert_eq!(sol.report.iterations, sol.inner_steps.div_ceil(4));
    }

    #[test]
    fn config_is_validated() {
        let bad = GmresConfig { restart: 0, ..GmresConfig::default() };
        assert!(gmres_restart(&identity(2), &[1.0, 1.0], bad, &[0.0; 2]).is_err());
        assert!(matches!(
            gmres_restart(&identity(2), &[0.0, 0.0], GmresConfig::default(), &[0.0; 2]),
            Err(Error::ZeroRhs)
        ));
    }
}
