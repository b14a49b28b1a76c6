use std::time::Instant;

use gsor_core::krylov::{gmres_block_solve, gsor_gmres_solve, GmresConfig};
use gsor_core::linalg::{cholesky, power_method_rho_s, CsrMatrix, RhoEstimate, DEFAULT_POWER_MAXIT};
use gsor_core::problems::{build_problem, Example, Problem, ProblemSpec};
use gsor_core::solvers::{gsor_solve, mhss_solve, IterParams};
use gsor_core::theory::optimal_alpha;
use gsor_core::ComplexVector;
use rayon::prelude::*;

use crate::config::{AlphaSource, BenchConfig};
use crate::error::{BenchError, Result};
use crate::reference;
use crate::report::{BenchRow, Method};

/// Spectral radius estimate of `W⁻¹T` and the resulting GSOR parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaRow {
    pub example: Example,
    pub m: usize,
    pub rho: f64,
    pub alpha: f64,
    pub power_iterations: usize,
    pub power_converged: bool,
}

pub fn estimate_rho(problem: &Problem, tol: f64) -> Result<RhoEstimate> {
    let factor = problem.system.factor_w()?;
    Ok(power_method_rho_s(&factor, problem.system.t(), tol, DEFAULT_POWER_MAXIT)?)
}

pub fn alpha_row(example: Example, m: usize, tol: f64) -> Result<AlphaRow> {
    let problem = build_problem(&ProblemSpec::new(example, m))?;
    let est = estimate_rho(&problem, tol)?;
    Ok(AlphaRow {
        example,
        m,
        rho: est.rho,
        alpha: optimal_alpha(est.rho)?,
        power_iterations: est.iterations,
        power_converged: est.converged,
    })
}

/// [`alpha_row`] for every pair in `examples × m_list`, in that order.
pub fn run_alpha_table(examples: &[Example], m_list: &[usize], tol: f64) -> Result<Vec<AlphaRow>> {
    if let Some(&m) = m_list.iter().find(|&&m| m < 2) {
        return Err(BenchError::Config(format!("grid size must be at least 2, got {m}")));
    }
    let pairs: Vec<(Example, usize)> = examples.iter().flat_map(|&e| m_list.iter().map(move |&m| (e, m))).collect();
    pairs.into_par_iter().map(|(e, m)| alpha_row(e, m, tol)).collect()
}

/// `sqrt(λ_min λ_max)` of an SPD `W`, the parameter minimizing the usual
/// MHSS contraction bound. Extreme eigenvalues come from power iteration
/// on `W` and on `W⁻¹`.
pub fn mhss_bound_alpha(w: &CsrMatrix, tol: f64) -> Result<f64> {
    let n = w.n_rows();
    let eye = CsrMatrix::identity(n);
    let lambda_max = power_method_rho_s(&cholesky(&eye)?, w, tol, DEFAULT_POWER_MAXIT)?.rho;
    let inv_min = power_method_rho_s(&cholesky(w)?, &eye, tol, DEFAULT_POWER_MAXIT)?.rho;
    Ok((lambda_max / inv_min).sqrt())
}

fn missing(method: Method, example: Example, m: usize) -> BenchError {
    BenchError::Config(format!("no tabulated {method} parameter for example {example} at m = {m}"))
}

/// Parameter for `method` on `problem`, or `None` for plain GMRES.
pub fn resolve_alpha(problem: &Problem, method: Method, source: AlphaSource, tol: f64) -> Result<Option<f64>> {
    let (ex, m) = (problem.spec.example, problem.spec.m);
    if !method.uses_alpha() {
        return Ok(None);
    }
    let alpha = match (source, method) {
        (AlphaSource::Explicit(a), _) => a,
        (AlphaSource::Reference, Method::Mhss) => reference::mhss_alpha(ex, m).ok_or_else(|| missing(method, ex, m))?,
        (AlphaSource::Reference, _) => reference::gsor_alpha(ex, m).ok_or_else(|| missing(method, ex, m))?,
        (AlphaSource::Computed, Method::Mhss) => mhss_bound_alpha(problem.system.w(), tol)?,
        (AlphaSource::Computed, _) => optimal_alpha(estimate_rho(problem, tol)?.rho)?,
    };
    Ok(Some(alpha))
}

/// Runs one method from a zero initial guess.
pub fn solve_one(problem: &Problem, method: Method, alpha: Option<f64>, settings: GmresConfig) -> Result<BenchRow> {
    let need = |a: Option<f64>| a.ok_or_else(|| BenchError::Config(format!("{method} needs a parameter alpha")));
    let n = problem.system.dim();
    let start = Instant::now();
    let report = match method {
        Method::Gsor => {
            let params = IterParams::new(need(alpha)?, settings.tol, settings.maxit)?;
            gsor_solve(&problem.system, params, &vec![0.0; n], &vec![0.0; n])?.report
        }
        Method::Mhss => {
            let params = IterParams::new(need(alpha)?, settings.tol, settings.maxit)?;
            let (w, t) = (problem.system.w(), problem.system.t());
            mhss_solve(w, t, &problem.b, params, &ComplexVector::zeros(n))?.1
        }
        Method::Gmres => gmres_block_solve(&problem.system, settings)?.report,
        Method::GsorGmres => gsor_gmres_solve(&problem.system, need(alpha)?, settings)?.report,
    };
    Ok(BenchRow {
        example: problem.spec.example,
        m: problem.spec.m,
        method,
        alpha: if method.uses_alpha() { alpha } else { None },
        iterations: report.iterations,
        converged: report.converged,
        final_residual: report.final_residual,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn run_group(cfg: &BenchConfig, example: Example, m: usize) -> Result<Vec<BenchRow>> {
    let problem = build_problem(&ProblemSpec::new(example, m))?;
    let mut gsor_alpha = None;
    let mut rows = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let alpha = match (method, cfg.alpha_source) {
            (Method::Gsor | Method::GsorGmres, AlphaSource::Computed) => {
                if gsor_alpha.is_none() {
                    gsor_alpha = resolve_alpha(&problem, method, cfg.alpha_source, cfg.tol.min(1e-8))?;
                }
                gsor_alpha
            }
            _ => resolve_alpha(&problem, method, cfg.alpha_source, cfg.tol.min(1e-8))?,
        };
        rows.push(solve_one(&problem, method, alpha, cfg.gmres())?);
    }
    Ok(rows)
}

/// One row per (example, m, method) in config order. Systems run in
/// parallel; each solve is single-threaded and deterministic.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let groups: Vec<(Example, usize)> = cfg.examples.iter().flat_map(|&e| cfg.m.iter().map(move |&m| (e, m))).collect();
    let nested: Vec<Vec<BenchRow>> =
        groups.into_par_iter().map(|(e, m)| run_group(cfg, e, m)).collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}
