use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::cholesky::SpdFactor;
use super::csr::CsrMatrix;
use super::vector::{dot, norm2, scale};

pub const DEFAULT_POWER_TOL: f64 = 1e-8;
pub const DEFAULT_POWER_MAXIT: usize = 1000;

const FALLBACK_SEED: u64 = 42;
const STAGNATION_LIMIT: usize = 10;

/// Estimate of the spectral radius of `S = W⁻¹T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoEstimate {
    pub rho: f64,
    /// Signed dominant eigenvalue of `S`.
    pub eigenvalue: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration `v ← W⁻¹ T v` with the generalized Rayleigh quotient
/// `(vᵀTv)/(vᵀWv)` as the eigenvalue estimate.
///
/// Starts from the normalized all-ones vector. If the estimate sits at zero
/// for ten steps while `T` is nonzero, the iteration restarts once from a
/// fixed pseudorandom vector.
pub fn power_method_rho_s(w_factor: &SpdFactor, t: &CsrMatrix, tol: f64, maxit: usize) -> Result<RhoEstimate> {
    let n = w_factor.dim();
    Error::check_len(n, t.n_rows())?;
    if t.values().iter().all(|&v| v == 0.0) || n == 0 {
        return Ok(RhoEstimate { rho: 0.0, eigenvalue: 0.0, iterations: 0, converged: true });
    }

    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut restarted = false;
    let mut zero_run = 0;
    let mut previous: Option<f64> = None;
    let mut estimate = 0.0;
    let mut tv = t.spmv(&v)?;

    for it in 1..=maxit {
        let mut next = w_factor.solve(&tv)?;
        let nrm = norm2(&next);
        if nrm == 0.0 || !nrm.is_finite() {
            estimate = 0.0;
        } else {
            scale(1.0 / nrm, &mut next);
            // W v_next = T v / ‖W⁻¹ T v‖, so vᵀWv needs no product with W
            let wv_dot = dot(&next, &tv) / nrm;
            v = next;
            t.spmv_into(&v, &mut tv)?;
            estimate = dot(&v, &tv) / wv_dot;
        }

        if estimate == 0.0 {
            zero_run += 1;
            if zero_run >= STAGNATION_LIMIT && !restarted {
                let mut rng = ChaCha8Rng::seed_from_u64(FALLBACK_SEED);
                v = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let nrm = norm2(&v);
                scale(1.0 / nrm, &mut v);
                tv = t.spmv(&v)?;
                restarted = true;
                zero_run = 0;
                previous = None;
                continue;
            }
            if !restarted {
                continue;
            }
        } else {
            zero_run = 0;
        }

        if let Some(prev) = previous {
            let denom = estimate.abs().max(f64::MIN_POSITIVE);
            if (estimate - prev).abs() < tol * denom {
                return Ok(RhoEstimate { rho: estimate.abs(), eigenvalue: estimate, iterations: it, converged: true });
            }
        }
        previous = Some(estimate);
    }
    Ok(RhoEstimate { rho: estimate.abs(), eigenvalue: estimate, iterations: maxit, converged: false })
}
