//! Generators for the four benchmark systems and the `β - iδ` rotation.
//!
//! All grids are `m x m` on the unit square with `h = 1/(m+1)`,
//! `V_m = h⁻² tridiag(-1, 2, -1)` and `K = I ⊗ V_m + V_m ⊗ I` (so `n = m²`).
//!
//! | example | `W`                                   | `T`                      | `b`                  |
//! |---------|---------------------------------------|--------------------------|----------------------|
//! | 1       | `K + (3 - √3)/τ I`                    | `K + (3 + √3)/τ I`       | `(1-i) j / (τ(j+1)²)`|
//! | 2       | `K - ω² I`                            | `10 ω I + μ K`           | `(1+i) A 𝟏`          |
//! | 3       | `10(I⊗V_c + V_c⊗I) + 9(e₁e_mᵀ + e_me₁ᵀ)⊗I` | `I⊗V + V⊗I`        | `(1+i) A 𝟏`          |
//! | 4       | `K + σ₁ I`                            | `σ₂ I`                   | `(1+i) A 𝟏`          |
//!
//! Example 3 uses `V = tridiag(-1, 2, -1)` without the `h⁻²` factor and
//! its periodic counterpart `V_c = V - e₁e_mᵀ - e_me₁ᵀ`. Examples 1, 2 and 4
//! are normalized by `h²` (matrices and right-hand side).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{BlockSystem, ComplexVector, CsrMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Example {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
}

impl Example {
    pub const ALL: [Example; 4] = [Example::Ex1, Example::Ex2, Example::Ex3, Example::Ex4];

    pub fn number(self) -> u8 {
        match self {
            Example::Ex1 => 1,
            Example::Ex2 => 2,
            Example::Ex3 => 3,
            Example::Ex4 => 4,
        }
    }

    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Example::Ex1),
            2 => Ok(Example::Ex2),
            3 => Ok(Example::Ex3),
            4 => Ok(Example::Ex4),
            _ => Err(Error::InvalidParameter(format!("unknown example {k}; expected 1-4"))),
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Example {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches("ex").trim_start_matches("Ex");
        let k: u8 = digits.parse().map_err(|_| Error::InvalidParameter(format!("unknown example '{s}'")))?;
        Self::from_number(k)
    }
}

/// Which `T` to use for Example 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Ex1Variant {
    /// `T = K + (3 + √3)/τ I`.
    #[default]
    Equation,
    /// `T = K + (3 - √3)/τ I`, identical shift to `W`.
    Text,
}

/// Benchmark problem parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub example: Example,
    pub m: usize,
    /// Example 1 time step; `None` means `τ = h`.
    pub tau: Option<f64>,
    /// Example 2 driving frequency.
    pub omega: f64,
    /// Example 2 hysteretic damping coefficient.
    pub mu_damp: f64,
    /// Example 4 coefficients.
    pub sigma1: f64,
    pub sigma2: f64,
    /// Multiply matrices and right-hand side by `h²`.
    pub normalize: bool,
    pub ex1_variant: Ex1Variant,
}

impl ProblemSpec {
    /// Published parameters for `example` on an `m x m` grid.
    pub fn new(example: Example, m: usize) -> Self {
        Self {
            example,
            m,
            tau: None,
            omega: std::f64::consts::PI,
            mu_damp: 0.02,
            sigma1: 100.0,
            sigma2: 100.0,
            normalize: example != Example::Ex3,
            ex1_variant: Ex1Variant::Equation,
        }
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.m as f64 + 1.0)
    }

    pub fn n(&self) -> usize {
        self.m * self.m
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("grid size m must be at least 1".into()));
        }
        let finite = [self.omega, self.mu_damp, self.sigma1, self.sigma2];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("problem coefficients must be finite".into()));
        }
        if let Some(tau) = self.tau {
            if !(tau > 0.0) || !tau.is_finite() {
                return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
            }
        }
        Ok(())
    }
}

/// A generated benchmark system.
#[derive(Clone, Debug)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub system: BlockSystem,
    pub b: ComplexVector,
}

/// `h⁻² tridiag(-1, 2, -1)` of order `m`.
pub fn scaled_laplacian_1d(m: usize, h: f64) -> CsrMatrix {
    CsrMatrix::tridiagonal(m, -1.0, 2.0, -1.0).scaled(1.0 / (h * h))
}

/// Five-point negative Laplacian `K = I ⊗ V_m + V_m ⊗ I` with Dirichlet
/// boundary conditions.
pub fn five_point_laplacian(m: usize) -> CsrMatrix {
    let h = 1.0 / (m as f64 + 1.0);
    scaled_laplacian_1d(m, h).kron_sum().expect("square")
}

pub fn build_problem(spec: &ProblemSpec) -> Result<Problem> {
    spec.validate()?;
    let m = spec.m;
    let n = spec.n();
    let h = spec.h();
    let eye = CsrMatrix::identity(n);

    let (w, t, b) = match spec.example {
        Example::Ex1 => {
            let k = five_point_laplacian(m);
            let tau = spec.tau.unwrap_or(h);
            let s3 = 3f64.sqrt();
            let w = k.linear_combination(1.0, &eye, (3.0 - s3) / tau)?;
            let t_shift = match spec.ex1_variant {
                Ex1Variant::Equation => (3.0 + s3) / tau,
                Ex1Variant::Text => (3.0 - s3) / tau,
            };
            let t = k.linear_combination(1.0, &eye, t_shift)?;
            // b_j = (1 - i) j / (τ (j + 1)²), j = 1..n
            let re: Vec<f64> = (1..=n)
                .map(|j| {
                    let j = j as f64;
                    j / (tau * (j + 1.0) * (j + 1.0))
                })
                .collect();
            let im = re.iter().map(|v| -v).collect();
            (w, t, Some(ComplexVector { re, im }))
        }
        Example::Ex2 => {
            let k = five_point_laplacian(m);
            let w = k.linear_combination(1.0, &eye, -spec.omega * spec.omega)?;
            let t = k.linear_combination(spec.mu_damp, &eye, 10.0 * spec.omega)?;
            (w, t, None)
        }
        Example::Ex3 => {
            let v = CsrMatrix::tridiagonal(m, -1.0, 2.0, -1.0);
            let mut corner = vec![(0, m - 1, 1.0)];
            if m > 1 {
                corner.push((m - 1, 0, 1.0));
            } else {
                corner[0].2 = 2.0;
            }
            let wrap = CsrMatrix::from_triplets(&corner, m, m)?;
            let vc = v.linear_combination(1.0, &wrap, -1.0)?;
            let t = v.kron_sum()?;
            let w = vc.kron_sum()?.linear_combination(10.0, &wrap.kron(&CsrMatrix::identity(m)), 9.0)?;
            (w, t, None)
        }
        Example::Ex4 => {
            let k = five_point_laplacian(m);
            let w = k.linear_combination(1.0, &eye, spec.sigma1)?;
            let t = eye.scaled(spec.sigma2);
            (w, t, None)
        }
    };

    let (w, t, b) = if spec.normalize {
        let s = h * h;
        (w.scaled(s), t.scaled(s), b.map(|b| b.scaled(s, 0.0)))
    } else {
        (w, t, b)
    };

    let placeholder = ComplexVector::zeros(n);
    let system = BlockSystem::new(w, t, placeholder.re, placeholder.im)?;
    let b = match b {
        Some(b) => b,
        None => {
            // b = (1 + i) A 𝟏: the block product of (𝟏, 𝟏) is exactly (Re b, Im b)
            let ones = vec![1.0; n];
            let (p, q) = system.apply(&ones, &ones)?;
            ComplexVector { re: p, im: q }
        }
    };
    let system = system.with_rhs(b.re.clone(), b.im.clone())?;
    Ok(Problem { spec: spec.clone(), system, b })
}

/// Multiplies `(W + iT) u = b` by `β - iδ`, giving
/// `W̃ = βW + δT`, `T̃ = βT - δW`, `b̃ = (β - iδ) b`.
pub fn rotate_system(
    w: &CsrMatrix,
    t: &CsrMatrix,
    b: &ComplexVector,
    beta: f64,
    delta: f64,
) -> Result<(CsrMatrix, CsrMatrix, ComplexVector)> {
    if beta == 0.0 && delta == 0.0 {
        return Err(Error::InvalidParameter("rotation (beta, delta) must be nonzero".into()));
    }
    Error::check_len(w.n_rows(), b.len())?;
    let w_rot = w.linear_combination(beta, t, delta)?;
    let t_rot = t.linear_combination(beta, w, -delta)?;
    Ok((w_rot, t_rot, b.scaled(beta, -delta)))
}
