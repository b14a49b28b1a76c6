//! Solvers for complex symmetric linear systems `(W + iT) u = b`.
//!
//! The complex system is handled through its real 2-by-2 block form
//!
//! ```text
//! [ W  -T ] [x]   [p]
//! [ T   W ] [y] = [q]
//! ```
//!
//! with `W` symmetric positive definite and `T` symmetric. The crate provides
//! the generalized SOR (GSOR) iteration on that block form, the matching
//! GSOR preconditioner for restarted GMRES, the MHSS iteration as a baseline,
//! closed-form parameter theory with a small-scale spectrum oracle, and
//! generators for the standard benchmark systems.
//!
//! Module map:
//!
//! - [`linalg`]: CSR matrices, sparse Cholesky, CG, power method, block-system
//!   kernels and Matrix Market / vector file I/O.
//! - [`solvers`]: GSOR and MHSS stationary iterations.
//! - [`krylov`]: restarted GMRES and the GSOR-preconditioned operator.
//! - [`theory`]: optimal parameters, convergence interval, spectra.
//! - [`problems`]: benchmark generators and the `beta - i*delta` rotation.

pub mod error;
pub mod krylov;
pub mod linalg;
pub mod problems;
pub mod solvers;
pub mod theory;

pub use error::{Error, Result};
pub use linalg::{BlockSystem, ComplexVector, CsrMatrix, SolveReport, SpdFactor};
