//! Sparse kernels shared by every solver.

pub mod block;
pub mod cg;
pub mod cholesky;
pub mod csr;
pub mod dense;
pub mod io;
pub mod power;
mod report;
pub mod vector;

pub use block::{apply_block_a, block_residual, BlockSystem};
pub use cg::cg_solve;
pub use cholesky::{cholesky, cholesky_with, solve_spd, Ordering, SpdFactor};
pub use csr::CsrMatrix;
pub use dense::DenseMatrix;
pub use power::{power_method_rho_s, RhoEstimate, DEFAULT_POWER_MAXIT, DEFAULT_POWER_TOL};
pub use report::SolveReport;
pub use vector::{axpy, dot, norm2, ComplexVector, DenseVector};

/// Kronecker sum `I ⊗ V + V ⊗ I`.
pub fn kron_sum(v: &CsrMatrix) -> crate::Result<CsrMatrix> {
    v.kron_sum()
}

/// Sparse matrix-vector product.
pub fn spmv(a: &CsrMatrix, x: &[f64]) -> crate::Result<DenseVector> {
    a.spmv(x)
}
