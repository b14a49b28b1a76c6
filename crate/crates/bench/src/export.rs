use std::path::{Path, PathBuf};

use gsor_core::linalg::io::{write_complex_vector, write_matrix_market, write_vector, MatrixSymmetry};
use gsor_core::problems::Problem;

use crate::error::Result;

/// Writes `W.mtx`, `T.mtx`, `p.txt`, `q.txt` and `b.txt` into `dir`,
/// creating it if needed. Returns the written paths.
pub fn export_problem(problem: &Problem, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let path = |name: &str| dir.join(name);
    let sys = &problem.system;
    write_matrix_market(path("W.mtx"), sys.w(), MatrixSymmetry::Symmetric)?;
    write_matrix_market(path("T.mtx"), sys.t(), MatrixSymmetry::Symmetric)?;
    write_vector(path("p.txt"), sys.p())?;
    write_vector(path("q.txt"), sys.q())?;
    write_complex_vector(path("b.txt"), &problem.b)?;
    Ok(["W.mtx", "T.mtx", "p.txt", "q.txt", "b.txt"].iter().map(|n| path(n)).collect())
}
