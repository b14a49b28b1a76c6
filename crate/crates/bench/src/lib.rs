//! Benchmark harness for the GSOR solver family.
//!
//! Reproduces parameter tables and iteration counts for the four standard
//! test systems, exports eigenvalue data and writes generated systems to
//! disk. The `gsor-bench` binary is a thin command-line front end.

pub mod config;
pub mod error;
pub mod export;
pub mod reference;
pub mod report;
pub mod run;
pub mod spectrum;

pub use config::{AlphaSource, BenchConfig};
pub use error::{BenchError, Result};
pub use report::{BenchRow, Method, ReportFormat};
pub use run::{run_alpha_table, run_bench, solve_one, AlphaRow};
