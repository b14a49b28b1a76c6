use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gsor_bench::export::export_problem;
use gsor_bench::report::{export_report, to_markdown, write_csv};
use gsor_bench::run::{resolve_alpha, run_alpha_table, run_bench, solve_one};
use gsor_bench::spectrum::export_spectrum;
use gsor_bench::{AlphaSource, BenchConfig, BenchError, BenchRow, Method, ReportFormat};
use gsor_core::krylov::GmresConfig;
use gsor_core::problems::{build_problem, Example, ProblemSpec};
use gsor_core::theory::optimal_alpha;

#[derive(Parser)]
#[command(name = "gsor-bench", version, about = "GSOR solver benchmarks for complex symmetric systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate ρ(W⁻¹T) by the power method and print the optimal GSOR parameter.
    Alpha {
        #[arg(long)]
        example: Example,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Solve one system with one method and print the result row as CSV.
    Solve {
        #[arg(long)]
        example: Example,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        method: Method,
        #[arg(long, conflicts_with = "alpha_source")]
        alpha: Option<f64>,
        /// `computed` or `reference`.
        #[arg(long, default_value = "computed")]
        alpha_source: AlphaSource,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        maxit: usize,
        #[arg(long, default_value_t = 10)]
        restart: usize,
    },
    /// Run a suite described by a TOML config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
    },
    /// Write eigenvalues of the iteration and preconditioned matrices as CSV.
    Spectrum {
        #[arg(long)]
        example: Example,
        #[arg(long)]
        m: usize,
        /// Defaults to the optimal parameter.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write W and T (Matrix Market) and p, q, b (vector files).
    Export {
        #[arg(long)]
        example: Example,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn status(rows: &[BenchRow]) -> u8 {
    if rows.iter().all(|r| r.converged) {
        0
    } else {
        2
    }
}

fn run(cli: Cli) -> Result<u8, BenchError> {
    match cli.command {
        Command::Alpha { example, m, tol } => {
            let rows = run_alpha_table(&[example], &[m], tol)?;
            let r = &rows[0];
            println!("example {} m {}", r.example, r.m);
            println!("rho   {:.6}", r.rho);
            println!("alpha {:.6}", r.alpha);
            println!("power iterations {} (converged: {})", r.power_iterations, r.power_converged);
            Ok(0)
        }
        Command::Solve { example, m, method, alpha, alpha_source, tol, maxit, restart } => {
            let problem = build_problem(&ProblemSpec::new(example, m))?;
            let source = alpha.map_or(alpha_source, AlphaSource::Explicit);
            let alpha = resolve_alpha(&problem, method, source, tol.min(1e-8))?;
            let row = solve_one(&problem, method, alpha, GmresConfig { restart, tol, maxit })?;
            write_csv(std::slice::from_ref(&row), std::io::stdout().lock())?;
            Ok(status(&[row]))
        }
        Command::Bench { config, out, format } => {
            let cfg = BenchConfig::from_path(config)?;
            let rows = run_bench(&cfg)?;
            match (out, format) {
                (Some(path), _) => export_report(&rows, format, path)?,
                (None, ReportFormat::Csv) => write_csv(&rows, std::io::stdout().lock())?,
                (None, ReportFormat::Markdown) => print!("{}", to_markdown(&rows)),
            }
            Ok(status(&rows))
        }
        Command::Spectrum { example, m, alpha, out } => {
            let spec = ProblemSpec::new(example, m);
            let alpha = match alpha {
                Some(a) => a,
                None => {
                    let rows = run_alpha_table(&[example], &[m], 1e-8)?;
                    optimal_alpha(rows[0].rho)?
                }
            };
            let export = export_spectrum(&spec, alpha, &out)?;
            for note in &export.notes {
                eprintln!("{note}");
            }
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Export { example, m, out_dir } => {
            let problem = build_problem(&ProblemSpec::new(example, m))?;
            for path in export_problem(&problem, out_dir)? {
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
