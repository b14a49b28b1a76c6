use std::fmt;
use std::path::Path;
use std::str::FromStr;

use gsor_core::krylov::GmresConfig;
use gsor_core::problems::Example;
use gsor_core::solvers::{DEFAULT_MAXIT, DEFAULT_TOL};
use serde::Deserialize;

use crate::error::{BenchError, Result};
use crate::report::Method;

/// Where the iteration parameter of a run comes from.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum AlphaSource {
    /// Estimated from the generated system.
    #[default]
    Computed,
    /// Taken from the embedded table of published values.
    Reference,
    Explicit(f64),
}

impl FromStr for AlphaSource {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "computed" => Ok(AlphaSource::Computed),
            "reference" | "table" => Ok(AlphaSource::Reference),
            other => other
                .parse::<f64>()
                .map(AlphaSource::Explicit)
                .map_err(|_| BenchError::Config(format!("unknown alpha source '{s}'"))),
        }
    }
}

impl fmt::Display for AlphaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSource::Computed => f.write_str("computed"),
            AlphaSource::Reference => f.write_str("reference"),
            AlphaSource::Explicit(a) => write!(f, "{a}"),
        }
    }
}

/// A benchmark suite: every combination of example, grid size and method.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub examples: Vec<Example>,
    pub m: Vec<usize>,
    pub methods: Vec<Method>,
    pub tol: f64,
    pub maxit: usize,
    pub restart: usize,
    pub alpha_source: AlphaSource,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            examples: Example::ALL.to_vec(),
            m: vec![16, 32, 64],
            methods: vec![Method::Mhss, Method::Gsor, Method::Gmres, Method::GsorGmres],
            tol: DEFAULT_TOL,
            maxit: DEFAULT_MAXIT,
            restart: 10,
            alpha_source: AlphaSource::Reference,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    examples: Vec<u8>,
    m: Vec<usize>,
    methods: Vec<String>,
    tol: Option<f64>,
    maxit: Option<usize>,
    restart: Option<usize>,
    alpha_source: Option<String>,
    alpha: Option<f64>,
}

impl BenchConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text)?;
        let defaults = BenchConfig::default();
        let examples = raw
            .examples
            .iter()
            .map(|&k| Example::from_number(k).map_err(|e| BenchError::Config(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let methods = raw.methods.iter().map(|s| s.parse()).collect::<Result<Vec<Method>>>()?;
        let alpha_source = match (raw.alpha_source.as_deref(), raw.alpha) {
            (Some("explicit") | None, Some(a)) => AlphaSource::Explicit(a),
            (Some("explicit"), None) => {
                return Err(BenchError::Config("alpha_source = \"explicit\" needs an alpha value".into()))
            }
            (Some(s), None) => s.parse()?,
            (None, None) => defaults.alpha_source,
            (Some(s), Some(_)) => {
                return Err(BenchError::Config(format!(
                    "alpha is only valid with alpha_source = \"explicit\", not '{s}'"
                )))
            }
        };
        let cfg = Self {
            examples,
            m: raw.m,
            methods,
            tol: raw.tol.unwrap_or(defaults.tol),
            maxit: raw.maxit.unwrap_or(defaults.maxit),
            restart: raw.restart.unwrap_or(defaults.restart),
            alpha_source,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.examples.is_empty() || self.m.is_empty() || self.methods.is_empty() {
            return Err(BenchError::Config("examples, m and methods must be nonempty".into()));
        }
        if let Some(&m) = self.m.iter().find(|&&m| m < 2) {
            return Err(BenchError::Config(format!("grid size must be at least 2, got {m}")));
        }
        if !(self.tol > 0.0) || self.maxit == 0 || self.restart == 0 {
            return Err(BenchError::Config("tol, maxit and restart must be positive".into()));
        }
        if let AlphaSource::Explicit(a) = self.alpha_source {
            if !a.is_finite() || a <= 0.0 {
                return Err(BenchError::Config(format!("explicit alpha must be positive, got {a}")));
            }
        }
        Ok(())
    }

    pub fn gmres(&self) -> GmresConfig {
        GmresConfig { restart: self.restart, tol: self.tol, maxit: self.maxit }
    }
}
