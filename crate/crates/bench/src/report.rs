use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use gsor_core::problems::Example;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "MHSS")]
    Mhss,
    #[serde(rename = "GSOR")]
    Gsor,
    #[serde(rename = "GMRES")]
    Gmres,
    #[serde(rename = "GSOR_GMRES")]
    GsorGmres,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Mhss, Method::Gsor, Method::Gmres, Method::GsorGmres];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mhss => "MHSS",
            Method::Gsor => "GSOR",
            Method::Gmres => "GMRES",
            Method::GsorGmres => "GSOR_GMRES",
        }
    }

    pub fn uses_alpha(self) -> bool {
        self != Method::Gmres
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "mhss" => Ok(Method::Mhss),
            "gsor" => Ok(Method::Gsor),
            "gmres" => Ok(Method::Gmres),
            "gsor_gmres" => Ok(Method::GsorGmres),
            _ => Err(BenchError::Config(format!("unknown method '{s}'"))),
        }
    }
}

/// One solve of one benchmark system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    #[serde(serialize_with = "ser_example", deserialize_with = "de_example")]
    pub example: Example,
    pub m: usize,
    pub method: Method,
    /// `None` for unpreconditioned GMRES.
    pub alpha: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub wall_time_s: f64,
}

fn ser_example<S: Serializer>(e: &Example, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u8(e.number())
}

fn de_example<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Example, D::Error> {
    let k = u8::deserialize(d)?;
    Example::from_number(k).map_err(serde::de::Error::custom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(BenchError::Config(format!("unknown report format '{s}'"))),
        }
    }
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(input: impl Read) -> Result<Vec<BenchRow>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(BenchError::from)).collect()
}

pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Vec<BenchRow>> {
    read_csv(std::fs::File::open(path)?)
}

/// One table per example with methods as row groups and grid sizes as
/// columns. Each group has a parameter row and an iteration row; runs that
/// did not converge are marked with `*`.
pub fn to_markdown(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let examples: BTreeSet<Example> = rows.iter().map(|r| r.example).collect();
    for ex in examples {
        let sub: Vec<&BenchRow> = rows.iter().filter(|r| r.example == ex).collect();
        let ms: BTreeSet<usize> = sub.iter().map(|r| r.m).collect();
        let methods: BTreeSet<Method> = sub.iter().map(|r| r.method).collect();
        let find = |method: Method, m: usize| sub.iter().find(|r| r.method == method && r.m == m);

        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "### Example {}\n", ex.number());
        let _ = write!(out, "| Method | |");
        for m in &ms {
            let _ = write!(out, " m = {m} |");
        }
        out.push_str("\n|---|---|");
        out.push_str(&"---:|".repeat(ms.len()));
        out.push('\n');
        for method in methods {
            if method.uses_alpha() {
                let _ = write!(out, "| {method} | α |");
                for &m in &ms {
                    let cell = find(method, m).and_then(|r| r.alpha).map(|a| format!("{a}")).unwrap_or_default();
                    let _ = write!(out, " {cell} |");
                }
                out.push_str("\n| | IT |");
            } else {
                let _ = write!(out, "| {method} | IT |");
            }
            for &m in &ms {
                let cell = match find(method, m) {
                    Some(r) if r.converged => r.iterations.to_string(),
                    Some(r) => format!("{}*", r.iterations),
                    None => String::new(),
                };
                let _ = write!(out, " {cell} |");
            }
            out.push('\n');
        }
    }
    if rows.iter().any(|r| !r.converged) {
        out.push_str("\n\\* did not reach the tolerance within the iteration cap\n");
    }
    out
}

pub fn export_report(rows: &[BenchRow], format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(BenchError::Config("nothing to report".into()));
    }
    match format {
        ReportFormat::Csv => write_csv(rows, std::fs::File::create(path)?),
        ReportFormat::Markdown => Ok(std::fs::write(path, to_markdown(rows))?),
    }
}
