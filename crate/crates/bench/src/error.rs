use thiserror::Error;

pub type Result<T> = std::result::Result<T, BenchError>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] gsor_core::Error),

    #[error("config error: {0}")]
    Config(String),

    #[error("invalid TOML: {0}")]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl BenchError {
    /// Process exit code: 3 for numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        use gsor_core::Error as E;
        match self {
            BenchError::Core(
                E::NotPositiveDefinite { .. }
                | E::NotSymmetric { .. }
                | E::NotSquare { .. }
                | E::ZeroRhs
                | E::DimensionMismatch { .. },
            ) => 3,
            _ => 1,
        }
    }
}
