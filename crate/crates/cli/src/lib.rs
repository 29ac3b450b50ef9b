//! Parameter sweeps, unit conversion and result files for the `splittrap`
//! command-line tool.

pub mod output;
pub mod spec;
pub mod sweep;
pub mod units;

pub use output::{parse_csv, parse_json, Failure, FailureManifest, Record};
pub use spec::{Format, Mode, Observable, PartialSpec, SweepSpec};
pub use sweep::{evaluate, run_sweep, SweepResult};
pub use units::{g1d_from_physical, Coupling, TrapUnits};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("cannot parse result file: {0}")]
    Parse(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Self::Parse(msg.into())
    }

    /// The message without the variant prefix.
    pub fn message(&self) -> &str {
        match self {
            Self::Validation(m) | Self::Parse(m) | Self::Solver(m) | Self::Io(m) => m,
        }
    }

    /// 1 for bad input, 2 for failures while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) | Self::Parse(_) => 1,
            Self::Solver(_) | Self::Io(_) => 2,
        }
    }
}
