//! Library half of the `focal-rd` command-line tool: argument
//! mini-languages, subcommand drivers, CSV formatting, and the exit-code
//! policy. The binary in `main.rs` is a thin clap wrapper over this.

use thiserror::Error;

pub mod format;
pub mod run;
pub mod source;

pub use format::format_sig15;
pub use run::{
    binomial_parameter_audit, run_asymptotic, run_code_dump, run_hgamma, run_oracle, run_point,
    run_sweep, write_point_csv, Figure, ParameterAudit, PointConfig, SweepConfig,
};
pub use source::{parse_int_list, parse_source, FxMode, GridSpec};

/// Errors surfaced to the user, split by exit code: validation problems
/// (bad flags, malformed specs, unreadable files) exit with 1, guard-rail
/// rejections (instances too large for exhaustive or exact computation)
/// exit with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    GuardRail(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<focal_rd::Error> for CliError {
    fn from(error: focal_rd::Error) -> Self {
        match error {
            focal_rd::Error::InstanceTooLarge { .. } | focal_rd::Error::SpectrumTooLarge { .. } => {
                CliError::GuardRail(error.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::GuardRail(_) => 2,
            CliError::Validation(_) | CliError::Io(_) => 1,
        }
    }
}
