//! Experiment driver for `skewlab`: configuration parsing, the named
//! experiments, artifact writing and the invariant suite behind `verify`.

pub mod artifacts;
pub mod checks;
pub mod config;
pub mod experiments;

pub use artifacts::{run, Artifacts, RunOutcome};
pub use checks::{Check, Fault, Scale};
pub use config::{AlphaSpec, ExperimentConfig, HSpec, EXPERIMENTS, OUT_DIR_ENV};
pub use experiments::{run_experiment, Curves, Outcome};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INVARIANT: i32 = 2;
    pub const PRECISION: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] skewlab_core::Error),

    #[error("cannot write artifacts: {0}")]
    Io(#[from] std::io::Error),

    #[error("invariant failed: {}", .0.join("; "))]
    Invariant(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use skewlab_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => exit::USAGE,
            CliError::Invariant(_) => exit::INVARIANT,
            CliError::Core(e) => match e {
                E::PrecisionExhausted(_) | E::NearResonance { .. } => exit::PRECISION,
                E::InvariantViolation(_) | E::SupportViolation { .. } => exit::INVARIANT,
                _ => exit::USAGE,
            },
        }
    }
}
