use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    /// Bad command line, unreadable or invalid scenario file.
    pub const USAGE: i32 = 2;
    /// Every solve of the run ended without a feasible solution.
    pub const INFEASIBLE: i32 = 3;
    pub const SELFTEST_FAILED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Scenario(#[from] crate::scenario_file::ScenarioError),
    #[error("no feasible solution in any cell of the run; outputs written to {}", .0.display())]
    InfeasibleEverywhere(PathBuf),
    #[error("{failed} selftest check(s) failed")]
    SelftestFailed { failed: usize, report: String },
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] isacsim_core::IsacError),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Scenario(_) => exit::USAGE,
            Self::InfeasibleEverywhere(_) => exit::INFEASIBLE,
            Self::SelftestFailed { .. } => exit::SELFTEST_FAILED,
            Self::Io { .. } | Self::Core(_) | Self::Internal(_) => exit::INTERNAL,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
