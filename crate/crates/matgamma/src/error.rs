use matgamma_core::error::Stage;

/// Failures of the command-line layer.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Gamma(#[from] matgamma_core::Error),
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Other = 1,
    GuardFailure = 2,
    VbdFailure = 3,
    BlockFailure = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn name(self) -> &'static str {
        match self {
            ExitStatus::Success => "success",
            ExitStatus::Other => "error",
            ExitStatus::GuardFailure => "guard-failure",
            ExitStatus::VbdFailure => "vbd-failure",
            ExitStatus::BlockFailure => "block-failure",
        }
    }

    pub fn of(err: &matgamma_core::Error) -> Self {
        match err.stage() {
            Stage::Guard => ExitStatus::GuardFailure,
            Stage::Vbd => ExitStatus::VbdFailure,
            Stage::Block | Stage::Reassembly => ExitStatus::BlockFailure,
            Stage::Other => ExitStatus::Other,
        }
    }
}
