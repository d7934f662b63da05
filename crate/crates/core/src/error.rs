use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: {msg}")]
    Parse { origin: String, msg: String },
    #[error("{origin}: invalid scenario:\n  {}", violations.join("\n  "))]
    Invalid {
        origin: String,
        violations: Vec<String>,
    },
    #[error("unknown bundled scenario {0:?} (available: toy6, ireland35)")]
    UnknownScenario(String),
    #[error("invalid option: {0}")]
    Option(String),
    #[error("dimension mismatch: expected {expected} values, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Lp(#[from] p2h_lp::LpError),
    #[error(transparent)]
    Aviation(#[from] crate::aviation::AviationError),
    #[error(transparent)]
    Linearize(#[from] crate::linearize::LinearizeError),
    #[error("model is {0}")]
    NotOptimal(p2h_lp::Status),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
