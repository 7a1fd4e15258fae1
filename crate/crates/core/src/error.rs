use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("genome has {got} genes, space has {expected} dimensions")]
    GenomeLength { expected: usize, got: usize },
    #[error("gene {dim} = {index} is out of range (dimension has {len} values)")]
    GeneOutOfRange {
        dim: usize,
        index: usize,
        len: usize,
    },
    #[error("invalid parameter space: {0}")]
    InvalidSpace(String),
    #[error("game is already finished at tick {0}")]
    GameFinished(u32),
    #[error("game is not finished (tick {0})")]
    GameNotFinished(u32),
    #[error("action index {0} is not a legal action")]
    InvalidAction(i64),
    #[error("invalid agent: {0}")]
    InvalidAgent(String),
    /// Refusal raised by the budget ledger; optimizers treat it as a stop signal.
    #[error("budget exhausted: {requested} games requested, {remaining} remaining")]
    BudgetExhausted { requested: u64, remaining: u64 },
    #[error("resample count must be at least 1")]
    ZeroResamples,
    #[error("budget of {budget} games cannot pay for one generation ({needed} games)")]
    BudgetTooSmall { budget: u64, needed: u64 },
    #[error("unknown dimension `{0}`")]
    UnknownDimension(String),
    #[error("no recommendations to validate")]
    EmptyRecommendations,
    #[error("no records")]
    EmptyRecords,
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid value for `{key}`: {message}")]
    InvalidValue { key: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable identifier, used by the CLI for machine-readable errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::GenomeLength { .. } | Error::GeneOutOfRange { .. } => "genome",
            Error::InvalidSpace(_) => "space",
            Error::GameFinished(_) | Error::GameNotFinished(_) => "game-state",
            Error::InvalidAction(_) => "action",
            Error::InvalidAgent(_) => "agent",
            Error::BudgetExhausted { .. } | Error::BudgetTooSmall { .. } => "budget",
            Error::ZeroResamples => "resamples",
            Error::UnknownDimension(_) => "dimension",
            Error::EmptyRecommendations | Error::EmptyRecords => "empty-input",
            Error::Config { .. } | Error::InvalidValue { .. } => "config",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
