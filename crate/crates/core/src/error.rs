use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("party count {0} is outside the supported range 1..={max}", max = crate::entropy_space::MAX_PARTIES)]
    PartyCount(usize),
    #[error("invalid subsystem index: {0}")]
    InvalidIndex(String),
    #[error("the full purified system has identically zero entropy and has no reduced index")]
    FullSystem,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("patterns belong to different contexts")]
    ContextMismatch,
    #[error("unknown inequality family `{0}`")]
    UnknownFamily(String),
    #[error("cone has an empty half-space representation")]
    EmptyHrep,
    #[error("cone is not pointed; lineality space has dimension {}", .lineality.len())]
    NotPointed { lineality: Vec<Vec<String>> },
    #[error("integer overflow during exact computation")]
    Overflow,
    #[error("selection of rays is empty")]
    EmptySelection,
    #[error("oracle enumeration requested for n = {0}; pass an override to allow n > 3")]
    OracleGuard(usize),
    #[error("invalid state generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid check matrix: {0}")]
    CheckMatrix(String),
    #[error("vector {label} lies outside the SA+SSA cone")]
    OutsideCone { label: String },
    #[error("unknown instance name `{0}`")]
    UnknownInstance(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache entry {path} does not match the requested computation")]
    StaleCache { path: PathBuf },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
