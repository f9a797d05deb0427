use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FockError {
    #[error("invalid multicharge: {0}")]
    InvalidMulticharge(String),

    #[error("invalid partition {parts:?}: parts must be positive and weakly decreasing")]
    InvalidPartition { parts: Vec<u32> },

    #[error("level mismatch: expected {expected} components, got {got}")]
    LevelMismatch { expected: usize, got: usize },

    #[error("invalid element of Z^s: {0}")]
    InvalidZs(String),

    #[error("degree cap {cap} exceeded (would reach {reached})")]
    DegreeCapExceeded { cap: usize, reached: usize },

    #[error("well-definedness violated: sigma_{residue} undefined on an orbit of a singular multipartition at step {step}")]
    WellDefinedness { residue: i64, step: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FockError>;
