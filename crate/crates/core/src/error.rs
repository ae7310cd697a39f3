use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: argument {value} outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("{what}: no convergence within {cap} terms")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("{what}: result overflows f64 at argument {value}")]
    Overflow { what: &'static str, value: f64 },

    #[error("superposition norm {norm_sq} is degenerate (must exceed 1e-12)")]
    DegenerateNorm { norm_sq: f64 },

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("reduced density has off-diagonal entry {magnitude} at ({row}, {col})")]
    OffDiagonal {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("state export line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
