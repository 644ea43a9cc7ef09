use thiserror::Error;

/// Errors produced by the instance model and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty solution")]
    EmptySolution,

    #[error("unknown {kind} id {id}")]
    UnknownId { kind: &'static str, id: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible instance")]
    Infeasible,

    #[error("LP rounding failed after {attempts} attempts")]
    RoundingFailed { attempts: usize },

    /// An enumeration would exceed its configured cap.
    #[error("{what}: {size} exceeds cap {cap}{hint}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
        hint: &'static str,
    },

    #[error("pattern violates frequency of class {class}: {used} > {frequency}")]
    FrequencyViolated {
        class: usize,
        used: u32,
        frequency: usize,
    },

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
