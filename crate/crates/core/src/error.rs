use thiserror::Error;

/// Errors surfaced by operations whose failure is part of their contract.
///
/// Programmer errors (indexing with an id that was never validated, breaking
/// a documented precondition) panic instead; see the individual functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown student id {0}")]
    UnknownStudent(u32),
    #[error("unknown college id {0}")]
    UnknownCollege(u32),
    #[error("college {college} is at its quota of {quota}")]
    CapacityExceeded { college: u32, quota: u32 },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("instance too large to enumerate: bound {bound} exceeds cap {cap}")]
    InstanceTooLarge { bound: u128, cap: u128 },
    #[error("infeasible market config: {0}")]
    InfeasibleConfig(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
