use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("congruence error: {0}")]
    Congruence(String),

    #[error("unsupported seed: {0}")]
    UnsupportedSeed(String),

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("infeasible search: {0}")]
    InfeasibleSearch(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
