//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid cycle type: {0}")]
    InvalidCycleType(String),

    #[error("cycle type parse error: {0}")]
    Parse(String),

    #[error("orbit size k = {k} exceeds the brute-force cap {cap}")]
    Capacity { k: usize, cap: usize },

    #[error("k = {k} out of range: must satisfy 1 <= k <= n/2 with n = {n}")]
    OrbitSizeRange { k: usize, n: usize },

    #[error(
        "indeterminate limit parameters (x, x') = ({x}, {x_prime}) with yy' < 1: \
         the limiting probability can be close to 0 or to 1"
    )]
    IndeterminateCorner { x: String, x_prime: String },

    #[error("invalid limit parameters: {0}")]
    InvalidLimitParams(String),

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("recognition budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("degenerate degree n = {0}: alternating/symmetric distinction needs n >= 3")]
    DegenerateDegree(usize),

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("probability table io: {0}")]
    TableIo(String),
}

pub type Result<T> = std::result::Result<T, Error>;
