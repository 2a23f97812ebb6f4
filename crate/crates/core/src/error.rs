use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid color parameters c={c}, m={m}: both palettes need at least one color")]
    InvalidParams { c: u32, m: u32 },

    #[error("n={n} exceeds the brute-force cap of {cap}")]
    BruteForceCap { n: usize, cap: usize },

    #[error("n={n} is outside the range covered by a table built to n_max={n_max}")]
    BeyondTable { n: usize, n_max: usize },

    #[error("rank {rank} is out of range for a class of size {size}")]
    RankOutOfRange { rank: BigUint, size: BigUint },

    #[error("invalid colored partition: {0}")]
    InvalidPartition(String),

    #[error("malformed partition text {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("series coefficient {n}!·[z^{n}]F(z) is not an integer (internal defect)")]
    NonIntegralCoefficient { n: usize },

    #[error("degenerate distribution at n={n}: variance is zero")]
    Degenerate { n: usize },

    #[error("{op} requires {requirement}, got {got}")]
    Domain {
        op: &'static str,
        requirement: &'static str,
        got: String,
    },

    #[error("saddle solver did not converge for x={x} after {iterations} iterations")]
    NoConvergence { x: f64, iterations: usize },
}
