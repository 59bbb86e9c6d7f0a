use thiserror::Error;

use crate::graph::MatchingViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{side} index {index} out of range (bound {bound})")]
    IndexOutOfRange {
        side: Side,
        index: usize,
        bound: usize,
    },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("both sides must have at least one vertex (got n={n}, s={s})")]
    EmptySide { n: usize, s: usize },
    #[error("({u}, {v}) is not an edge")]
    NotAnEdge { u: usize, v: usize },
    #[error("instance is infeasible: no matching covers every right vertex")]
    Infeasible,
    #[error("instance is unbalanced (n={n}, s={s}); apply a reduction first")]
    Unbalanced { n: usize, s: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("iteration cap {cap} exceeded in phase {phase} (eps={eps})")]
    IterationCap { phase: usize, eps: i64, cap: u128 },
    #[error("time limit exceeded")]
    TimedOut,
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(MatchingViolation),
    #[error("pseudoflow still has {active} active vertices")]
    NotAFlow { active: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("solvers disagree on instance {instance}: {detail}")]
    WeightMismatch { instance: String, detail: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}
