//! Options and dispatch shared by the three solvers.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Matching, WeightedBipartiteGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Auction,
    #[serde(rename = "gk")]
    GoldbergKennedy,
    Hungarian,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Auction,
        Algorithm::GoldbergKennedy,
        Algorithm::Hungarian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auction => "auction",
            Algorithm::GoldbergKennedy => "gk",
            Algorithm::Hungarian => "hungarian",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auction" => Ok(Algorithm::Auction),
            "gk" => Ok(Algorithm::GoldbergKennedy),
            "hungarian" => Ok(Algorithm::Hungarian),
            other => Err(Error::InvalidParameter(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// How the auction and push-relabel solvers balance an instance with
/// more left than right vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    /// Mirror copy of the graph plus zero-weight bridges.
    #[default]
    Double,
    /// Zero-weight dummy right vertices adjacent to every left vertex.
    Pad,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// ε reduction factor between scaling phases; must exceed 1.
    pub alpha: f64,
    /// Verify per-phase postconditions and per-step identities, failing
    /// with [`Error::InvariantViolation`] when one breaks.
    pub check_invariants: bool,
    pub deadline: Option<Instant>,
    pub reduction: ReductionKind,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            alpha: 5.0,
            check_invariants: cfg!(debug_assertions),
            deadline: None,
            reduction: ReductionKind::Double,
        }
    }
}

impl SolveOptions {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be a finite number greater than 1, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::TimedOut),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub matching: Matching,
    /// Weight in the caller's (unscaled) weights.
    pub weight: i64,
}

/// Integer ε sequence for a scaling solver starting from `eps0`:
/// `ε ← max(1, ⌊ε/α⌋)` repeated until a phase has run at ε = 1. Always
/// yields at least one phase, and the last one is 1.
pub fn epsilon_schedule(eps0: i64, alpha: f64) -> Vec<i64> {
    let mut schedule = Vec::new();
    let mut eps = eps0.max(1);
    loop {
        let next = ((eps as f64) / alpha).floor() as i64;
        eps = next.min(eps - 1).max(1);
        schedule.push(eps);
        if eps == 1 {
            return schedule;
        }
    }
}

/// Scale factor (n + 1) and the scaled W, checking that scaled arithmetic
/// has headroom in i64.
pub(crate) fn scaling(graph: &WeightedBipartiteGraph) -> Result<(i64, i64)> {
    let factor = i64::try_from(graph.n() + 1)
        .map_err(|_| Error::InvalidParameter("instance too large".into()))?;
    let scaled_w = graph
        .max_abs_weight()
        .checked_mul(factor)
        .filter(|w| *w <= i64::MAX / 64)
        .ok_or_else(|| Error::InvalidParameter("weights too large for exact scaling".into()))?;
    Ok((factor, scaled_w))
}

/// Decrement applied to a left vertex with a single neighbor in place of
/// the missing second-best reduced cost: 2·(n+1)·W + 1.
pub(crate) fn lone_neighbor_gap(scaled_w: i64) -> i64 {
    2 * scaled_w + 1
}

/// Bid budget for one phase: 10·n·m·(spread/ε + 2), saturating.
pub(crate) fn iteration_cap(n: usize, m: usize, spread: i64, eps: i64) -> u128 {
    let per = (spread.max(0) as u128) / (eps.max(1) as u128) + 2;
    10u128
        .saturating_mul(n as u128)
        .saturating_mul(m.max(1) as u128)
        .saturating_mul(per)
}

/// Solves `graph` with `algo`, returning a minimum-weight matching covering
/// every right vertex.
pub fn solve(graph: &WeightedBipartiteGraph, algo: Algorithm, opts: &SolveOptions) -> Result<Solution> {
    match algo {
        Algorithm::Auction => crate::auction::eps_scaling_auction(graph, opts),
        Algorithm::GoldbergKennedy => crate::gk::goldberg_kennedy(graph, opts),
        Algorithm::Hungarian => crate::hungarian::hungarian(graph, opts),
    }
}
