//! Random instance generators.
//!
//! Two graph models (Erdős–Rényi and dispersed-degree) and three weight
//! models (uniform, uniform-low-high, low-or-high). Graph generators return
//! instances with all weights zero; the weight assigners return a copy of
//! the structure with fresh weights.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. Structure draws use stream 0 and weight draws stream 1
//! of the same seed, so one seed fixes a whole instance and the two parts
//! stay independent. ChaCha output is platform independent, so a `GenSpec`
//! maps to the same instance file everywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedBipartiteGraph;

/// Weights of the uniform model are drawn from `1..=MAX_WEIGHT`.
pub const MAX_WEIGHT: i64 = 100_000;
/// Upper end of the low part in the uniform-low-high model.
pub const LOW_PART_MAX: i64 = 1_000;

const STRUCTURE_STREAM: u64 = 0;
const WEIGHT_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeModel {
    ErdosRenyi,
    DispersedDegree,
}

impl EdgeModel {
    pub fn name(self) -> &'static str {
        match self {
            EdgeModel::ErdosRenyi => "erdos_renyi",
            EdgeModel::DispersedDegree => "dispersed_degree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightModel {
    Uniform,
    UniformLowHigh,
    LowOrHigh,
}

impl WeightModel {
    pub fn name(self) -> &'static str {
        match self {
            WeightModel::Uniform => "uniform",
            WeightModel::UniformLowHigh => "uniform_low_high",
            WeightModel::LowOrHigh => "low_or_high",
        }
    }

    /// Whether the model is parameterized by a low-part probability.
    pub fn uses_p_low(self) -> bool {
        !matches!(self, WeightModel::Uniform)
    }
}

/// Full description of one random instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub model: EdgeModel,
    pub n: usize,
    pub s: usize,
    /// Target density in [0, 1].
    pub d: f64,
    /// Normalized dispersion radius in [0, 1]; dispersed-degree only.
    pub r_norm: f64,
    pub weight_model: WeightModel,
    /// Low-part probability; ignored by the uniform model.
    pub p_low: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<WeightedBipartiteGraph> {
        let structure = match self.model {
            EdgeModel::ErdosRenyi => erdos_renyi(self.n, self.s, self.d, self.seed)?,
            EdgeModel::DispersedDegree => {
                let r = dispersion_radius(self.s, self.d, self.r_norm)?;
                dispersed_degree(self.n, self.s, self.d, r, self.seed)?
            }
        };
        match self.weight_model {
            WeightModel::Uniform => Ok(assign_uniform_weights(&structure, self.seed)),
            WeightModel::UniformLowHigh => assign_uniform_low_high(&structure, self.p_low, self.seed),
            WeightModel::LowOrHigh => assign_low_or_high(&structure, self.p_low, self.seed),
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {p}")))
    }
}

fn check_sides(n: usize, s: usize) -> Result<()> {
    if n == 0 || s == 0 {
        return Err(Error::EmptySide { n, s });
    }
    Ok(())
}

/// Largest admissible dispersion radius, s·min(d, 1−d).
pub fn max_radius(s: usize, d: f64) -> f64 {
    s as f64 * d.min(1.0 - d)
}

/// Absolute radius for a normalized one: `round(r_norm · bound)`, clamped
/// to `floor(bound)` so it never exceeds the bound.
pub fn dispersion_radius(s: usize, d: f64, r_norm: f64) -> Result<usize> {
    check_probability("density", d)?;
    check_probability("normalized radius", r_norm)?;
    let bound = max_radius(s, d);
    let r = (r_norm * bound + 0.5).floor();
    Ok(r.min((bound + 1e-9).floor()) as usize)
}

/// Degree interval `[round(d·s) − r, round(d·s) + r]` (round half up).
pub fn degree_interval(s: usize, d: f64, r: usize) -> (usize, usize) {
    let center = (d * s as f64 + 0.5).floor() as usize;
    (center.saturating_sub(r), (center + r).min(s))
}

/// Every one of the n·s pairs becomes an edge independently with
/// probability `d`.
pub fn erdos_renyi(n: usize, s: usize, d: f64, seed: u64) -> Result<WeightedBipartiteGraph> {
    check_sides(n, s)?;
    check_probability("density", d)?;
    let mut rng = rng_for(seed, STRUCTURE_STREAM);
    let adjacency: Vec<Vec<(usize, i64)>> = (0..n)
        .map(|_| (0..s).filter(|_| rng.gen_bool(d)).map(|v| (v, 0)).collect())
        .collect();
    Ok(WeightedBipartiteGraph::from_adjacency(n, s, &adjacency))
}

/// Each left vertex draws a degree uniformly from
/// [`degree_interval`]`(s, d, r)` and connects to a uniform random subset
/// of that size.
pub fn dispersed_degree(
    n: usize,
    s: usize,
    d: f64,
    r: usize,
    seed: u64,
) -> Result<WeightedBipartiteGraph> {
    check_sides(n, s)?;
    check_probability("density", d)?;
    if r as f64 > max_radius(s, d) + 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "dispersion radius {r} exceeds s*min(d,1-d) = {}",
            max_radius(s, d)
        )));
    }
    let (lo, hi) = degree_interval(s, d, r);
    let mut rng = rng_for(seed, STRUCTURE_STREAM);
    let degrees: Vec<usize> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();

    // Partial Fisher-Yates over a pool that is never reset: any arrangement
    // of the pool is a valid starting point for a uniform draw.
    let mut pool: Vec<usize> = (0..s).collect();
    let adjacency: Vec<Vec<(usize, i64)>> = degrees
        .iter()
        .map(|&deg| {
            for i in 0..deg {
                let j = rng.gen_range(i..s);
                pool.swap(i, j);
            }
            let mut picked: Vec<(usize, i64)> = pool[..deg].iter().map(|&v| (v, 0)).collect();
            picked.sort_unstable_by_key(|e| e.0);
            picked
        })
        .collect();
    Ok(WeightedBipartiteGraph::from_adjacency(n, s, &adjacency))
}

/// Weights i.i.d. uniform on `1..=100000`.
pub fn assign_uniform_weights(graph: &WeightedBipartiteGraph, seed: u64) -> WeightedBipartiteGraph {
    let mut rng = rng_for(seed, WEIGHT_STREAM);
    let weights = (0..graph.m()).map(|_| rng.gen_range(1..=MAX_WEIGHT)).collect();
    graph.with_weights(weights)
}

/// Each edge is low with probability `p_low`; low weights are uniform on
/// `1..=1000`, high weights uniform on `1001..=100000`.
pub fn assign_uniform_low_high(
    graph: &WeightedBipartiteGraph,
    p_low: f64,
    seed: u64,
) -> Result<WeightedBipartiteGraph> {
    check_probability("p_low", p_low)?;
    let mut rng = rng_for(seed, WEIGHT_STREAM);
    let weights = (0..graph.m())
        .map(|_| {
            if rng.gen_bool(p_low) {
                rng.gen_range(1..=LOW_PART_MAX)
            } else {
                rng.gen_range(LOW_PART_MAX + 1..=MAX_WEIGHT)
            }
        })
        .collect();
    Ok(graph.with_weights(weights))
}

/// Each edge weighs 1 with probability `p_low`, otherwise 100000.
pub fn assign_low_or_high(
    graph: &WeightedBipartiteGraph,
    p_low: f64,
    seed: u64,
) -> Result<WeightedBipartiteGraph> {
    check_probability("p_low", p_low)?;
    let mut rng = rng_for(seed, WEIGHT_STREAM);
    let weights = (0..graph.m())
        .map(|_| if rng.gen_bool(p_low) { 1 } else { MAX_WEIGHT })
        .collect();
    Ok(graph.with_weights(weights))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erdos_renyi_extremes() {
        let full = erdos_renyi(4, 3, 1.0, 7).unwrap();
        assert_eq!(full.m(), 12);
        assert_eq!(full.density(), 1.0);
        let empty = erdos_renyi(4, 3, 0.0, 7).unwrap();
        assert_eq!(empty.m(), 0);
        assert!(erdos_renyi(4, 3, 1.5, 7).is_err());
    }

    #[test]
    fn erdos_renyi_density_near_half() {
        let g = erdos_renyi(100, 100, 0.5, 2024).unwrap();
        let rho = g.density();
        assert!((0.4..=0.6).contains(&rho), "density {rho}");
    }

    #[test]
    fn dispersed_degree_zero_radius() {
        let g = dispersed_degree(8, 10, 0.5, 0, 1).unwrap();
        assert!((0..8).all(|u| g.degree(u) == 5));
    }

    #[test]
    fn dispersed_degree_full_density_is_complete() {
        assert_eq!(dispersion_radius(6, 1.0, 1.0).unwrap(), 0);
        let g = dispersed_degree(5, 6, 1.0, 0, 3).unwrap();
        assert_eq!(g.m(), 30);
    }

    #[test]
    fn dispersed_degree_interval_and_mean() {
        let g = dispersed_degree(100, 100, 0.5, 25, 99).unwrap();
        let degs: Vec<usize> = (0..100).map(|u| g.degree(u)).collect();
        assert!(degs.iter().all(|&d| (25..=75).contains(&d)));
        let mean = degs.iter().sum::<usize>() as f64 / 100.0;
        assert!((mean - 50.0).abs() < 5.0, "mean {mean}");
    }

    #[test]
    fn radius_bound_enforced() {
        assert!(dispersed_degree(4, 10, 0.3, 4, 0).is_err());
        assert!(dispersed_degree(4, 10, 0.3, 3, 0).is_ok());
        // round(1.0 * 4.5) = 5 would overshoot; clamped to 4
        assert_eq!(dispersion_radius(10, 0.55, 1.0).unwrap(), 4);
        let (lo, hi) = degree_interval(10, 0.55, 4);
        assert_eq!((lo, hi), (2, 10));
    }

    #[test]
    fn uniform_weights_range_and_determinism() {
        let g = erdos_renyi(20, 20, 0.7, 5).unwrap();
        let a = assign_uniform_weights(&g, 11);
        let b = assign_uniform_weights(&g, 11);
        assert_eq!(a, b);
        assert!(a.edges().all(|(_, _, w)| (1..=MAX_WEIGHT).contains(&w)));
    }

    #[test]
    fn uniform_weights_mean() {
        let g = erdos_renyi(100, 1000, 1.0, 0).unwrap();
        assert_eq!(g.m(), 100_000);
        let g = assign_uniform_weights(&g, 8);
        let mean = g.edges().map(|e| e.2 as f64).sum::<f64>() / g.m() as f64;
        assert!((mean - 50_000.5).abs() < 0.05 * 50_000.5, "mean {mean}");
    }

    #[test]
    fn low_high_partitions() {
        let g = erdos_renyi(100, 1000, 1.0, 0).unwrap();
        let all_low = assign_uniform_low_high(&g, 1.0, 3).unwrap();
        assert!(all_low.edges().all(|e| (1..=LOW_PART_MAX).contains(&e.2)));
        let all_high = assign_uniform_low_high(&g, 0.0, 3).unwrap();
        assert!(all_high.edges().all(|e| (LOW_PART_MAX + 1..=MAX_WEIGHT).contains(&e.2)));
        let half = assign_uniform_low_high(&g, 0.5, 3).unwrap();
        let low = half.edges().filter(|e| e.2 <= LOW_PART_MAX).count() as f64 / g.m() as f64;
        assert!((0.45..=0.55).contains(&low), "low fraction {low}");
    }

    #[test]
    fn low_or_high_values() {
        let g = erdos_renyi(30, 30, 0.5, 0).unwrap();
        assert!(assign_low_or_high(&g, 1.0, 1).unwrap().edges().all(|e| e.2 == 1));
        assert!(assign_low_or_high(&g, 0.0, 1).unwrap().edges().all(|e| e.2 == MAX_WEIGHT));
        assert!(assign_low_or_high(&g, 0.4, 1)
            .unwrap()
            .edges()
            .all(|e| e.2 == 1 || e.2 == MAX_WEIGHT));
        assert!(assign_low_or_high(&g, -0.1, 1).is_err());
    }

    #[test]
    fn spec_is_deterministic() {
        let spec = GenSpec {
            model: EdgeModel::DispersedDegree,
            n: 40,
            s: 30,
            d: 0.4,
            r_norm: 0.5,
            weight_model: WeightModel::UniformLowHigh,
            p_low: 0.3,
            seed: 77,
        };
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
        let other = GenSpec { seed: 78, ..spec.clone() };
        assert_ne!(spec.generate().unwrap(), other.generate().unwrap());
    }
}
