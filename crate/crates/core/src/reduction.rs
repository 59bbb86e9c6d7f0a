//! Balancing transformations for instances with more left than right
//! vertices, so the balanced-only solvers can find right-covering
//! matchings.
//!
//! Doubling: left side `U ⊔ V'`, right side `V ⊔ U'` where `V'`, `U'` are
//! copies. Every edge `uv` appears as `(u, v)` and mirrored as `(v', u')`
//! with the same weight, and every `u` gets a zero-weight bridge `(u, u')`.
//! A perfect matching uses the same set of left vertices on both copies,
//! so its minimum weight is twice the best right-covering matching and its
//! `U × V` part is one.
//!
//! Padding: `n − s` dummy right vertices joined to every left vertex at
//! weight 0. Optimal weights are preserved as-is.

use crate::error::{Error, Result};
use crate::graph::{Matching, MatchingViolation, WeightedBipartiteGraph};
use crate::solve::ReductionKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMap {
    Identity { n: usize },
    Doubled { n: usize, s: usize },
    Padded { n: usize, s: usize },
}

impl ReductionMap {
    /// Optimal weight on the reduced graph divided by the optimal weight
    /// on the original.
    pub fn weight_factor(&self) -> i64 {
        match self {
            ReductionMap::Doubled { .. } => 2,
            _ => 1,
        }
    }

    pub fn original_dims(&self) -> (usize, usize) {
        match *self {
            ReductionMap::Identity { n } => (n, n),
            ReductionMap::Doubled { n, s } | ReductionMap::Padded { n, s } => (n, s),
        }
    }
}

fn require_tall(graph: &WeightedBipartiteGraph) -> Result<()> {
    if graph.n() < graph.s() {
        return Err(Error::InvalidParameter(format!(
            "reduction needs n >= s, got n={} s={}",
            graph.n(),
            graph.s()
        )));
    }
    Ok(())
}

/// Doubling reduction; balanced graphs pass through unchanged.
pub fn double_balanced(graph: &WeightedBipartiteGraph) -> Result<(WeightedBipartiteGraph, ReductionMap)> {
    require_tall(graph)?;
    let (n, s) = (graph.n(), graph.s());
    if n == s {
        return Ok((graph.clone(), ReductionMap::Identity { n }));
    }
    let side = n + s;
    let mut adjacency: Vec<Vec<(usize, i64)>> = Vec::with_capacity(side);
    for u in 0..n {
        let mut list: Vec<(usize, i64)> = graph.neighbors(u).collect();
        list.push((s + u, 0));
        adjacency.push(list);
    }
    let mut mirrored: Vec<Vec<(usize, i64)>> = vec![Vec::new(); s];
    for (u, v, w) in graph.edges() {
        mirrored[v].push((s + u, w));
    }
    adjacency.extend(mirrored);
    Ok((
        WeightedBipartiteGraph::from_adjacency(side, side, &adjacency),
        ReductionMap::Doubled { n, s },
    ))
}

/// Dummy-padding reduction; balanced graphs pass through unchanged.
pub fn pad_balanced(graph: &WeightedBipartiteGraph) -> Result<(WeightedBipartiteGraph, ReductionMap)> {
    require_tall(graph)?;
    let (n, s) = (graph.n(), graph.s());
    if n == s {
        return Ok((graph.clone(), ReductionMap::Identity { n }));
    }
    let adjacency: Vec<Vec<(usize, i64)>> = (0..n)
        .map(|u| graph.neighbors(u).chain((s..n).map(|d| (d, 0))).collect())
        .collect();
    Ok((
        WeightedBipartiteGraph::from_adjacency(n, n, &adjacency),
        ReductionMap::Padded { n, s },
    ))
}

pub fn reduce(graph: &WeightedBipartiteGraph, kind: ReductionKind) -> Result<(WeightedBipartiteGraph, ReductionMap)> {
    match kind {
        ReductionKind::Double => double_balanced(graph),
        ReductionKind::Pad => pad_balanced(graph),
    }
}

/// Restricts a perfect matching of the reduced graph to `U × V`.
pub fn project_matching(reduced: &Matching, map: &ReductionMap) -> Result<Matching> {
    if let Some(v) = (0..reduced.right_len()).find(|&v| reduced.mate_of_v(v).is_none()) {
        return Err(Error::InvalidMatching(MatchingViolation::UncoveredRight { v }));
    }
    let (n, s) = map.original_dims();
    Ok(Matching::from_pairs(
        n,
        s,
        reduced.pairs().filter(|&(u, v)| u < n && v < s),
    ))
}
