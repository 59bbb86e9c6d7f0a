//! Weighted bipartite instances, matchings and prices.
//!
//! Left vertices (`U`, the persons) are indexed `0..n`, right vertices
//! (`V`, the objects) `0..s`. Adjacency is stored per left vertex in
//! compressed form: the neighbors of `u` live in
//! `targets[offsets[u]..offsets[u + 1]]`, sorted by right index. The
//! position of an edge in that array is its *edge id*; solvers that keep
//! per-arc state (flows) index it by edge id.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result, Side};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedBipartiteGraph {
    n: usize,
    s: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<i64>,
    max_abs_weight: i64,
}

impl WeightedBipartiteGraph {
    /// Builds a graph from an edge list, rejecting out-of-range indices and
    /// duplicate pairs. Vertices without edges are allowed.
    pub fn new(n: usize, s: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::EmptySide { n, s });
        }
        for &(u, v, _) in edges {
            if u >= n {
                return Err(Error::IndexOutOfRange {
                    side: Side::Left,
                    index: u,
                    bound: n,
                });
            }
            if v >= s {
                return Err(Error::IndexOutOfRange {
                    side: Side::Right,
                    index: v,
                    bound: s,
                });
            }
        }
        let mut sorted = edges.to_vec();
        sorted.sort_unstable_by_key(|&(u, v, _)| (u, v));
        if let Some(w) = sorted
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::DuplicateEdge {
                u: w[0].0,
                v: w[0].1,
            });
        }
        Ok(Self::from_sorted_unchecked(n, s, &sorted))
    }

    /// `edges` must be sorted by `(u, v)`, duplicate free and in range.
    pub(crate) fn from_sorted_unchecked(n: usize, s: usize, edges: &[(usize, usize, i64)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in edges {
            offsets[u + 1] += 1;
        }
        for u in 0..n {
            offsets[u + 1] += offsets[u];
        }
        let targets = edges.iter().map(|e| e.1).collect();
        let weights: Vec<i64> = edges.iter().map(|e| e.2).collect();
        let max_abs_weight = weights.iter().map(|w| w.abs()).max().unwrap_or(0);
        Self {
            n,
            s,
            offsets,
            targets,
            weights,
            max_abs_weight,
        }
    }

    /// Builds from per-left sorted, duplicate-free neighbor lists.
    pub(crate) fn from_adjacency(n: usize, s: usize, adjacency: &[Vec<(usize, i64)>]) -> Self {
        debug_assert_eq!(adjacency.len(), n);
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for list in adjacency {
            debug_assert!(list.windows(2).all(|w| w[0].0 < w[1].0));
            for &(v, w) in list {
                targets.push(v);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        let max_abs_weight = weights.iter().map(|w: &i64| w.abs()).max().unwrap_or(0);
        Self {
            n,
            s,
            offsets,
            targets,
            weights,
            max_abs_weight,
        }
    }

    /// Same structure, new weight per edge id.
    pub(crate) fn with_weights(&self, weights: Vec<i64>) -> Self {
        assert_eq!(weights.len(), self.weights.len());
        let max_abs_weight = weights.iter().map(|w| w.abs()).max().unwrap_or(0);
        Self {
            n: self.n,
            s: self.s,
            offsets: self.offsets.clone(),
            targets: self.targets.clone(),
            weights,
            max_abs_weight,
        }
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: i64) -> Self {
        self.with_weights(self.weights.iter().map(|w| w * factor).collect())
    }

    /// Number of left vertices (|U|).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of right vertices (|V|).
    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.targets.len()
    }

    /// W = max |w(uv)| over all edges, 0 for an edgeless graph.
    pub fn max_abs_weight(&self) -> i64 {
        self.max_abs_weight
    }

    pub fn is_balanced(&self) -> bool {
        self.n == self.s
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Edge id range of `u`'s neighborhood.
    pub fn edge_range(&self, u: usize) -> std::ops::Range<usize> {
        self.offsets[u]..self.offsets[u + 1]
    }

    pub fn target(&self, edge: usize) -> usize {
        self.targets[edge]
    }

    pub fn weight_of_edge(&self, edge: usize) -> i64 {
        self.weights[edge]
    }

    /// `(v, w)` pairs adjacent to `u`, ascending in `v`.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let r = self.edge_range(u);
        self.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    /// All edges as `(u, v, w)` ordered by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).map(move |(v, w)| (u, v, w)))
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n {
            return None;
        }
        let r = self.edge_range(u);
        self.targets[r.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| r.start + i)
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<i64> {
        self.edge_id(u, v).map(|e| self.weights[e])
    }

    /// Per-right-vertex degrees.
    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.s];
        for &v in &self.targets {
            deg[v] += 1;
        }
        deg
    }

    /// ρ(G) = m / (n·s).
    pub fn density(&self) -> f64 {
        self.m() as f64 / (self.n as f64 * self.s as f64)
    }

    /// Reduced cost w(uv) − p(v).
    pub fn reduced_cost(&self, prices: &PriceVector, u: usize, v: usize) -> Result<i64> {
        let w = self.weight(u, v).ok_or(Error::NotAnEdge { u, v })?;
        Ok(w - prices[v])
    }

    /// ε-complementary slackness: every matched edge has reduced cost within
    /// `eps` of the cheapest reduced cost in its left endpoint's
    /// neighborhood. Vacuously true for an empty matching.
    pub fn check_eps_cs(&self, prices: &PriceVector, matching: &Matching, eps: i64) -> bool {
        matching.pairs().all(|(u, v)| {
            let Some(w) = self.weight(u, v) else {
                return false;
            };
            let best = self
                .neighbors(u)
                .map(|(z, wz)| wz - prices[z])
                .min()
                .expect("u has at least the matched edge");
            w - prices[v] <= best + eps
        })
    }

    /// Sum of the weights of the matched edges. Pairs that are not edges
    /// are ignored; run [`validate_matching`](Self::validate_matching) first.
    pub fn matching_weight(&self, matching: &Matching) -> i64 {
        matching
            .pairs()
            .filter_map(|(u, v)| self.weight(u, v))
            .sum()
    }

    /// Checks mutual consistency, edge membership and, when
    /// `require_perfect`, that every right vertex is covered.
    pub fn validate_matching(
        &self,
        matching: &Matching,
        require_perfect: bool,
    ) -> Result<(), MatchingViolation> {
        if matching.match_of_u.len() != self.n || matching.match_of_v.len() != self.s {
            return Err(MatchingViolation::DimensionMismatch);
        }
        let mut size = 0;
        for (v, slot) in matching.match_of_v.iter().enumerate() {
            if let Some(u) = *slot {
                if u >= self.n || matching.match_of_u[u] != Some(v) {
                    return Err(MatchingViolation::Inconsistent { u, v });
                }
                if self.edge_id(u, v).is_none() {
                    return Err(MatchingViolation::NotAnEdge { u, v });
                }
                size += 1;
            }
        }
        for (u, slot) in matching.match_of_u.iter().enumerate() {
            if let Some(v) = *slot {
                if v >= self.s || matching.match_of_v[v] != Some(u) {
                    return Err(MatchingViolation::Inconsistent { u, v });
                }
            }
        }
        if size != matching.size {
            return Err(MatchingViolation::SizeMismatch {
                recorded: matching.size,
                actual: size,
            });
        }
        if require_perfect {
            if let Some(v) = matching.match_of_v.iter().position(Option::is_none) {
                return Err(MatchingViolation::UncoveredRight { v });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingViolation {
    DimensionMismatch,
    Inconsistent { u: usize, v: usize },
    NotAnEdge { u: usize, v: usize },
    SizeMismatch { recorded: usize, actual: usize },
    UncoveredRight { v: usize },
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::DimensionMismatch => {
                f.write_str("matching dimensions do not match the graph")
            }
            MatchingViolation::Inconsistent { u, v } => {
                write!(f, "pair ({u}, {v}) is not mutually consistent")
            }
            MatchingViolation::NotAnEdge { u, v } => write!(f, "({u}, {v}) is not an edge"),
            MatchingViolation::SizeMismatch { recorded, actual } => {
                write!(f, "recorded size {recorded} but {actual} right vertices matched")
            }
            MatchingViolation::UncoveredRight { v } => write!(f, "uncovered right vertex {v}"),
        }
    }
}

impl std::error::Error for MatchingViolation {}

/// A partial assignment between left and right vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    match_of_u: Vec<Option<usize>>,
    match_of_v: Vec<Option<usize>>,
    size: usize,
}

impl Matching {
    pub fn empty(n: usize, s: usize) -> Self {
        Self {
            match_of_u: vec![None; n],
            match_of_v: vec![None; s],
            size: 0,
        }
    }

    /// Builds a matching from `(u, v)` pairs. Later pairs displace earlier
    /// partners.
    pub fn from_pairs(n: usize, s: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::empty(n, s);
        for (u, v) in pairs {
            m.assign(u, v);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn mate_of_u(&self, u: usize) -> Option<usize> {
        self.match_of_u[u]
    }

    pub fn mate_of_v(&self, v: usize) -> Option<usize> {
        self.match_of_v[v]
    }

    pub fn left_len(&self) -> usize {
        self.match_of_u.len()
    }

    pub fn right_len(&self) -> usize {
        self.match_of_v.len()
    }

    /// Matches `u` with `v`, releasing any previous partners of either.
    /// Returns the left vertex displaced from `v`, if any.
    pub fn assign(&mut self, u: usize, v: usize) -> Option<usize> {
        if let Some(old_v) = self.match_of_u[u] {
            if old_v == v {
                return None;
            }
            self.match_of_v[old_v] = None;
            self.size -= 1;
        }
        let displaced = self.match_of_v[v].take();
        if let Some(d) = displaced {
            self.match_of_u[d] = None;
            self.size -= 1;
        }
        self.match_of_u[u] = Some(v);
        self.match_of_v[v] = Some(u);
        self.size += 1;
        displaced
    }

    /// Unmatches `v`, returning its former partner.
    pub fn release_v(&mut self, v: usize) -> Option<usize> {
        let u = self.match_of_v[v].take()?;
        self.match_of_u[u] = None;
        self.size -= 1;
        Some(u)
    }

    /// `(u, v)` pairs in ascending `v`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.match_of_v
            .iter()
            .enumerate()
            .filter_map(|(v, u)| u.map(|u| (u, v)))
    }
}

/// Exact integer prices, one per vertex of one side.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PriceVector(Vec<i64>);

impl PriceVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Adds `c` to every price.
    pub fn shift(&mut self, c: i64) {
        self.0.iter_mut().for_each(|p| *p += c);
    }

    /// max − min, or 0 when empty.
    pub fn spread(&self) -> i64 {
        match (self.0.iter().max(), self.0.iter().min()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0,
        }
    }
}

impl From<Vec<i64>> for PriceVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl Index<usize> for PriceVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for PriceVector {
    fn index_mut(&mut self, i: usize) -> &mut i64 {
        &mut self.0[i]
    }
}
