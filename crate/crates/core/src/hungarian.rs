//! Successive shortest augmenting paths with dual potentials (the
//! Hungarian method in its sparse, Dijkstra-driven form).
//!
//! Each right vertex is the root of exactly one augmentation, so
//! unbalanced instances with `n ≥ s` are solved directly. Potentials keep
//! `y_u[u] + y_v[v] ≤ w(uv)` on every edge with equality on matched ones,
//! which makes all reduced costs non-negative for Dijkstra.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{Matching, WeightedBipartiteGraph};
use crate::solve::{Solution, SolveOptions};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPotentials {
    pub y_u: Vec<i64>,
    pub y_v: Vec<i64>,
}

impl DualPotentials {
    /// First edge violating `y_u + y_v ≤ w`, or a matched edge that is
    /// not tight.
    pub fn violation(&self, graph: &WeightedBipartiteGraph, matching: &Matching) -> Option<(usize, usize)> {
        graph
            .edges()
            .find(|&(u, v, w)| {
                let slack = w - self.y_u[u] - self.y_v[v];
                slack < 0 || (slack != 0 && matching.mate_of_u(u) == Some(v))
            })
            .map(|(u, v, _)| (u, v))
    }
}

#[derive(Debug, Clone)]
pub struct HungarianOutcome {
    pub matching: Matching,
    pub potentials: DualPotentials,
    pub augmentations: usize,
}

/// Right-to-left adjacency, compressed.
struct Transposed {
    offsets: Vec<usize>,
    lefts: Vec<usize>,
    weights: Vec<i64>,
}

impl Transposed {
    fn new(graph: &WeightedBipartiteGraph) -> Self {
        let mut offsets = vec![0usize; graph.s() + 1];
        for (_, v, _) in graph.edges() {
            offsets[v + 1] += 1;
        }
        for v in 0..graph.s() {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut lefts = vec![0; graph.m()];
        let mut weights = vec![0; graph.m()];
        for (u, v, w) in graph.edges() {
            lefts[fill[v]] = u;
            weights[fill[v]] = w;
            fill[v] += 1;
        }
        Self {
            offsets,
            lefts,
            weights,
        }
    }

    fn row(&self, v: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.lefts[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }
}

pub fn hungarian_with_duals(graph: &WeightedBipartiteGraph, opts: &SolveOptions) -> Result<HungarianOutcome> {
    let (n, s) = (graph.n(), graph.s());
    if n < s {
        return Err(Error::Infeasible);
    }
    let rows = Transposed::new(graph);
    let mut y_v = Vec::with_capacity(s);
    for v in 0..s {
        y_v.push(rows.row(v).map(|(_, w)| w).min().ok_or(Error::Infeasible)?);
    }
    let mut y_u = vec![0i64; n];
    let mut mate_u: Vec<Option<usize>> = vec![None; n];
    let mut mate_v: Vec<Option<usize>> = vec![None; s];

    const UNSEEN: i64 = i64::MAX;
    let mut dist = vec![UNSEEN; n];
    let mut done = vec![false; n];
    let mut pred = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut finalized: Vec<usize> = Vec::new();
    let mut reached: Vec<(usize, i64)> = Vec::new();
    let mut heap = BinaryHeap::new();

    for root in 0..s {
        opts.check_deadline()?;
        heap.clear();
        reached.clear();
        reached.push((root, 0));
        for (u, w) in rows.row(root) {
            let c = w - y_v[root] - y_u[u];
            if c < dist[u] {
                if dist[u] == UNSEEN {
                    touched.push(u);
                }
                dist[u] = c;
                pred[u] = root;
                heap.push(Reverse((c, u)));
            }
        }

        let mut sink = None;
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] || d > dist[u] {
                continue;
            }
            done[u] = true;
            finalized.push(u);
            let Some(row) = mate_u[u] else {
                sink = Some((u, d));
                break;
            };
            reached.push((row, d));
            for (u2, w) in rows.row(row) {
                if done[u2] {
                    continue;
                }
                let nd = d + (w - y_v[row] - y_u[u2]);
                if nd < dist[u2] {
                    if dist[u2] == UNSEEN {
                        touched.push(u2);
                    }
                    dist[u2] = nd;
                    pred[u2] = row;
                    heap.push(Reverse((nd, u2)));
                }
            }
        }

        let Some((free_u, delta)) = sink else {
            return Err(Error::Infeasible);
        };
        for &(row, d) in &reached {
            y_v[row] += delta - d;
        }
        for &u in &finalized {
            y_u[u] -= delta - dist[u];
        }

        let mut u = free_u;
        loop {
            let row = pred[u];
            let prev = mate_v[row];
            mate_v[row] = Some(u);
            mate_u[u] = Some(row);
            match prev {
                Some(p) if row != root => u = p,
                _ => break,
            }
        }

        for &u in &touched {
            dist[u] = UNSEEN;
            done[u] = false;
        }
        touched.clear();
        finalized.clear();

        if opts.check_invariants {
            let matching = Matching::from_pairs(n, s, mate_v.iter().enumerate().filter_map(|(v, u)| u.map(|u| (u, v))));
            if matching.len() != root + 1 {
                return Err(Error::InvariantViolation(format!(
                    "augmentation {root} left matching size {}",
                    matching.len()
                )));
            }
            let duals = DualPotentials {
                y_u: y_u.clone(),
                y_v: y_v.clone(),
            };
            if let Some((u, v)) = duals.violation(graph, &matching) {
                return Err(Error::InvariantViolation(format!(
                    "dual constraint on ({u}, {v}) broken after augmentation {root}"
                )));
            }
        }
    }

    let matching = Matching::from_pairs(
        n,
        s,
        mate_v.iter().enumerate().filter_map(|(v, u)| u.map(|u| (u, v))),
    );
    Ok(HungarianOutcome {
        matching,
        potentials: DualPotentials { y_u, y_v },
        augmentations: s,
    })
}

/// Minimum-weight matching covering every right vertex.
pub fn hungarian(graph: &WeightedBipartiteGraph, opts: &SolveOptions) -> Result<Solution> {
    let outcome = hungarian_with_duals(graph, opts)?;
    let weight = graph.matching_weight(&outcome.matching);
    Ok(Solution {
        matching: outcome.matching,
        weight,
    })
}
