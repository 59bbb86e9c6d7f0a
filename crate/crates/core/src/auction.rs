//! ε-scaling auction.
//!
//! Weights are multiplied by (n + 1) before solving, so every ε of the
//! schedule is an integer and the last phase runs at ε = 1, which is
//! 1/(n + 1) < 1/n in the original units: the final ε-CS matching is
//! optimal and no arithmetic is inexact.
//!
//! Unassigned persons are served FIFO starting from `0..n`, and bid scans
//! break reduced-cost ties toward the lowest object index.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::feasibility::feasibility_precheck;
use crate::graph::{Matching, PriceVector, WeightedBipartiteGraph};
use crate::reduction::{project_matching, reduce};
use crate::solve::{
    epsilon_schedule, iteration_cap, lone_neighbor_gap, scaling, Solution, SolveOptions,
};
use crate::trace::{NullSink, TraceEvent, TraceSink};

const DEADLINE_POLL: u64 = 1024;

/// Mutable state of one auction phase.
#[derive(Debug, Clone)]
pub struct AuctionState<'g> {
    graph: &'g WeightedBipartiteGraph,
    prices: PriceVector,
    matching: Matching,
    unassigned: VecDeque<usize>,
    eps: i64,
    lone_gap: i64,
    phase: usize,
    steps: usize,
}

impl<'g> AuctionState<'g> {
    /// Starts a phase with an empty matching and every person queued in
    /// index order.
    pub fn new(graph: &'g WeightedBipartiteGraph, prices: PriceVector, eps: i64, phase: usize) -> Self {
        assert_eq!(prices.len(), graph.s());
        Self {
            graph,
            prices,
            matching: Matching::empty(graph.n(), graph.s()),
            unassigned: (0..graph.n()).collect(),
            eps,
            lone_gap: lone_neighbor_gap(graph.max_abs_weight()),
            phase,
            steps: 0,
        }
    }

    pub fn prices(&self) -> &PriceVector {
        &self.prices
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn eps(&self) -> i64 {
        self.eps
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn next_unassigned(&mut self) -> Option<usize> {
        self.unassigned.pop_front()
    }

    pub fn into_parts(self) -> (Matching, PriceVector) {
        (self.matching, self.prices)
    }

    /// Person `u` takes its cheapest object `v` (lowest index on ties),
    /// evicting the previous holder, and lowers `p(v)` by γ + ε where γ is
    /// the gap to the second cheapest object. With a single neighbor the
    /// gap is 2·W + 1 (W the largest weight of the, already scaled, graph).
    pub fn bid(&mut self, u: usize) -> Result<TraceEvent> {
        debug_assert!(self.matching.mate_of_u(u).is_none());
        let mut best = i64::MAX;
        let mut second = i64::MAX;
        let mut best_v = usize::MAX;
        for (v, w) in self.graph.neighbors(u) {
            let rc = w - self.prices[v];
            if rc < best {
                second = best;
                best = rc;
                best_v = v;
            } else if rc < second {
                second = rc;
            }
        }
        if best_v == usize::MAX {
            return Err(Error::Infeasible);
        }
        if second == i64::MAX {
            second = best + self.lone_gap;
        }
        let gamma = second - best;
        let displaced = self.matching.assign(u, best_v);
        if let Some(d) = displaced {
            self.unassigned.push_back(d);
        }
        self.prices[best_v] -= gamma + self.eps;
        let event = TraceEvent {
            phase_index: self.phase,
            step_index: self.steps,
            selected_u: u,
            best_v,
            best_reduced_cost: best,
            second_reduced_cost: second,
            gamma,
            new_price_v: self.prices[best_v],
            displaced_u: displaced,
        };
        self.steps += 1;
        Ok(event)
    }
}

/// One auction at fixed ε from the given prices. `graph` must be balanced.
/// Returns a perfect matching and prices satisfying ε-CS; aborts with
/// [`Error::IterationCap`] if the instance turns out to be infeasible.
pub fn auction(
    graph: &WeightedBipartiteGraph,
    eps: i64,
    prices: PriceVector,
) -> Result<(Matching, PriceVector)> {
    if !graph.is_balanced() {
        return Err(Error::Unbalanced {
            n: graph.n(),
            s: graph.s(),
        });
    }
    if eps < 1 {
        return Err(Error::InvalidParameter(format!("eps must be >= 1, got {eps}")));
    }
    let state = AuctionState::new(graph, prices, eps, 0);
    let state = run_phase(state, &SolveOptions::default(), &mut NullSink)?;
    Ok(state.into_parts())
}

fn run_phase<'g>(
    mut state: AuctionState<'g>,
    opts: &SolveOptions,
    sink: &mut dyn TraceSink,
) -> Result<AuctionState<'g>> {
    let graph = state.graph;
    let spread = state.prices.spread() + 2 * graph.max_abs_weight() + state.lone_gap;
    let cap = iteration_cap(graph.n(), graph.m(), spread, state.eps);
    let tracing = sink.enabled();
    let mut bids: u128 = 0;
    while let Some(u) = state.next_unassigned() {
        let event = state.bid(u)?;
        if tracing {
            sink.record(&event)?;
        }
        bids += 1;
        if bids > cap {
            return Err(Error::IterationCap {
                phase: state.phase,
                eps: state.eps,
                cap,
            });
        }
        if (bids as u64).is_multiple_of(DEADLINE_POLL) {
            opts.check_deadline()?;
        }
    }
    Ok(state)
}

/// Summary of one scaling phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuctionPhase {
    pub eps: i64,
    pub bids: usize,
    /// Matching weight on the scaled weights.
    pub scaled_weight: i64,
    /// ε-CS at the phase's ε; evaluated only with `check_invariants`.
    pub eps_cs: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct AuctionOutcome {
    pub matching: Matching,
    /// Final prices on the scaled domain.
    pub prices: PriceVector,
    pub scale: i64,
    pub phases: Vec<AuctionPhase>,
}

/// Runs the full scaling schedule on a balanced graph without a
/// feasibility precheck.
pub fn scaling_auction_balanced(
    graph: &WeightedBipartiteGraph,
    opts: &SolveOptions,
    sink: &mut dyn TraceSink,
) -> Result<AuctionOutcome> {
    opts.validate()?;
    if !graph.is_balanced() {
        return Err(Error::Unbalanced {
            n: graph.n(),
            s: graph.s(),
        });
    }
    let (scale, scaled_w) = scaling(graph)?;
    let scaled = graph.scaled(scale);
    let mut prices = PriceVector::zeros(graph.s());
    let mut matching = Matching::empty(graph.n(), graph.s());
    let mut phases = Vec::new();
    for (phase, eps) in epsilon_schedule(scaled_w, opts.alpha).into_iter().enumerate() {
        let state = AuctionState::new(&scaled, prices, eps, phase);
        let state = run_phase(state, opts, sink)?;
        let bids = state.steps();
        (matching, prices) = state.into_parts();
        let eps_cs = if opts.check_invariants {
            let ok = scaled.check_eps_cs(&prices, &matching, eps);
            if !ok {
                return Err(Error::InvariantViolation(format!(
                    "eps-CS fails after auction phase {phase} (eps={eps})"
                )));
            }
            Some(ok)
        } else {
            None
        };
        phases.push(AuctionPhase {
            eps,
            bids,
            scaled_weight: scaled.matching_weight(&matching),
            eps_cs,
        });
    }
    Ok(AuctionOutcome {
        matching,
        prices,
        scale,
        phases,
    })
}

/// Minimum-weight matching covering every right vertex. Unbalanced inputs
/// are solved through the reduction selected in `opts`.
pub fn eps_scaling_auction(graph: &WeightedBipartiteGraph, opts: &SolveOptions) -> Result<Solution> {
    eps_scaling_auction_traced(graph, opts, &mut NullSink)
}

pub fn eps_scaling_auction_traced(
    graph: &WeightedBipartiteGraph,
    opts: &SolveOptions,
    sink: &mut dyn TraceSink,
) -> Result<Solution> {
    opts.validate()?;
    if !feasibility_precheck(graph) {
        return Err(Error::Infeasible);
    }
    let matching = if graph.is_balanced() {
        scaling_auction_balanced(graph, opts, sink)?.matching
    } else {
        let (reduced, map) = reduce(graph, opts.reduction)?;
        let outcome = scaling_auction_balanced(&reduced, opts, sink)?;
        project_matching(&outcome.matching, &map)?
    };
    let weight = graph.matching_weight(&matching);
    Ok(Solution { matching, weight })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g0() -> WeightedBipartiteGraph {
        WeightedBipartiteGraph::new(2, 2, &[(0, 0, 1), (0, 1, 3), (1, 0, 2), (1, 1, 1)]).unwrap()
    }

    #[test]
    fn bid_uses_gap_to_second_best() {
        // w' = 2 for v0 and 5 for v1 at zero prices
        let g = WeightedBipartiteGraph::new(2, 2, &[(0, 0, 2), (0, 1, 5), (1, 0, 1), (1, 1, 1)])
            .unwrap();
        let mut st = AuctionState::new(&g, PriceVector::zeros(2), 1, 0);
        let u = st.next_unassigned().unwrap();
        let e = st.bid(u).unwrap();
        assert_eq!((e.best_v, e.gamma, e.new_price_v), (0, 3, -4));
        assert_eq!(st.matching().mate_of_v(0), Some(0));
    }

    #[test]
    fn bid_tie_takes_lowest_index() {
        let g = WeightedBipartiteGraph::new(1, 3, &[(0, 2, 2), (0, 1, 2), (0, 0, 9)]).unwrap();
        let mut st = AuctionState::new(&g, PriceVector::from(vec![0, 0, 0]), 3, 0);
        let e = st.bid(0).unwrap();
        assert_eq!((e.best_v, e.gamma), (1, 0));
        assert_eq!(st.prices()[1], -3);
    }

    #[test]
    fn bid_displaces_previous_holder() {
        let g = g0();
        let mut st = AuctionState::new(&g, PriceVector::zeros(2), 1, 0);
        st.bid(st.unassigned[0]).unwrap();
        st.unassigned.pop_front();
        // force u1 onto v0 by making v0 very cheap
        st.prices[0] = 100;
        let e = st.bid(1).unwrap();
        assert_eq!(e.best_v, 0);
        assert_eq!(e.displaced_u, Some(0));
        assert_eq!(st.matching().mate_of_u(0), None);
        assert_eq!(st.unassigned.back(), Some(&0));
        assert!(g.validate_matching(st.matching(), false).is_ok());
    }

    #[test]
    fn lone_neighbor_gap_applies() {
        let g = WeightedBipartiteGraph::new(1, 1, &[(0, 0, 5)]).unwrap();
        let mut st = AuctionState::new(&g, PriceVector::zeros(1), 1, 0);
        let e = st.bid(0).unwrap();
        assert_eq!(e.gamma, 2 * 5 + 1);
        assert_eq!(e.second_reduced_cost, 5 + 11);
    }

    #[test]
    fn single_auction_on_scaled_g0() {
        let g = g0().scaled(3);
        let (m, p) = auction(&g, 1, PriceVector::zeros(2)).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(g.matching_weight(&m), 6);
        assert!(g.check_eps_cs(&p, &m, 1));
    }

    #[test]
    fn forced_assignment() {
        let g = WeightedBipartiteGraph::new(1, 1, &[(0, 0, 5)]).unwrap();
        for eps in [1, 7] {
            let (m, _) = auction(&g, eps, PriceVector::zeros(1)).unwrap();
            assert_eq!(m.mate_of_u(0), Some(0));
        }
    }

    #[test]
    fn infeasible_auction_hits_cap() {
        let g = WeightedBipartiteGraph::new(2, 2, &[(0, 0, 1), (1, 0, 1)]).unwrap();
        assert!(matches!(
            auction(&g, 1, PriceVector::zeros(2)),
            Err(Error::IterationCap { .. })
        ));
    }

    #[test]
    fn scaling_solves_g0() {
        let opts = SolveOptions {
            alpha: 5.0,
            check_invariants: true,
            ..Default::default()
        };
        let sol = eps_scaling_auction(&g0(), &opts).unwrap();
        assert_eq!(sol.weight, 2);
        let one = WeightedBipartiteGraph::new(1, 1, &[(0, 0, 5)]).unwrap();
        assert_eq!(eps_scaling_auction(&one, &opts).unwrap().weight, 5);
    }

    #[test]
    fn infeasible_is_reported() {
        let g = WeightedBipartiteGraph::new(2, 2, &[(0, 0, 1), (1, 0, 1)]).unwrap();
        assert!(matches!(
            eps_scaling_auction(&g, &SolveOptions::default()),
            Err(Error::Infeasible)
        ));
    }

    #[test]
    fn unbalanced_via_both_reductions() {
        let g = WeightedBipartiteGraph::new(3, 2, &[(0, 0, 4), (1, 0, 2), (1, 1, 3), (2, 1, 1)])
            .unwrap();
        for reduction in [crate::solve::ReductionKind::Double, crate::solve::ReductionKind::Pad] {
            let opts = SolveOptions {
                reduction,
                ..Default::default()
            };
            let sol = eps_scaling_auction(&g, &opts).unwrap();
            assert_eq!(sol.weight, 3);
            assert!(g.validate_matching(&sol.matching, true).is_ok());
        }
    }
}
