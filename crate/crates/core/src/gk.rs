//! Goldberg–Kennedy cost-scaling push-relabel for the assignment problem.
//!
//! This solver keeps everything the auction drops: a unit pseudoflow on
//! the `U → V` arcs with per-vertex excess, prices on both sides, and the
//! residual graph (implicit: an arc is forward when it carries no flow and
//! reversed when saturated). Left prices are initialised at the start of
//! every refine and updated in each double push exactly as the textbook
//! procedure prescribes, so the claims that they are redundant can be
//! checked rather than assumed.
//!
//! Active vertices are served FIFO from `0..n` and arc scans break ties
//! toward the lowest right index, the same contract as the auction.

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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    Left(usize),
    Right(usize),
}

/// Unit-capacity transportation network of a balanced instance: one arc
/// per edge oriented `U → V`, supply +1 on `U` and −1 on `V`.
#[derive(Debug, Clone, Copy)]
pub struct FlowInstance<'g> {
    graph: &'g WeightedBipartiteGraph,
}

impl<'g> FlowInstance<'g> {
    pub fn graph(&self) -> &'g WeightedBipartiteGraph {
        self.graph
    }

    pub fn arc_count(&self) -> usize {
        self.graph.m()
    }

    pub fn capacity(&self, _arc: usize) -> i64 {
        1
    }

    pub fn supply(&self, x: Vertex) -> i64 {
        match x {
            Vertex::Left(_) => 1,
            Vertex::Right(_) => -1,
        }
    }
}

pub fn to_flow_instance(graph: &WeightedBipartiteGraph) -> Result<FlowInstance<'_>> {
    if !graph.is_balanced() {
        return Err(Error::Unbalanced {
            n: graph.n(),
            s: graph.s(),
        });
    }
    Ok(FlowInstance { graph })
}

/// Per-arc flow in {0, 1} (indexed by edge id) with cached excesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pseudoflow {
    flow: Vec<u8>,
    excess_left: Vec<i64>,
    excess_right: Vec<i64>,
}

impl Pseudoflow {
    pub fn zero(fi: &FlowInstance<'_>) -> Self {
        let g = fi.graph;
        Self {
            flow: vec![0; g.m()],
            excess_left: vec![1; g.n()],
            excess_right: vec![-1; g.s()],
        }
    }

    /// Zero flow except one unit on each given edge id.
    pub fn from_saturated(fi: &FlowInstance<'_>, arcs: impl IntoIterator<Item = usize>) -> Self {
        let mut f = Self::zero(fi);
        for e in arcs {
            f.flow[e] = 1;
        }
        let (l, r) = f.recompute_excess(fi);
        f.excess_left = l;
        f.excess_right = r;
        f
    }

    pub fn flow(&self, arc: usize) -> u8 {
        self.flow[arc]
    }

    /// Cached excess.
    pub fn excess(&self, x: Vertex) -> i64 {
        match x {
            Vertex::Left(u) => self.excess_left[u],
            Vertex::Right(v) => self.excess_right[v],
        }
    }

    pub fn is_active(&self, x: Vertex) -> bool {
        self.excess(x) > 0
    }

    pub fn active_count(&self) -> usize {
        self.excess_left.iter().chain(&self.excess_right).filter(|&&e| e > 0).count()
    }

    /// A flow is a pseudoflow with no active vertex.
    pub fn is_flow(&self) -> bool {
        self.active_count() == 0
    }

    /// e_f(x) = d(x) + inflow(x) − outflow(x), from scratch.
    pub fn recompute_excess(&self, fi: &FlowInstance<'_>) -> (Vec<i64>, Vec<i64>) {
        let g = fi.graph;
        let mut left: Vec<i64> = (0..g.n()).map(|u| fi.supply(Vertex::Left(u))).collect();
        let mut right: Vec<i64> = (0..g.s()).map(|v| fi.supply(Vertex::Right(v))).collect();
        for u in 0..g.n() {
            for e in g.edge_range(u) {
                let f = self.flow[e] as i64;
                left[u] -= f;
                right[g.target(e)] += f;
            }
        }
        (left, right)
    }

    pub fn excess_cache_consistent(&self, fi: &FlowInstance<'_>) -> bool {
        let (l, r) = self.recompute_excess(fi);
        l == self.excess_left && r == self.excess_right
    }

    pub fn total_excess(&self) -> i64 {
        self.excess_left.iter().chain(&self.excess_right).sum()
    }

    /// Σ w(a)·f(a).
    pub fn weight(&self, fi: &FlowInstance<'_>) -> i64 {
        let g = fi.graph;
        (0..g.m())
            .filter(|&e| self.flow[e] == 1)
            .map(|e| g.weight_of_edge(e))
            .sum()
    }

    fn push(&mut self, fi: &FlowInstance<'_>, u: usize, arc: usize) {
        debug_assert_eq!(self.flow[arc], 0);
        self.flow[arc] = 1;
        self.excess_left[u] -= 1;
        self.excess_right[fi.graph.target(arc)] += 1;
    }

    fn push_back(&mut self, fi: &FlowInstance<'_>, u: usize, arc: usize) {
        debug_assert_eq!(self.flow[arc], 1);
        self.flow[arc] = 0;
        self.excess_left[u] += 1;
        self.excess_right[fi.graph.target(arc)] -= 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidualArc {
    pub tail: Vertex,
    pub head: Vertex,
    /// w_f: w(uv) on forward arcs, −w(uv) on reversed ones.
    pub weight: i64,
    pub reversed: bool,
}

/// Materializes G_f: `uv` when it has residual capacity, otherwise `vu`.
pub fn residual_arcs(fi: &FlowInstance<'_>, f: &Pseudoflow) -> Vec<ResidualArc> {
    fi.graph
        .edges()
        .enumerate()
        .map(|(e, (u, v, w))| {
            if fi.capacity(e) - f.flow[e] as i64 > 0 {
                ResidualArc {
                    tail: Vertex::Left(u),
                    head: Vertex::Right(v),
                    weight: w,
                    reversed: false,
                }
            } else {
                ResidualArc {
                    tail: Vertex::Right(v),
                    head: Vertex::Left(u),
                    weight: -w,
                    reversed: true,
                }
            }
        })
        .collect()
}

/// ε-optimality of `f` under prices on both sides: every residual arc has
/// reduced cost w_f(xy) + p(x) − p(y) at least −ε if reversed and at
/// least 0 if forward.
pub fn check_eps_optimal(
    fi: &FlowInstance<'_>,
    f: &Pseudoflow,
    p_left: &PriceVector,
    p_right: &PriceVector,
    eps: i64,
) -> bool {
    let price = |x: Vertex| match x {
        Vertex::Left(u) => p_left[u],
        Vertex::Right(v) => p_right[v],
    };
    residual_arcs(fi, f).iter().all(|a| {
        let rc = a.weight + price(a.tail) - price(a.head);
        if a.reversed {
            rc >= -eps
        } else {
            rc >= 0
        }
    })
}

/// Matching formed by the saturated arcs of a flow.
pub fn flow_to_matching(fi: &FlowInstance<'_>, f: &Pseudoflow) -> Result<Matching> {
    let active = f.active_count();
    if active > 0 {
        return Err(Error::NotAFlow { active });
    }
    let g = fi.graph;
    Ok(Matching::from_pairs(
        g.n(),
        g.s(),
        g.edges()
            .enumerate()
            .filter(|&(e, _)| f.flow[e] == 1)
            .map(|(_, (u, v, _))| (u, v)),
    ))
}

/// Violations of the per-step identities, counted over a solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GkDiagnostics {
    pub double_pushes: usize,
    /// p(u) + w(uv) − ε differed from p(v) − γ − ε.
    pub price_update_mismatches: usize,
    /// After a double push, p(u) differed from −min_z w'_p(uz) (for a
    /// single-neighbor u: from ε − min_z w'_p(uz)).
    pub left_price_mismatches: usize,
    /// Some left vertex had p(u) < −min_z w'_p(uz) at the end of a refine.
    pub left_price_bound_violations: usize,
    /// Cached and recomputed excess disagreed, or total excess was nonzero.
    pub excess_mismatches: usize,
}

impl GkDiagnostics {
    pub fn total_violations(&self) -> usize {
        self.price_update_mismatches
            + self.left_price_mismatches
            + self.left_price_bound_violations
            + self.excess_mismatches
    }
}

/// State of one refine.
#[derive(Debug, Clone)]
pub struct GkState<'g> {
    fi: FlowInstance<'g>,
    flow: Pseudoflow,
    p_left: PriceVector,
    p_right: PriceVector,
    /// M(v) as `(u, edge id)` of the arc carrying flow into v, absent until
    /// first assignment.
    mate_arc: Vec<Option<(usize, usize)>>,
    active: VecDeque<usize>,
    eps: i64,
    lone_gap: i64,
    phase: usize,
    steps: usize,
    check: bool,
    diag: GkDiagnostics,
}

impl<'g> GkState<'g> {
    /// Zero flow, p(u) = −min_z w'_p(uz) for every u, and every left
    /// vertex active in index order.
    pub fn new(fi: FlowInstance<'g>, p_right: PriceVector, eps: i64, phase: usize) -> Result<Self> {
        let g = fi.graph;
        let mut p_left = PriceVector::zeros(g.n());
        for u in 0..g.n() {
            p_left[u] = -min_partial_reduced_cost(g, &p_right, u).ok_or(Error::Infeasible)?;
        }
        Ok(Self {
            flow: Pseudoflow::zero(&fi),
            fi,
            p_left,
            p_right,
            mate_arc: vec![None; g.s()],
            active: (0..g.n()).collect(),
            eps,
            lone_gap: lone_neighbor_gap(g.max_abs_weight()),
            phase,
            steps: 0,
            check: false,
            diag: GkDiagnostics::default(),
        })
    }

    pub fn with_checks(mut self, check: bool) -> Self {
        self.check = check;
        self
    }

    pub fn flow(&self) -> &Pseudoflow {
        &self.flow
    }

    pub fn left_prices(&self) -> &PriceVector {
        &self.p_left
    }

    pub fn right_prices(&self) -> &PriceVector {
        &self.p_right
    }

    pub fn diagnostics(&self) -> GkDiagnostics {
        self.diag
    }

    pub fn next_active(&mut self) -> Option<usize> {
        self.active.pop_front()
    }

    pub fn instance(&self) -> &FlowInstance<'g> {
        &self.fi
    }

    /// One double push from active `u`: relabel u to minus its second-best
    /// partial reduced cost, push a unit to the best `v`, return the unit
    /// v held to its previous match if v became active, and relabel v.
    pub fn double_push(&mut self, u: usize) -> Result<TraceEvent> {
        debug_assert!(self.flow.is_active(Vertex::Left(u)));
        let g = self.fi.graph;
        let mut best = i64::MAX;
        let mut second = i64::MAX;
        let mut best_arc = usize::MAX;
        for e in g.edge_range(u) {
            let rc = g.weight_of_edge(e) - self.p_right[g.target(e)];
            if rc < best {
                second = best;
                best = rc;
                best_arc = e;
            } else if rc < second {
                second = rc;
            }
        }
        if best_arc == usize::MAX {
            return Err(Error::Infeasible);
        }
        let lone = second == i64::MAX;
        if lone {
            second = best + self.lone_gap;
        }
        let v = g.target(best_arc);

        self.p_left[u] = -second;
        self.flow.push(&self.fi, u, best_arc);
        let mut displaced = None;
        if self.flow.excess(Vertex::Right(v)) > 0 {
            let (prev, back) = self.mate_arc[v].expect("excess at v implies an earlier unit");
            self.flow.push_back(&self.fi, prev, back);
            self.active.push_back(prev);
            displaced = Some(prev);
        }
        self.mate_arc[v] = Some((u, best_arc));
        let old_price = self.p_right[v];
        self.p_right[v] = self.p_left[u] + g.weight_of_edge(best_arc) - self.eps;

        let gamma = second - best;
        if self.check {
            self.diag.double_pushes += 1;
            if self.p_right[v] != old_price - gamma - self.eps {
                self.diag.price_update_mismatches += 1;
            }
            let min_now = min_partial_reduced_cost(g, &self.p_right, u).expect("u has arcs");
            let expected = if lone { -min_now + self.eps } else { -min_now };
            if self.p_left[u] != expected {
                self.diag.left_price_mismatches += 1;
            }
        }

        let event = TraceEvent {
            phase_index: self.phase,
            step_index: self.steps,
            selected_u: u,
            best_v: v,
            best_reduced_cost: best,
            second_reduced_cost: second,
            gamma,
            new_price_v: self.p_right[v],
            displaced_u: displaced,
        };
        self.steps += 1;
        Ok(event)
    }

    fn finish_checks(&mut self) {
        if !self.check {
            return;
        }
        let g = self.fi.graph;
        for u in 0..g.n() {
            let min = min_partial_reduced_cost(g, &self.p_right, u).expect("u has arcs");
            if self.p_left[u] < -min {
                self.diag.left_price_bound_violations += 1;
            }
        }
        if !self.flow.excess_cache_consistent(&self.fi) || self.flow.total_excess() != 0 {
            self.diag.excess_mismatches += 1;
        }
    }
}

fn min_partial_reduced_cost(g: &WeightedBipartiteGraph, p_right: &PriceVector, u: usize) -> Option<i64> {
    g.neighbors(u).map(|(v, w)| w - p_right[v]).min()
}

/// Runs double pushes until the pseudoflow is a flow.
fn run_refine<'g>(
    mut state: GkState<'g>,
    opts: &SolveOptions,
    sink: &mut dyn TraceSink,
) -> Result<GkState<'g>> {
    let g = state.fi.graph;
    let spread = state.p_right.spread() + 2 * g.max_abs_weight() + state.lone_gap;
    let cap = iteration_cap(g.n(), g.m(), spread, state.eps);
    let tracing = sink.enabled();
    let mut pushes: u128 = 0;
    while let Some(u) = state.next_active() {
        let event = state.double_push(u)?;
        if tracing {
            sink.record(&event)?;
        }
        pushes += 1;
        if pushes > cap {
            return Err(Error::IterationCap {
                phase: state.phase,
                eps: state.eps,
                cap,
            });
        }
        if (pushes as u64).is_multiple_of(DEADLINE_POLL) {
            opts.check_deadline()?;
        }
    }
    state.finish_checks();
    Ok(state)
}

/// One refine at fixed ε from right prices `p_right`. Returns the flow
/// and both price vectors.
pub fn refine(
    graph: &WeightedBipartiteGraph,
    eps: i64,
    p_right: PriceVector,
) -> Result<(Pseudoflow, PriceVector, PriceVector)> {
    let fi = to_flow_instance(graph)?;
    if eps < 1 {
        return Err(Error::InvalidParameter(format!("eps must be >= 1, got {eps}")));
    }
    let state = GkState::new(fi, p_right, eps, 0)?;
    let state = run_refine(state, &SolveOptions::default(), &mut NullSink)?;
    Ok((state.flow, state.p_left, state.p_right))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkPhase {
    pub eps: i64,
    pub pushes: usize,
    pub scaled_weight: i64,
    /// Evaluated only with `check_invariants`.
    pub eps_optimal: Option<bool>,
    /// ε-CS of the induced matching under the right prices.
    pub eps_cs_induced: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct GkOutcome {
    pub matching: Matching,
    pub left_prices: PriceVector,
    pub right_prices: PriceVector,
    pub scale: i64,
    pub phases: Vec<GkPhase>,
    pub diagnostics: GkDiagnostics,
}

/// Scaling schedule of refines on a balanced graph, no precheck.
pub fn goldberg_kennedy_balanced(
    graph: &WeightedBipartiteGraph,
    opts: &SolveOptions,
    sink: &mut dyn TraceSink,
) -> Result<GkOutcome> {
    opts.validate()?;
    let (scale, scaled_w) = scaling(graph)?;
    let scaled = graph.scaled(scale);
    let fi = to_flow_instance(&scaled)?;
    let mut p_right = PriceVector::zeros(graph.s());
    let mut p_left = PriceVector::zeros(graph.n());
    let mut matching = Matching::empty(graph.n(), graph.s());
    let mut phases = Vec::new();
    let mut diagnostics = GkDiagnostics::default();
    for (phase, eps) in epsilon_schedule(scaled_w, opts.alpha).into_iter().enumerate() {
        let state = GkState::new(fi, p_right, eps, phase)?.with_checks(opts.check_invariants);
        let state = run_refine(state, opts, sink)?;
        let d = state.diag;
        diagnostics.double_pushes += d.double_pushes;
        diagnostics.price_update_mismatches += d.price_update_mismatches;
        diagnostics.left_price_mismatches += d.left_price_mismatches;
        diagnostics.left_price_bound_violations += d.left_price_bound_violations;
        diagnostics.excess_mismatches += d.excess_mismatches;

        matching = flow_to_matching(&fi, &state.flow)?;
        let (eps_optimal, eps_cs_induced) = if opts.check_invariants {
            let opt = check_eps_optimal(&fi, &state.flow, &state.p_left, &state.p_right, eps);
            let cs = scaled.check_eps_cs(&state.p_right, &matching, eps);
            if !opt || opt != cs || d.total_violations() > 0 {
                return Err(Error::InvariantViolation(format!(
                    "refine phase {phase} (eps={eps}): eps-optimal={opt}, induced eps-CS={cs}, {d:?}"
                )));
            }
            (Some(opt), Some(cs))
        } else {
            (None, None)
        };
        phases.push(GkPhase {
            eps,
            pushes: state.steps,
            scaled_weight: state.flow.weight(&fi),
            eps_optimal,
            eps_cs_induced,
        });
        p_left = state.p_left;
        p_right = state.p_right;
    }
    Ok(GkOutcome {
        matching,
        left_prices: p_left,
        right_prices: p_right,
        scale,
        phases,
        diagnostics,
    })
}

pub fn goldberg_kennedy(graph: &WeightedBipartiteGraph, opts: &SolveOptions) -> Result<Solution> {
    goldberg_kennedy_traced(graph, opts, &mut NullSink)
}

pub fn goldberg_kennedy_traced(
    graph: &WeightedBipartiteGraph,
    opts: &SolveOptions,
    sink: &mut dyn TraceSink,
) -> Result<Solution> {
    opts.validate()?;
    if !feasibility_precheck(graph) {
        return Err(Error::Infeasible);
    }
    let matching = if graph.is_balanced() {
        goldberg_kennedy_balanced(graph, opts, sink)?.matching
    } else {
        let (reduced, map) = reduce(graph, opts.reduction)?;
        let outcome = goldberg_kennedy_balanced(&reduced, opts, sink)?;
        project_matching(&outcome.matching, &map)?
    };
    let weight = graph.matching_weight(&matching);
    Ok(Solution { matching, weight })
}
