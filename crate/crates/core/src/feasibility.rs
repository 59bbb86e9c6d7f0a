//! Maximum-cardinality matching (Hopcroft–Karp) used as the feasibility
//! precheck shared by all solvers.

use std::collections::VecDeque;

use crate::graph::{Matching, WeightedBipartiteGraph};

const UNREACHED: u32 = u32::MAX;

/// A maximum-cardinality matching of `graph`, ignoring weights.
pub fn maximum_matching(graph: &WeightedBipartiteGraph) -> Matching {
    let n = graph.n();
    let mut mate_u: Vec<Option<usize>> = vec![None; n];
    let mut mate_v: Vec<Option<usize>> = vec![None; graph.s()];
    let mut dist = vec![UNREACHED; n];
    let mut cursor = vec![0usize; n];
    let mut queue = VecDeque::new();
    let mut stack = Vec::new();

    // Greedy start.
    for u in 0..n {
        if let Some((v, _)) = graph.neighbors(u).find(|&(v, _)| mate_v[v].is_none()) {
            mate_u[u] = Some(v);
            mate_v[v] = Some(u);
        }
    }

    loop {
        queue.clear();
        for u in 0..n {
            if mate_u[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = UNREACHED;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for (v, _) in graph.neighbors(u) {
                match mate_v[v] {
                    None => found = true,
                    Some(w) if dist[w] == UNREACHED => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }

        for u in 0..n {
            cursor[u] = graph.edge_range(u).start;
        }
        let mut augmented = false;
        for root in 0..n {
            if mate_u[root].is_some() {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                if cursor[u] == graph.edge_range(u).end {
                    dist[u] = UNREACHED;
                    stack.pop();
                    continue;
                }
                let v = graph.target(cursor[u]);
                match mate_v[v] {
                    None => {
                        for &x in &stack {
                            let y = graph.target(cursor[x]);
                            mate_u[x] = Some(y);
                            mate_v[y] = Some(x);
                        }
                        augmented = true;
                        break;
                    }
                    Some(w) if dist[w] == dist[u] + 1 => stack.push(w),
                    Some(_) => cursor[u] += 1,
                }
            }
        }
        if !augmented {
            break;
        }
    }

    Matching::from_pairs(
        n,
        graph.s(),
        mate_u
            .iter()
            .enumerate()
            .filter_map(|(u, v)| v.map(|v| (u, v))),
    )
}

/// True iff some matching covers every right vertex.
pub fn feasibility_precheck(graph: &WeightedBipartiteGraph) -> bool {
    graph.n() >= graph.s() && maximum_matching(graph).len() == graph.s()
}
