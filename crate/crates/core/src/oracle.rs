//! Exhaustive reference solver for small instances.

use crate::error::{Error, Result};
use crate::graph::{Matching, WeightedBipartiteGraph};

pub const MAX_RIGHT: usize = 9;
const MAX_LEAVES: u128 = 100_000_000;

/// Minimum-weight matching covering every right vertex, found by
/// enumerating injections `V → U` along edges. Among optimal matchings the
/// one whose mate sequence `(M(v0), M(v1), …)` is lexicographically
/// smallest is returned. `Ok(None)` means no covering matching exists.
pub fn brute_force_optimum(graph: &WeightedBipartiteGraph) -> Result<Option<(Matching, i64)>> {
    let (n, s) = (graph.n(), graph.s());
    if s > MAX_RIGHT {
        return Err(Error::TooLarge(format!("s = {s} exceeds {MAX_RIGHT}")));
    }
    let leaves = (0..s).fold(1u128, |acc, i| acc.saturating_mul(n.saturating_sub(i) as u128));
    if leaves > MAX_LEAVES {
        return Err(Error::TooLarge(format!("{leaves} injections to enumerate")));
    }
    if n < s {
        return Ok(None);
    }

    let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); s];
    for (u, v, w) in graph.edges() {
        columns[v].push((u, w));
    }
    if columns.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    // lower bound on the weight of covering v..s
    let mut suffix = vec![0i64; s + 1];
    for v in (0..s).rev() {
        suffix[v] = suffix[v + 1] + columns[v].iter().map(|e| e.1).min().unwrap();
    }

    let mut search = Search {
        columns: &columns,
        suffix: &suffix,
        used: vec![false; n],
        current: Vec::with_capacity(s),
        best: None,
    };
    search.descend(0, 0);
    Ok(search.best.map(|(mates, w)| {
        let m = Matching::from_pairs(n, s, mates.into_iter().enumerate().map(|(v, u)| (u, v)));
        (m, w)
    }))
}

struct Search<'a> {
    columns: &'a [Vec<(usize, i64)>],
    suffix: &'a [i64],
    used: Vec<bool>,
    current: Vec<usize>,
    best: Option<(Vec<usize>, i64)>,
}

impl Search<'_> {
    fn descend(&mut self, v: usize, partial: i64) {
        if let Some((_, best)) = &self.best {
            if partial + self.suffix[v] >= *best {
                return;
            }
        }
        if v == self.columns.len() {
            self.best = Some((self.current.clone(), partial));
            return;
        }
        for &(u, w) in &self.columns[v] {
            if self.used[u] {
                continue;
            }
            self.used[u] = true;
            self.current.push(u);
            self.descend(v + 1, partial + w);
            self.current.pop();
            self.used[u] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g0() {
        let g = WeightedBipartiteGraph::new(2, 2, &[(0, 0, 1), (0, 1, 3), (1, 0, 2), (1, 1, 1)])
            .unwrap();
        let (m, w) = brute_force_optimum(&g).unwrap().unwrap();
        assert_eq!(w, 2);
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn infeasible_and_trivial() {
        let g = WeightedBipartiteGraph::new(2, 2, &[(0, 0, 1), (1, 0, 1)]).unwrap();
        assert_eq!(brute_force_optimum(&g).unwrap(), None);
        let g = WeightedBipartiteGraph::new(1, 1, &[(0, 0, 5)]).unwrap();
        assert_eq!(brute_force_optimum(&g).unwrap().unwrap().1, 5);
    }

    #[test]
    fn lexicographic_tie_break() {
        // both perfect matchings weigh 2
        let g = WeightedBipartiteGraph::new(2, 2, &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
            .unwrap();
        let (m, _) = brute_force_optimum(&g).unwrap().unwrap();
        assert_eq!(m.mate_of_v(0), Some(0));
    }

    #[test]
    fn unbalanced() {
        let g = WeightedBipartiteGraph::new(3, 1, &[(0, 0, 4), (1, 0, 2), (2, 0, 3)]).unwrap();
        let (m, w) = brute_force_optimum(&g).unwrap().unwrap();
        assert_eq!((w, m.mate_of_v(0)), (2, Some(1)));
    }

    #[test]
    fn too_large() {
        let edges: Vec<_> = (0..10).map(|i| (i, i, 1)).collect();
        let g = WeightedBipartiteGraph::new(10, 10, &edges).unwrap();
        assert!(matches!(brute_force_optimum(&g), Err(Error::TooLarge(_))));
    }
}
