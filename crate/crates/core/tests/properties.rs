mod common;

use bipmatch::auction::{auction, AuctionState};
use bipmatch::feasibility::maximum_matching;
use bipmatch::gk::{check_eps_optimal, to_flow_instance, Pseudoflow};
use bipmatch::oracle::brute_force_optimum;
use bipmatch::reduction::{project_matching, reduce};
use bipmatch::trace::{compare_traces, record_trace};
use bipmatch::{solve, Algorithm, PriceVector, ReductionKind, SolveOptions, WeightedBipartiteGraph};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::feasible_instance;

fn checked() -> SolveOptions {
    SolveOptions {
        check_invariants: true,
        ..Default::default()
    }
}

/// Feasible instance with `s ≤ n ≤ max`.
fn instance(seed: u64, max: usize, balanced: bool) -> WeightedBipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max);
    let s = if balanced { n } else { rng.gen_range(1..=n) };
    let combo = rng.gen_range(0..6);
    feasible_instance(&mut rng, combo, n, s).1
}

fn random_prices(rng: &mut impl Rng, len: usize, range: i64) -> PriceVector {
    (0..len).map(|_| rng.gen_range(-range..=range)).collect::<Vec<_>>().into()
}

fn relabel(g: &WeightedBipartiteGraph, rng: &mut impl Rng) -> WeightedBipartiteGraph {
    let mut pu: Vec<usize> = (0..g.n()).collect();
    let mut pv: Vec<usize> = (0..g.s()).collect();
    pu.shuffle(rng);
    pv.shuffle(rng);
    let edges: Vec<_> = g.edges().map(|(u, v, w)| (pu[u], pv[v], w)).collect();
    WeightedBipartiteGraph::new(g.n(), g.s(), &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eps_cs_monotone_in_eps_and_shift_invariant(seed in any::<u64>(), extra in 0i64..1000, shift in -10_000i64..10_000) {
        let g = instance(seed, 10, false);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let m = maximum_matching(&g);
        let p = random_prices(&mut rng, g.s(), 200_000);
        let eps = rng.gen_range(0..50_000);
        let holds = g.check_eps_cs(&p, &m, eps);
        if holds {
            prop_assert!(g.check_eps_cs(&p, &m, eps + extra));
        }
        let mut q = p.clone();
        q.shift(shift);
        prop_assert_eq!(g.check_eps_cs(&q, &m, eps), holds);
    }

    #[test]
    fn fixed_eps_auction_is_within_n_eps(seed in any::<u64>(), eps in 1i64..5000) {
        let g = instance(seed, 8, true);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let start = random_prices(&mut rng, g.s(), 1000);
        let (m, p) = auction(&g, eps, start).unwrap();
        prop_assert!(g.check_eps_cs(&p, &m, eps));
        let opt = brute_force_optimum(&g).unwrap().unwrap().1;
        let w = g.matching_weight(&m);
        prop_assert!(opt <= w && w <= opt + g.n() as i64 * eps, "{} not in [{}, {}]", w, opt, opt + g.n() as i64 * eps);
    }

    #[test]
    fn prices_only_fall_within_a_phase(seed in any::<u64>(), eps in 1i64..500) {
        let g = instance(seed, 12, true);
        let mut state = AuctionState::new(&g, PriceVector::zeros(g.s()), eps, 0);
        let mut before = state.prices().clone();
        while let Some(u) = state.next_unassigned() {
            let e = state.bid(u).unwrap();
            prop_assert!(e.new_price_v < before[e.best_v]);
            prop_assert_eq!(e.gamma, e.second_reduced_cost - e.best_reduced_cost);
            prop_assert!(e.gamma >= 0);
            for v in 0..g.s() {
                prop_assert!(state.prices()[v] <= before[v]);
            }
            before = state.prices().clone();
        }
    }

    #[test]
    fn shifted_prices_give_the_same_bids(seed in any::<u64>(), shift in -100_000i64..100_000) {
        let g = instance(seed, 10, true);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let p = random_prices(&mut rng, g.s(), 1000);
        let mut q = p.clone();
        q.shift(shift);
        let eps = rng.gen_range(1..100);
        let mut a = AuctionState::new(&g, p, eps, 0);
        let mut b = AuctionState::new(&g, q, eps, 0);
        loop {
            match (a.next_unassigned(), b.next_unassigned()) {
                (None, None) => break,
                (Some(u), Some(u2)) => {
                    prop_assert_eq!(u, u2);
                    let (x, y) = (a.bid(u).unwrap(), b.bid(u).unwrap());
                    prop_assert_eq!((x.best_v, x.gamma, x.displaced_u), (y.best_v, y.gamma, y.displaced_u));
                    prop_assert_eq!(x.best_reduced_cost - y.best_reduced_cost, shift);
                    prop_assert_eq!(y.new_price_v - x.new_price_v, shift);
                }
                _ => prop_assert!(false, "queues diverged"),
            }
        }
    }

    #[test]
    fn oracle_weight_ignores_labels(seed in any::<u64>()) {
        let g = instance(seed, 7, false);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let h = relabel(&g, &mut rng);
        let a = brute_force_optimum(&g).unwrap().map(|x| x.1);
        let b = brute_force_optimum(&h).unwrap().map(|x| x.1);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn solvers_match_oracle(seed in any::<u64>(), alpha in 1.5f64..10.0) {
        let g = instance(seed, 8, false);
        let opt = brute_force_optimum(&g).unwrap().unwrap().1;
        let opts = SolveOptions { alpha, ..checked() };
        for algo in Algorithm::ALL {
            let sol = solve(&g, algo, &opts).unwrap();
            prop_assert!(g.validate_matching(&sol.matching, true).is_ok());
            prop_assert_eq!(sol.weight, opt, "{}", algo);
        }
    }

    #[test]
    fn reductions_preserve_the_optimum(seed in any::<u64>()) {
        let g = instance(seed, 6, false);
        let opt = brute_force_optimum(&g).unwrap().unwrap().1;
        for kind in [ReductionKind::Double, ReductionKind::Pad] {
            let (g2, map) = reduce(&g, kind).unwrap();
            prop_assert!(g2.is_balanced());
            let sol = solve(&g2, Algorithm::Hungarian, &checked()).unwrap();
            prop_assert_eq!(sol.weight, map.weight_factor() * opt);
            let projected = project_matching(&sol.matching, &map).unwrap();
            prop_assert!(g.validate_matching(&projected, true).is_ok());
            prop_assert_eq!(g.matching_weight(&projected), opt);
        }
    }

    #[test]
    fn eps_optimality_matches_eps_cs_with_min_left_prices(seed in any::<u64>(), eps in 0i64..200_000) {
        let g = instance(seed, 10, true);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        let p_right = random_prices(&mut rng, g.s(), 100_000);
        let p_left: PriceVector = (0..g.n())
            .map(|u| -g.neighbors(u).map(|(v, w)| w - p_right[v]).min().unwrap())
            .collect::<Vec<_>>()
            .into();
        let m = maximum_matching(&g);
        let fi = to_flow_instance(&g).unwrap();
        let f = Pseudoflow::from_saturated(&fi, m.pairs().map(|(u, v)| g.edge_id(u, v).unwrap()));
        prop_assert_eq!(
            check_eps_optimal(&fi, &f, &p_left, &p_right, eps),
            g.check_eps_cs(&p_right, &m, eps)
        );
    }

    #[test]
    fn traces_agree_on_small_instances(seed in any::<u64>(), alpha in 1.5f64..8.0) {
        let g = instance(seed, 16, true);
        let a = record_trace(Algorithm::Auction, &g, alpha).unwrap();
        let b = record_trace(Algorithm::GoldbergKennedy, &g, alpha).unwrap();
        prop_assert!(!a.is_empty());
        prop_assert_eq!(compare_traces(&a, &b), None);
    }
}
