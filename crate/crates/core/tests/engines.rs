use antichain_core::counting::{
    count_antichains_dp, count_antichains_oracle, independence_poly, weighted_antichain_sum,
    weighted_antichain_sum_enumerated, BipartiteGraph, WeightAssignment,
};
use antichain_core::poset::{build_grid, grid_size};
use antichain_core::random::{random_bipartite, random_poset, random_rational, seeded, PosetShape};
use proptest::prelude::*;
use rug::{Integer, Rational};

#[test]
fn engines_agree_on_small_grids() {
    for t in 1..=32u32 {
        for n in 1..=5u32 {
            if grid_size(t, n).unwrap() > 32 {
                continue;
            }
            let g = build_grid(t, n).unwrap();
            assert_eq!(count_antichains_dp(&g).unwrap(), count_antichains_oracle(&g).unwrap(), "[{t}]^{n}");
        }
    }
}

#[test]
fn square_grids_count_lattice_paths() {
    // downsets of [t]^2 are staircase paths in a t×t box
    for t in 1..=4u32 {
        let g = build_grid(t, 2).unwrap();
        let paths = Integer::from(Integer::binomial_u(2 * t, t));
        assert_eq!(count_antichains_dp(&g).unwrap(), paths);
        assert_eq!(count_antichains_oracle(&g).unwrap(), paths);
    }
}

#[test]
fn dp_is_identical_across_thread_pools() {
    let g = build_grid(3, 4).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| count_antichains_dp(&g).unwrap())
    };
    let one = run(1);
    assert_eq!(one, Integer::from(17_792_748));
    assert_eq!(run(4), one);
}

/// Independent sets by brute force over all subsets of A ∪ B.
fn independent_set_sum(g: &BipartiteGraph) -> Rational {
    let (a, b) = (g.a_count(), g.b_count());
    let edges: Vec<_> = g.edges().collect();
    let mut total = Rational::new();
    for mask in 0u32..1 << (a + b) {
        if edges.iter().any(|&(v, u)| mask >> v & 1 == 1 && mask >> (a + u) & 1 == 1) {
            continue;
        }
        let mut w = Rational::from(1);
        for v in 0..a {
            if mask >> v & 1 == 1 {
                w *= g.mu();
            }
        }
        for u in 0..b {
            if mask >> (a + u) & 1 == 1 {
                w *= g.lambda(u);
            }
        }
        total += w;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_agree_on_random_posets(seed in any::<u64>()) {
        let p = random_poset(&mut seeded(seed), &PosetShape::default());
        prop_assert_eq!(count_antichains_dp(&p).unwrap(), count_antichains_oracle(&p).unwrap());
    }

    #[test]
    fn weighted_sum_matches_enumeration(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_poset(&mut rng, &PosetShape { max_nodes: 9, ..PosetShape::default() });
        let w = antichain_core::random::random_weights(&mut rng, p.level_count());
        prop_assert_eq!(
            weighted_antichain_sum(&p, &w).unwrap(),
            weighted_antichain_sum_enumerated(&p, &w, 16).unwrap()
        );
    }

    #[test]
    fn weighted_sum_is_monotone(seed in any::<u64>(), bump in 1u32..8) {
        let mut rng = seeded(seed);
        let p = random_poset(&mut rng, &PosetShape::default());
        let w = antichain_core::random::random_weights(&mut rng, p.level_count());
        let base = weighted_antichain_sum(&p, &w).unwrap();
        let j = (seed % p.level_count() as u64) as usize;
        let mut raised = w.level_weights().to_vec();
        raised[j] += Rational::from((bump, 4));
        let up = weighted_antichain_sum(&p, &WeightAssignment::per_level(raised).unwrap()).unwrap();
        prop_assert!(up >= base);
    }

    #[test]
    fn independence_poly_matches_brute_force(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let g = random_bipartite(&mut rng, 6, 6);
        prop_assert_eq!(independence_poly(&g).unwrap(), independent_set_sum(&g));
        let ones = BipartiteGraph::new(
            g.a_count(),
            &g.edges().collect::<Vec<_>>(),
            Rational::from(1),
            vec![Rational::from(1); g.b_count()],
        ).unwrap();
        prop_assert_eq!(independence_poly(&ones).unwrap(), independent_set_sum(&ones));
    }

    #[test]
    fn random_rationals_stay_in_range(seed in any::<u64>()) {
        let q = random_rational(&mut seeded(seed), 1, 4, 8);
        prop_assert!((1..=4).contains(&q));
    }
}
