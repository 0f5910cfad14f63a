use antichain_core::bounds::middle_layer_floor_holds;
use antichain_core::chains::{chain_class, decompose, verify_decomposition};
use antichain_core::poset::{
    build_grid, count_low_points, level_sizes, middle_layer_size, Point, DEFAULT_NODE_BUDGET,
};
use proptest::prelude::*;
use rug::{Float, Integer};

fn is_low_by_definition(coords: &[u32], t: u32) -> bool {
    let n = coords.len() as f64;
    (1..t).any(|l| (coords.iter().filter(|&&c| c == l).count() as f64) < n / (2.0 * t as f64))
}

#[test]
fn low_point_count_matches_enumeration() {
    for t in 2..=10u32 {
        for n in 1..=16u32 {
            let Some(size) = (t as u64).checked_pow(n).filter(|&s| s <= 100_000) else {
                continue;
            };
            let enumerated = (0..size)
                .filter(|&code| is_low_by_definition(Point::decode(t, n as usize, code).coords(), t))
                .count();
            assert_eq!(count_low_points(t, n), enumerated, "t={t} n={n}");
        }
    }
}

#[test]
fn middle_layer_floor_holds_on_range() {
    for t in 1..=10 {
        for n in 1..=60 {
            assert!(middle_layer_floor_holds(t, n), "t={t} n={n}");
        }
    }
}

#[test]
fn middle_layer_matches_gaussian_estimate() {
    for t in 2..=5u32 {
        for n in (50..=200u32).step_by(50) {
            let big_n = Float::with_val(256, &middle_layer_size(t, n));
            let power = Float::with_val(256, Integer::from(Integer::u_pow_u(t, n)));
            let pi = Float::with_val(256, rug::float::Constant::Pi);
            let scale = (Float::with_val(256, 6) / (pi * ((t * t - 1) * n))).sqrt();
            let ratio = (big_n / (power * scale)).to_f64();
            assert!((ratio - 1.0).abs() <= 0.05, "t={t} n={n} ratio={ratio}");
        }
    }
}

#[test]
fn decompositions_verify() {
    for t in 2..=5u32 {
        for n in 1..=5u32 {
            let d = decompose(t, n, DEFAULT_NODE_BUDGET).unwrap();
            let report = verify_decomposition(&d, &build_grid(t, n).unwrap());
            assert!(report.all_passed(), "t={t} n={n}: {report:?}");
            assert_eq!(middle_layer_size(t, n), d.chains.len());
        }
    }
}

#[test]
fn small_decomposition_shapes() {
    assert_eq!(decompose(2, 2, DEFAULT_NODE_BUDGET).unwrap().chains.len(), 2);
    let mut sizes = decompose(2, 4, DEFAULT_NODE_BUDGET).unwrap().chain_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(sizes, vec![5, 3, 3, 3, 1, 1]);
}

#[test]
fn bracket_class_example_in_four_six() {
    let x = Point::new(4, vec![0, 2, 1, 3, 2, 1]).unwrap();
    let class: Vec<Vec<u32>> = chain_class(&x, DEFAULT_NODE_BUDGET)
        .unwrap()
        .iter()
        .map(|p| p.coords().to_vec())
        .collect();
    let expected = vec![
        vec![0, 2, 1, 3, 0, 1],
        vec![0, 2, 1, 3, 1, 1],
        vec![0, 2, 1, 3, 2, 1],
        vec![0, 2, 1, 3, 2, 2],
        vec![0, 2, 1, 3, 2, 3],
    ];
    assert_eq!(class, expected);
    let d = decompose(4, 6, DEFAULT_NODE_BUDGET).unwrap();
    let chain: Vec<Vec<u32>> = d
        .chain_points(d.chain_of(&x).unwrap())
        .iter()
        .map(|p| p.coords().to_vec())
        .collect();
    assert_eq!(chain, expected);
}

proptest! {
    #[test]
    fn level_sizes_are_symmetric_and_sum_to_grid(t in 1u32..8, n in 1u32..12) {
        let sizes = level_sizes(t, n);
        let total: Integer = sizes.iter().sum();
        prop_assert_eq!(total, Integer::from(Integer::u_pow_u(t, n)));
        let rev: Vec<_> = sizes.iter().rev().cloned().collect();
        prop_assert_eq!(&rev, &sizes);
        prop_assert_eq!(sizes.iter().max().unwrap(), &middle_layer_size(t, n));
    }
}
