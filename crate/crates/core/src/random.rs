//! Seeded generators for the randomized property suites.
//!
//! All generators draw from a caller-supplied RNG; [`seeded`] gives the
//! ChaCha8 stream the suites use, so a seed fully determines a run.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use crate::counting::{BipartiteGraph, WeightAssignment};
use crate::entropy::FiniteDistribution;
use crate::error::Result;
use crate::poset::{LeveledPoset, NodeLabel};

/// `0xDEDEK1ND` read as ASCII bytes: "DEDEK1ND".
pub const DEFAULT_SEED: u64 = 0x4445_4445_4B31_4E44;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A derived stream for trial `index`, independent of how trials are scheduled.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Shape parameters for [`random_poset`].
#[derive(Clone, Copy, Debug)]
pub struct PosetShape {
    pub max_nodes: usize,
    pub max_levels: usize,
    /// Probability of each possible cover between consecutive levels.
    pub edge_probability: f64,
    /// Give every node below the top level at least one upper cover, so all
    /// maximal elements sit on the top level.
    pub top_generated: bool,
}

impl Default for PosetShape {
    fn default() -> Self {
        PosetShape {
            max_nodes: 12,
            max_levels: 4,
            edge_probability: 0.45,
            top_generated: false,
        }
    }
}

/// A random graded poset with nonempty levels and labels `0..len`.
pub fn random_poset<R: Rng>(rng: &mut R, shape: &PosetShape) -> LeveledPoset {
    assert!(shape.max_levels >= 1 && shape.max_nodes >= shape.max_levels);
    let k = rng.random_range(1..=shape.max_levels);
    let total = rng.random_range(k..=shape.max_nodes);
    let mut sizes = vec![1usize; k];
    for _ in k..total {
        sizes[rng.random_range(0..k)] += 1;
    }
    let mut levels: Vec<Vec<NodeLabel>> = Vec::with_capacity(k);
    let mut next: NodeLabel = 0;
    for &s in &sizes {
        levels.push((next..next + s as NodeLabel).collect());
        next += s as NodeLabel;
    }
    let mut covers = Vec::new();
    for i in 1..k {
        for &a in &levels[i - 1] {
            let mut has_up = false;
            for &b in &levels[i] {
                if rng.random_bool(shape.edge_probability) {
                    covers.push((a, b));
                    has_up = true;
                }
            }
            if shape.top_generated && !has_up {
                covers.push((a, *levels[i].choose(rng).expect("levels are nonempty")));
            }
        }
    }
    LeveledPoset::from_parts(levels, &covers).expect("generated covers join consecutive levels")
}

/// A rational drawn uniformly from `{lo + j/den : 0 <= j <= (hi-lo)·den}`
/// with a random denominator in `1..=max_den`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: u32, hi: u32, max_den: u32) -> Rational {
    let den = rng.random_range(1..=max_den);
    let num = rng.random_range(lo * den..=hi * den);
    Rational::from((num, den))
}

/// Independent per-level weights in `[1, 4]`.
pub fn random_weights<R: Rng>(rng: &mut R, level_count: usize) -> WeightAssignment {
    let levels = (0..level_count).map(|_| random_rational(rng, 1, 4, 8)).collect();
    WeightAssignment::per_level(levels).expect("weights in [1,4] are valid")
}

/// A random subset of `items`, each kept with probability 1/2.
pub fn random_subset<R: Rng, T: Copy>(rng: &mut R, items: &[T]) -> Vec<T> {
    items.iter().copied().filter(|_| rng.random_bool(0.5)).collect()
}

/// A bipartite graph with `1..=max_a` and `1..=max_b` vertices in which every
/// B vertex has a neighbor; μ and every λ_u are drawn from `[1, 4]`.
pub fn random_bipartite<R: Rng>(rng: &mut R, max_a: usize, max_b: usize) -> BipartiteGraph {
    let a = rng.random_range(1..=max_a);
    let b = rng.random_range(1..=max_b);
    let mut edges = Vec::new();
    for u in 0..b {
        let mut any = false;
        for v in 0..a {
            if rng.random_bool(0.45) {
                edges.push((v, u));
                any = true;
            }
        }
        if !any {
            edges.push((rng.random_range(0..a), u));
        }
    }
    let mu = random_rational(rng, 1, 4, 8);
    let lambda = (0..b).map(|_| random_rational(rng, 1, 4, 8)).collect();
    BipartiteGraph::new(a, &edges, mu, lambda).expect("generated graph is valid")
}

/// Random exact probabilities on `labels`: integer masses in `0..=20`
/// (at least one positive), normalized. `zero_probability` is the chance a
/// mass is forced to zero.
pub fn random_distribution<R: Rng>(rng: &mut R, labels: Vec<Vec<u32>>, zero_probability: f64) -> Result<FiniteDistribution> {
    let mut masses: Vec<u32> = labels
        .iter()
        .map(|_| {
            if rng.random_bool(zero_probability) {
                0
            } else {
                rng.random_range(1..=20)
            }
        })
        .collect();
    if masses.iter().all(|&m| m == 0) {
        let i = rng.random_range(0..masses.len());
        masses[i] = 1;
    }
    let total: u32 = masses.iter().sum();
    FiniteDistribution::exact(
        labels
            .into_iter()
            .zip(masses)
            .map(|(l, m)| (l, Rational::from((m, total))))
            .collect(),
    )
}
