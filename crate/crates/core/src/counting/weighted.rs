use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use rug::Rational;

use crate::counting::dp::LevelLayout;
use crate::counting::oracle::{antichain_sum, comparability_masks};
use crate::error::{Error, Result};
use crate::poset::{LeveledPoset, NodeLabel};

/// Default level-width cap of the weighted DP.
pub const DEFAULT_WEIGHTED_WIDTH_CAP: usize = 20;

const PAR_CHUNK: usize = 1 << 10;

/// Node weights: one exact rational per level, optionally overridden per
/// node label. All weights are nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightAssignment {
    levels: Vec<Rational>,
    overrides: BTreeMap<NodeLabel, Rational>,
}

impl WeightAssignment {
    pub fn per_level(levels: Vec<Rational>) -> Result<Self> {
        if let Some((i, w)) = levels.iter().enumerate().find(|(_, w)| **w < 0) {
            return Err(Error::contract(format!("weight of level {i} is negative ({w})")));
        }
        Ok(WeightAssignment {
            levels,
            overrides: BTreeMap::new(),
        })
    }

    pub fn uniform(level_count: usize, weight: Rational) -> Result<Self> {
        Self::per_level(vec![weight; level_count])
    }

    /// All weights 1: the weighted sum is then the antichain count.
    pub fn unit(level_count: usize) -> Self {
        WeightAssignment {
            levels: vec![Rational::from(1); level_count],
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_override(mut self, label: NodeLabel, weight: Rational) -> Result<Self> {
        if weight < 0 {
            return Err(Error::contract(format!("weight of node {label} is negative ({weight})")));
        }
        self.overrides.insert(label, weight);
        Ok(self)
    }

    pub fn level_weights(&self) -> &[Rational] {
        &self.levels
    }

    pub fn overrides(&self) -> &BTreeMap<NodeLabel, Rational> {
        &self.overrides
    }

    /// True when every level weight and override is at least 1.
    pub fn all_at_least_one(&self) -> bool {
        self.levels.iter().chain(self.overrides.values()).all(|w| *w >= 1)
    }

    /// Checks that every level of `p` has a weight.
    pub fn check_covers(&self, p: &LeveledPoset) -> Result<()> {
        if self.levels.len() < p.level_count() {
            return Err(Error::contract(format!(
                "{} level weights given for a poset with {} levels",
                self.levels.len(),
                p.level_count()
            )));
        }
        Ok(())
    }

    /// `λ_v` for node `v` of `p`.
    pub fn weight_of(&self, p: &LeveledPoset, v: usize) -> &Rational {
        self.overrides
            .get(&p.label(v))
            .unwrap_or(&self.levels[p.level_of(v)])
    }
}

impl fmt::Display for WeightAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(", "))?;
        for (label, w) in &self.overrides {
            write!(f, " {label}:{w}")?;
        }
        Ok(())
    }
}

/// `Σ_{I antichain} Π_{x∈I} λ_x` with the default width cap.
pub fn weighted_antichain_sum(p: &LeveledPoset, w: &WeightAssignment) -> Result<Rational> {
    weighted_antichain_sum_with_cap(p, w, DEFAULT_WEIGHTED_WIDTH_CAP)
}

/// Level DP over downsets. An antichain is the set of maximal elements of
/// a downset, and a member of the level-`i` slice `S` is maximal exactly when
/// it misses `req(T)` for the next slice `T`. So each step is a superset sum
/// weighted by `Π_{x ∈ S∖req(T)} λ_x`, and the last level contributes all of
/// its weights.
pub fn weighted_antichain_sum_with_cap(p: &LeveledPoset, w: &WeightAssignment, cap: usize) -> Result<Rational> {
    w.check_covers(p)?;
    let layout = LevelLayout::new(p, cap.min(30))?;
    let level_weights: Vec<Vec<Rational>> = p
        .levels()
        .iter()
        .map(|level| level.iter().map(|&v| w.weight_of(p, v).clone()).collect())
        .collect();
    let mut state = vec![Rational::from(1); 1 << layout.widths[0]];
    for level in 1..layout.widths.len() {
        weighted_superset_sums(&mut state, &level_weights[level - 1]);
        let req = layout.requirements(level);
        state = req.par_iter().map(|&r| state[r as usize].clone()).collect();
    }
    weighted_superset_sums(&mut state, level_weights.last().expect("at least one level"));
    Ok(state.swap_remove(0))
}

/// Direct enumeration over antichains; the independent check for the DP.
pub fn weighted_antichain_sum_enumerated(p: &LeveledPoset, w: &WeightAssignment, cap: usize) -> Result<Rational> {
    w.check_covers(p)?;
    let comp = comparability_masks(p, cap, "the weighted DP")?;
    let weights: Vec<Rational> = (0..p.len()).map(|v| w.weight_of(p, v).clone()).collect();
    Ok(antichain_sum(&comp, &weights))
}

/// `h[M] = Σ_{S ⊇ M} data[S] Π_{b ∈ S∖M} λ_b`, bits in ascending order.
fn weighted_superset_sums(data: &mut [Rational], lambda: &[Rational]) {
    let len = data.len();
    let mut step = 1;
    for l in lambda {
        let chunk = (2 * step).max(PAR_CHUNK.min(len));
        data.par_chunks_mut(chunk).for_each(|c| {
            for block in c.chunks_mut(2 * step) {
                let (lo, hi) = block.split_at_mut(step);
                for (z, o) in lo.iter_mut().zip(hi.iter()) {
                    *z += Rational::from(l * o);
                }
            }
        });
        step *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_antichains_dp;
    use crate::poset::build_grid;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn two_chain() {
        let p = build_grid(2, 1).unwrap();
        let w = WeightAssignment::per_level(vec![q(3, 2), q(7, 1)]).unwrap();
        assert_eq!(weighted_antichain_sum(&p, &w).unwrap(), q(1, 1) + q(3, 2) + q(7, 1));
        assert_eq!(weighted_antichain_sum_enumerated(&p, &w, 32).unwrap(), q(19, 2));
    }

    #[test]
    fn incomparable_nodes_multiply() {
        for k in 1..=6u64 {
            let p = LeveledPoset::from_parts(vec![(0..k).collect()], &[]).unwrap();
            let w = WeightAssignment::uniform(1, q(2, 1)).unwrap();
            assert_eq!(weighted_antichain_sum(&p, &w).unwrap(), 3u64.pow(k as u32));
        }
    }

    #[test]
    fn unit_weights_give_the_count() {
        for (t, n) in [(2, 4), (3, 3), (4, 2)] {
            let g = build_grid(t, n).unwrap();
            let w = WeightAssignment::unit(g.level_count());
            assert_eq!(weighted_antichain_sum(&g, &w).unwrap(), count_antichains_dp(&g).unwrap());
        }
    }

    #[test]
    fn overrides_and_enumeration_agree() {
        let g = build_grid(3, 2).unwrap();
        let w = WeightAssignment::per_level((1..=5).map(|i| q(i, 3)).collect())
            .unwrap()
            .with_override(4, q(11, 2))
            .unwrap();
        assert_eq!(
            weighted_antichain_sum(&g, &w).unwrap(),
            weighted_antichain_sum_enumerated(&g, &w, 32).unwrap()
        );
        assert!(!w.all_at_least_one());
    }

    #[test]
    fn contract_errors() {
        assert!(WeightAssignment::per_level(vec![q(-1, 2)]).is_err());
        let g = build_grid(2, 2).unwrap();
        assert!(weighted_antichain_sum(&g, &WeightAssignment::unit(2)).is_err());
    }
}
