use std::collections::HashMap;
use std::ops::{AddAssign, MulAssign};

use rug::Integer;

use crate::error::{Error, Result};
use crate::poset::{ComparabilityIndex, LeveledPoset};

/// Default node cap of the enumeration oracle.
pub const DEFAULT_ORACLE_CAP: usize = 32;

/// Counts antichains (including the empty one) by direct recursion over
/// elements, with the default cap of 32 nodes.
pub fn count_antichains_oracle(p: &LeveledPoset) -> Result<Integer> {
    count_antichains_oracle_with_cap(p, DEFAULT_ORACLE_CAP)
}

pub fn count_antichains_oracle_with_cap(p: &LeveledPoset, cap: usize) -> Result<Integer> {
    let comp = comparability_masks(p, cap, "the DP engine")?;
    Ok(antichain_sum(&comp, &vec![Integer::from(1); p.len()]))
}

/// Per-node comparability masks, refusing posets over `cap` (at most 64) nodes.
pub(crate) fn comparability_masks(p: &LeveledPoset, cap: usize, alternative: &str) -> Result<Vec<u64>> {
    let cap = cap.min(64);
    if p.len() > cap {
        return Err(Error::SizeLimit {
            what: format!("node count for enumeration (use {alternative} for larger posets)"),
            actual: p.len() as u128,
            limit: cap as u128,
        });
    }
    let idx = ComparabilityIndex::new(p);
    Ok((0..p.len())
        .map(|a| {
            (0..p.len())
                .filter(|&b| idx.comparable(a, b))
                .fold(0u64, |m, b| m | 1 << b)
        })
        .collect())
}

/// `Σ_{I antichain} Π_{x∈I} w_x`, splitting on the lowest remaining element:
/// either it is left out, or it is taken and everything comparable to it goes.
pub(crate) fn antichain_sum<T>(comp: &[u64], weights: &[T]) -> T
where
    T: Clone + From<u32> + for<'a> AddAssign<&'a T> + for<'a> MulAssign<&'a T>,
{
    fn go<T>(rest: u64, comp: &[u64], w: &[T], memo: &mut HashMap<u64, T>) -> T
    where
        T: Clone + From<u32> + for<'a> AddAssign<&'a T> + for<'a> MulAssign<&'a T>,
    {
        if rest == 0 {
            return T::from(1);
        }
        if let Some(v) = memo.get(&rest) {
            return v.clone();
        }
        let e = rest.trailing_zeros() as usize;
        let without = rest & !(1u64 << e);
        let mut total = go(without, comp, w, memo);
        let mut taken = go(without & !comp[e], comp, w, memo);
        taken *= &w[e];
        total += &taken;
        memo.insert(rest, total.clone());
        total
    }
    let full = if comp.len() == 64 { u64::MAX } else { (1u64 << comp.len()) - 1 };
    go(full, comp, weights, &mut HashMap::new())
}
