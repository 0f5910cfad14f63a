use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use rug::Integer;

use crate::error::{Error, Result};
use crate::poset::LeveledPoset;

/// Default cap on the width of any level for the downset DP.
pub const DEFAULT_DP_WIDTH_CAP: usize = 24;

/// Smallest slice handed to one rayon task in the transforms.
const PAR_CHUNK: usize = 1 << 12;

/// Counts antichains of `p` as downsets, level by level, with the default width cap.
pub fn count_antichains_dp(p: &LeveledPoset) -> Result<Integer> {
    count_antichains_dp_with_cap(p, DEFAULT_DP_WIDTH_CAP)
}

/// Downset DP: the state is the slice `S` of the current level inside the
/// downset. Moving up, `T` may join exactly when `S ⊇ req(T)`, so the next
/// state vector is a superset-sum transform read at `req(T)`.
///
/// Runs in `u128` and restarts with big integers on the first overflow.
pub fn count_antichains_dp_with_cap(p: &LeveledPoset, cap: usize) -> Result<Integer> {
    let layout = LevelLayout::new(p, cap.min(30))?;
    if let Some(v) = run::<u128>(&layout) {
        return Ok(Integer::from(v));
    }
    Ok(run::<Integer>(&layout).expect("big integer DP cannot overflow"))
}

/// Per-level down-masks: bit `j` of `down_masks[i][k]` is set when the
/// `j`-th node of level `i-1` is a lower cover of the `k`-th node of level `i`.
pub(crate) struct LevelLayout {
    pub(crate) widths: Vec<usize>,
    pub(crate) down_masks: Vec<Vec<u32>>,
}

impl LevelLayout {
    pub(crate) fn new(p: &LeveledPoset, cap: usize) -> Result<Self> {
        let (wi, width) = p.widest_level();
        if width > cap {
            return Err(Error::size(format!("width of level {wi}"), width as u128, cap as u128));
        }
        let mut pos = vec![0usize; p.len()];
        for level in p.levels() {
            for (k, &v) in level.iter().enumerate() {
                pos[v] = k;
            }
        }
        let down_masks = p
            .levels()
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|&v| p.down(v).iter().fold(0u32, |m, &w| m | 1 << pos[w]))
                    .collect()
            })
            .collect();
        Ok(LevelLayout {
            widths: p.level_sizes(),
            down_masks,
        })
    }

    /// `req[T]`: union of the down-masks of the members of `T`, for every `T`.
    pub(crate) fn requirements(&self, level: usize) -> Vec<u32> {
        let masks = &self.down_masks[level];
        let mut req = vec![0u32; 1 << masks.len()];
        for t in 1..req.len() {
            req[t] = req[t & (t - 1)] | masks[t.trailing_zeros() as usize];
        }
        req
    }
}

pub(crate) trait DpValue: Clone + Send + Sync {
    fn one() -> Self;
    /// Adds in place; false on overflow.
    fn add_checked(&mut self, other: &Self) -> bool;
}

impl DpValue for u128 {
    fn one() -> Self {
        1
    }
    fn add_checked(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
}

impl DpValue for Integer {
    fn one() -> Self {
        Integer::from(1)
    }
    fn add_checked(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
}

fn run<T: DpValue>(layout: &LevelLayout) -> Option<T> {
    let mut state: Vec<T> = vec![T::one(); 1 << layout.widths[0]];
    for level in 1..layout.widths.len() {
        if !superset_sums(&mut state) {
            return None;
        }
        let req = layout.requirements(level);
        state = req.par_iter().map(|&r| state[r as usize].clone()).collect();
    }
    let mut total = state[0].clone();
    for v in &state[1..] {
        if !total.add_checked(v) {
            return None;
        }
    }
    Some(total)
}

/// In-place superset sums, `data[M] = Σ_{S ⊇ M} data[S]`, bits in ascending order.
/// Returns false if any addition overflowed.
pub(crate) fn superset_sums<T: DpValue>(data: &mut [T]) -> bool {
    let len = data.len();
    let overflow = AtomicBool::new(false);
    let mut step = 1;
    while step < len {
        let chunk = (2 * step).max(PAR_CHUNK.min(len));
        data.par_chunks_mut(chunk).for_each(|c| {
            for block in c.chunks_mut(2 * step) {
                let (lo, hi) = block.split_at_mut(step);
                for (z, o) in lo.iter_mut().zip(hi.iter()) {
                    if !z.add_checked(o) {
                        overflow.store(true, Ordering::Relaxed);
                    }
                }
            }
        });
        if overflow.load(Ordering::Relaxed) {
            return false;
        }
        step *= 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_antichains_oracle;
    use crate::poset::build_grid;

    #[test]
    fn grid_values() {
        let cases = [(2, 1, 3u64), (2, 2, 6), (2, 3, 20), (2, 4, 168), (2, 5, 7581), (3, 2, 20), (3, 3, 980)];
        for (t, n, want) in cases {
            assert_eq!(count_antichains_dp(&build_grid(t, n).unwrap()).unwrap(), want, "t={t} n={n}");
        }
    }

    #[test]
    fn matches_oracle_on_oracle_sized_grids() {
        for (t, n) in [(2, 5), (3, 3), (4, 2), (5, 2), (2, 4)] {
            let g = build_grid(t, n).unwrap();
            assert_eq!(count_antichains_dp(&g).unwrap(), count_antichains_oracle(&g).unwrap());
        }
    }

    #[test]
    fn big_integer_path_matches_u128() {
        let g = build_grid(3, 3).unwrap();
        let layout = LevelLayout::new(&g, 24).unwrap();
        let small = run::<u128>(&layout).unwrap();
        let big = run::<Integer>(&layout).unwrap();
        assert_eq!(Integer::from(small), big);
    }

    #[test]
    fn overflow_is_detected() {
        let mut v = vec![u128::MAX, 1];
        assert!(!superset_sums(&mut v));
        let mut w = vec![1u128; 8];
        assert!(superset_sums(&mut w));
        assert_eq!(w, vec![8, 4, 4, 2, 4, 2, 2, 1]);
    }

    #[test]
    fn width_cap_names_widest_level() {
        let g = build_grid(2, 4).unwrap();
        let err = count_antichains_dp_with_cap(&g, 5).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { actual: 6, limit: 5, ref what } if what.contains("level 2")), "{err}");
    }
}
