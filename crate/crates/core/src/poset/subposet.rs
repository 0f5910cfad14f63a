use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::poset::leveled::LeveledPoset;

/// Which induced subposet to cut for a node set `X` inside one level `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubposetMode {
    /// `P_X`: nodes of levels `< j` that are below no element of `X`.
    Avoiding,
    /// `M(X) = P_j \ X`, as a poset whose only nonempty level is `j`.
    Remainder,
    /// `P_{<X}`: nodes strictly below some element of `X`.
    BelowClosure,
    /// `P̄_X = P_X ∪ M(X)`.
    Completed,
}

/// A subposet request: a mode, the level `j` holding `X`, and `X` itself
/// (dense node indices of the parent). `level` must be given even when
/// `X` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubposetSpec {
    pub mode: SubposetMode,
    pub level: usize,
    pub set: Vec<usize>,
}

impl SubposetSpec {
    pub fn new(mode: SubposetMode, level: usize, set: Vec<usize>) -> Self {
        SubposetSpec { mode, level, set }
    }
}

impl LeveledPoset {
    /// Cuts the induced subposet described by `spec`, keeping original level
    /// indices and labels. Covers are the parent covers between survivors;
    /// every mode yields a convex subset, so this is also the inherited order.
    pub fn subposet(&self, spec: &SubposetSpec) -> Result<LeveledPoset> {
        let j = spec.level;
        if j >= self.level_count() {
            return Err(Error::contract(format!(
                "level {j} does not exist (poset has {} levels)",
                self.level_count()
            )));
        }
        for &x in &spec.set {
            if x >= self.len() {
                return Err(Error::contract(format!("node index {x} out of range")));
            }
            if self.level_of(x) != j {
                return Err(Error::contract(format!(
                    "node {} lies in level {}, but the set must lie in level {j}",
                    self.label(x),
                    self.level_of(x)
                )));
            }
        }
        let below = self.strict_down_closure(&spec.set);
        let mut in_set = BitSet::new(self.len());
        for &x in &spec.set {
            in_set.insert(x);
        }
        let lower_avoiding = |keep: &mut BitSet| {
            for level in &self.levels()[..j] {
                for &v in level {
                    if !below.contains(v) {
                        keep.insert(v);
                    }
                }
            }
        };
        let remainder = |keep: &mut BitSet| {
            for &v in self.level(j) {
                if !in_set.contains(v) {
                    keep.insert(v);
                }
            }
        };
        let mut keep = BitSet::new(self.len());
        let level_count = match spec.mode {
            SubposetMode::Avoiding => {
                lower_avoiding(&mut keep);
                j
            }
            SubposetMode::Remainder => {
                remainder(&mut keep);
                j + 1
            }
            SubposetMode::BelowClosure => {
                keep = below.clone();
                j
            }
            SubposetMode::Completed => {
                lower_avoiding(&mut keep);
                remainder(&mut keep);
                j + 1
            }
        };
        Ok(self.induced(&keep, level_count))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::grid::build_grid;
    use crate::poset::point::Point;

    fn idx(p: &LeveledPoset, c: &[u32]) -> usize {
        p.index_of_point(&Point::new(p.grid().unwrap().t, c.to_vec()).unwrap())
            .unwrap()
    }

    fn points_of(p: &LeveledPoset) -> Vec<Vec<u32>> {
        let mut v: Vec<_> = (0..p.len()).map(|i| p.point(i).unwrap().coords().to_vec()).collect();
        v.sort();
        v
    }

    #[test]
    fn diamond_top() {
        let p = build_grid(2, 2).unwrap();
        let top = idx(&p, &[1, 1]);
        let px = p.subposet(&SubposetSpec::new(SubposetMode::Avoiding, 2, vec![top])).unwrap();
        assert!(px.is_empty());
        let mx = p.subposet(&SubposetSpec::new(SubposetMode::Remainder, 2, vec![top])).unwrap();
        assert!(mx.is_empty());
    }

    #[test]
    fn three_by_three_corner() {
        let p = build_grid(3, 2).unwrap();
        let x = idx(&p, &[0, 2]);
        let px = p.subposet(&SubposetSpec::new(SubposetMode::Avoiding, 2, vec![x])).unwrap();
        assert_eq!(points_of(&px), vec![vec![1, 0]]);
        let mx = p.subposet(&SubposetSpec::new(SubposetMode::Remainder, 2, vec![x])).unwrap();
        assert_eq!(points_of(&mx), vec![vec![1, 1], vec![2, 0]]);
        let bar = p.subposet(&SubposetSpec::new(SubposetMode::Completed, 2, vec![x])).unwrap();
        assert_eq!(bar.len(), 3);
        assert_eq!(bar.level_count(), 3);
        // (1,0) < (1,1) and (1,0) < (2,0) survive as covers
        assert_eq!(bar.cover_count(), 2);
        let below = p.subposet(&SubposetSpec::new(SubposetMode::BelowClosure, 2, vec![x])).unwrap();
        assert_eq!(points_of(&below), vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn empty_set_keeps_bottom_part() {
        let p = build_grid(3, 2).unwrap();
        let bar = p.subposet(&SubposetSpec::new(SubposetMode::Completed, 2, vec![])).unwrap();
        let truncated = p.truncated(3);
        assert_eq!(bar.level_sizes(), truncated.level_sizes());
        assert_eq!(bar.cover_count(), truncated.cover_count());
    }

    #[test]
    fn set_spanning_levels_is_rejected() {
        let p = build_grid(3, 2).unwrap();
        let spec = SubposetSpec::new(SubposetMode::Avoiding, 2, vec![idx(&p, &[0, 2]), idx(&p, &[0, 1])]);
        assert!(matches!(p.subposet(&spec), Err(Error::Contract(_))));
    }
}
