use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::poset::point::Point;

/// External node identifier, as it appears in poset documents.
pub type NodeLabel = u64;

/// The ambient grid an explicit poset was cut out of. Labels of such a
/// poset are [`Point::encode`] codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridOrigin {
    pub t: u32,
    pub n: u32,
}

/// A degree-like quantity that is `Infinite` for a minimum over an empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Finite(usize),
    Infinite,
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::Infinite => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::Infinite => write!(f, "inf"),
        }
    }
}

/// An explicit graded poset.
///
/// Nodes carry dense indices `0..len()`, ordered level by level, plus an
/// external [`NodeLabel`]. Levels are 0-based and may be empty. Cover edges
/// only join consecutive levels, so comparability is the transitive closure
/// of the covers and adjacent-level comparability is exactly the cover
/// relation.
#[derive(Clone, Debug)]
pub struct LeveledPoset {
    labels: Vec<NodeLabel>,
    level_of: Vec<usize>,
    levels: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
    index: HashMap<NodeLabel, usize>,
    grid: Option<GridOrigin>,
}

impl LeveledPoset {
    /// Builds a poset from per-level label lists and `(lower, upper)` cover pairs.
    ///
    /// Either orientation of a pair is accepted; duplicates collapse.
    pub fn from_parts(levels: Vec<Vec<NodeLabel>>, covers: &[(NodeLabel, NodeLabel)]) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidPoset("a poset needs at least one level".into()));
        }
        let mut labels = Vec::new();
        let mut level_of = Vec::new();
        let mut dense_levels = Vec::with_capacity(levels.len());
        let mut index = HashMap::new();
        for (li, level) in levels.iter().enumerate() {
            let mut dense = Vec::with_capacity(level.len());
            for &label in level {
                let idx = labels.len();
                if index.insert(label, idx).is_some() {
                    return Err(Error::InvalidPoset(format!(
                        "node {label} appears more than once (second time in level {li})"
                    )));
                }
                labels.push(label);
                level_of.push(li);
                dense.push(idx);
            }
            dense_levels.push(dense);
        }
        let mut down = vec![Vec::new(); labels.len()];
        let mut up = vec![Vec::new(); labels.len()];
        let mut seen = HashSet::new();
        for (ci, &(a, b)) in covers.iter().enumerate() {
            let ia = *index
                .get(&a)
                .ok_or_else(|| Error::InvalidPoset(format!("covers[{ci}]: unknown node {a}")))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| Error::InvalidPoset(format!("covers[{ci}]: unknown node {b}")))?;
            let (lo, hi) = match level_of[ia].cmp(&level_of[ib]) {
                Ordering::Less => (ia, ib),
                Ordering::Greater => (ib, ia),
                Ordering::Equal => {
                    return Err(Error::InvalidPoset(format!(
                        "covers[{ci}]: nodes {a} and {b} lie in the same level {}",
                        level_of[ia]
                    )))
                }
            };
            if level_of[hi] != level_of[lo] + 1 {
                return Err(Error::InvalidPoset(format!(
                    "covers[{ci}]: edge {a}-{b} joins levels {} and {}, which are not consecutive",
                    level_of[ia], level_of[ib]
                )));
            }
            if seen.insert((lo, hi)) {
                down[hi].push(lo);
                up[lo].push(hi);
            }
        }
        for list in down.iter_mut().chain(up.iter_mut()) {
            list.sort_unstable();
        }
        Ok(LeveledPoset {
            labels,
            level_of,
            levels: dense_levels,
            down,
            up,
            index,
            grid: None,
        })
    }

    pub(crate) fn with_grid(mut self, grid: GridOrigin) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> &[usize] {
        self.levels.get(i).map_or(&[], |l| l.as_slice())
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn level_of(&self, v: usize) -> usize {
        self.level_of[v]
    }

    pub fn label(&self, v: usize) -> NodeLabel {
        self.labels[v]
    }

    pub fn index_of(&self, label: NodeLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    /// Lower covers of `v`, sorted.
    pub fn down(&self, v: usize) -> &[usize] {
        &self.down[v]
    }

    /// Upper covers of `v`, sorted.
    pub fn up(&self, v: usize) -> &[usize] {
        &self.up[v]
    }

    pub fn grid(&self) -> Option<GridOrigin> {
        self.grid
    }

    /// The grid point behind node `v`, when the poset came from `[t]^n`.
    pub fn point(&self, v: usize) -> Option<Point> {
        self.grid
            .map(|g| Point::decode(g.t, g.n as usize, self.labels[v]))
    }

    pub fn index_of_point(&self, p: &Point) -> Option<usize> {
        match self.grid {
            Some(g) if g.t == p.t() && g.n as usize == p.n() => self.index_of(p.encode()),
            _ => None,
        }
    }

    /// All `(lower, upper)` cover pairs in index order.
    pub fn covers(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(lo, ups)| ups.iter().map(move |&hi| (lo, hi)))
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// The highest level holding at least one node.
    pub fn top_level(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.is_empty())
    }

    /// `(level index, width)` of the widest level; the first one on ties.
    pub fn widest_level(&self) -> (usize, usize) {
        self.levels
            .iter()
            .enumerate()
            .fold((0, 0), |best, (i, l)| if l.len() > best.1 { (i, l.len()) } else { best })
    }

    /// True when every maximal element lies in the top nonempty level.
    pub fn maximal_elements_on_top(&self) -> bool {
        match self.top_level() {
            None => true,
            Some(top) => (0..self.len()).all(|v| self.level_of[v] == top || !self.up[v].is_empty()),
        }
    }

    /// Nodes strictly below some root.
    pub fn strict_down_closure(&self, roots: &[usize]) -> BitSet {
        self.closure(roots, |v| &self.down[v])
    }

    /// Nodes strictly above some root.
    pub fn strict_up_closure(&self, roots: &[usize]) -> BitSet {
        self.closure(roots, |v| &self.up[v])
    }

    fn closure<'a>(&'a self, roots: &[usize], step: impl Fn(usize) -> &'a [usize]) -> BitSet {
        let mut seen = BitSet::new(self.len());
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &r in roots {
            for &w in step(r) {
                if !seen.contains(w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in step(v) {
                if !seen.contains(w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// `N^i(v)`: the level-`i` nodes comparable to `v`, sorted.
    ///
    /// Walks cover edges level by level towards level `i`, so only the
    /// levels between `v` and `i` are touched.
    pub fn neighbors_in_level(&self, v: usize, i: usize) -> Vec<usize> {
        let lv = self.level_of[v];
        if i == lv || i >= self.levels.len() {
            return Vec::new();
        }
        let going_down = i < lv;
        let mut frontier = vec![v];
        let mut mark = BitSet::new(self.len());
        for _ in 0..lv.abs_diff(i) {
            let mut next = Vec::new();
            for &u in &frontier {
                let step = if going_down { &self.down[u] } else { &self.up[u] };
                for &w in step {
                    if !mark.contains(w) {
                        mark.insert(w);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        frontier.sort_unstable();
        frontier
    }

    /// `d^i(v) = |N^i(v)|`.
    pub fn degree_to_level(&self, v: usize, i: usize) -> usize {
        let lv = self.level_of[v];
        if i + 1 == lv {
            self.down[v].len()
        } else if i == lv + 1 {
            self.up[v].len()
        } else {
            self.neighbors_in_level(v, i).len()
        }
    }

    /// `d_{N^{i-1}(v)}` for `v` in level `i`: the least up-degree among the
    /// lower covers of `v`, or `Infinite` when `v` has none.
    pub fn min_neighbor_updegree(&self, v: usize) -> Degree {
        self.down[v]
            .iter()
            .map(|&w| self.up[w].len())
            .min()
            .map_or(Degree::Infinite, Degree::Finite)
    }

    /// `a < b` in the poset order.
    pub fn is_below(&self, a: usize, b: usize) -> bool {
        let (la, lb) = (self.level_of[a], self.level_of[b]);
        if la >= lb {
            return false;
        }
        if lb == la + 1 {
            return self.up[a].binary_search(&b).is_ok();
        }
        self.neighbors_in_level(a, lb).binary_search(&b).is_ok()
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.is_below(a, b) || self.is_below(b, a)
    }

    /// Induced poset on `keep`, with the original level indices and labels.
    /// Only the first `level_count` levels are kept (at least one).
    pub fn induced(&self, keep: &BitSet, level_count: usize) -> LeveledPoset {
        let level_count = level_count.max(1);
        let mut remap = vec![usize::MAX; self.len()];
        let mut labels = Vec::new();
        let mut level_of = Vec::new();
        let mut levels = vec![Vec::new(); level_count];
        for (li, level) in self.levels.iter().enumerate().take(level_count) {
            for &v in level {
                if keep.contains(v) {
                    remap[v] = labels.len();
                    levels[li].push(labels.len());
                    labels.push(self.labels[v]);
                    level_of.push(li);
                }
            }
        }
        let mut down = vec![Vec::new(); labels.len()];
        let mut up = vec![Vec::new(); labels.len()];
        for (lo, hi) in self.covers() {
            let (a, b) = (remap[lo], remap[hi]);
            if a != usize::MAX && b != usize::MAX {
                down[b].push(a);
                up[a].push(b);
            }
        }
        for list in down.iter_mut().chain(up.iter_mut()) {
            list.sort_unstable();
        }
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        LeveledPoset {
            labels,
            level_of,
            levels,
            down,
            up,
            index,
            grid: self.grid,
        }
    }

    /// Poset restricted to levels `0..level_count`.
    pub fn truncated(&self, level_count: usize) -> LeveledPoset {
        self.induced(&BitSet::full(self.len()), level_count)
    }
}

/// Strict down-sets of every node, for batches of comparability queries.
///
/// Built bottom-up from the covers in one pass, so its cost is linear in
/// the number of covers times the bitset width.
pub struct ComparabilityIndex {
    below: Vec<BitSet>,
}

impl ComparabilityIndex {
    pub fn new(poset: &LeveledPoset) -> Self {
        let mut below = vec![BitSet::new(poset.len()); poset.len()];
        for level in poset.levels() {
            for &v in level {
                let mut acc = BitSet::new(poset.len());
                for &w in poset.down(v) {
                    acc.insert(w);
                    acc.union_with(&below[w]);
                }
                below[v] = acc;
            }
        }
        ComparabilityIndex { below }
    }

    pub fn is_below(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a != b && (self.is_below(a, b) || self.is_below(b, a))
    }

    pub fn strictly_below(&self, v: usize) -> &BitSet {
        &self.below[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> LeveledPoset {
        LeveledPoset::from_parts(vec![vec![0], vec![1, 2], vec![3]], &[(0, 1), (0, 2), (1, 3), (3, 2)])
            .unwrap()
    }

    #[test]
    fn rejects_non_consecutive_and_same_level_edges() {
        let skip = LeveledPoset::from_parts(vec![vec![0], vec![1], vec![2]], &[(0, 2)]);
        assert!(matches!(skip, Err(Error::InvalidPoset(m)) if m.contains("not consecutive")));
        let flat = LeveledPoset::from_parts(vec![vec![0, 1]], &[(0, 1)]);
        assert!(matches!(flat, Err(Error::InvalidPoset(m)) if m.contains("same level")));
        let dup = LeveledPoset::from_parts(vec![vec![0], vec![0]], &[]);
        assert!(dup.is_err());
        let unknown = LeveledPoset::from_parts(vec![vec![0], vec![1]], &[(0, 7)]);
        assert!(matches!(unknown, Err(Error::InvalidPoset(m)) if m.contains("covers[0]")));
    }

    #[test]
    fn diamond_structure() {
        let p = diamond();
        assert_eq!(p.level_sizes(), vec![1, 2, 1]);
        assert_eq!(p.cover_count(), 4);
        let top = p.index_of(3).unwrap();
        assert_eq!(p.neighbors_in_level(top, 0), vec![p.index_of(0).unwrap()]);
        assert_eq!(p.min_neighbor_updegree(top), Degree::Finite(1));
        assert_eq!(p.min_neighbor_updegree(p.index_of(0).unwrap()), Degree::Infinite);
        assert!(p.is_below(0, top));
        assert!(!p.comparable(1, 2));
        assert!(p.maximal_elements_on_top());
    }

    #[test]
    fn degree_order_puts_infinity_last() {
        assert!(Degree::Finite(usize::MAX) < Degree::Infinite);
        assert_eq!(Degree::Finite(2).min(Degree::Infinite), Degree::Finite(2));
    }

    #[test]
    fn stranded_nodes_and_maximal_elements() {
        // node 2 sits in level 0 with no upper cover
        let p = LeveledPoset::from_parts(vec![vec![0, 2], vec![1]], &[(0, 1)]).unwrap();
        assert!(!p.maximal_elements_on_top());
        // node 2 in level 1 with no lower cover is fine
        let q = LeveledPoset::from_parts(vec![vec![0], vec![1, 2]], &[(0, 1)]).unwrap();
        assert!(q.maximal_elements_on_top());
    }

    #[test]
    fn comparability_index_agrees_with_walks() {
        let p = diamond();
        let idx = ComparabilityIndex::new(&p);
        for a in 0..p.len() {
            for b in 0..p.len() {
                assert_eq!(idx.is_below(a, b), p.is_below(a, b), "{a} {b}");
            }
        }
    }
}
