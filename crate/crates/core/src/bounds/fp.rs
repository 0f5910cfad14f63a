//! The recursive functional `f_P` bounding weighted antichain sums.

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use crate::bounds::real::{rounded, Enclosure, UpperReal, DEFAULT_PRECISION};
use crate::counting::WeightAssignment;
use crate::error::{Error, Result};
use crate::poset::{Degree, LeveledPoset};

/// Evaluates `f` on a poset and on every down-set `P_{<v}`, rounding every
/// step in one fixed direction.
///
/// Node `u` contributes the factor `((1+λ)^d + f_{P_{<u}} - 1)^{1/d}` with
/// `d = d_{N(u)}` the least up-degree of a lower cover of `u`, or `1+λ`
/// when `u` has no lower cover. Degrees are always those of the poset the
/// evaluator was built on, at every depth of the recursion, so `f_{P_{<u}}`
/// depends on `u` alone and the memo is keyed by node.
pub struct FpEvaluator<'a> {
    poset: &'a LeveledPoset,
    one_plus: Vec<Float>,
    prec: u32,
    round: Round,
    below: Vec<Option<Float>>,
}

impl<'a> FpEvaluator<'a> {
    /// `round` must be `Round::Up` or `Round::Down`. Weights are taken per
    /// level; per-node overrides are refused.
    pub fn new(poset: &'a LeveledPoset, w: &WeightAssignment, prec: u32, round: Round) -> Result<Self> {
        w.check_covers(poset)?;
        if !w.overrides().is_empty() {
            return Err(Error::contract("f_P takes one weight per level; per-node overrides are not allowed"));
        }
        if !matches!(round, Round::Up | Round::Down) {
            return Err(Error::contract("f_P needs a directed rounding mode"));
        }
        let one_plus = w
            .level_weights()
            .iter()
            .map(|l| rounded(prec, &(l.clone() + 1u32), round))
            .collect();
        Ok(FpEvaluator {
            poset,
            one_plus,
            prec,
            round,
            below: vec![None; poset.len()],
        })
    }

    /// `f_P`, taken over the highest nonempty level; 1 for the empty poset.
    pub fn value(&mut self) -> Float {
        let p = self.poset;
        let Some(top) = p.top_level() else {
            return Float::with_val(self.prec, 1);
        };
        let mut acc = Float::with_val(self.prec, 1);
        for &v in p.level(top) {
            let d = p.min_neighbor_updegree(v);
            let factor = self.factor(v, d);
            acc = rounded(self.prec, &acc * &factor, self.round);
        }
        acc
    }

    /// `f_{P_{<v}}`, with degrees taken in `P`.
    pub fn below(&mut self, v: usize) -> Float {
        if let Some(f) = &self.below[v] {
            return f.clone();
        }
        let p = self.poset;
        let mut acc = Float::with_val(self.prec, 1);
        for &u in p.down(v) {
            let factor = self.factor(u, p.min_neighbor_updegree(u));
            acc = rounded(self.prec, &acc * &factor, self.round);
        }
        self.below[v] = Some(acc.clone());
        acc
    }

    /// `((1+λ)^d + f_{P_{<u}} - 1)^{1/d}`; every step is nondecreasing in
    /// its inputs, so rounding each one the same way bounds the result.
    fn factor(&mut self, u: usize, d: Degree) -> Float {
        let one_plus = self.one_plus[self.poset.level_of(u)].clone();
        let Degree::Finite(d) = d else {
            return one_plus;
        };
        let inner = self.below(u);
        let (prec, r) = (self.prec, self.round);
        let power = rounded(prec, (&one_plus).pow(d as u32), r);
        let sum = rounded(prec, &power + &inner, r);
        let bracket = rounded(prec, sum - 1u32, r);
        rounded(prec, bracket.root_ref(d as u32), r)
    }
}

/// `f_P` rounded upward at the default precision.
pub fn f_p_upper(p: &LeveledPoset, w: &WeightAssignment) -> Result<UpperReal> {
    Ok(UpperReal::new(FpEvaluator::new(p, w, DEFAULT_PRECISION, Round::Up)?.value()))
}

/// `f_P` enclosed between a downward- and an upward-rounded evaluation.
pub fn f_p(p: &LeveledPoset, w: &WeightAssignment, prec: u32) -> Result<Enclosure> {
    let lo = FpEvaluator::new(p, w, prec, Round::Down)?.value();
    let hi = FpEvaluator::new(p, w, prec, Round::Up)?.value();
    Ok(Enclosure::new(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::build_grid;
    use rug::Rational;

    /// Sound and within relative width `2^-120` of the exact value.
    fn tight(e: &Enclosure, exact: &Rational) -> bool {
        let tol = Float::with_val(256, Float::with_val(256, exact) >> 120u32);
        *e.lo() <= *exact && *e.hi() >= *exact && e.width() <= tol
    }

    #[test]
    fn one_level_is_a_power() {
        let p = LeveledPoset::from_parts(vec![vec![0, 1, 2, 3]], &[]).unwrap();
        let w = WeightAssignment::uniform(1, Rational::from((5, 2))).unwrap();
        let f = f_p(&p, &w, 128).unwrap();
        assert!(tight(&f, &Rational::from((7, 2)).pow(4u32)));
    }

    #[test]
    fn chain_and_square_are_tight() {
        let chain = build_grid(2, 1).unwrap();
        let w = WeightAssignment::per_level(vec![Rational::from(3), Rational::from((9, 4))]).unwrap();
        assert!(tight(&f_p(&chain, &w, 128).unwrap(), &Rational::from((25, 4))));
        let square = build_grid(2, 2).unwrap();
        let f = f_p(&square, &WeightAssignment::unit(3), 128).unwrap();
        assert!(tight(&f, &Rational::from(6)));
    }

    #[test]
    fn empty_poset_is_one() {
        let p = build_grid(2, 2).unwrap();
        let empty = p.induced(&crate::BitSet::new(p.len()), 3);
        let f = f_p_upper(&empty, &WeightAssignment::unit(3)).unwrap();
        assert_eq!(*f.value(), 1);
    }

    #[test]
    fn stranded_top_node_contributes_one_plus_lambda() {
        // level 1 holds 1 above 0, and 2 with no lower cover
        let p = LeveledPoset::from_parts(vec![vec![0], vec![1, 2]], &[(0, 1)]).unwrap();
        let w = WeightAssignment::per_level(vec![Rational::from(1), Rational::from(3)]).unwrap();
        // (4 + 2 - 1) * 4
        assert!(tight(&f_p(&p, &w, 128).unwrap(), &Rational::from(20)));
    }

    #[test]
    fn refuses_overrides() {
        let p = build_grid(2, 1).unwrap();
        let w = WeightAssignment::unit(2).with_override(0, Rational::from(2)).unwrap();
        assert!(f_p_upper(&p, &w).is_err());
    }
}
