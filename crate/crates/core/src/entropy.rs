//! Base-2 entropies and the entropy inequalities used by the bounds, as
//! numeric margins.
//!
//! Every function is generic over [`Real`]: `f64` for bulk randomized runs,
//! [`Enclosure`] for certified values. Probabilities are stored as exact
//! rationals either way, so `0 log 0 = 0` is decided exactly.

use std::collections::BTreeMap;

use rug::{Float, Rational};

use crate::bounds::{Enclosure, DEFAULT_PRECISION};
use crate::error::{Error, Result};

/// Arithmetic needed by the entropy functions.
pub trait Real: Clone {
    fn from_rational(q: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn log2(&self) -> Self;
    fn abs(&self) -> Self;

    fn zero() -> Self {
        Self::from_rational(&Rational::new())
    }
}

impl Real for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn log2(&self) -> Self {
        f64::log2(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

impl Real for Enclosure {
    fn from_rational(q: &Rational) -> Self {
        Enclosure::from_rational(q, DEFAULT_PRECISION)
    }
    fn add(&self, o: &Self) -> Self {
        Enclosure::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Enclosure::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Enclosure::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        Enclosure::div(self, o)
    }
    fn log2(&self) -> Self {
        Enclosure::log2(self)
    }
    fn abs(&self) -> Self {
        if *self.lo() >= 0 {
            self.clone()
        } else if *self.hi() <= 0 {
            self.neg()
        } else {
            let hi = self.hi().clone().max(&Float::with_val(self.prec(), -self.lo()));
            Enclosure::new(Float::with_val(self.prec(), 0), hi)
        }
    }
}

/// `-p log p`, zero at `p = 0`.
fn plogp<R: Real>(p: &Rational) -> R {
    if *p == 0 {
        return R::zero();
    }
    let x = R::from_rational(p);
    R::zero().sub(&x.mul(&x.log2()))
}

/// A finite distribution whose outcomes are tuples over `k` components.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution {
    k: usize,
    atoms: Vec<(Vec<u32>, Rational)>,
}

impl FiniteDistribution {
    /// Exact probabilities; they must sum to exactly 1. Repeated labels merge.
    pub fn exact(atoms: Vec<(Vec<u32>, Rational)>) -> Result<Self> {
        Self::build(atoms, true)
    }

    /// Double probabilities, converted exactly; they must sum to 1 within `1e-12`.
    pub fn from_f64(atoms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        let mut conv = Vec::with_capacity(atoms.len());
        for (label, p) in atoms {
            let q = Rational::from_f64(p)
                .ok_or_else(|| Error::contract(format!("probability {p} is not finite")))?;
            conv.push((label, q));
        }
        Self::build(conv, false)
    }

    /// A one-component distribution on `0..probs.len()`.
    pub fn scalar(probs: Vec<Rational>) -> Result<Self> {
        Self::exact(probs.into_iter().enumerate().map(|(i, p)| (vec![i as u32], p)).collect())
    }

    pub fn uniform(labels: Vec<Vec<u32>>) -> Result<Self> {
        let m = labels.len() as u32;
        Self::exact(labels.into_iter().map(|l| (l, Rational::from((1u32, m)))).collect())
    }

    fn build(atoms: Vec<(Vec<u32>, Rational)>, exact: bool) -> Result<Self> {
        let Some(k) = atoms.first().map(|a| a.0.len()) else {
            return Err(Error::contract("a distribution needs at least one atom"));
        };
        let mut merged: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (label, p) in atoms {
            if label.len() != k {
                return Err(Error::contract(format!("label {label:?} has {} components, expected {k}", label.len())));
            }
            if p < 0 {
                return Err(Error::contract(format!("negative probability {p} at {label:?}")));
            }
            *merged.entry(label).or_default() += p;
        }
        let total: Rational = merged.values().sum();
        let ok = if exact {
            total == 1
        } else {
            (total.to_f64() - 1.0).abs() <= 1e-12
        };
        if !ok {
            return Err(Error::contract(format!("probabilities sum to {}, not 1", total.to_f64())));
        }
        Ok(FiniteDistribution {
            k,
            atoms: merged.into_iter().collect(),
        })
    }

    pub fn components(&self) -> usize {
        self.k
    }

    pub fn atoms(&self) -> &[(Vec<u32>, Rational)] {
        &self.atoms
    }

    pub fn probability(&self, label: &[u32]) -> Rational {
        self.atoms
            .iter()
            .find(|(l, _)| l.as_slice() == label)
            .map_or_else(Rational::new, |(_, p)| p.clone())
    }

    /// Number of atoms with positive probability.
    pub fn support_size(&self) -> usize {
        self.atoms.iter().filter(|(_, p)| *p > 0).count()
    }

    /// The joint law of the components in `comps`, in that order.
    pub fn marginal(&self, comps: &[usize]) -> Result<FiniteDistribution> {
        if let Some(&c) = comps.iter().find(|&&c| c >= self.k) {
            return Err(Error::contract(format!("component {c} out of range 0..{}", self.k)));
        }
        let mut merged: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (label, p) in &self.atoms {
            let key: Vec<u32> = comps.iter().map(|&c| label[c]).collect();
            *merged.entry(key).or_default() += p;
        }
        Ok(FiniteDistribution {
            k: comps.len(),
            atoms: merged.into_iter().collect(),
        })
    }
}

/// `H(p) = -p log p - (1-p) log(1-p)`.
pub fn binary_entropy<R: Real>(p: &Rational) -> Result<R> {
    if *p < 0 || *p > 1 {
        return Err(Error::contract(format!("binary entropy needs p in [0,1], got {p}")));
    }
    Ok(plogp::<R>(p).add(&plogp(&(Rational::from(1) - p))))
}

pub fn entropy<R: Real>(d: &FiniteDistribution) -> R {
    d.atoms.iter().fold(R::zero(), |acc, (_, p)| acc.add(&plogp(p)))
}

/// `H(X | X_given) = Σ_y p(y) H(X | X_given = y)`.
pub fn conditional_entropy<R: Real>(d: &FiniteDistribution, given: &[usize]) -> Result<R> {
    let marginal = d.marginal(given)?;
    let mut groups: BTreeMap<Vec<u32>, Vec<&Rational>> = BTreeMap::new();
    for (label, p) in &d.atoms {
        let key: Vec<u32> = given.iter().map(|&c| label[c]).collect();
        groups.entry(key).or_default().push(p);
    }
    let mut acc = R::zero();
    for (y, py) in &marginal.atoms {
        if *py == 0 {
            continue;
        }
        let inner = groups[y]
            .iter()
            .fold(R::zero(), |a, p| a.add(&plogp(&Rational::from(*p / py))));
        acc = acc.add(&R::from_rational(py).mul(&inner));
    }
    Ok(acc)
}

/// `h₁(q)`: the binary entropy on `[0, 1/2]`, and 1 above.
pub fn h1<R: Real>(q: &Rational) -> Result<R> {
    if *q < 0 || *q > 1 {
        return Err(Error::contract(format!("h1 needs q in [0,1], got {q}")));
    }
    if *q >= Rational::from((1, 2)) {
        return Ok(R::from_rational(&Rational::from(1)));
    }
    binary_entropy(q)
}

/// `Σ_A α_A H(X_A) - H(X)` for a fractional cover `α` of the components.
pub fn shearer_check<R: Real>(d: &FiniteDistribution, cover: &[(Vec<usize>, Rational)]) -> Result<R> {
    let mut load = vec![Rational::new(); d.k];
    for (set, w) in cover {
        if *w < 0 {
            return Err(Error::contract(format!("cover weight {w} on {set:?} is negative")));
        }
        for &i in set {
            if i >= d.k {
                return Err(Error::contract(format!("cover set {set:?} names component {i} of {}", d.k)));
            }
            load[i] += w;
        }
    }
    if let Some(i) = load.iter().position(|l| *l < 1) {
        return Err(Error::contract(format!("component {i} is covered with total weight {} < 1", load[i])));
    }
    let mut total = R::zero();
    for (set, w) in cover {
        total = total.add(&R::from_rational(w).mul(&entropy(&d.marginal(set)?)));
    }
    Ok(total.sub(&entropy(d)))
}

/// `|H(X | X≠0) - (H(X) - H(P(X=0))) / (1 - P(X=0))|` for a one-component
/// distribution.
pub fn fact22_residual<R: Real>(d: &FiniteDistribution) -> Result<R> {
    if d.k != 1 {
        return Err(Error::contract("fact22_residual takes a one-component distribution"));
    }
    let p0 = d.probability(&[0]);
    if p0 == 1 {
        return Err(Error::contract("P(X=0) = 1 leaves nothing to condition on"));
    }
    let rest = Rational::from(1) - &p0;
    let left = d
        .atoms
        .iter()
        .filter(|(l, _)| l[0] != 0)
        .fold(R::zero(), |acc, (_, p)| acc.add(&plogp(&Rational::from(p / &rest))));
    let right = entropy::<R>(d)
        .sub(&binary_entropy(&p0)?)
        .div(&R::from_rational(&rest));
    Ok(left.sub(&right).abs())
}

/// `log Σ_S Π_{x∈S} λ_x - Σ_S p_S (log(1/p_S) + Σ_{x∈S} log λ_x)`.
///
/// `family` lists each set with its probability. A set of positive
/// probability with a zero weight makes the margin `+∞`.
pub fn gibbs_check<R: Real>(family: &[(Vec<usize>, Rational)], lambda: &[Rational]) -> Result<R> {
    if lambda.iter().any(|l| *l < 0) {
        return Err(Error::contract("gibbs_check needs nonnegative weights"));
    }
    let total_p: Rational = family.iter().map(|(_, p)| p).sum();
    if total_p != 1 || family.iter().any(|(_, p)| *p < 0) {
        return Err(Error::contract("gibbs_check needs a probability distribution on the family"));
    }
    let mut weights = Vec::with_capacity(family.len());
    for (set, _) in family {
        let mut w = Rational::from(1);
        for &x in set {
            let l = lambda
                .get(x)
                .ok_or_else(|| Error::contract(format!("set element {x} has no weight")))?;
            w *= l;
        }
        weights.push(w);
    }
    let big_w: Rational = weights.iter().sum();
    if big_w == 0 {
        return Err(Error::contract("every set has weight 0"));
    }
    let mut left = R::zero();
    for ((_, p), w) in family.iter().zip(&weights) {
        if *p == 0 {
            continue;
        }
        // p (log(1/p) + log w) = p log(w/p)
        let term = R::from_rational(p).mul(&R::from_rational(&Rational::from(w / p)).log2());
        left = left.add(&term);
    }
    Ok(R::from_rational(&big_w).log2().sub(&left))
}

/// `h₁(q) + log k + q log n - H(K)` for `K` on `{0, …, n}`.
///
/// The hypothesis `P(K ≥ k) ≤ q` is checked exactly first.
pub fn pippenger_check<R: Real>(d: &FiniteDistribution, n: u32, k: u32, q: &Rational) -> Result<R> {
    if d.k != 1 {
        return Err(Error::contract("pippenger_check takes a one-component distribution"));
    }
    if k < 1 || n < 1 {
        return Err(Error::contract(format!("need k >= 1 and n >= 1, got k={k}, n={n}")));
    }
    if let Some((l, _)) = d.atoms.iter().find(|(l, p)| l[0] > n && *p > 0) {
        return Err(Error::contract(format!("outcome {} lies outside 0..={n}", l[0])));
    }
    let tail: Rational = d.atoms.iter().filter(|(l, _)| l[0] >= k).map(|(_, p)| p).sum();
    if tail > *q {
        return Err(Error::contract(format!("hypothesis P(K >= {k}) = {tail} <= q = {q} fails")));
    }
    let int = |v: u32| R::from_rational(&Rational::from(v));
    let rhs = h1::<R>(q)?
        .add(&int(k).log2())
        .add(&R::from_rational(q).mul(&int(n).log2()));
    Ok(rhs.sub(&entropy(d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-12
    }

    #[test]
    fn basic_values() {
        assert!(close(binary_entropy::<f64>(&q(1, 2)).unwrap(), 1.0));
        assert!(close(binary_entropy::<f64>(&q(0, 1)).unwrap(), 0.0));
        let u4 = FiniteDistribution::uniform((0..4).map(|i| vec![i]).collect()).unwrap();
        assert!(close(entropy::<f64>(&u4), 2.0));
        let d = FiniteDistribution::scalar(vec![q(1, 2), q(1, 4), q(1, 4)]).unwrap();
        assert!(close(entropy::<f64>(&d), 1.5));
        let exact: Enclosure = entropy(&d);
        assert!(exact.contains(&Float::with_val(128, 1.5)));
    }

    #[test]
    fn h1_pieces() {
        assert!(close(h1::<f64>(&q(3, 4)).unwrap(), 1.0));
        assert!(close(h1::<f64>(&q(0, 1)).unwrap(), 0.0));
        assert!((h1::<f64>(&q(1, 4)).unwrap() - 0.811278).abs() < 1e-6);
        assert!(h1::<f64>(&q(5, 4)).is_err());
    }

    #[test]
    fn conditional_entropy_of_a_copy_is_zero() {
        let d = FiniteDistribution::exact(vec![(vec![0, 0], q(1, 3)), (vec![1, 1], q(2, 3))]).unwrap();
        assert!(close(conditional_entropy::<f64>(&d, &[0]).unwrap(), 0.0));
        let indep = FiniteDistribution::uniform(vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        assert!(close(conditional_entropy::<f64>(&indep, &[1]).unwrap(), 1.0));
    }

    #[test]
    fn shearer_examples() {
        let cube = FiniteDistribution::uniform(
            (0..8u32).map(|x| vec![x & 1, x >> 1 & 1, x >> 2 & 1]).collect(),
        )
        .unwrap();
        let pairs = vec![(vec![0, 1], q(1, 2)), (vec![0, 2], q(1, 2)), (vec![1, 2], q(1, 2))];
        assert!(shearer_check::<f64>(&cube, &pairs).unwrap().abs() < 1e-12);
        let single = FiniteDistribution::scalar(vec![q(1, 3), q(2, 3)]).unwrap();
        assert!(shearer_check::<f64>(&single, &[(vec![0], q(1, 1))]).unwrap().abs() < 1e-12);
        let copy = FiniteDistribution::exact(vec![(vec![0, 0], q(1, 4)), (vec![1, 1], q(3, 4))]).unwrap();
        let m = shearer_check::<f64>(&copy, &[(vec![0], q(1, 1)), (vec![1], q(1, 1))]).unwrap();
        assert!(close(m, binary_entropy::<f64>(&q(1, 4)).unwrap()));
        assert!(shearer_check::<f64>(&cube, &[(vec![0, 1], q(1, 1))]).is_err());
    }

    #[test]
    fn fact22_examples() {
        let d = FiniteDistribution::scalar(vec![q(1, 2), q(1, 4), q(1, 4)]).unwrap();
        assert!(fact22_residual::<f64>(&d).unwrap() < 1e-12);
        let no_zero = FiniteDistribution::scalar(vec![q(0, 1), q(1, 2), q(1, 2)]).unwrap();
        assert!(fact22_residual::<f64>(&no_zero).unwrap() < 1e-12);
        let two = FiniteDistribution::scalar(vec![q(2, 7), q(5, 7)]).unwrap();
        assert!(fact22_residual::<f64>(&two).unwrap() < 1e-12);
        let exact: Enclosure = fact22_residual(&d).unwrap();
        assert!(*exact.hi() < 1e-30);
        let all_zero = FiniteDistribution::scalar(vec![q(1, 1)]).unwrap();
        assert!(fact22_residual::<f64>(&all_zero).is_err());
    }

    #[test]
    fn gibbs_examples() {
        let lam = vec![q(2, 1), q(3, 1)];
        let family = [vec![], vec![0], vec![1], vec![0, 1]];
        // p proportional to the weights 1, 2, 3, 6
        let tight: Vec<_> = family.iter().cloned().zip([q(1, 12), q(2, 12), q(3, 12), q(6, 12)]).collect();
        assert!(gibbs_check::<f64>(&tight, &lam).unwrap().abs() < 1e-12);
        let ones = vec![q(1, 1); 2];
        let uniform: Vec<_> = family.iter().cloned().map(|s| (s, q(1, 4))).collect();
        assert!(gibbs_check::<f64>(&uniform, &ones).unwrap().abs() < 1e-12);
        let point: Vec<_> = family.iter().cloned().zip([q(1, 1), q(0, 1), q(0, 1), q(0, 1)]).collect();
        assert!(close(gibbs_check::<f64>(&point, &ones).unwrap(), 2.0));
    }

    #[test]
    fn pippenger_examples() {
        let k = 5;
        let d = FiniteDistribution::scalar(vec![q(1, k as i64); k as usize]).unwrap();
        assert!(pippenger_check::<f64>(&d, 8, k, &q(0, 1)).unwrap().abs() < 1e-12);
        let point = FiniteDistribution::scalar(vec![q(1, 1)]).unwrap();
        let m = pippenger_check::<f64>(&point, 8, 1, &q(1, 5)).unwrap();
        assert!(close(m, h1::<f64>(&q(1, 5)).unwrap() + 0.2 * 3.0));
        let spread = FiniteDistribution::scalar(vec![q(1, 2), q(1, 2)]).unwrap();
        assert!(matches!(pippenger_check::<f64>(&spread, 4, 1, &q(1, 4)), Err(Error::Contract(_))));
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(FiniteDistribution::scalar(vec![q(1, 2), q(1, 3)]).is_err());
        assert!(FiniteDistribution::from_f64(vec![(vec![0], 0.5), (vec![1], 0.5 + 1e-13)]).is_ok());
        assert!(FiniteDistribution::from_f64(vec![(vec![0], 0.5), (vec![1], 0.6)]).is_err());
        assert!(FiniteDistribution::exact(vec![(vec![0], q(1, 1)), (vec![0, 1], q(0, 1))]).is_err());
    }
}
