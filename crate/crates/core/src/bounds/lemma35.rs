//! The bottom-half estimate on `[3]^n` and the degree facts it rests on.

use rand::Rng;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

use crate::bounds::fp::FpEvaluator;
use crate::bounds::real::{format_sig, rounded, Enclosure, DEFAULT_PRECISION};
use crate::counting::{count_antichains_dp, WeightAssignment};
use crate::error::{Error, Result};
use crate::poset::{build_grid, Degree, LeveledPoset, Point, SubposetMode, SubposetSpec};

/// One failed per-node check of the inner induction.
#[derive(Clone, Debug, Serialize)]
pub struct InnerFailure {
    pub node: String,
    pub level: usize,
    pub f_upper: String,
    pub bound: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma35Report {
    pub n: u32,
    /// `Y`, as points of the middle level.
    pub y: Vec<String>,
    /// `|M(Y)|`.
    pub remainder: usize,
    pub alpha: String,
    /// `log₂` of the bound `2^{|M(Y)|(1 + 2 log 3 / n)}`, i.e. its exponent.
    pub bound_exponent: String,
    /// `α ≤ 2^{|M(Y)|(1+2 log 3/n)}`, decided in integers as `α^n ≤ 2^{n|M|} 3^{2|M|}`.
    pub outer_ok: bool,
    /// `f_{R_{<v}}(1,…,1) ≤ 2^{d(v)(1 + 1/d_N(v))}` for every node above level 0.
    pub inner_ok: bool,
    pub inner_checked: usize,
    pub inner_failures: Vec<InnerFailure>,
    /// `d_N(v) ≥ n/2` for every top node.
    pub degree_fact_ok: bool,
}

impl Lemma35Report {
    pub fn ok(&self) -> bool {
        self.outer_ok && self.inner_ok && self.degree_fact_ok
    }
}

/// The bottom half `P_0 ∪ … ∪ P_n` of `[3]^n`.
pub fn bottom_half(n: u32) -> Result<LeveledPoset> {
    Ok(build_grid(3, n)?.truncated(n as usize + 1))
}

/// Checks the bound for `R = P̄_Y` in the bottom half `P` of `[3]^n`.
///
/// `f` on `R` uses the degrees of its own sub-posets; the right side of
/// the inner check uses degrees in `P`, as does the degree fact.
pub fn lemma35_check(n: u32, y: &[Point]) -> Result<Lemma35Report> {
    let p = bottom_half(n)?;
    lemma35_check_in(&p, n, y)
}

fn lemma35_check_in(p: &LeveledPoset, n: u32, y: &[Point]) -> Result<Lemma35Report> {
    let mid = n as usize;
    let mut set = Vec::with_capacity(y.len());
    for pt in y {
        let v = p
            .index_of_point(pt)
            .filter(|&v| p.level_of(v) == mid)
            .ok_or_else(|| Error::contract(format!("{pt} is not in the middle level of [3]^{n}")))?;
        set.push(v);
    }
    let r = p.subposet(&SubposetSpec::new(SubposetMode::Completed, mid, set))?;
    let remainder = r.level(mid).len();
    let alpha = count_antichains_dp(&r)?;

    // α^n ≤ 2^{n|M|} 3^{2|M|}
    let m = remainder as u32;
    let rhs = (Integer::from(1) << (n * m)) * Integer::from(Integer::u_pow_u(3, 2 * m));
    let outer_ok = alpha.clone().pow(n) <= rhs;
    let prec = DEFAULT_PRECISION;
    let exponent = Enclosure::from_u64(3, prec)
        .log2()
        .scale_u(2)
        .div(&Enclosure::from_u64(n as u64, prec))
        .add(&Enclosure::from_u64(1, prec))
        .scale_u(m);

    let unit = WeightAssignment::unit(r.level_count());
    let mut eval = FpEvaluator::new(&r, &unit, prec, Round::Up)?;
    let mut inner_failures = Vec::new();
    let mut inner_checked = 0;
    for v in 0..r.len() {
        if r.level_of(v) == 0 {
            continue;
        }
        inner_checked += 1;
        let f_up = eval.below(v);
        let pv = p.index_of(r.label(v)).expect("R is induced from P");
        let d = p.down(pv).len() as u32;
        // 2^{d (1 + 1/dN)} rounded down; dN = ∞ gives 2^d
        let bound = match p.min_neighbor_updegree(pv) {
            Degree::Infinite => rounded(prec, Float::u_pow_u(2, d), Round::Down),
            Degree::Finite(dn) => {
                let e = Enclosure::from_u64(d as u64, prec)
                    .add(&Enclosure::from_u64(d as u64, prec).div(&Enclosure::from_u64(dn as u64, prec)));
                let two = Float::with_val(prec, 2);
                rounded(prec, (&two).pow(e.lo()), Round::Down)
            }
        };
        if f_up > bound {
            inner_failures.push(InnerFailure {
                node: r.point(v).map_or_else(|| r.label(v).to_string(), |pt| pt.to_string()),
                level: r.level_of(v),
                f_upper: format_sig(&f_up, 6),
                bound: format_sig(&bound, 6),
            });
        }
    }
    let half = n as usize; // d_N ≥ n/2  ⟺  2 d_N ≥ n
    let degree_fact_ok = r.level(mid).iter().all(|&v| {
        let pv = p.index_of(r.label(v)).expect("R is induced from P");
        match p.min_neighbor_updegree(pv) {
            Degree::Infinite => true,
            Degree::Finite(dn) => 2 * dn >= half,
        }
    });
    Ok(Lemma35Report {
        n,
        y: y.iter().map(ToString::to_string).collect(),
        remainder,
        alpha: alpha.to_string(),
        bound_exponent: format_sig(exponent.lo(), 6),
        outer_ok,
        inner_ok: inner_failures.is_empty(),
        inner_checked,
        inner_failures,
        degree_fact_ok,
    })
}

/// Summary of a batch of checks; keeps the first failing report.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma35Batch {
    pub n: u32,
    pub cases: usize,
    pub violations: usize,
    pub first_counterexample: Option<Lemma35Report>,
}

/// Every subset `Y` of the middle level; refuses middle levels wider than 20.
pub fn lemma35_exhaustive(n: u32) -> Result<Lemma35Batch> {
    let p = bottom_half(n)?;
    let mid: Vec<Point> = p.level(n as usize).iter().map(|&v| p.point(v).expect("grid node")).collect();
    if mid.len() > 20 {
        return Err(Error::size("middle level width for exhaustive Y", mid.len() as u128, 20u128));
    }
    let subsets = (0u32..1 << mid.len()).map(|mask| {
        mid.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, pt)| pt.clone())
            .collect::<Vec<_>>()
    });
    run_batch(&p, n, subsets)
}

/// `trials` subsets `Y`, each point kept with probability 1/2.
pub fn lemma35_sampled<R: Rng>(n: u32, trials: usize, rng: &mut R) -> Result<Lemma35Batch> {
    let p = bottom_half(n)?;
    let mid: Vec<Point> = p.level(n as usize).iter().map(|&v| p.point(v).expect("grid node")).collect();
    let subsets: Vec<Vec<Point>> = (0..trials)
        .map(|_| mid.iter().filter(|_| rng.random_bool(0.5)).cloned().collect())
        .collect();
    run_batch(&p, n, subsets.into_iter())
}

fn run_batch(p: &LeveledPoset, n: u32, subsets: impl Iterator<Item = Vec<Point>>) -> Result<Lemma35Batch> {
    let mut batch = Lemma35Batch {
        n,
        cases: 0,
        violations: 0,
        first_counterexample: None,
    };
    for y in subsets {
        let report = lemma35_check_in(p, n, &y)?;
        batch.cases += 1;
        if !report.ok() {
            batch.violations += 1;
            batch.first_counterexample.get_or_insert(report);
        }
    }
    Ok(batch)
}

/// A node of `[3]^n` where `d_N(x) - d(x) ≥ n - i` fails.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeGapFailure {
    pub node: String,
    pub level: usize,
    pub min_neighbor_updegree: String,
    pub down_degree: usize,
}

/// Checks `d_{N^{i-1}(x)} - d^{i-1}(x) ≥ n - i` at every node `x` of level
/// `i ≥ 1` in `[3]^n`. Returns the number of nodes checked and the failures.
pub fn degree_gap_check(n: u32) -> Result<(usize, Vec<DegreeGapFailure>)> {
    let g = build_grid(3, n)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for v in 0..g.len() {
        let i = g.level_of(v);
        if i == 0 {
            continue;
        }
        checked += 1;
        let d = g.degree_to_level(v, i - 1);
        let ok = match g.min_neighbor_updegree(v) {
            Degree::Infinite => true,
            Degree::Finite(dn) => dn as i64 - d as i64 >= n as i64 - i as i64,
        };
        if !ok {
            failures.push(DegreeGapFailure {
                node: g.point(v).expect("grid node").to_string(),
                level: i,
                min_neighbor_updegree: g.min_neighbor_updegree(v).to_string(),
                down_degree: d,
            });
        }
    }
    Ok((checked, failures))
}
