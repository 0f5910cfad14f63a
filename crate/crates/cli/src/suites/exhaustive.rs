//! Deterministic suites: exhaustive ranges, goldens and tight cases.

use antichain_core::bounds::{
    closed_form_bounds, degree_gap_check, f_p, lemma35_exhaustive, minimal_c_closed_form,
    minimal_empirical_c, section4_diagnostics, two_level_bound, Enclosure, Section4Params, Verdict,
    MIDDLE_LAYER_LOWER, THREE_GRID,
};
use antichain_core::chains::{chain_class, decompose, verify_decomposition};
use antichain_core::counting::{
    count_antichains_dp, count_antichains_oracle, weighted_antichain_sum, BipartiteGraph, WeightAssignment,
};
use antichain_core::entropy::{
    entropy, fact22_residual, gibbs_check, h1, pippenger_check, shearer_check, FiniteDistribution,
};
use antichain_core::poset::{build_grid, count_low_points, grid_size, Point, DEFAULT_NODE_BUDGET};
use rug::{Float, Rational};
use serde_json::json;

use super::{instance, randomized, SuiteContext, SuiteOutcome};
use crate::error::CliResult;

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

/// `|x - exact| ≤ 2^{-(prec-8)} |exact|` at both ends of `x`.
fn relatively_tight(x: &Enclosure, exact: &Rational, prec: u32) -> bool {
    let e = Float::with_val(prec, exact);
    let tol = Float::with_val(prec, &e).abs() >> (prec - 8);
    [x.lo(), x.hi()]
        .iter()
        .all(|end| Float::with_val(prec, *end - &e).abs() <= tol)
}

pub fn recursive_bound_tightness(prec: u32) -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::new("tightness");
    let cases = [
        ("chain of 5", build_grid(5, 1)?, WeightAssignment::per_level(vec![q(1, 1), q(3, 2), q(2, 1), q(7, 3), q(4, 1)])?),
        ("2-chain", build_grid(2, 1)?, WeightAssignment::per_level(vec![q(5, 4), q(3, 1)])?),
        ("[2]^2", build_grid(2, 2)?, WeightAssignment::unit(3)),
    ];
    for (name, p, w) in cases {
        let z = weighted_antichain_sum(&p, &w)?;
        let f = f_p(&p, &w, prec)?;
        out.record(relatively_tight(&f, &z, prec), || {
            json!({ "case": name, "exact": z.to_string(), "f": f.to_string() })
        });
    }
    out.notes.push("f equals the weighted sum on chains and on [2]^2".into());
    Ok(out)
}

pub fn two_level_tightness(prec: u32) -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::new("tightness");
    let one = || q(1, 1);
    let cases = [
        ("single edge", BipartiteGraph::new(1, &[(0, 0)], one(), vec![one()])?, q(3, 1)),
        (
            "K_{2,2}",
            BipartiteGraph::new(2, &[(0, 0), (0, 1), (1, 0), (1, 1)], one(), vec![one(), one()])?,
            q(7, 1),
        ),
        (
            "star with center in A",
            BipartiteGraph::new(1, &[(0, 0), (0, 1), (0, 2)], q(2, 1), vec![q(2, 1), q(3, 1), q(4, 1)])?,
            q(62, 1),
        ),
    ];
    for (name, g, exact) in cases {
        let b = two_level_bound(&g, prec)?;
        let z = antichain_core::counting::independence_poly(&g)?;
        out.record(z == exact && relatively_tight(&b, &exact, prec), || {
            json!({ "case": name, "exact": exact.to_string(), "Z": z.to_string(), "bound": b.to_string() })
        });
    }
    out.notes.push("the two-level bound is exact on an edge, K_{2,2} and a star".into());
    Ok(out)
}

pub fn grid_engines() -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::new("engines");
    for t in 1..=32u32 {
        for n in 1..=5u32 {
            if grid_size(t, n).is_none_or(|s| s > 32) {
                continue;
            }
            let g = build_grid(t, n)?;
            let (dp, oracle) = (count_antichains_dp(&g)?, count_antichains_oracle(&g)?);
            out.record(dp == oracle, || json!({ "t": t, "n": n, "dp": dp.to_string(), "oracle": oracle.to_string() }));
        }
    }
    let goldens: [(u32, u32, u64); 7] = [(2, 1, 3), (2, 2, 6), (2, 3, 20), (2, 4, 168), (2, 5, 7581), (3, 2, 20), (3, 3, 980)];
    for (t, n, expected) in goldens {
        let a = count_antichains_oracle(&build_grid(t, n)?)?;
        out.record(a == expected, || json!({ "t": t, "n": n, "expected": expected, "got": a.to_string() }));
    }
    Ok(out)
}

pub fn lemma35(ctx: &SuiteContext) -> CliResult<SuiteOutcome> {
    let dims = match ctx.n {
        Some(n) => vec![n],
        None => vec![2, 3],
    };
    let mut out = SuiteOutcome::new("lemma35");
    for n in dims {
        if n <= 3 {
            let batch = lemma35_exhaustive(n)?;
            out.notes.push(format!("n = {n}: all {} choices of Y, {} violations", batch.cases, batch.violations));
            out.cases += batch.cases;
            out.violations += batch.violations;
            if out.first_counterexample.is_none() {
                out.first_counterexample = batch.first_counterexample.map(|r| serde_json::to_value(r).expect("report serializes"));
            }
        } else {
            let half = antichain_core::bounds::bottom_half(n)?;
            let middle: Vec<Point> = half.level(n as usize).iter().map(|&v| half.point(v).expect("grid node")).collect();
            let part = randomized(ctx, "lemma35", ctx.trials_or(300), |r| instance::gen_lemma(r, n, &middle))?;
            out.notes.push(format!("n = {n}: {} sampled choices of Y, {} violations", part.cases, part.violations));
            out.absorb(part);
        }
    }
    Ok(out)
}

pub fn three_grid(max_n: u32) -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::new("thm14");
    for n in 1..=max_n {
        let alpha = count_antichains_dp(&build_grid(3, n)?)?;
        let mut report = closed_form_bounds(&Section4Params::new(3, n))?;
        report.attach_alpha(alpha.clone());
        let upper = report.verdict(THREE_GRID);
        let lower = report.verdict(MIDDLE_LAYER_LOWER);
        let bound = report.entry(THREE_GRID).and_then(|e| e.reported()).map(|v| v.to_f64());
        out.notes.push(format!(
            "n = {n}: N = {}, log2 alpha = {:.6}, bound = {:.6}",
            report.middle_layer,
            report.log2_alpha().map_or(f64::NAN, |l| l.lo().to_f64()),
            bound.unwrap_or(f64::NAN)
        ));
        for (side, v) in [("upper", upper), ("lower", lower)] {
            out.record(v == Some(Verdict::Holds), || {
                json!({ "n": n, "side": side, "alpha": alpha.to_string(), "verdict": format!("{v:?}") })
            });
        }
    }
    Ok(out)
}

pub fn degree_gaps(max_n: u32) -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::new("structure");
    for n in 1..=max_n {
        let (checked, failures) = degree_gap_check(n)?;
        out.notes.push(format!("n = {n}: {checked} nodes, {} failures", failures.len()));
        out.cases += checked;
        out.violations += failures.len();
        if out.first_counterexample.is_none() {
            out.first_counterexample = failures.first().map(|f| json!({ "n": n, "failure": f }));
        }
    }
    Ok(out)
}

pub fn chains() -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::new("chains");
    for t in 2..=5u32 {
        for n in 1..=5u32 {
            let d = decompose(t, n, DEFAULT_NODE_BUDGET)?;
            let r = verify_decomposition(&d, &build_grid(t, n)?);
            out.record(r.all_passed(), || json!({ "t": t, "n": n, "report": r }));
        }
    }
    let x = Point::new(4, vec![0, 2, 1, 3, 2, 1])?;
    let expected: Vec<Vec<u32>> = vec![
        vec![0, 2, 1, 3, 0, 1],
        vec![0, 2, 1, 3, 1, 1],
        vec![0, 2, 1, 3, 2, 1],
        vec![0, 2, 1, 3, 2, 2],
        vec![0, 2, 1, 3, 2, 3],
    ];
    let class: Vec<Vec<u32>> = chain_class(&x, DEFAULT_NODE_BUDGET)?.iter().map(|p| p.coords().to_vec()).collect();
    let d = decompose(4, 6, DEFAULT_NODE_BUDGET)?;
    let chain: Vec<Vec<u32>> = d
        .chain_points(d.chain_of(&x).expect("point lies on a chain"))
        .iter()
        .map(|p| p.coords().to_vec())
        .collect();
    out.record(class == expected && chain == expected, || json!({ "class": class, "chain": chain }));
    out.notes.push("class of (0,2,1,3,2,1) in [4]^6 has the expected 5 points".into());
    Ok(out)
}

pub fn section4() -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::new("section4");
    for t in 2..=6u32 {
        for n in 1..=14u32 {
            let d = section4_diagnostics(&Section4Params::new(t, n))?;
            let bound = d.values.expect("t >= 2 has values").low_point_bound;
            let exact = count_low_points(t, n);
            let ok = Float::with_val(bound.prec(), &exact) <= *bound.lo();
            out.record(ok, || json!({ "check": "low points", "t": t, "n": n, "count": exact.to_string() }));
        }
    }
    let grid: Vec<(u32, u32)> = (14..=24).map(|k| (2, 1u32 << k)).collect();
    for &(t, n) in &grid {
        let d = section4_diagnostics(&Section4Params::new(t, n))?;
        out.record(d.applicable && d.ok, || json!({ "check": "assembled <= mainBound", "diagnostics": d.to_json() }));
    }
    let c = minimal_empirical_c(&grid, 0.1, 0.1)?;
    let closed = minimal_c_closed_form(&grid, 0.1, 0.1)?;
    let step = Float::with_val(closed.prec(), 0.001);
    let cf = Float::with_val(closed.prec(), &c);
    let consistent = cf >= *closed.lo() && Float::with_val(closed.prec(), &cf - &step) <= *closed.hi();
    out.record(consistent, || json!({ "check": "minimal C", "bisection": c.to_string(), "closed_form": closed.to_string() }));
    out.notes.push(format!("minimal C on {{(2, 2^k): 14 <= k <= 24}} at epsilon = epsilon' = 0.1: {c}"));
    Ok(out)
}

/// `|margin| ≤ 1e-9`, certified.
fn certainly_tiny(m: &Enclosure) -> bool {
    *m.lo() >= -1e-9 && *m.hi() <= 1e-9
}

pub fn entropy_tight_cases() -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::new("entropy tight cases");
    let cube_labels: Vec<Vec<u32>> = (0..8u32).map(|x| vec![x & 1, x >> 1 & 1, x >> 2 & 1]).collect();
    let cube = FiniteDistribution::uniform(cube_labels)?;
    let pairs: Vec<_> = [vec![0, 1], vec![0, 2], vec![1, 2]].into_iter().map(|s| (s, q(1, 2))).collect();
    let single = FiniteDistribution::scalar(vec![q(1, 3), q(2, 3)])?;
    let lam = vec![q(2, 1), q(3, 1)];
    let family = [vec![], vec![0], vec![1], vec![0, 1]];
    let proportional: Vec<_> = family.iter().cloned().zip([1, 2, 3, 6].map(|w| q(w, 12))).collect();
    let uniform_family: Vec<_> = family.iter().cloned().map(|s| (s, q(1, 4))).collect();
    let uniform5 = FiniteDistribution::scalar(vec![q(1, 5); 5])?;
    let fact = FiniteDistribution::scalar(vec![q(1, 2), q(1, 4), q(1, 4)])?;
    let no_zero = FiniteDistribution::scalar(vec![q(0, 1), q(1, 2), q(1, 2)])?;
    let two_point = FiniteDistribution::scalar(vec![q(2, 7), q(5, 7)])?;
    let cube_parts = (0..3).try_fold(Enclosure::from_u64(0, 128), |acc, i| {
        Ok::<_, antichain_core::Error>(acc.add(&entropy::<Enclosure>(&cube.marginal(&[i])?)))
    })?;
    let cases: Vec<(&str, Enclosure)> = vec![
        ("shearer: uniform cube, pairs at 1/2", shearer_check(&cube, &pairs)?),
        ("shearer: one component", shearer_check(&single, &[(vec![0], q(1, 1))])?),
        ("gibbs: p proportional to weights", gibbs_check(&proportional, &lam)?),
        ("gibbs: unit weights, uniform p", gibbs_check(&uniform_family, &[q(1, 1), q(1, 1)])?),
        ("pippenger: uniform below k, q = 0", pippenger_check(&uniform5, 8, 5, &q(0, 1))?),
        ("fact22: {1/2, 1/4, 1/4}", fact22_residual(&fact)?),
        ("fact22: no mass at 0", fact22_residual(&no_zero)?),
        ("fact22: two points", fact22_residual(&two_point)?),
        ("range: uniform on 8", Enclosure::from_u64(3, 128).sub(&entropy(&cube))),
        ("subadditivity: independent cube", cube_parts.sub(&entropy(&cube))),
    ];
    for (name, m) in cases {
        out.record(certainly_tiny(&m), || json!({ "case": name, "margin": m.to_string() }));
    }
    Ok(out)
}

pub fn h1_grid() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("h1 grid");
    let n = 10_000u32;
    let values: Vec<f64> = (0..=n)
        .map(|i| h1::<f64>(&Rational::from((i, n))).expect("grid point lies in [0,1]"))
        .collect();
    for i in 1..n as usize {
        let concave = values[i] + 1e-12 >= (values[i - 1] + values[i + 1]) / 2.0;
        let x = i as f64 / n as f64;
        let below = x > 0.5 || values[i] <= -2.0 * x * x.log2() + 1e-12;
        out.record(concave && below, || json!({ "q": x, "h1": values[i] }));
    }
    out
}
