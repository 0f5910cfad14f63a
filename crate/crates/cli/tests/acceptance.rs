//! Acceptance run: one PASS/FAIL line per criterion.

use std::path::Path;
use std::time::{Duration, Instant};

use antichain_cli::args::SuiteName;
use antichain_cli::suites::{run_suite, SuiteContext, SuiteOutcome};
use antichain_core::bounds::{middle_layer_floor_holds, minimal_empirical_c};
use antichain_core::chains::{chain_class, decompose, verify_decomposition};
use antichain_core::counting::{count_antichains_dp, count_antichains_oracle};
use antichain_core::poset::{build_grid, middle_layer_size, Point, DEFAULT_NODE_BUDGET};
use antichain_core::random::DEFAULT_SEED;
use rug::float::Constant;
use rug::{Float, Integer, Rational};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn context(trials: Option<usize>, n: Option<u32>) -> SuiteContext {
    SuiteContext { seed: DEFAULT_SEED, trials, n, precision: 128 }
}

fn suites_pass(names: &[SuiteName], ctx: &SuiteContext) -> Verdict {
    let mut summary = Vec::new();
    for &name in names {
        let outcomes: Vec<SuiteOutcome> = run_suite(name, ctx).map_err(|e| e.to_string())?;
        for o in outcomes {
            if !o.passed() {
                return Err(format!("{}: {} of {} cases violated, first {:?}", o.suite, o.violations, o.cases, o.first_counterexample));
            }
            summary.push(format!("{} {} cases", o.suite, o.cases));
        }
    }
    Ok(summary.join(", "))
}

fn within(start: Instant, limit: Duration, verdict: Verdict) -> Verdict {
    let elapsed = start.elapsed();
    let detail = verdict?;
    if elapsed > limit {
        return Err(format!("{detail}; took {elapsed:?}, limit {limit:?}"));
    }
    Ok(format!("{detail}; {:.2}s", elapsed.as_secs_f64()))
}

fn engine_equivalence() -> Verdict {
    let start = Instant::now();
    let suites = suites_pass(&[SuiteName::Engines], &context(Some(200), None));
    let goldens: [(u32, u32, u64); 7] = [(2, 1, 3), (2, 2, 6), (2, 3, 20), (2, 4, 168), (2, 5, 7581), (3, 2, 20), (3, 3, 980)];
    for (t, n, expected) in goldens {
        let g = build_grid(t, n).map_err(|e| e.to_string())?;
        let dp = count_antichains_dp(&g).map_err(|e| e.to_string())?;
        let oracle = count_antichains_oracle(&g).map_err(|e| e.to_string())?;
        if dp != expected || oracle != expected {
            return Err(format!("[{t}]^{n}: dp {dp}, oracle {oracle}, golden {expected}"));
        }
    }
    within(start, Duration::from_secs(60), suites)
}

fn three_grid_bounds() -> Verdict {
    let start = Instant::now();
    let mut lines = Vec::new();
    for n in 1..=4u32 {
        let alpha = count_antichains_dp(&build_grid(3, n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let big_n = middle_layer_size(3, n);
        let log_alpha = Float::with_val(256, &alpha).log2();
        let log3 = Float::with_val(256, 3).log2();
        let upper = (Float::with_val(256, 1) + log3 * 4u32 / n) * &big_n;
        if log_alpha > upper {
            return Err(format!("n={n}: log2 alpha {log_alpha} exceeds {upper}"));
        }
        if Float::with_val(256, &big_n) > log_alpha {
            return Err(format!("n={n}: N = {big_n} exceeds log2 alpha {log_alpha}"));
        }
        lines.push(format!("n={n} alpha={alpha}"));
    }
    let suite = suites_pass(&[SuiteName::Thm14], &context(None, Some(4)))?;
    within(start, Duration::from_secs(300), Ok(format!("{}; {suite}", lines.join(" "))))
}

fn property_suites() -> Verdict {
    suites_pass(&[SuiteName::Thm33, SuiteName::Thm31, SuiteName::Prop32], &context(Some(1000), None))
}

fn lemma_exhaustive() -> Verdict {
    let start = Instant::now();
    let verdict = suites_pass(&[SuiteName::Lemma35], &context(None, None));
    within(start, Duration::from_secs(120), verdict)
}

fn chain_decompositions() -> Verdict {
    let start = Instant::now();
    for t in 2..=5u32 {
        for n in 1..=5u32 {
            let d = decompose(t, n, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
            let report = verify_decomposition(&d, &build_grid(t, n).map_err(|e| e.to_string())?);
            if !report.all_passed() || middle_layer_size(t, n) != d.chains.len() {
                return Err(format!("[{t}]^{n}: {report:?}"));
            }
        }
    }
    let x = Point::new(4, vec![0, 2, 1, 3, 2, 1]).map_err(|e| e.to_string())?;
    let class: Vec<Vec<u32>> = chain_class(&x, DEFAULT_NODE_BUDGET)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|p| p.coords().to_vec())
        .collect();
    let expected = vec![
        vec![0, 2, 1, 3, 0, 1],
        vec![0, 2, 1, 3, 1, 1],
        vec![0, 2, 1, 3, 2, 1],
        vec![0, 2, 1, 3, 2, 2],
        vec![0, 2, 1, 3, 2, 3],
    ];
    if class != expected {
        return Err(format!("class of x is {class:?}"));
    }
    let suite = suites_pass(&[SuiteName::Chains], &context(None, None))?;
    within(start, Duration::from_secs(120), Ok(suite))
}

fn structural_fact() -> Verdict {
    suites_pass(&[SuiteName::Structure], &context(None, Some(6)))
}

fn section4_consistency() -> Verdict {
    let suite = suites_pass(&[SuiteName::Section4], &context(None, None))?;
    let grid: Vec<(u32, u32)> = (14..=24).map(|k| (2, 1u32 << k)).collect();
    let c = minimal_empirical_c(&grid, 0.1, 0.1).map_err(|e| e.to_string())?;
    if c != Rational::from((6527, 1000)) {
        return Err(format!("minimal C is {c}, golden 6527/1000"));
    }
    Ok(format!("{suite}; minimal C = {c}"))
}

fn middle_layer_asymptotics() -> Verdict {
    let mut worst = 0.0f64;
    for t in 2..=5u32 {
        for n in (50..=200u32).step_by(50) {
            let big_n = Float::with_val(256, &middle_layer_size(t, n));
            let power = Float::with_val(256, Integer::from(Integer::u_pow_u(t, n)));
            let pi = Float::with_val(256, Constant::Pi);
            let scale = (Float::with_val(256, 6) / (pi * ((t * t - 1) * n))).sqrt();
            let deviation = (big_n / (power * scale)).to_f64() - 1.0;
            if deviation.abs() > 0.05 {
                return Err(format!("t={t} n={n}: relative deviation {deviation}"));
            }
            worst = worst.max(deviation.abs());
        }
    }
    for t in 1..=10u32 {
        for n in 1..=60u32 {
            if !middle_layer_floor_holds(t, n) {
                return Err(format!("floor fails at t={t} n={n}"));
            }
        }
    }
    Ok(format!("largest deviation {worst:.4}; floor holds on 600 cases"))
}

fn entropy_suites() -> Verdict {
    suites_pass(&[SuiteName::Entropy], &context(Some(1000), None))
}

fn report_bytes(threads: &str, dir: &Path) -> Result<Vec<u8>, String> {
    let path = dir.join(format!("report-{threads}.csv"));
    let argv = [
        "antichain", "--no-cache", "--threads", threads, "report", "--t", "2..3", "--n", "1..4", "--out",
        path.to_str().expect("utf-8 temp path"),
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = antichain_cli::main_with_args(argv, &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn report_determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let single = report_bytes("1", dir.path())?;
    let many = report_bytes("4", dir.path())?;
    if single != many {
        return Err("CSV differs between 1 and 4 threads".into());
    }
    let rows = single.iter().filter(|&&b| b == b'\n').count() - 1;
    if rows != 8 {
        return Err(format!("expected 8 rows, got {rows}"));
    }
    Ok(format!("{} identical bytes, {rows} rows", single.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("engine equivalence and goldens", engine_equivalence),
        ("three-grid upper and trivial lower bound, n = 1..4", three_grid_bounds),
        ("weighted, two-level and completed-subposet suites", property_suites),
        ("half-independence lemma, exhaustive n = 2, 3", lemma_exhaustive),
        ("chain decompositions and the [4]^6 class", chain_decompositions),
        ("degree gaps on [3]^n, n <= 6", structural_fact),
        ("low points, assembled bound and minimal C", section4_consistency),
        ("middle layer estimate and floor", middle_layer_asymptotics),
        ("entropy inequalities", entropy_suites),
        ("report determinism across thread counts", report_determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
