//! `count`: exact antichain counts and weighted sums.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use antichain_core::counting::{
    count_antichains_dp, count_antichains_oracle, weighted_antichain_sum, WeightAssignment, ENGINE_VERSION,
};
use antichain_core::poset::{build_grid_with_budget, LeveledPoset};
use rug::{Integer, Rational};
use serde_json::json;

use crate::args::{Engine, OutputFormat};
use crate::cache::{AlphaCache, ORACLE_VERSION};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// Parses `7`, `3/2` or `1.25` exactly.
pub fn parse_rational(s: &str) -> CliResult<Rational> {
    let s = s.trim();
    let bad = || CliError::usage(format!("`{s}` is not a rational number"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let (neg, int) = match int.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int),
        };
        if !int.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: Integer = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
        let q = Rational::from((digits, scale));
        return Ok(if neg { -q } else { q });
    }
    s.parse::<Rational>().map_err(|_| bad())
}

pub enum CountTarget<'a> {
    Grid { t: u32, n: u32 },
    File(&'a Path),
}

enum CountValue {
    Alpha(Integer),
    Weighted(Rational),
}

/// The cached count for `[t]^n` or a fresh DP count, inserting it. Size
/// refusals propagate.
pub fn grid_alpha(cfg: &RunConfig, cache: &mut AlphaCache, t: u32, n: u32) -> CliResult<(Integer, bool)> {
    if let Some(a) = cache.get(t, n) {
        return Ok((a, true));
    }
    let g = build_grid_with_budget(t, n, cfg.node_budget)?;
    let a = count_antichains_dp(&g)?;
    cache.insert(t, n, ENGINE_VERSION, &a);
    Ok((a, false))
}

pub fn run(
    cfg: &RunConfig,
    cache: &mut AlphaCache,
    target: CountTarget,
    engine: Engine,
    lambda: &[String],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    if engine == Engine::Weighted && lambda.is_empty() {
        return Err(CliError::usage("--engine weighted needs --lambda"));
    }
    if engine != Engine::Weighted && !lambda.is_empty() {
        return Err(CliError::usage("--lambda is only used with --engine weighted"));
    }
    let start = Instant::now();
    let mut cached = false;
    let (label, value) = match target {
        CountTarget::Grid { t, n } => {
            if t == 0 || n == 0 {
                return Err(CliError::usage(format!("need t, n >= 1, got t={t}, n={n}")));
            }
            let label = format!("[{t}]^{n}");
            let value = match engine {
                Engine::Dp => {
                    let (a, hit) = grid_alpha(cfg, cache, t, n)?;
                    cached = hit;
                    CountValue::Alpha(a)
                }
                Engine::Oracle => match cache.get(t, n) {
                    Some(a) => {
                        cached = true;
                        CountValue::Alpha(a)
                    }
                    None => {
                        let a = count_antichains_oracle(&build_grid_with_budget(t, n, cfg.node_budget)?)?;
                        cache.insert(t, n, ORACLE_VERSION, &a);
                        CountValue::Alpha(a)
                    }
                },
                Engine::Weighted => {
                    let g = build_grid_with_budget(t, n, cfg.node_budget)?;
                    CountValue::Weighted(weighted(&g, lambda)?)
                }
            };
            (label, value)
        }
        CountTarget::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let p = LeveledPoset::from_json_str(&text)?;
            let value = match engine {
                Engine::Dp => CountValue::Alpha(count_antichains_dp(&p)?),
                Engine::Oracle => CountValue::Alpha(count_antichains_oracle(&p)?),
                Engine::Weighted => CountValue::Weighted(weighted(&p, lambda)?),
            };
            (path.display().to_string(), value)
        }
    };
    cache.save()?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let text = match &value {
        CountValue::Alpha(a) => a.to_string(),
        CountValue::Weighted(q) => q.to_string(),
    };
    let engine_name = match engine {
        Engine::Dp => "dp",
        Engine::Oracle => "oracle",
        Engine::Weighted => "weighted",
    };
    match cfg.format_or(OutputFormat::Table) {
        OutputFormat::Table => {
            writeln!(out, "{text}")?;
            writeln!(err, "{label}  engine={engine_name}  cached={cached}  elapsed_ms={elapsed_ms:.3}")?;
        }
        OutputFormat::Json => {
            let doc = json!({
                "target": label,
                "engine": engine_name,
                "value": text,
                "cached": cached,
                "elapsed_ms": elapsed_ms,
            });
            writeln!(out, "{doc}")?;
        }
        OutputFormat::Csv => {
            writeln!(out, "target,engine,value,cached")?;
            writeln!(out, "{label},{engine_name},{text},{cached}")?;
        }
    }
    Ok(())
}

fn weighted(p: &LeveledPoset, lambda: &[String]) -> CliResult<Rational> {
    let values = lambda.iter().map(|s| parse_rational(s)).collect::<CliResult<Vec<_>>>()?;
    let k = p.level_count();
    let levels = match values.len() {
        1 => vec![values[0].clone(); k],
        m if m == k => values,
        m => {
            return Err(CliError::usage(format!(
                "--lambda has {m} values but the poset has {k} levels (give one value or {k})"
            )))
        }
    };
    Ok(weighted_antichain_sum(p, &WeightAssignment::per_level(levels)?)?)
}
