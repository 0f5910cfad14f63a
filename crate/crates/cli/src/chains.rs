//! `chains`: bracket-matching chain decomposition of `[t]^n`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use antichain_core::chains::{decompose, verify_decomposition};
use antichain_core::poset::{build_grid_with_budget, Point};
use serde_json::json;

use crate::args::OutputFormat;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub struct ChainsRequest<'a> {
    pub t: u32,
    pub n: u32,
    pub verify: bool,
    pub emit: Option<&'a Path>,
    pub contains: &'a [u32],
}

/// Returns whether verification (when requested) passed.
pub fn run(cfg: &RunConfig, req: &ChainsRequest, out: &mut dyn Write) -> CliResult<bool> {
    let (t, n) = (req.t, req.n);
    if t == 0 || n == 0 {
        return Err(CliError::usage(format!("need t, n >= 1, got t={t}, n={n}")));
    }
    let d = decompose(t, n, cfg.node_budget)?;
    let report = if req.verify {
        Some(verify_decomposition(&d, &build_grid_with_budget(t, n, cfg.node_budget)?))
    } else {
        None
    };
    let containing = if req.contains.is_empty() {
        None
    } else {
        let x = Point::new(t, req.contains.to_vec())?;
        if x.n() != n as usize {
            return Err(CliError::usage(format!("--contains has {} coordinates, expected {n}", x.n())));
        }
        let id = d.chain_of(&x).expect("every grid point lies on a chain");
        Some(d.chain_points(id))
    };
    if let Some(path) = req.emit {
        let text = serde_json::to_string(&d.to_json()).expect("json value serializes");
        if path == Path::new("-") {
            writeln!(out, "{text}")?;
        } else {
            std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))?;
        }
    }
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for s in d.chain_sizes() {
        *histogram.entry(s).or_default() += 1;
    }
    let coords = |pts: &[Point]| pts.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>();
    match cfg.format_or(OutputFormat::Table) {
        OutputFormat::Json => {
            let sizes: BTreeMap<String, usize> = histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            let doc = json!({
                "t": t,
                "n": n,
                "points": d.chains.iter().map(Vec::len).sum::<usize>(),
                "chains": d.chains.len(),
                "chain_sizes": sizes,
                "verification": report,
                "containing": containing.as_deref().map(coords),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json value serializes"))?;
        }
        OutputFormat::Table | OutputFormat::Csv => {
            let points: usize = d.chains.iter().map(Vec::len).sum();
            writeln!(out, "[{t}]^{n}: {points} points in {} chains", d.chains.len())?;
            let sizes: Vec<String> = histogram.iter().rev().map(|(s, c)| format!("{s}x{c}")).collect();
            writeln!(out, "chain sizes (size x count): {}", sizes.join(" "))?;
            if let Some(r) = &report {
                writeln!(out, "partition:    {}", r.partition)?;
                writeln!(out, "saturated:    {}", r.saturated)?;
                writeln!(out, "chain count:  {} (expected {})", r.chain_count, r.expected_chains)?;
                writeln!(out, "exactly once: {}", r.exactly_once)?;
                if let Some(c) = &r.first_counterexample {
                    writeln!(out, "counterexample: {c}")?;
                }
            }
            if let Some(chain) = &containing {
                let parts: Vec<String> = chain.iter().map(|p| format!("{:?}", p.coords())).collect();
                writeln!(out, "chain containing {:?}: {}", req.contains, parts.join(" < "))?;
            }
        }
    }
    Ok(report.is_none_or(|r| r.all_passed()))
}
