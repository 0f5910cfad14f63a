//! `bounds`: closed forms, exact `log₂ α` when cached, and the
//! sublinear-error diagnostics.

use std::io::Write;

use antichain_core::bounds::{
    closed_form_bounds, format_sig, section4_diagnostics, BoundReport, Quantity, Section4Diagnostics, Section4Params,
    Side,
};
use serde_json::json;

use crate::args::OutputFormat;
use crate::cache::AlphaCache;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub struct BoundsRequest {
    pub t: u32,
    pub n: u32,
    pub c: Option<f64>,
    pub epsilon: Option<f64>,
    pub epsilon_prime: Option<f64>,
}

impl BoundsRequest {
    fn params(&self) -> CliResult<Section4Params> {
        let mut p = Section4Params::new(self.t, self.n);
        for (name, v, slot) in [
            ("--c", self.c, &mut p.c),
            ("--epsilon", self.epsilon, &mut p.epsilon),
            ("--epsilon-prime", self.epsilon_prime, &mut p.epsilon_prime),
        ] {
            if let Some(v) = v {
                if !v.is_finite() || v < 0.0 {
                    return Err(CliError::usage(format!("{name} must be a finite nonnegative number, got {v}")));
                }
                *slot = v;
            }
        }
        Ok(p)
    }
}

pub fn run(cfg: &RunConfig, cache: &AlphaCache, req: &BoundsRequest, out: &mut dyn Write) -> CliResult<()> {
    if req.t == 0 || req.n == 0 {
        return Err(CliError::usage(format!("need t, n >= 1, got t={}, n={}", req.t, req.n)));
    }
    let params = req.params()?;
    let mut report = closed_form_bounds(&params)?;
    if let Some(a) = cache.get(req.t, req.n) {
        report.attach_alpha(a);
    }
    let diag = section4_diagnostics(&params)?;
    match cfg.format_or(OutputFormat::Table) {
        OutputFormat::Json => {
            let doc = json!({ "bounds": report.to_json(), "section4": diag.to_json() });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json value serializes"))?;
        }
        OutputFormat::Csv => write_csv(&report, out)?,
        OutputFormat::Table => write_table(&report, &diag, out)?,
    }
    Ok(())
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Upper => "upper",
        Side::Lower => "lower",
        Side::Estimate => "estimate",
    }
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Log2Alpha => "log2_alpha",
        Quantity::MiddleLayer => "N",
    }
}

fn verdict_text(report: &BoundReport, name: &str) -> String {
    report
        .verdict(name)
        .map_or_else(|| "-".to_string(), |v| format!("{v:?}").to_lowercase())
}

fn write_csv(report: &BoundReport, out: &mut dyn Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "bounds", "side", "applicable", "value", "verdict"])?;
    for e in &report.entries {
        let value = e.reported().map(|v| format_sig(v, 6)).unwrap_or_default();
        w.write_record([
            e.name,
            quantity_name(e.quantity),
            side_name(e.side),
            if e.applicable { "true" } else { "false" },
            &value,
            &verdict_text(report, e.name),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_table(report: &BoundReport, diag: &Section4Diagnostics, out: &mut dyn Write) -> CliResult<()> {
    writeln!(out, "t = {}, n = {}, N = {}", report.t, report.n, report.middle_layer)?;
    match report.log2_alpha() {
        Some(l) => writeln!(out, "exact log2 alpha = {} (alpha = {})", format_sig(l.lo(), 6), report.alpha().unwrap())?,
        None => writeln!(out, "exact log2 alpha: not cached")?,
    }
    writeln!(out)?;
    writeln!(
        out,
        "{:<22} {:<10} {:<8} {:>14} {:<10} {:<9} formula",
        "bound", "of", "side", "value", "applicable", "vs exact"
    )?;
    for e in &report.entries {
        let value = e.reported().map_or_else(|| "undefined".to_string(), |v| format_sig(v, 6));
        writeln!(
            out,
            "{:<22} {:<10} {:<8} {:>14} {:<10} {:<9} {}",
            e.name,
            quantity_name(e.quantity),
            side_name(e.side),
            value,
            e.applicable,
            verdict_text(report, e.name),
            e.anchor
        )?;
    }
    if let Some((name, v)) = report.tightest_upper() {
        writeln!(out, "tightest applicable upper bound: {name} = {}", format_sig(v, 6))?;
    }
    writeln!(out)?;
    let p = &diag.params;
    writeln!(
        out,
        "sublinear-error diagnostics (C = {}, epsilon = {}, epsilon' = {}): applicable = {}",
        p.c, p.epsilon, p.epsilon_prime, diag.applicable
    )?;
    match &diag.values {
        None => writeln!(out, "  undefined for t = 1 (log((t-1)n) = log 0)")?,
        Some(v) => {
            let hi = |e: &antichain_core::bounds::Enclosure| format_sig(e.hi(), 6);
            writeln!(out, "  p               = {}", hi(&v.p))?;
            writeln!(out, "  s               = {}", v.s.as_ref().map_or("undefined".into(), hi))?;
            writeln!(out, "  lowPointBound   = {}", hi(&v.low_point_bound))?;
            writeln!(out, "  tildeChain      = {}", hi(&v.tilde_chain))?;
            writeln!(out, "  tildeBound      = {}", hi(&v.tilde_bound))?;
            writeln!(out, "  hatBound        = {}", hi(&v.hat_bound))?;
            writeln!(out, "  assembled       = {}", hi(&v.assembled))?;
            writeln!(out, "  mainBound       = {}", format_sig(v.main_bound.lo(), 6))?;
            writeln!(out, "  assembled <= mainBound: {}", diag.ok)?;
        }
    }
    Ok(())
}
