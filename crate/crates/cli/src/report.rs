//! `report`: one row per `(t, n)` with the exact count (when reachable)
//! and every closed-form bound.
//!
//! CSV columns, in order:
//!
//! | column         | meaning                                                        |
//! |----------------|----------------------------------------------------------------|
//! | `t`, `n`       | grid dimensions                                                |
//! | `N`            | middle layer size, exact                                       |
//! | `log2_alpha`   | `log₂ α([t]^n)`, blank beyond the engine caps                  |
//! | `lower_trivial`| `N`, the lower bound from subsets of the middle layer          |
//! | `thm11`        | `(1 + 11 t² log t (log n)^{3/2} / n^{1/4}) N`, blank unless `1 < t < n` |
//! | `thm12`        | `N log(t+1)`                                                   |
//! | `thm14`        | `(1 + 4 log 3 / n) N`, blank unless `t = 3`                    |
//! | `thm15`        | `(1 + C (t log³ n / n)^{1/2}) N` with `C = 15`, blank unless `t < n / (100 log n)` |
//! | `tightest`     | least applicable upper bound among the four above              |
//! | `ratio`        | `log2_alpha / N`, blank when `log2_alpha` is                   |
//!
//! Reals carry 10 significant digits; upper bounds are rounded up, lower
//! bounds down.

use std::io::Write;
use std::path::Path;

use antichain_core::bounds::{
    closed_form_bounds, format_sig, BoundReport, Enclosure, Section4Params, DEFAULT_PRECISION, LOG_POWER,
    LOG_T_PLUS_ONE, MIDDLE_LAYER_LOWER, SQRT_LOG_CUBE, THREE_GRID,
};
use antichain_core::counting::{count_antichains_dp, DEFAULT_DP_WIDTH_CAP, ENGINE_VERSION};
use antichain_core::poset::{build_grid_with_budget, grid_size, middle_layer_size};
use antichain_core::Error;
use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;

use crate::args::OutputFormat;
use crate::cache::AlphaCache;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::range::InclusiveRange;

pub const CSV_HEADER: [&str; 11] = [
    "t",
    "n",
    "N",
    "log2_alpha",
    "lower_trivial",
    "thm11",
    "thm12",
    "thm14",
    "thm15",
    "tightest",
    "ratio",
];

const DIGITS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub t: u32,
    pub n: u32,
    #[serde(rename = "N")]
    pub middle_layer: String,
    pub log2_alpha: Option<String>,
    pub lower_trivial: String,
    pub thm11: Option<String>,
    pub thm12: Option<String>,
    pub thm14: Option<String>,
    pub thm15: Option<String>,
    pub tightest: Option<String>,
    pub ratio: Option<String>,
}

impl ReportRow {
    fn fields(&self) -> [String; 11] {
        let s = |o: &Option<String>| o.clone().unwrap_or_default();
        [
            self.t.to_string(),
            self.n.to_string(),
            self.middle_layer.clone(),
            s(&self.log2_alpha),
            self.lower_trivial.clone(),
            s(&self.thm11),
            s(&self.thm12),
            s(&self.thm14),
            s(&self.thm15),
            s(&self.tightest),
            s(&self.ratio),
        ]
    }
}

/// `α([t]^n)` from the cache or the DP engine; `None` beyond the node budget
/// or the DP width cap.
fn reachable_alpha(cfg: &RunConfig, cache: &AlphaCache, t: u32, n: u32) -> CliResult<Option<(Integer, bool)>> {
    if let Some(a) = cache.get(t, n) {
        return Ok(Some((a, false)));
    }
    let within_budget = grid_size(t, n).is_some_and(|s| s <= cfg.node_budget);
    if !within_budget || middle_layer_size(t, n) > DEFAULT_DP_WIDTH_CAP {
        return Ok(None);
    }
    let g = build_grid_with_budget(t, n, cfg.node_budget)?;
    match count_antichains_dp(&g) {
        Ok(a) => Ok(Some((a, true))),
        Err(Error::SizeLimit { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn build_row(report: &BoundReport) -> ReportRow {
    let upper = |name: &str| {
        report
            .entry(name)
            .filter(|e| e.applicable)
            .and_then(|e| e.reported())
            .map(|v| format_sig(v, DIGITS))
    };
    let lower = report
        .entry(MIDDLE_LAYER_LOWER)
        .and_then(|e| e.reported())
        .map(|v| format_sig(v, DIGITS))
        .expect("the middle-layer lower bound is always defined");
    let (log2_alpha, ratio) = match report.log2_alpha() {
        Some(l) => {
            let ratio = l.div(&Enclosure::from_integer(&report.middle_layer, DEFAULT_PRECISION));
            (Some(format_sig(l.lo(), DIGITS)), Some(format_sig(ratio.lo(), DIGITS)))
        }
        None => (None, None),
    };
    ReportRow {
        t: report.t,
        n: report.n,
        middle_layer: report.middle_layer.to_string(),
        log2_alpha,
        lower_trivial: lower,
        thm11: upper(LOG_POWER),
        thm12: upper(LOG_T_PLUS_ONE),
        thm14: upper(THREE_GRID),
        thm15: upper(SQRT_LOG_CUBE),
        tightest: report.tightest_upper().map(|(_, v)| format_sig(v, DIGITS)),
        ratio,
    }
}

type RowParts = (BoundReport, Option<(Integer, bool)>);

/// Rows in `t`-major order. Cells are computed in parallel; new counts are
/// added to `cache`.
pub fn compute_rows(
    cfg: &RunConfig,
    cache: &mut AlphaCache,
    t_range: InclusiveRange,
    n_range: InclusiveRange,
) -> CliResult<Vec<ReportRow>> {
    if t_range.is_empty() || n_range.is_empty() {
        return Err(CliError::usage(format!("empty range: --t {t_range} --n {n_range}")));
    }
    if t_range.start == 0 || n_range.start == 0 {
        return Err(CliError::usage("report ranges must start at 1 or above"));
    }
    let cells: Vec<(u32, u32)> = t_range.values().flat_map(|t| n_range.values().map(move |n| (t, n))).collect();
    let shared: &AlphaCache = cache;
    let results: Vec<CliResult<RowParts>> = cells
        .par_iter()
        .map(|&(t, n)| {
            let mut report = closed_form_bounds(&Section4Params::new(t, n))?;
            let alpha = reachable_alpha(cfg, shared, t, n)?;
            if let Some((a, _)) = &alpha {
                report.attach_alpha(a.clone());
            }
            Ok((report, alpha))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        let (report, alpha) = r?;
        if let Some((a, true)) = alpha {
            cache.insert(report.t, report.n, ENGINE_VERSION, &a);
        }
        rows.push(build_row(&report));
    }
    Ok(rows)
}

pub fn render(rows: &[ReportRow], format: OutputFormat, out: &mut dyn Write) -> CliResult<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for row in rows {
                w.write_record(row.fields())?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(rows).expect("rows serialize"))?;
        }
        OutputFormat::Table => {
            let table: Vec<[String; 11]> = rows.iter().map(ReportRow::fields).collect();
            let widths: Vec<usize> = (0..CSV_HEADER.len())
                .map(|i| table.iter().map(|r| r[i].len()).chain([CSV_HEADER[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&CSV_HEADER.map(String::from)))?;
            for r in &table {
                writeln!(out, "{}", line(r))?;
            }
        }
    }
    Ok(())
}

pub fn run(
    cfg: &RunConfig,
    cache: &mut AlphaCache,
    t_range: InclusiveRange,
    n_range: InclusiveRange,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let rows = compute_rows(cfg, cache, t_range, n_range)?;
    cache.save()?;
    let format = cfg.format_or(OutputFormat::Csv);
    match out_path {
        Some(path) => {
            let mut buf = Vec::new();
            render(&rows, format, &mut buf)?;
            std::fs::write(path, buf).map_err(|e| CliError::io(path, e))?;
        }
        None => render(&rows, format, out)?,
    }
    Ok(())
}
