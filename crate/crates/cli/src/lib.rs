//! Command-line harness for exact antichain counting, chain decompositions,
//! bounds and their verification suites.
//!
//! Exit codes: 0 on success, 1 when a suite finds a violation, 2 on usage,
//! size or I/O errors.

pub mod args;
pub mod bounds;
pub mod cache;
pub mod chains;
pub mod config;
pub mod count;
pub mod error;
pub mod range;
pub mod report;
pub mod suites;

use std::io::Write;

use clap::Parser;
use serde_json::json;

use crate::args::{Cli, Command, OutputFormat};
use crate::cache::AlphaCache;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::suites::{SuiteContext, SuiteOutcome};

/// How a successfully executed command ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
        }
    }
}

pub const USAGE_EXIT_CODE: i32 = 2;

/// Parses `argv` and runs it, returning the process exit code.
pub fn main_with_args<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT_CODE } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run(cli, out, err) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            USAGE_EXIT_CODE
        }
    }
}

pub fn run(cli: Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<Status> {
    let cfg = RunConfig::from_args(&cli.global)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cfg.thread_count {
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {} worker threads: {e}", cfg.thread_count.unwrap_or(0))))?;
    pool.install(|| dispatch(&cfg, cli.command, out, err))
}

fn open_cache(cfg: &RunConfig) -> CliResult<AlphaCache> {
    match &cfg.cache_dir {
        Some(dir) => AlphaCache::open(dir),
        None => Ok(AlphaCache::disabled()),
    }
}

fn dispatch(cfg: &RunConfig, command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<Status> {
    match command {
        Command::Count {
            t,
            n,
            engine,
            lambda,
            poset,
        } => {
            let target = match (&poset, t, n) {
                (Some(path), _, _) => count::CountTarget::File(path),
                (None, Some(t), Some(n)) => count::CountTarget::Grid { t, n },
                _ => return Err(CliError::usage("count needs --t and --n, or --poset")),
            };
            let mut cache = open_cache(cfg)?;
            count::run(cfg, &mut cache, target, engine, &lambda, out, err)?;
            Ok(Status::Ok)
        }
        Command::Bounds {
            t,
            n,
            c,
            epsilon,
            epsilon_prime,
        } => {
            let cache = open_cache(cfg)?;
            let req = bounds::BoundsRequest {
                t,
                n,
                c,
                epsilon,
                epsilon_prime,
            };
            bounds::run(cfg, &cache, &req, out)?;
            Ok(Status::Ok)
        }
        Command::Chains {
            t,
            n,
            verify,
            emit,
            contains,
        } => {
            let req = chains::ChainsRequest {
                t,
                n,
                verify,
                emit: emit.as_deref(),
                contains: &contains,
            };
            Ok(if chains::run(cfg, &req, out)? { Status::Ok } else { Status::Violation })
        }
        Command::Verify {
            suite,
            trials,
            n,
            replay,
            counterexample_dir,
        } => {
            let outcomes = match &replay {
                Some(path) => vec![suites::replay(path, cfg.precision_bits)?],
                None => {
                    let ctx = SuiteContext {
                        seed: cfg.seed,
                        trials,
                        n,
                        precision: cfg.precision_bits,
                    };
                    suites::run_suite(suite, &ctx)?
                }
            };
            let dir = counterexample_dir.or_else(|| cfg.cache_dir.as_ref().map(|d| d.join("counterexamples")));
            let mut saved = Vec::new();
            if replay.is_none() {
                if let Some(dir) = &dir {
                    for o in &outcomes {
                        saved.push(suites::persist(o, dir)?);
                    }
                }
            }
            write_outcomes(cfg, &outcomes, &saved, out)?;
            Ok(if outcomes.iter().all(SuiteOutcome::passed) { Status::Ok } else { Status::Violation })
        }
        Command::Report { t, n, out: path } => {
            let mut cache = open_cache(cfg)?;
            report::run(cfg, &mut cache, t, n, path.as_deref(), out)?;
            Ok(Status::Ok)
        }
    }
}

fn write_outcomes(
    cfg: &RunConfig,
    outcomes: &[SuiteOutcome],
    saved: &[Option<std::path::PathBuf>],
    out: &mut dyn Write,
) -> CliResult<()> {
    let saved_at = |i: usize| saved.get(i).cloned().flatten();
    match cfg.format_or(OutputFormat::Table) {
        OutputFormat::Json => {
            let docs: Vec<_> = outcomes
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let mut v = serde_json::to_value(o).expect("outcome serializes");
                    v["passed"] = json!(o.passed());
                    v["counterexample_file"] = json!(saved_at(i).map(|p| p.display().to_string()));
                    v
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&docs).expect("outcomes serialize"))?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["suite", "cases", "violations", "passed"])?;
            for o in outcomes {
                w.write_record([o.suite.clone(), o.cases.to_string(), o.violations.to_string(), o.passed().to_string()])?;
            }
            w.flush()?;
        }
        OutputFormat::Table => {
            for (i, o) in outcomes.iter().enumerate() {
                let verdict = if o.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{verdict} {}: {} cases, {} violations", o.suite, o.cases, o.violations)?;
                for note in &o.notes {
                    writeln!(out, "  {note}")?;
                }
                if let Some(c) = &o.first_counterexample {
                    writeln!(out, "  first counterexample: {c}")?;
                }
                if let Some(p) = saved_at(i) {
                    writeln!(out, "  saved to {}", p.display())?;
                }
            }
        }
    }
    Ok(())
}
