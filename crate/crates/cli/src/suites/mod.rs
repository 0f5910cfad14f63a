//! Verification suites behind `verify`.
//!
//! Randomized suites draw trial `i` from the ChaCha8 stream `i` of the
//! seed, run trials in parallel and report in trial order, so output does
//! not depend on the thread count.

mod exhaustive;
mod instance;

use std::path::{Path, PathBuf};

use antichain_core::random::trial_rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use instance::{Check, Instance, PosetCheck, ENTROPY_TOLERANCE, RESIDUAL_TOLERANCE};

use crate::args::SuiteName;
use crate::error::{CliError, CliResult};

/// Inputs shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteContext {
    pub seed: u64,
    pub trials: Option<usize>,
    pub n: Option<u32>,
    pub precision: u32,
}

impl SuiteContext {
    fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}

/// A failing randomized trial, as written to disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub suite: String,
    pub seed: u64,
    pub trial: u64,
    pub detail: String,
    pub instance: Instance,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub cases: usize,
    pub violations: usize,
    pub notes: Vec<String>,
    pub first_counterexample: Option<Value>,
    #[serde(skip)]
    pub replayable: Option<Counterexample>,
}

impl SuiteOutcome {
    fn new(suite: impl Into<String>) -> Self {
        SuiteOutcome {
            suite: suite.into(),
            cases: 0,
            violations: 0,
            notes: Vec::new(),
            first_counterexample: None,
            replayable: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Counts one deterministic case.
    fn record(&mut self, holds: bool, counterexample: impl FnOnce() -> Value) {
        self.cases += 1;
        if !holds {
            self.violations += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(counterexample());
            }
        }
    }

    /// Folds another outcome's cases into this one.
    fn absorb(&mut self, other: SuiteOutcome) {
        self.cases += other.cases;
        self.violations += other.violations;
        self.notes.extend(other.notes);
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first_counterexample;
            self.replayable = other.replayable;
        }
    }
}

/// Runs `trials` random instances of one kind.
fn randomized(
    ctx: &SuiteContext,
    suite: &str,
    trials: usize,
    generate: impl Fn(&mut ChaCha8Rng) -> Instance + Sync,
) -> CliResult<SuiteOutcome> {
    let results: Vec<CliResult<(Instance, Check)>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let inst = generate(&mut trial_rng(ctx.seed, i));
            let check = inst.check(ctx.precision)?;
            Ok((inst, check))
        })
        .collect();
    let mut out = SuiteOutcome::new(suite);
    for (i, r) in results.into_iter().enumerate() {
        let (inst, check) = r?;
        out.cases += 1;
        if !check.holds {
            out.violations += 1;
            if out.replayable.is_none() {
                let record = Counterexample {
                    suite: suite.to_string(),
                    seed: ctx.seed,
                    trial: i as u64,
                    detail: check.detail,
                    instance: inst,
                };
                out.first_counterexample = Some(serde_json::to_value(&record).expect("record serializes"));
                out.replayable = Some(record);
            }
        }
    }
    Ok(out)
}

pub fn suite_label(name: SuiteName) -> &'static str {
    match name {
        SuiteName::Thm31 => "thm31",
        SuiteName::Thm33 => "thm33",
        SuiteName::Prop32 => "prop32",
        SuiteName::Lemma35 => "lemma35",
        SuiteName::Thm14 => "thm14",
        SuiteName::Section4 => "section4",
        SuiteName::Chains => "chains",
        SuiteName::Engines => "engines",
        SuiteName::Entropy => "entropy",
        SuiteName::Structure => "structure",
        SuiteName::All => "all",
    }
}

pub const ALL_SUITES: [SuiteName; 10] = [
    SuiteName::Engines,
    SuiteName::Thm33,
    SuiteName::Thm31,
    SuiteName::Prop32,
    SuiteName::Lemma35,
    SuiteName::Thm14,
    SuiteName::Structure,
    SuiteName::Chains,
    SuiteName::Section4,
    SuiteName::Entropy,
];

type Generator = fn(&mut ChaCha8Rng) -> Instance;

/// Runs one suite, or every suite in a fixed order for `all`.
pub fn run_suite(name: SuiteName, ctx: &SuiteContext) -> CliResult<Vec<SuiteOutcome>> {
    let label = suite_label(name);
    let outcome = match name {
        SuiteName::All => {
            let mut all = Vec::new();
            for s in ALL_SUITES {
                all.extend(run_suite(s, ctx)?);
            }
            return Ok(all);
        }
        SuiteName::Thm33 => {
            let mut out = randomized(ctx, label, ctx.trials_or(1000), instance::gen_weighted_bound)?;
            out.absorb(exhaustive::recursive_bound_tightness(ctx.precision)?);
            out
        }
        SuiteName::Thm31 => {
            let mut out = randomized(ctx, label, ctx.trials_or(1000), instance::gen_bipartite)?;
            out.absorb(exhaustive::two_level_tightness(ctx.precision)?);
            out
        }
        SuiteName::Prop32 => randomized(ctx, label, ctx.trials_or(1000), instance::gen_completed_subposet)?,
        SuiteName::Engines => {
            let mut out = exhaustive::grid_engines()?;
            out.absorb(randomized(ctx, label, ctx.trials_or(200), instance::gen_engines)?);
            out
        }
        SuiteName::Lemma35 => exhaustive::lemma35(ctx)?,
        SuiteName::Thm14 => exhaustive::three_grid(ctx.n.unwrap_or(4))?,
        SuiteName::Structure => exhaustive::degree_gaps(ctx.n.unwrap_or(6))?,
        SuiteName::Chains => exhaustive::chains()?,
        SuiteName::Section4 => exhaustive::section4()?,
        SuiteName::Entropy => {
            let trials = ctx.trials_or(1000);
            let mut out = SuiteOutcome::new(label);
            let kinds: [(&str, Generator); 6] = [
                ("shearer", instance::gen_shearer),
                ("fact22", instance::gen_fact22),
                ("gibbs", instance::gen_gibbs),
                ("pippenger", instance::gen_pippenger),
                ("subadditivity", instance::gen_subadditivity),
                ("range", instance::gen_range_bound),
            ];
            for (kind, generate) in kinds {
                let part = randomized(ctx, &format!("{label}/{kind}"), trials, generate)?;
                out.notes.push(format!("{kind}: {} trials, {} violations", part.cases, part.violations));
                out.absorb(part);
            }
            out.absorb(exhaustive::entropy_tight_cases()?);
            out.absorb(exhaustive::h1_grid());
            out
        }
    };
    let mut outcome = outcome;
    outcome.suite = label.to_string();
    Ok(vec![outcome])
}

/// Re-checks one persisted counterexample.
pub fn replay(path: &Path, precision: u32) -> CliResult<SuiteOutcome> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let record: Counterexample = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let check = record.instance.check(precision)?;
    let mut out = SuiteOutcome::new(format!("{} (replay of trial {})", record.suite, record.trial));
    out.notes.push(check.detail.clone());
    out.record(check.holds, || serde_json::to_value(&record).expect("record serializes"));
    Ok(out)
}

/// Writes the first replayable counterexample of `outcome` under `dir`.
pub fn persist(outcome: &SuiteOutcome, dir: &Path) -> CliResult<Option<PathBuf>> {
    let Some(record) = &outcome.replayable else {
        return Ok(None);
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = format!("{}-{:016x}-{}.json", record.suite.replace('/', "-"), record.seed, record.trial);
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(record).expect("record serializes");
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok(Some(path))
}
