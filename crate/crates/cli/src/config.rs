//! Validated run configuration.
//!
//! Defaults: cache directory `$ANTICHAIN_CACHE_DIR`, else
//! `$XDG_CACHE_HOME/antichain`, else `$HOME/.cache/antichain`, else
//! `.antichain-cache`; precision 128 bits; seed [`DEFAULT_SEED`]
//! ("DEDEK1ND" as ASCII); node budget 10⁶; threads `auto`.

use std::path::PathBuf;

use antichain_core::random::DEFAULT_SEED;

use crate::args::{GlobalArgs, OutputFormat};
use crate::error::{CliError, CliResult};

pub const MIN_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// `None` disables the cache.
    pub cache_dir: Option<PathBuf>,
    pub precision_bits: u32,
    pub seed: u64,
    pub node_budget: u64,
    /// `None` means one thread per core.
    pub thread_count: Option<usize>,
    /// `None` lets each command pick its natural format.
    pub output_format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> CliResult<Self> {
        if !(MIN_PRECISION..=MAX_PRECISION).contains(&g.precision) {
            return Err(CliError::usage(format!(
                "--precision must lie in {MIN_PRECISION}..={MAX_PRECISION}, got {}",
                g.precision
            )));
        }
        if g.node_budget == 0 {
            return Err(CliError::usage("--node-budget must be positive"));
        }
        let thread_count = match g.threads.as_str() {
            "auto" => None,
            s => match s.parse::<usize>() {
                Ok(k) if k > 0 => Some(k),
                _ => return Err(CliError::usage(format!("--threads must be `auto` or a positive integer, got `{s}`"))),
            },
        };
        let cache_dir = if g.no_cache {
            None
        } else {
            Some(g.cache_dir.clone().unwrap_or_else(default_cache_dir))
        };
        Ok(RunConfig {
            cache_dir,
            precision_bits: g.precision,
            seed: g.seed.unwrap_or(DEFAULT_SEED),
            node_budget: g.node_budget,
            thread_count,
            output_format: g.format,
        })
    }

    pub fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.output_format.unwrap_or(default)
    }
}

fn default_cache_dir() -> PathBuf {
    let env_dir = |key| std::env::var_os(key).filter(|v| !v.is_empty()).map(PathBuf::from);
    if let Some(xdg) = env_dir("XDG_CACHE_HOME") {
        return xdg.join("antichain");
    }
    if let Some(home) = env_dir("HOME") {
        return home.join(".cache").join("antichain");
    }
    PathBuf::from(".antichain-cache")
}
