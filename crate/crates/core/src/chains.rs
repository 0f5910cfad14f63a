//! Bracket-matching chain partition of `[t]^n`.
//!
//! A point `x` is written as `n` blocks of `t-1` symbols; block `i` holds
//! `x_i` right parentheses followed by `t-1-x_i` left ones. Positions are
//! numbered `1..=n(t-1)` from the left. Points with the same set of matched
//! pairs form one chain, and the chains partition the grid into `N(t,n)`
//! saturated chains.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::grid::check_budget;
use crate::poset::{self, LeveledPoset, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bracket {
    /// `(`
    Left,
    /// `)`
    Right,
}

/// A matched pair `(open, close)` of 1-based positions, `open < close`.
pub type MatchedPair = (u32, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketConfig {
    t: u32,
    symbols: Vec<Bracket>,
    matched: Vec<MatchedPair>,
}

impl BracketConfig {
    pub fn of(x: &Point) -> Self {
        let t = x.t();
        let mut symbols = Vec::with_capacity(x.n() * (t as usize - 1));
        for &c in x.coords() {
            symbols.extend(std::iter::repeat_n(Bracket::Right, c as usize));
            symbols.extend(std::iter::repeat_n(Bracket::Left, (t - 1 - c) as usize));
        }
        let matched = match_brackets(&symbols);
        BracketConfig { t, symbols, matched }
    }

    pub fn symbols(&self) -> &[Bracket] {
        &self.symbols
    }

    /// Matched pairs sorted by opening position: the chain signature `B(x)`.
    pub fn matched(&self) -> &[MatchedPair] {
        &self.matched
    }

    /// 1-based block holding 1-based position `pos`.
    pub fn block_of(&self, pos: u32) -> u32 {
        (pos - 1) / (self.t - 1) + 1
    }

    /// Unmatched positions in increasing order. They always read as a run
    /// of `)` followed by a run of `(`.
    pub fn unmatched(&self) -> Vec<u32> {
        let mut used = vec![false; self.symbols.len() + 1];
        for &(a, b) in &self.matched {
            used[a as usize] = true;
            used[b as usize] = true;
        }
        (1..=self.symbols.len() as u32).filter(|&p| !used[p as usize]).collect()
    }
}

impl fmt::Display for BracketConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let block = (self.t - 1) as usize;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 && block > 0 && i % block == 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", if *s == Bracket::Left { '(' } else { ')' })?;
        }
        Ok(())
    }
}

fn match_brackets(symbols: &[Bracket]) -> Vec<MatchedPair> {
    let mut stack = Vec::new();
    let mut pairs = Vec::new();
    for (i, s) in symbols.iter().enumerate() {
        let pos = i as u32 + 1;
        match s {
            Bracket::Left => stack.push(pos),
            Bracket::Right => {
                if let Some(open) = stack.pop() {
                    pairs.push((open, pos));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// `C_x`: every point with the same matched set as `x`, sorted by rank.
pub fn chain_class(x: &Point, budget: u64) -> Result<Vec<Point>> {
    check_budget(x.t(), x.n() as u32, budget)?;
    let signature = BracketConfig::of(x).matched;
    let mut class: Vec<Point> = poset::grid::points(x.t(), x.n() as u32)
        .filter(|y| BracketConfig::of(y).matched == signature)
        .collect();
    class.sort_by_key(Point::rank);
    Ok(class)
}

/// A partition of `[t]^n` into chains, each stored as point codes sorted by rank.
#[derive(Clone, Debug)]
pub struct ChainDecomposition {
    pub t: u32,
    pub n: u32,
    pub chains: Vec<Vec<u64>>,
    pub signature_index: HashMap<Vec<MatchedPair>, usize>,
}

impl ChainDecomposition {
    pub fn chain_points(&self, id: usize) -> Vec<Point> {
        self.chains[id]
            .iter()
            .map(|&c| Point::decode(self.t, self.n as usize, c))
            .collect()
    }

    /// Id of the chain holding `x`.
    pub fn chain_of(&self, x: &Point) -> Option<usize> {
        if x.t() != self.t || x.n() != self.n as usize {
            return None;
        }
        self.signature_index.get(BracketConfig::of(x).matched()).copied()
    }

    pub fn chain_sizes(&self) -> Vec<usize> {
        self.chains.iter().map(Vec::len).collect()
    }

    /// `{"t":..,"n":..,"chains":[[[x1,..,xn],..],..]}`
    pub fn to_json(&self) -> serde_json::Value {
        let chains: Vec<Vec<Vec<u32>>> = (0..self.chains.len())
            .map(|id| self.chain_points(id).iter().map(|p| p.coords().to_vec()).collect())
            .collect();
        serde_json::json!({ "t": self.t, "n": self.n, "chains": chains })
    }
}

/// Groups every point of `[t]^n` by its matched set and validates the result.
pub fn decompose(t: u32, n: u32, budget: u64) -> Result<ChainDecomposition> {
    let size = check_budget(t, n, budget)?;
    let signatures: Vec<Vec<MatchedPair>> = (0..size)
        .into_par_iter()
        .map(|code| BracketConfig::of(&Point::decode(t, n as usize, code)).matched)
        .collect();
    let mut chains: Vec<Vec<u64>> = Vec::new();
    let mut signature_index = HashMap::new();
    for (code, sig) in signatures.into_iter().enumerate() {
        let id = *signature_index.entry(sig).or_insert_with(|| {
            chains.push(Vec::new());
            chains.len() - 1
        });
        chains[id].push(code as u64);
    }
    for chain in &mut chains {
        chain.sort_by_key(|&c| Point::decode(t, n as usize, c).rank());
    }
    let decomposition = ChainDecomposition {
        t,
        n,
        chains,
        signature_index,
    };
    let grid = poset::build_grid_with_budget(t, n, budget)?;
    let report = verify_decomposition(&decomposition, &grid);
    if !report.all_passed() {
        return Err(Error::Internal(format!(
            "bracket decomposition of [{t}]^{n} failed verification: {}",
            report.first_counterexample.unwrap_or_default()
        )));
    }
    Ok(decomposition)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub points: usize,
    pub chains: usize,
    pub expected_chains: String,
    /// Chains are nonempty, pairwise disjoint, and hold only grid points.
    pub partition: bool,
    /// Consecutive chain elements are cover-related in the grid.
    pub saturated: bool,
    /// Number of chains equals `N(t,n)`.
    pub chain_count: bool,
    /// Every grid point lies in exactly one chain.
    pub exactly_once: bool,
    pub first_counterexample: Option<String>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.partition && self.saturated && self.chain_count && self.exactly_once
    }
}

/// Checks a decomposition against the grid poset it claims to partition.
pub fn verify_decomposition(d: &ChainDecomposition, grid: &LeveledPoset) -> VerificationReport {
    let mut counterexample: Option<String> = None;
    let mut note = |msg: String| {
        if counterexample.is_none() {
            counterexample = Some(msg);
        }
    };
    let mut hits = vec![0u32; grid.len()];
    let mut partition = true;
    let mut saturated = true;
    for (id, chain) in d.chains.iter().enumerate() {
        if chain.is_empty() {
            partition = false;
            note(format!("chain {id} is empty"));
        }
        let mut prev: Option<usize> = None;
        for &code in chain {
            let Some(v) = grid.index_of(code) else {
                partition = false;
                note(format!("chain {id} holds code {code}, which is not a grid point"));
                prev = None;
                continue;
            };
            hits[v] += 1;
            if hits[v] > 1 {
                partition = false;
                note(format!("point {} lies in more than one chain", grid.point(v).unwrap()));
            }
            if let Some(u) = prev {
                if grid.up(u).binary_search(&v).is_err() {
                    saturated = false;
                    note(format!(
                        "chain {id}: {} is not covered by {}",
                        grid.point(u).unwrap(),
                        grid.point(v).unwrap()
                    ));
                }
            }
            prev = Some(v);
        }
    }
    let exactly_once = hits.iter().all(|&h| h == 1);
    if !exactly_once {
        if let Some(v) = hits.iter().position(|&h| h != 1) {
            note(format!("point {} lies in {} chains", grid.point(v).unwrap(), hits[v]));
        }
    }
    let expected = poset::middle_layer_size(d.t, d.n);
    let chain_count = expected == d.chains.len();
    if !chain_count {
        note(format!("{} chains, expected N(t,n) = {expected}", d.chains.len()));
    }
    VerificationReport {
        points: grid.len(),
        chains: d.chains.len(),
        expected_chains: expected.to_string(),
        partition,
        saturated,
        chain_count,
        exactly_once,
        first_counterexample: counterexample,
    }
}
