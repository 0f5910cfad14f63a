//! Serializable random instances: each randomized trial draws one, checks
//! it, and a failing instance is written to disk for replay.

use antichain_core::bounds::{two_level_bound, FpEvaluator};
use antichain_core::counting::{
    count_antichains_dp, count_antichains_oracle, independence_poly, weighted_antichain_sum, BipartiteDocument,
    BipartiteGraph, WeightAssignment,
};
use antichain_core::entropy::{
    entropy, fact22_residual, gibbs_check, pippenger_check, shearer_check, FiniteDistribution,
};
use antichain_core::bounds::lemma35_check;
use antichain_core::poset::{LeveledPoset, NodeLabel, Point, PosetDocument, SubposetMode, SubposetSpec};
use antichain_core::random::{
    random_bipartite, random_distribution, random_poset, random_rational, random_subset, random_weights,
    PosetShape,
};
use rand::Rng;
use rug::float::Round;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Floating tolerance for double-precision entropy margins.
pub const ENTROPY_TOLERANCE: f64 = 1e-9;
/// Bound on the identity residual in double precision.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosetCheck {
    /// Weighted antichain sum at most the recursive bound.
    WeightedBound,
    /// Recursive bound of the completed subposet at most that of the poset.
    CompletedSubposet,
    /// DP count equals oracle count.
    Engines,
}

type Atoms = Vec<(Vec<u32>, String)>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Poset {
        check: PosetCheck,
        poset: PosetDocument,
        /// Per-level weights as exact rationals.
        weights: Vec<String>,
        /// Labels of a subset of the top level.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        top_subset: Option<Vec<NodeLabel>>,
    },
    Bipartite {
        graph: BipartiteDocument,
    },
    Shearer {
        atoms: Atoms,
        cover: Vec<(Vec<usize>, String)>,
    },
    Fact22 {
        atoms: Atoms,
    },
    Gibbs {
        family: Vec<(Vec<usize>, String)>,
        lambda: Vec<String>,
    },
    Pippenger {
        atoms: Atoms,
        n: u32,
        k: u32,
        q: String,
    },
    Subadditivity {
        atoms: Atoms,
    },
    RangeBound {
        atoms: Atoms,
    },
    Lemma {
        n: u32,
        /// Points of `Y`, as coordinate vectors in `[3]^n`.
        y: Vec<Vec<u32>>,
    },
}

/// Outcome of checking one instance.
#[derive(Clone, Debug)]
pub struct Check {
    pub holds: bool,
    pub detail: String,
}

fn rat(s: &str) -> CliResult<Rational> {
    s.parse::<Rational>()
        .map_err(|_| CliError::usage(format!("`{s}` in instance is not an exact rational")))
}

fn atoms_of(d: &FiniteDistribution) -> Atoms {
    d.atoms().iter().map(|(l, p)| (l.clone(), p.to_string())).collect()
}

fn distribution(atoms: &Atoms) -> CliResult<FiniteDistribution> {
    let parsed = atoms.iter().map(|(l, p)| Ok((l.clone(), rat(p)?))).collect::<CliResult<Vec<_>>>()?;
    Ok(FiniteDistribution::exact(parsed)?)
}

fn weights_of(w: &WeightAssignment) -> Vec<String> {
    w.level_weights().iter().map(Rational::to_string).collect()
}

fn cube_labels() -> Vec<Vec<u32>> {
    (0..8u32).map(|x| vec![x & 1, x >> 1 & 1, x >> 2 & 1]).collect()
}

fn scalar_labels(m: u32) -> Vec<Vec<u32>> {
    (0..m).map(|i| vec![i]).collect()
}

fn top_generated() -> PosetShape {
    PosetShape {
        top_generated: true,
        ..PosetShape::default()
    }
}

pub fn gen_weighted_bound<R: Rng>(rng: &mut R) -> Instance {
    let p = random_poset(rng, &top_generated());
    let w = random_weights(rng, p.level_count());
    Instance::Poset {
        check: PosetCheck::WeightedBound,
        poset: p.to_document(),
        weights: weights_of(&w),
        top_subset: None,
    }
}

pub fn gen_completed_subposet<R: Rng>(rng: &mut R) -> Instance {
    let p = random_poset(rng, &top_generated());
    let w = random_weights(rng, p.level_count());
    let top = p.level_count() - 1;
    let y: Vec<NodeLabel> = random_subset(rng, p.level(top)).into_iter().map(|v| p.label(v)).collect();
    Instance::Poset {
        check: PosetCheck::CompletedSubposet,
        poset: p.to_document(),
        weights: weights_of(&w),
        top_subset: Some(y),
    }
}

pub fn gen_engines<R: Rng>(rng: &mut R) -> Instance {
    let p = random_poset(rng, &PosetShape::default());
    Instance::Poset {
        check: PosetCheck::Engines,
        poset: p.to_document(),
        weights: Vec::new(),
        top_subset: None,
    }
}

pub fn gen_bipartite<R: Rng>(rng: &mut R) -> Instance {
    Instance::Bipartite {
        graph: random_bipartite(rng, 6, 6).to_document(),
    }
}

pub fn gen_shearer<R: Rng>(rng: &mut R) -> Instance {
    let d = random_distribution(rng, cube_labels(), 0.2).expect("generated distribution is valid");
    // random weights on the nonempty subsets of {0,1,2}, topped up on singletons
    let mut cover: Vec<(Vec<usize>, Rational)> = (1..8usize)
        .map(|s| ((0..3).filter(|i| s >> i & 1 == 1).collect(), random_rational(rng, 0, 1, 4)))
        .collect();
    for i in 0..3 {
        let load: Rational = cover.iter().filter(|(s, _)| s.contains(&i)).map(|(_, w)| w).sum();
        if load < 1 {
            let single = cover.iter_mut().find(|(s, _)| s == &[i]).expect("singletons are listed");
            single.1 += Rational::from(1) - load;
        }
    }
    Instance::Shearer {
        atoms: atoms_of(&d),
        cover: cover.into_iter().map(|(s, w)| (s, w.to_string())).collect(),
    }
}

pub fn gen_fact22<R: Rng>(rng: &mut R) -> Instance {
    let m = rng.random_range(2..=8);
    loop {
        let d = random_distribution(rng, scalar_labels(m), 0.2).expect("generated distribution is valid");
        if d.probability(&[0]) < 1 {
            return Instance::Fact22 { atoms: atoms_of(&d) };
        }
    }
}

pub fn gen_gibbs<R: Rng>(rng: &mut R) -> Instance {
    let p = random_distribution(rng, scalar_labels(8), 0.3).expect("generated distribution is valid");
    let family = (0..8usize)
        .map(|s| {
            let set: Vec<usize> = (0..3).filter(|i| s >> i & 1 == 1).collect();
            (set, p.probability(&[s as u32]).to_string())
        })
        .collect();
    let lambda = (0..3).map(|_| random_rational(rng, 0, 4, 8).to_string()).collect();
    Instance::Gibbs { family, lambda }
}

pub fn gen_pippenger<R: Rng>(rng: &mut R) -> Instance {
    let d = random_distribution(rng, scalar_labels(9), 0.3).expect("generated distribution is valid");
    let k = 2;
    let q: Rational = d.atoms().iter().filter(|(l, _)| l[0] >= k).map(|(_, p)| p).sum();
    Instance::Pippenger {
        atoms: atoms_of(&d),
        n: 8,
        k,
        q: q.to_string(),
    }
}

pub fn gen_subadditivity<R: Rng>(rng: &mut R) -> Instance {
    let d = random_distribution(rng, cube_labels(), 0.2).expect("generated distribution is valid");
    Instance::Subadditivity { atoms: atoms_of(&d) }
}

pub fn gen_range_bound<R: Rng>(rng: &mut R) -> Instance {
    let m = rng.random_range(1..=10);
    let d = random_distribution(rng, scalar_labels(m), 0.3).expect("generated distribution is valid");
    Instance::RangeBound { atoms: atoms_of(&d) }
}

pub fn gen_lemma<R: Rng>(rng: &mut R, n: u32, middle: &[Point]) -> Instance {
    Instance::Lemma {
        n,
        y: random_subset(rng, &(0..middle.len()).collect::<Vec<_>>())
            .into_iter()
            .map(|i| middle[i].coords().to_vec())
            .collect(),
    }
}

fn margin_check(margin: f64, tolerance: f64, what: &str) -> Check {
    Check {
        holds: margin >= -tolerance,
        detail: format!("{what} margin = {margin:e}"),
    }
}

fn fmt_float(x: &Float) -> String {
    antichain_core::bounds::format_sig(x, 12)
}

impl Instance {
    /// Evaluates the inequality this instance was drawn for. `precision` is
    /// the working precision of the recursive and two-level bounds.
    pub fn check(&self, precision: u32) -> CliResult<Check> {
        match self {
            Instance::Poset {
                check,
                poset,
                weights,
                top_subset,
            } => {
                let p = poset.clone().into_poset()?;
                let w = || -> CliResult<WeightAssignment> {
                    let levels = weights.iter().map(|s| rat(s)).collect::<CliResult<Vec<_>>>()?;
                    Ok(WeightAssignment::per_level(levels)?)
                };
                match check {
                    PosetCheck::WeightedBound => {
                        let w = w()?;
                        let z = weighted_antichain_sum(&p, &w)?;
                        let f = FpEvaluator::new(&p, &w, precision, Round::Up)?.value();
                        Ok(Check {
                            holds: f >= z,
                            detail: format!("Z = {z}, f_P <= {}", fmt_float(&f)),
                        })
                    }
                    PosetCheck::CompletedSubposet => {
                        let w = w()?;
                        let top = p.level_count() - 1;
                        let labels = top_subset
                            .as_ref()
                            .ok_or_else(|| CliError::usage("completed-subposet instance lacks `top_subset`"))?;
                        let y = dense(&p, labels)?;
                        let sub = p.subposet(&SubposetSpec::new(SubposetMode::Completed, top, y))?;
                        let lower = FpEvaluator::new(&sub, &w, precision, Round::Down)?.value();
                        let upper = FpEvaluator::new(&p, &w, precision, Round::Up)?.value();
                        Ok(Check {
                            holds: lower <= upper,
                            detail: format!(
                                "f of completed subposet >= {}, f_P <= {}",
                                fmt_float(&lower),
                                fmt_float(&upper)
                            ),
                        })
                    }
                    PosetCheck::Engines => {
                        let dp = count_antichains_dp(&p)?;
                        let oracle = count_antichains_oracle(&p)?;
                        Ok(Check {
                            holds: dp == oracle,
                            detail: format!("dp = {dp}, oracle = {oracle}"),
                        })
                    }
                }
            }
            Instance::Bipartite { graph } => {
                let g = BipartiteGraph::from_document(graph)?;
                let z = independence_poly(&g)?;
                let rhs = two_level_bound(&g, precision)?;
                Ok(Check {
                    holds: *rhs.hi() >= z,
                    detail: format!("Z = {z}, bound <= {}", fmt_float(rhs.hi())),
                })
            }
            Instance::Shearer { atoms, cover } => {
                let d = distribution(atoms)?;
                let cover = cover.iter().map(|(s, w)| Ok((s.clone(), rat(w)?))).collect::<CliResult<Vec<_>>>()?;
                Ok(margin_check(shearer_check::<f64>(&d, &cover)?, ENTROPY_TOLERANCE, "cover"))
            }
            Instance::Fact22 { atoms } => {
                let r = fact22_residual::<f64>(&distribution(atoms)?)?;
                Ok(Check {
                    holds: r <= RESIDUAL_TOLERANCE,
                    detail: format!("residual = {r:e}"),
                })
            }
            Instance::Gibbs { family, lambda } => {
                let family = family.iter().map(|(s, p)| Ok((s.clone(), rat(p)?))).collect::<CliResult<Vec<_>>>()?;
                let lambda = lambda.iter().map(|s| rat(s)).collect::<CliResult<Vec<_>>>()?;
                Ok(margin_check(gibbs_check::<f64>(&family, &lambda)?, ENTROPY_TOLERANCE, "variational"))
            }
            Instance::Pippenger { atoms, n, k, q } => Ok(margin_check(
                pippenger_check::<f64>(&distribution(atoms)?, *n, *k, &rat(q)?)?,
                ENTROPY_TOLERANCE,
                "tail",
            )),
            Instance::Subadditivity { atoms } => {
                let d = distribution(atoms)?;
                let mut parts = 0.0;
                for i in 0..d.components() {
                    parts += entropy::<f64>(&d.marginal(&[i])?);
                }
                Ok(margin_check(parts - entropy::<f64>(&d), ENTROPY_TOLERANCE, "subadditivity"))
            }
            Instance::RangeBound { atoms } => {
                let d = distribution(atoms)?;
                let margin = (d.support_size() as f64).log2() - entropy::<f64>(&d);
                Ok(margin_check(margin, ENTROPY_TOLERANCE, "range"))
            }
            Instance::Lemma { n, y } => {
                let points = y
                    .iter()
                    .map(|c| Ok(Point::new(3, c.clone())?))
                    .collect::<CliResult<Vec<_>>>()?;
                let report = lemma35_check(*n, &points)?;
                Ok(Check {
                    holds: report.ok(),
                    detail: serde_json::to_string(&report).expect("report serializes"),
                })
            }
        }
    }
}

fn dense(p: &LeveledPoset, labels: &[NodeLabel]) -> CliResult<Vec<usize>> {
    labels
        .iter()
        .map(|&l| p.index_of(l).ok_or_else(|| CliError::usage(format!("instance names unknown node {l}"))))
        .collect()
}
