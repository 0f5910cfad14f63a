//! The product bound on the independence polynomial of a weighted
//! bipartite graph.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::bounds::real::{Enclosure, UpperReal, DEFAULT_PRECISION};
use crate::counting::BipartiteGraph;
use crate::error::{Error, Result};

/// `Π_{v∈A} [(1+μ)^{d_N(v)} + Π_{u∈N(v)}(1+λ_u) - 1]^{1/d_N(v)}`, rounded upward.
pub fn thm31_rhs(g: &BipartiteGraph) -> Result<UpperReal> {
    Ok(two_level_bound(g, DEFAULT_PRECISION)?.upper())
}

/// The same product as an enclosure. The bracket is exact; only the roots
/// and the outer product round.
///
/// Requires `μ ≥ 1` and every `λ_u ≥ 1`. A vertex of `B` with no neighbor
/// contributes `1+λ_u` to the left side and nothing to the product, so it
/// is refused. An isolated vertex of `A` contributes `1+μ`.
pub fn two_level_bound(g: &BipartiteGraph, prec: u32) -> Result<Enclosure> {
    if *g.mu() < 1 {
        return Err(Error::contract(format!("weight μ = {} on A is below 1", g.mu())));
    }
    for u in 0..g.b_count() {
        if *g.lambda(u) < 1 {
            return Err(Error::contract(format!("weight λ = {} on B vertex {u} is below 1", g.lambda(u))));
        }
        if g.degree_b(u) == 0 {
            return Err(Error::contract(format!("B vertex {u} has no neighbor in A")));
        }
    }
    let one_plus_mu = Rational::from(g.mu() + 1u32);
    let mut acc = Enclosure::from_u64(1, prec);
    for v in 0..g.a_count() {
        let nbrs = g.neighbors_of_a(v);
        let factor = match nbrs.iter().map(|&u| g.degree_b(u)).min() {
            None => Enclosure::from_rational(&one_plus_mu, prec),
            Some(d) => {
                let d = d as u32;
                let prod = nbrs
                    .iter()
                    .fold(Rational::from(1), |acc, &u| acc * Rational::from(g.lambda(u) + 1u32));
                let bracket = one_plus_mu.clone().pow(d) + prod - Integer::from(1);
                Enclosure::from_rational(&bracket, prec).root(d)
            }
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::independence_poly;
    use rug::Float;

    fn ones(a: usize, b: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
        BipartiteGraph::new(a, edges, Rational::from(1), vec![Rational::from(1); b]).unwrap()
    }

    fn assert_tight(e: &Enclosure, z: &Rational) {
        let tol = Float::with_val(256, Float::with_val(256, z) >> 120u32);
        assert!(*e.lo() <= *z && *e.hi() >= *z, "{e} does not contain {z}");
        assert!(e.width() <= tol, "{e} too wide");
    }

    #[test]
    fn tight_cases() {
        let edge = ones(1, 1, &[(0, 0)]);
        assert_tight(&two_level_bound(&edge, 128).unwrap(), &independence_poly(&edge).unwrap());
        let k22 = ones(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_tight(&two_level_bound(&k22, 128).unwrap(), &Rational::from(7));
        let lam = vec![Rational::from(2), Rational::from((5, 3)), Rational::from(4)];
        let star = BipartiteGraph::new(1, &[(0, 0), (0, 1), (0, 2)], Rational::from(3), lam).unwrap();
        assert_tight(&two_level_bound(&star, 128).unwrap(), &independence_poly(&star).unwrap());
    }

    #[test]
    fn isolated_a_vertex_contributes_one_plus_mu() {
        let g = BipartiteGraph::new(2, &[(0, 0)], Rational::from(2), vec![Rational::from(1)]).unwrap();
        // (3 + 2 - 1) * 3
        assert_tight(&two_level_bound(&g, 128).unwrap(), &Rational::from(12));
    }

    #[test]
    fn contract_errors() {
        let light = BipartiteGraph::new(1, &[(0, 0)], Rational::from((1, 2)), vec![Rational::from(1)]).unwrap();
        assert!(thm31_rhs(&light).is_err());
        let isolated_b = ones(1, 2, &[(0, 0)]);
        let err = thm31_rhs(&isolated_b).unwrap_err();
        assert!(err.to_string().contains("B vertex 1"), "{err}");
    }
}
