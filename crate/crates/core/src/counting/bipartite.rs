use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on `|A| + |B|` for the independence polynomial.
pub const DEFAULT_BIPARTITE_CAP: usize = 26;

/// A bipartite graph on `A ∪ B` with uniform weight `μ` on `A` and weights
/// `λ_u` on `B`. Vertices are `0..a_count` and `0..b_count` on each side.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteGraph {
    mu: Rational,
    lambda: Vec<Rational>,
    nbr_a: Vec<Vec<usize>>,
    nbr_b: Vec<Vec<usize>>,
}

/// Serialized form of a [`BipartiteGraph`]; weights are decimal or `p/q` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BipartiteDocument {
    pub a: usize,
    pub b: usize,
    pub edges: Vec<[usize; 2]>,
    pub mu: String,
    pub lambda: Vec<String>,
}

impl BipartiteGraph {
    /// Builds the graph from `(a, b)` edges. Duplicate edges collapse.
    pub fn new(a_count: usize, edges: &[(usize, usize)], mu: Rational, lambda: Vec<Rational>) -> Result<Self> {
        let b_count = lambda.len();
        if mu < 0 || lambda.iter().any(|l| *l < 0) {
            return Err(Error::contract("bipartite weights must be nonnegative"));
        }
        let mut nbr_a = vec![Vec::new(); a_count];
        let mut nbr_b = vec![Vec::new(); b_count];
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= a_count || b >= b_count {
                return Err(Error::contract(format!(
                    "edges[{i}] = ({a}, {b}) is outside |A| = {a_count}, |B| = {b_count}"
                )));
            }
            nbr_a[a].push(b);
            nbr_b[b].push(a);
        }
        for list in nbr_a.iter_mut().chain(nbr_b.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Ok(BipartiteGraph { mu, lambda, nbr_a, nbr_b })
    }

    pub fn a_count(&self) -> usize {
        self.nbr_a.len()
    }

    pub fn b_count(&self) -> usize {
        self.nbr_b.len()
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn lambda(&self, u: usize) -> &Rational {
        &self.lambda[u]
    }

    pub fn neighbors_of_a(&self, v: usize) -> &[usize] {
        &self.nbr_a[v]
    }

    pub fn neighbors_of_b(&self, u: usize) -> &[usize] {
        &self.nbr_b[u]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nbr_a
            .iter()
            .enumerate()
            .flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b)))
    }

    /// `d(u)` for `u ∈ B`.
    pub fn degree_b(&self, u: usize) -> usize {
        self.nbr_b[u].len()
    }

    /// `d_{N(u)}`: the least degree among the neighbors of `u ∈ B`, or `None`
    /// when `u` is isolated.
    pub fn min_neighbor_degree(&self, u: usize) -> Option<usize> {
        self.nbr_b[u].iter().map(|&v| self.nbr_a[v].len()).min()
    }

    pub fn to_document(&self) -> BipartiteDocument {
        BipartiteDocument {
            a: self.a_count(),
            b: self.b_count(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
            mu: self.mu.to_string(),
            lambda: self.lambda.iter().map(|l| l.to_string()).collect(),
        }
    }

    pub fn from_document(doc: &BipartiteDocument) -> Result<Self> {
        if doc.lambda.len() != doc.b {
            return Err(Error::contract(format!(
                "field `lambda` has {} entries but `b` is {}",
                doc.lambda.len(),
                doc.b
            )));
        }
        let parse = |field: &str, s: &str| {
            s.parse::<Rational>()
                .map_err(|e| Error::contract(format!("field `{field}`: cannot parse {s:?} as a rational: {e}")))
        };
        let mu = parse("mu", &doc.mu)?;
        let lambda = doc.lambda.iter().map(|s| parse("lambda", s)).collect::<Result<_>>()?;
        let edges: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        BipartiteGraph::new(doc.a, &edges, mu, lambda)
    }
}

/// `Z(G) = Σ_{I independent} Π_{x∈I} λ_x`, the empty set contributing 1.
///
/// Enumerates subsets of the smaller side; the other side then factors
/// into independent `(1 + weight)` terms over its vertices with no chosen
/// neighbor.
pub fn independence_poly(g: &BipartiteGraph) -> Result<Rational> {
    let total = g.a_count() + g.b_count();
    if total > DEFAULT_BIPARTITE_CAP {
        return Err(Error::size("vertex count |A|+|B|", total as u128, DEFAULT_BIPARTITE_CAP as u128));
    }
    let one_plus_mu = Rational::from(&g.mu + 1u32);
    let one_plus_lambda: Vec<Rational> = g.lambda.iter().map(|l| Rational::from(l + 1u32)).collect();
    let mut z = Rational::new();
    if g.a_count() <= g.b_count() {
        let masks: Vec<u32> = (0..g.b_count()).map(|u| side_mask(&g.nbr_b[u])).collect();
        let mut mu_pow = vec![Rational::from(1)];
        for k in 1..=g.a_count() {
            mu_pow.push(Rational::from(&mu_pow[k - 1] * &g.mu));
        }
        for set in 0u32..1 << g.a_count() {
            let mut term = mu_pow[set.count_ones() as usize].clone();
            for (u, &m) in masks.iter().enumerate() {
                if m & set == 0 {
                    term *= &one_plus_lambda[u];
                }
            }
            z += term;
        }
    } else {
        let masks: Vec<u32> = (0..g.a_count()).map(|v| side_mask(&g.nbr_a[v])).collect();
        for set in 0u32..1 << g.b_count() {
            let mut term = Rational::from(1);
            for u in 0..g.b_count() {
                if set >> u & 1 == 1 {
                    term *= &g.lambda[u];
                }
            }
            for &m in &masks {
                if m & set == 0 {
                    term *= &one_plus_mu;
                }
            }
            z += term;
        }
    }
    Ok(z)
}

fn side_mask(list: &[usize]) -> u32 {
    list.iter().fold(0u32, |m, &x| m | 1 << x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(a: usize, b: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
        BipartiteGraph::new(a, edges, Rational::from(1), vec![Rational::from(1); b]).unwrap()
    }

    #[test]
    fn small_graphs() {
        assert_eq!(independence_poly(&ones(1, 1, &[(0, 0)])).unwrap(), 3);
        assert_eq!(independence_poly(&ones(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)])).unwrap(), 7);
        for m in 1..=5 {
            let edges: Vec<_> = (0..m).map(|i| (i, i)).collect();
            assert_eq!(independence_poly(&ones(m, m, &edges)).unwrap(), 3u64.pow(m as u32));
        }
        assert_eq!(independence_poly(&ones(0, 0, &[])).unwrap(), 1);
    }

    #[test]
    fn both_enumeration_sides_agree() {
        // a 3-star seen from either side, with distinct weights
        let lam = vec![Rational::from(2), Rational::from((3, 2)), Rational::from(5)];
        let star = BipartiteGraph::new(1, &[(0, 0), (0, 1), (0, 2)], Rational::from(4), lam.clone()).unwrap();
        // mu + Π(1+λ_u) = 4 + 3 * 5/2 * 6
        assert_eq!(independence_poly(&star).unwrap(), Rational::from(4) + Rational::from(45));
        let wide = BipartiteGraph::new(4, &[(0, 0), (1, 0), (2, 1)], Rational::from(2), vec![Rational::from(3); 2]).unwrap();
        // B-side enumeration: {} 3^4, {b0} 3*3^2, {b1} 3*3^3, {b0,b1} 9*3
        assert_eq!(independence_poly(&wide).unwrap(), 81 + 27 + 81 + 27);
    }

    #[test]
    fn degrees_and_errors() {
        let g = ones(2, 3, &[(0, 0), (1, 0), (1, 1), (1, 1)]);
        assert_eq!(g.degree_b(0), 2);
        assert_eq!(g.degree_b(1), 1);
        assert_eq!(g.min_neighbor_degree(1), Some(2));
        assert_eq!(g.min_neighbor_degree(2), None);
        assert!(BipartiteGraph::new(1, &[(0, 3)], Rational::from(1), vec![Rational::from(1)]).is_err());
        assert!(independence_poly(&ones(13, 14, &[])).is_err());
        let back = BipartiteGraph::from_document(&g.to_document()).unwrap();
        assert_eq!(back, g);
    }
}
