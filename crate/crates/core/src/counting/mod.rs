//! Exact antichain counts, weighted antichain sums and bipartite
//! independence polynomials.

mod bipartite;
mod dp;
mod oracle;
mod weighted;

pub use bipartite::{independence_poly, BipartiteDocument, BipartiteGraph, DEFAULT_BIPARTITE_CAP};
pub use dp::{count_antichains_dp, count_antichains_dp_with_cap, DEFAULT_DP_WIDTH_CAP};
pub use oracle::{count_antichains_oracle, count_antichains_oracle_with_cap, DEFAULT_ORACLE_CAP};
pub use weighted::{
    weighted_antichain_sum, weighted_antichain_sum_enumerated, weighted_antichain_sum_with_cap, WeightAssignment,
    DEFAULT_WEIGHTED_WIDTH_CAP,
};

/// Version tag of the counting engines, part of every cache key.
pub const ENGINE_VERSION: &str = "sos-1";
