//! Points of `[t]^n`, explicit graded posets and their induced subposets.

mod format;
pub mod grid;
mod leveled;
mod point;
mod subposet;

pub use format::PosetDocument;
pub use grid::{
    build_grid, build_grid_with_budget, check_budget, count_low_points, grid_size, level_size, level_sizes, middle_layer_size,
    middle_rank, DEFAULT_NODE_BUDGET,
};
pub use leveled::{ComparabilityIndex, Degree, GridOrigin, LeveledPoset, NodeLabel};
pub use point::Point;
pub use subposet::{SubposetMode, SubposetSpec};
