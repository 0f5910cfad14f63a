//! Exact antichain counting on graded posets and `[t]^n`, the bracket-matching
//! chain decomposition, the recursive upper-bound functional `f_P`, closed-form
//! bounds with directed rounding, and checkable entropy inequalities.

mod bits;
pub mod error;
pub mod chains;
pub mod bounds;
pub mod counting;
pub mod entropy;
pub mod poset;
pub mod random;

pub use bits::BitSet;
pub use error::{Error, Result};
