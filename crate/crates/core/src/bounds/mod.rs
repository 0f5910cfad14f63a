//! Upper and lower bounds on antichain counts, evaluated with directed
//! rounding so that every comparison against an exact count is sound.

mod closed;
mod fp;
mod lemma35;
mod real;
mod section4;
mod two_level;

pub use closed::{
    closed_form_bounds, middle_layer_floor_holds, BoundEntry, BoundReport, Quantity, Side, Verdict, LOG_POWER,
    LOG_T_PLUS_ONE, MIDDLE_LAYER_ESTIMATE, MIDDLE_LAYER_FLOOR, MIDDLE_LAYER_LOWER, SQRT_LOG_CUBE, THREE_GRID,
};
pub use fp::{f_p, f_p_upper, FpEvaluator};
pub use lemma35::{
    bottom_half, degree_gap_check, lemma35_check, lemma35_exhaustive, lemma35_sampled, DegreeGapFailure,
    InnerFailure, Lemma35Batch, Lemma35Report,
};
pub use real::{format_sig, Enclosure, UpperReal, DEFAULT_PRECISION};
pub use section4::{
    minimal_c_closed_form, minimal_empirical_c, section4_diagnostics, Section4Diagnostics, Section4Params,
    Section4Values,
};
pub use two_level::{thm31_rhs, two_level_bound};
