//! Quantitative checks of solver output against the self-similar limits and
//! the structural properties of the finite-`k` problem.
//!
//! Every integral is a trapezoidal rule on the stored grid and snapshot
//! times.

mod front;
mod norms;
mod properties;
mod quadrature;
mod report;

pub use front::{fit_sqrt_law, track_free_boundary, FrontTrack, SqrtFit};
pub use norms::{
    kamin_rescaled_error, l2_window_distance, l2_window_error, reaction_mass, segregation_integral,
    window_bounds,
};
pub use properties::{comparison_check, translate_contraction_check, ContractionReport};
pub use quadrature::{trapezoid, trapezoid_window};
pub use report::{
    csv_row, format_g17, nonincreasing_within, strictly_decreasing, AnalysisParams, ConvergenceEntry, ConvergenceReport,
    SweepAxis, Tolerances,
};
