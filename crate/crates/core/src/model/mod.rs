//! Problem definitions shared by the solver, the limit profiles and the
//! analysis routines.

mod grid;
mod initial;
mod kinetics;
mod problem;
mod trajectory;

pub use grid::{GridSpec, MIN_CELLS, TRUNCATION_MARGIN};
pub use initial::{sample_initial, Bump, InitialData};
pub use kinetics::{Kinetics, KineticsKind, MonotoneTable};
pub use problem::{DomainVariant, LimitCase, ProblemSpec};
pub use trajectory::{BoundsRecord, ReactionDiagnostics, Snapshot, Trajectory, POSITIVITY_TOL};
