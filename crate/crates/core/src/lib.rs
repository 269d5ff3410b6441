//! Fast-reaction limits of two-species reaction–diffusion fronts on the
//! whole line and the half line.
//!
//! * [`model`]: problem definitions, kinetics, initial data and grids.
//! * [`profile`]: closed-form self-similar limit profiles and their
//!   free-boundary constants.
//! * [`solver`]: positivity-preserving Strang-split finite-difference solver.
//! * [`analysis`]: window norms, segregation, reaction mass, front tracking
//!   and property checks against the limit profiles.
//! * [`sweep`]: parameter sweeps and the verification suite built on the
//!   pieces above.

pub mod analysis;
pub mod error;
pub mod model;
pub mod profile;
pub mod root;
pub mod solver;
pub mod special;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    sample_initial, Bump, DomainVariant, GridSpec, InitialData, Kinetics, KineticsKind, LimitCase,
    MonotoneTable, ProblemSpec, Snapshot, Trajectory,
};
pub use profile::{
    classify_sign, solve_free_boundary, ProfileParams, ProfileResidualReport, SelfSimilarProfile, Side,
    SignClass,
};
pub use solver::{run, run_from, SolverConfig};
