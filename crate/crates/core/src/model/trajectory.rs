use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::problem::ProblemSpec;

/// Relative positivity/cap tolerance: states must stay in
/// `[-POSITIVITY_TOL * M, M + POSITIVITY_TOL * M]`.
pub const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Snapshot {
    /// `w = u - v`.
    pub fn w(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(u, v)| u - v).collect()
    }
}

/// Bookkeeping from the reaction substeps.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReactionDiagnostics {
    /// Mass removed from `u` (equivalently `v`) during each full step,
    /// `sum_i dx (u_i - u_i')` over both half substeps.
    pub step_mass: Vec<f64>,
    /// `sum dt' dx k F(u', v')` accumulated over the same substeps. Equals the
    /// removed mass when every implicit solve is exact.
    pub rate_quadrature: f64,
    /// Largest `|(u' - v') - (u - v)| / M` over all cells and substeps.
    pub max_conservation_defect: f64,
    /// Largest implicit-equation residual `|u' + h k F(u', v') - u| / M`.
    pub max_solve_residual: f64,
    pub substeps: usize,
}

impl ReactionDiagnostics {
    pub fn total_mass(&self) -> f64 {
        self.step_mass.iter().sum()
    }
}

/// Extreme values seen over every step of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub min_value: f64,
    pub max_value: f64,
    pub cap: f64,
}

impl BoundsRecord {
    pub fn new(cap: f64) -> Self {
        Self { min_value: f64::INFINITY, max_value: f64::NEG_INFINITY, cap }
    }

    pub fn observe(&mut self, values: &[f64]) {
        for &x in values {
            self.min_value = self.min_value.min(x);
            self.max_value = self.max_value.max(x);
        }
    }

    pub fn held(&self) -> bool {
        let tol = POSITIVITY_TOL * self.cap;
        self.min_value >= -tol && self.max_value <= self.cap + tol
    }
}

/// Output of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub spec: ProblemSpec,
    pub grid: GridSpec,
    /// Snapshot at `t = 0` followed by the requested snapshot times.
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Option<ReactionDiagnostics>,
    pub bounds: BoundsRecord,
    /// Set when the run stopped early; `snapshots` keeps what was reached.
    pub failure: Option<String>,
}

impl Trajectory {
    pub fn x(&self) -> Vec<f64> {
        self.grid.centers().collect()
    }

    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory always holds the initial snapshot")
    }

    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-9 * t.abs().max(1.0))
    }

    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}
