use serde::{Deserialize, Serialize};

use super::problem::{DomainVariant, ProblemSpec};
use crate::error::{invalid, require_finite, Result};

/// Minimum number of cells.
pub const MIN_CELLS: usize = 16;

/// Truncation margin: each end must sit `TRUNCATION_MARGIN * sqrt(d T)` from
/// the origin.
pub const TRUNCATION_MARGIN: f64 = 8.0;

/// Uniform cell-centred grid on `[x_left, x_right]` plus the time step and
/// the snapshot schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_left: f64,
    pub x_right: f64,
    pub nx: usize,
    pub dt: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

impl GridSpec {
    pub fn new(x_left: f64, x_right: f64, nx: usize, dt: f64, snapshot_times: Vec<f64>) -> Result<Self> {
        let g = Self { x_left, x_right, nx, dt, snapshot_times };
        g.check_shape()?;
        Ok(g)
    }

    /// Evenly spaced snapshots `every, 2 every, ...` up to and including `horizon`.
    pub fn uniform_snapshots(every: f64, horizon: f64) -> Vec<f64> {
        let n = (horizon / every).round().max(1.0) as usize;
        (1..=n).map(|i| horizon * i as f64 / n as f64).collect()
    }

    fn check_shape(&self) -> Result<()> {
        require_finite("x_left", self.x_left)?;
        require_finite("x_right", self.x_right)?;
        require_finite("dt", self.dt)?;
        if self.nx < MIN_CELLS {
            return invalid(format!("nx must be >= {MIN_CELLS}, got {}", self.nx));
        }
        if self.x_right <= self.x_left {
            return invalid("x_right must exceed x_left");
        }
        if self.dt <= 0.0 {
            return invalid("dt must be > 0");
        }
        for w in self.snapshot_times.windows(2) {
            if w[1] <= w[0] {
                return invalid("snapshot_times must be strictly increasing");
            }
        }
        Ok(())
    }

    /// Full check against a problem: domain placement, truncation margin and
    /// snapshot range.
    pub fn validate(&self, spec: &ProblemSpec) -> Result<()> {
        self.check_shape()?;
        match spec.variant {
            DomainVariant::WholeLine => {
                if !(self.x_left < 0.0 && self.x_right > 0.0) {
                    return invalid("whole-line grid must satisfy x_left < 0 < x_right");
                }
            }
            DomainVariant::HalfLine => {
                if self.x_left != 0.0 {
                    return invalid("half-line grid must start at x_left = 0");
                }
            }
        }
        let margin = TRUNCATION_MARGIN * (spec.d_u.max(spec.d_v) * spec.horizon).sqrt();
        let reach = match spec.variant {
            DomainVariant::WholeLine => self.x_left.abs().min(self.x_right),
            DomainVariant::HalfLine => self.x_right,
        };
        if reach < margin {
            return invalid(format!(
                "domain too short: ends must be at least {margin:.4} from the origin, got {reach}"
            ));
        }
        if let (Some(&first), Some(&last)) = (self.snapshot_times.first(), self.snapshot_times.last()) {
            if first <= 0.0 || last > spec.horizon * (1.0 + 1e-12) {
                return invalid("snapshot_times must lie in (0, horizon]");
            }
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.nx as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        let dx = self.dx();
        (0..self.nx).map(move |i| self.x_left + (i as f64 + 0.5) * dx)
    }

    /// Index of the cell containing `x`, clamped to the grid.
    pub fn index_of(&self, x: f64) -> usize {
        let i = ((x - self.x_left) / self.dx()).floor();
        (i.max(0.0) as usize).min(self.nx - 1)
    }
}
