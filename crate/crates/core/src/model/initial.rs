//! Initial data: step profiles between the far-field states plus optional
//! compactly supported perturbations.

use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::problem::{DomainVariant, ProblemSpec};
use crate::error::{invalid, require_finite, Result};

/// `amplitude * (1 - r^2)^3` for `|r| < 1`, `r = (x - center) / width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn at(&self, x: f64) -> f64 {
        let r = (x - self.center) / self.width;
        if r.abs() >= 1.0 {
            0.0
        } else {
            let s = 1.0 - r * r;
            self.amplitude * s * s * s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// The far-field data itself: a jump at `x = 0` on the whole line, and
    /// `u = 0`, `v = V0` on the half line.
    #[default]
    SharpStep,
    /// A C^2 quintic ramp of the given width between the far-field states.
    SmoothedStep { width: f64 },
    Perturbed {
        base: Box<InitialData>,
        #[serde(default)]
        u_bumps: Vec<Bump>,
        #[serde(default)]
        v_bumps: Vec<Bump>,
    },
}

/// Quintic smootherstep, C^2 with zero first and second derivatives at the ends.
fn ramp(r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else if r >= 1.0 {
        1.0
    } else {
        r * r * r * (r * (6.0 * r - 15.0) + 10.0)
    }
}

impl InitialData {
    pub fn validate(&self) -> Result<()> {
        match self {
            InitialData::SharpStep => Ok(()),
            InitialData::SmoothedStep { width } => {
                require_finite("width", *width)?;
                if *width <= 0.0 {
                    return invalid("smoothed step width must be > 0");
                }
                Ok(())
            }
            InitialData::Perturbed { base, u_bumps, v_bumps } => {
                base.validate()?;
                for b in u_bumps.iter().chain(v_bumps) {
                    require_finite("bump center", b.center)?;
                    require_finite("bump amplitude", b.amplitude)?;
                    if !(b.width > 0.0 && b.width.is_finite()) {
                        return invalid("bump width must be positive and finite");
                    }
                }
                Ok(())
            }
        }
    }

    /// Pointwise values at `x` before the cap check.
    fn values_at(&self, variant: DomainVariant, u0: f64, v0: f64, x: f64) -> (f64, f64) {
        match self {
            InitialData::SharpStep => match variant {
                DomainVariant::WholeLine => {
                    if x < 0.0 {
                        (u0, 0.0)
                    } else if x > 0.0 {
                        (0.0, v0)
                    } else {
                        (0.5 * u0, 0.5 * v0)
                    }
                }
                DomainVariant::HalfLine => (0.0, v0),
            },
            InitialData::SmoothedStep { width } => {
                let s = match variant {
                    DomainVariant::WholeLine => ramp(x / width + 0.5),
                    DomainVariant::HalfLine => ramp(x / width),
                };
                (u0 * (1.0 - s), v0 * s)
            }
            InitialData::Perturbed { base, u_bumps, v_bumps } => {
                let (u, v) = base.values_at(variant, u0, v0, x);
                let du: f64 = u_bumps.iter().map(|b| b.at(x)).sum();
                let dv: f64 = v_bumps.iter().map(|b| b.at(x)).sum();
                (u + du, v + dv)
            }
        }
    }

    /// Samples `(u_0, v_0)` at the grid's cell centres.
    pub fn sample(&self, spec: &ProblemSpec, grid: &GridSpec) -> Result<(Vec<f64>, Vec<f64>)> {
        self.validate()?;
        let cap = spec.cap();
        let mut u = Vec::with_capacity(grid.nx);
        let mut v = Vec::with_capacity(grid.nx);
        for x in grid.centers() {
            let (ui, vi) = self.values_at(spec.variant, spec.u0, spec.v0, x);
            if !(0.0..=cap).contains(&ui) || !(0.0..=cap).contains(&vi) {
                return invalid(format!(
                    "initial data leaves [0, {cap}] at x = {x}: u = {ui}, v = {vi}"
                ));
            }
            u.push(ui);
            v.push(vi);
        }
        Ok((u, v))
    }
}

/// Samples the spec's own initial data on `grid`.
pub fn sample_initial(spec: &ProblemSpec, grid: &GridSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    grid.validate(spec)?;
    spec.initial.sample(spec, grid)
}
