use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{DomainVariant, GridSpec, ProblemSpec, Trajectory};
use crate::solver::{run_from, SolverConfig};

/// Runs an ordered pair of initial data (`u_hi >= u_lo`, `v_hi <= v_lo`) and
/// returns the largest order violation `max(u_lo - u_hi, v_hi - v_lo)` over
/// all cells and snapshots. Nonpositive when the order is kept.
pub fn comparison_check(
    spec: &ProblemSpec,
    grid: &GridSpec,
    cfg: &SolverConfig,
    upper: (&[f64], &[f64]),
    lower: (&[f64], &[f64]),
) -> Result<f64> {
    let (u_hi, v_hi) = upper;
    let (u_lo, v_lo) = lower;
    if u_hi.len() != grid.nx || u_lo.len() != grid.nx || v_hi.len() != grid.nx || v_lo.len() != grid.nx {
        return invalid("initial arrays must have nx entries");
    }
    let ordered = u_hi.iter().zip(u_lo).all(|(a, b)| a >= b) && v_hi.iter().zip(v_lo).all(|(a, b)| a <= b);
    if !ordered {
        return invalid("comparison pair is not ordered (need u_hi >= u_lo and v_hi <= v_lo)");
    }
    let (hi, lo) = rayon::join(
        || run_from(spec, grid, cfg, u_hi.to_vec(), v_hi.to_vec()),
        || run_from(spec, grid, cfg, u_lo.to_vec(), v_lo.to_vec()),
    );
    let (hi, lo) = (hi?, lo?);
    for t in [&hi, &lo] {
        if let Some(f) = &t.failure {
            return Err(Error::Internal(f.clone()));
        }
    }
    let mut worst = f64::NEG_INFINITY;
    for (a, b) in hi.snapshots.iter().zip(&lo.snapshots) {
        for i in 0..grid.nx {
            worst = worst.max(b.u[i] - a.u[i]).max(a.v[i] - b.v[i]);
        }
    }
    Ok(worst)
}

/// Discrete `L^1` translate distance per snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    /// `(t, int |u(x) - u(x + xi)| + |v(x) - v(x + xi)| dx)` per snapshot.
    pub lhs: Vec<(f64, f64)>,
    /// The same functional at `t = 0`.
    pub rhs: f64,
    /// `max_t lhs(t) - rhs`.
    pub max_excess: f64,
}

/// Boundary cells excluded from the translate sums.
const EXCLUDED_CELLS: usize = 2;

/// `L^1` distance between each snapshot and its translate by `shift`, which
/// must be a whole number of cells. On the half line only `x > 4 |shift|`
/// contributes.
pub fn translate_contraction_check(traj: &Trajectory, shift: f64) -> Result<ContractionReport> {
    let dx = traj.grid.dx();
    let cells = shift.abs() / dx;
    let s = cells.round();
    if !shift.is_finite() || (cells - s).abs() > 1e-9 * cells.max(1.0) {
        return invalid(format!("shift {shift} is not a multiple of dx = {dx}"));
    }
    let s = s as usize;
    let nx = traj.grid.nx;
    if s + 2 * EXCLUDED_CELLS >= nx {
        return invalid("shift longer than the grid interior");
    }
    let first = match traj.spec.variant {
        DomainVariant::WholeLine => EXCLUDED_CELLS,
        DomainVariant::HalfLine => {
            let r = 4.0 * shift.abs();
            traj.grid.centers().position(|x| x > r).unwrap_or(nx).max(EXCLUDED_CELLS)
        }
    };
    let last = nx - EXCLUDED_CELLS - s; // exclusive
    let functional = |u: &[f64], v: &[f64]| -> f64 {
        (first..last.max(first)).map(|i| (u[i] - u[i + s]).abs() + (v[i] - v[i + s]).abs()).sum::<f64>() * dx
    };
    let lhs: Vec<(f64, f64)> = traj.snapshots.iter().map(|sn| (sn.t, functional(&sn.u, &sn.v))).collect();
    let rhs = traj
        .snapshots
        .first()
        .filter(|s0| s0.t == 0.0)
        .map(|s0| functional(&s0.u, &s0.v))
        .ok_or_else(|| Error::InvalidInput("trajectory lacks its t = 0 snapshot".into()))?;
    let max_excess = lhs.iter().map(|&(_, l)| l - rhs).fold(f64::NEG_INFINITY, f64::max);
    Ok(ContractionReport { lhs, rhs, max_excess })
}
