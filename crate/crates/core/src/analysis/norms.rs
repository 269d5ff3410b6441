use super::quadrature::{trapezoid, trapezoid_window};
use crate::error::{invalid, Result};
use crate::model::{DomainVariant, Snapshot, Trajectory};
use crate::profile::SelfSimilarProfile;

/// `(-J, J)` on the whole line, `(0, J)` on the half line; rejects windows
/// that leave the grid.
pub fn window_bounds(traj: &Trajectory, half_width: f64) -> Result<(f64, f64)> {
    if !(half_width >= 0.0) {
        return invalid(format!("window half-width must be >= 0, got {half_width}"));
    }
    let (lo, hi) = match traj.spec.variant {
        DomainVariant::WholeLine => (-half_width, half_width),
        DomainVariant::HalfLine => (0.0, half_width),
    };
    if lo < traj.grid.x_left || hi > traj.grid.x_right {
        return invalid(format!(
            "window [{lo}, {hi}] exceeds grid [{}, {}]",
            traj.grid.x_left, traj.grid.x_right
        ));
    }
    Ok((lo, hi))
}

/// Squared deviations of `(u, v)` from the limit pair at the snapshot time.
fn profile_sq_errors(x: &[f64], snap: &Snapshot, prof: &SelfSimilarProfile) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut eu = Vec::with_capacity(x.len());
    let mut ev = Vec::with_capacity(x.len());
    for (i, &xi) in x.iter().enumerate() {
        let (u, v) = prof.limit_uv(xi, snap.t)?;
        eu.push((snap.u[i] - u).powi(2));
        ev.push((snap.v[i] - v).powi(2));
    }
    Ok((eu, ev))
}

fn snapshots_from(traj: &Trajectory, t_lo: f64) -> Result<Vec<&Snapshot>> {
    let snaps: Vec<&Snapshot> = traj.snapshots.iter().filter(|s| s.t > 0.0 && s.t >= t_lo * (1.0 - 1e-12)).collect();
    if snaps.len() < 2 {
        return invalid(format!("need at least two snapshots in [{t_lo}, T], found {}", snaps.len()));
    }
    Ok(snaps)
}

fn time_trapezoid(times: &[f64], values: &[f64]) -> f64 {
    trapezoid(times, values)
}

/// Space-time `L^2((-J, J) x (t_lo, T))` distance of `(u^k, v^k)` from the
/// limit `(w^+, -w^-)`.
pub fn l2_window_error(traj: &Trajectory, prof: &SelfSimilarProfile, half_width: f64, t_lo: f64) -> Result<(f64, f64)> {
    let (lo, hi) = window_bounds(traj, half_width)?;
    let snaps = snapshots_from(traj, t_lo)?;
    let x = traj.x();
    let mut times = Vec::with_capacity(snaps.len());
    let mut iu = Vec::with_capacity(snaps.len());
    let mut iv = Vec::with_capacity(snaps.len());
    for s in snaps {
        let (eu, ev) = profile_sq_errors(&x, s, prof)?;
        times.push(s.t);
        iu.push(trapezoid_window(&x, &eu, lo, hi));
        iv.push(trapezoid_window(&x, &ev, lo, hi));
    }
    Ok((time_trapezoid(&times, &iu).sqrt(), time_trapezoid(&times, &iv).sqrt()))
}

/// Space-time `L^2` window distance between two runs on the same grid and
/// snapshot schedule.
pub fn l2_window_distance(a: &Trajectory, b: &Trajectory, half_width: f64, t_lo: f64) -> Result<(f64, f64)> {
    if a.grid.nx != b.grid.nx || a.grid.x_left != b.grid.x_left || a.grid.x_right != b.grid.x_right {
        return invalid("trajectories live on different grids");
    }
    let (lo, hi) = window_bounds(a, half_width)?;
    let sa = snapshots_from(a, t_lo)?;
    let sb = snapshots_from(b, t_lo)?;
    if sa.len() != sb.len() || sa.iter().zip(&sb).any(|(p, q)| (p.t - q.t).abs() > 1e-12 * p.t.max(1.0)) {
        return invalid("trajectories have different snapshot times");
    }
    let x = a.x();
    let mut times = Vec::new();
    let mut iu = Vec::new();
    let mut iv = Vec::new();
    for (p, q) in sa.iter().zip(&sb) {
        let du: Vec<f64> = p.u.iter().zip(&q.u).map(|(x, y)| (x - y).powi(2)).collect();
        let dv: Vec<f64> = p.v.iter().zip(&q.v).map(|(x, y)| (x - y).powi(2)).collect();
        times.push(p.t);
        iu.push(trapezoid_window(&x, &du, lo, hi));
        iv.push(trapezoid_window(&x, &dv, lo, hi));
    }
    Ok((time_trapezoid(&times, &iu).sqrt(), time_trapezoid(&times, &iv).sqrt()))
}

/// Long-time error in similarity scaling:
/// `(1/sqrt(t)) int_{|y| < J sqrt(t)} |u(y, t) - f^+(y / sqrt(t))|^2 dy`
/// and its `v` analogue.
pub fn kamin_rescaled_error(traj: &Trajectory, prof: &SelfSimilarProfile, t_eval: f64, half_width: f64) -> Result<(f64, f64)> {
    let snap = traj
        .snapshot_at(t_eval)
        .filter(|s| s.t > 0.0)
        .ok_or_else(|| crate::Error::InvalidInput(format!("no snapshot at t = {t_eval}")))?;
    let root_t = snap.t.sqrt();
    let (lo, hi) = window_bounds(traj, half_width * root_t)?;
    let x = traj.x();
    let (eu, ev) = profile_sq_errors(&x, snap, prof)?;
    Ok((trapezoid_window(&x, &eu, lo, hi) / root_t, trapezoid_window(&x, &ev, lo, hi) / root_t))
}

/// `int int u v dx dt` over the grid and all snapshots.
pub fn segregation_integral(traj: &Trajectory) -> f64 {
    let x = traj.x();
    let times: Vec<f64> = traj.snapshots.iter().map(|s| s.t).collect();
    let per_time: Vec<f64> = traj
        .snapshots
        .iter()
        .map(|s| {
            let uv: Vec<f64> = s.u.iter().zip(&s.v).map(|(u, v)| u * v).collect();
            trapezoid(&x, &uv)
        })
        .collect();
    time_trapezoid(&times, &per_time)
}

/// Total `int int k F(u, v) dx dt` removed by the solver.
pub fn reaction_mass(traj: &Trajectory) -> Result<f64> {
    match &traj.diagnostics {
        Some(d) => Ok(d.total_mass()),
        None => invalid("trajectory carries no reaction diagnostics"),
    }
}
