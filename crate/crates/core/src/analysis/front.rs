use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::Trajectory;
use crate::profile::SelfSimilarProfile;

/// Interface positions `(t, xi)` per snapshot; `missing` lists the snapshot
/// times where `w = u - v` had no sign change.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrontTrack {
    pub points: Vec<(f64, f64)>,
    pub missing: Vec<f64>,
}

/// Zero crossings of `w` by linear interpolation between neighbouring cells.
fn crossings(x: &[f64], w: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..w.len().saturating_sub(1) {
        let (a, b) = (w[i], w[i + 1]);
        if (a > 0.0) != (b > 0.0) {
            let s = if a == b { 0.5 } else { a / (a - b) };
            out.push(x[i] + s * (x[i + 1] - x[i]));
        }
    }
    out
}

/// Tracks the free boundary through every snapshot with `t > 0`.
///
/// When several crossings exist the one closest to the previous position is
/// taken; the first snapshot uses `a sqrt(t)` from `prof`, or 0.
pub fn track_free_boundary(traj: &Trajectory, prof: Option<&SelfSimilarProfile>) -> FrontTrack {
    let x = traj.x();
    let mut track = FrontTrack::default();
    let mut previous: Option<f64> = None;
    for s in traj.snapshots.iter().filter(|s| s.t > 0.0) {
        let zs = crossings(&x, &s.w());
        let reference = previous.unwrap_or_else(|| prof.map_or(0.0, |p| p.front(s.t)));
        match zs.iter().copied().min_by(|a, b| (a - reference).abs().total_cmp(&(b - reference).abs())) {
            Some(xi) => {
                track.points.push((s.t, xi));
                previous = Some(xi);
            }
            None => {
                log::warn!("no sign change of u - v at t = {}", s.t);
                track.missing.push(s.t);
            }
        }
    }
    track
}

/// Least-squares fit of `xi = a sqrt(t)` through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqrtFit {
    pub a: f64,
    pub stderr: f64,
}

pub fn fit_sqrt_law(points: &[(f64, f64)]) -> Result<SqrtFit> {
    if points.len() < 3 {
        return invalid(format!("square-root fit needs >= 3 points, got {}", points.len()));
    }
    if points.iter().any(|&(t, xi)| !(t > 0.0) || !t.is_finite() || !xi.is_finite()) {
        return invalid("square-root fit needs finite points with t > 0");
    }
    let sum_t: f64 = points.iter().map(|p| p.0).sum();
    let a = points.iter().map(|&(t, xi)| xi * t.sqrt()).sum::<f64>() / sum_t;
    let rss: f64 = points.iter().map(|&(t, xi)| (xi - a * t.sqrt()).powi(2)).sum();
    let variance = rss / (points.len() - 1) as f64;
    Ok(SqrtFit { a, stderr: (variance / sum_t).sqrt() })
}
