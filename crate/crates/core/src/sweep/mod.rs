//! Parameter sweeps, the long-time study and the verification suite.
//!
//! Members run on the rayon pool; results are collected in input order, so
//! the reports do not depend on the number of workers.

mod verify;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    fit_sqrt_law, kamin_rescaled_error, l2_window_distance, l2_window_error, nonincreasing_within, reaction_mass,
    segregation_integral, strictly_decreasing, track_free_boundary, AnalysisParams, ConvergenceEntry,
    ConvergenceReport, SweepAxis,
};
use crate::error::{invalid, Result};
use crate::model::{DomainVariant, GridSpec, ProblemSpec, Trajectory};
use crate::profile::SelfSimilarProfile;
use crate::solver::{run, SolverConfig};

pub use verify::{ordered_pair, self_convergence_ratios, verify, Scorecard};

/// Outcome of one named property check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    /// Informational results never fail a run.
    pub required: bool,
    pub measured: f64,
    pub threshold: f64,
    pub note: String,
}

impl PropertyResult {
    pub fn required(name: &str, passed: bool, measured: f64, threshold: f64) -> Self {
        PropertyResult { name: name.into(), passed, required: true, measured, threshold, note: String::new() }
    }

    pub fn informational(name: &str, passed: bool, measured: f64, threshold: f64) -> Self {
        PropertyResult { required: false, ..Self::required(name, passed, measured, threshold) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// A sweep member whose run stopped early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberFailure {
    pub value: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub report: ConvergenceReport,
    /// The `d_v = 0` reference run of a `d_v` sweep.
    pub reference: Option<ConvergenceEntry>,
    pub properties: Vec<PropertyResult>,
    pub failures: Vec<MemberFailure>,
}

impl SweepOutcome {
    /// Some member failed; `report` holds only the successful ones.
    pub fn partial(&self) -> bool {
        !self.failures.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed || !p.required)
    }
}

fn check_axis_values(values: &[f64], allow_zero: bool) -> Result<()> {
    if values.is_empty() {
        return invalid("sweep needs at least one value");
    }
    if values.iter().any(|v| !v.is_finite() || *v < 0.0 || (!allow_zero && *v == 0.0)) {
        return invalid("sweep values must be finite and positive");
    }
    if !values.windows(2).all(|w| w[0] < w[1]) {
        return invalid("sweep values must be strictly increasing");
    }
    Ok(())
}

fn fitted(traj: &Trajectory, prof: &SelfSimilarProfile) -> (f64, f64) {
    let track = track_free_boundary(traj, Some(prof));
    match fit_sqrt_law(&track.points) {
        Ok(f) => (f.a, f.stderr),
        Err(_) => (f64::NAN, f64::NAN),
    }
}

/// Runs every spec in parallel and splits the results into successes and
/// failures, keeping input order.
fn run_members(
    members: Vec<(f64, ProblemSpec)>,
    grid: &GridSpec,
    cfg: &SolverConfig,
) -> Result<(Vec<(f64, Trajectory)>, Vec<MemberFailure>)> {
    let runs: Vec<(f64, Result<Trajectory>)> =
        members.into_par_iter().map(|(value, spec)| (value, run(&spec, grid, cfg))).collect();
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (value, r) in runs {
        let traj = r?;
        match &traj.failure {
            Some(message) => failed.push(MemberFailure { value, message: message.clone() }),
            None => ok.push((value, traj)),
        }
    }
    Ok((ok, failed))
}

/// Sweep over the rate constant `k` against the self-similar limit of `spec`.
///
/// Required properties: the window error of `u` and the segregation integral
/// are nonincreasing in `k` within `k_slack` per step.
pub fn k_sweep(
    spec: &ProblemSpec,
    grid: &GridSpec,
    cfg: &SolverConfig,
    ks: &[f64],
    params: &AnalysisParams,
) -> Result<SweepOutcome> {
    check_axis_values(ks, false)?;
    params.validate()?;
    grid.validate(spec)?;
    let prof = SelfSimilarProfile::from_spec(spec)?;
    let members = ks.iter().map(|&k| Ok((k, spec.clone().with_k(k)?))).collect::<Result<Vec<_>>>()?;
    let (runs, failures) = run_members(members, grid, cfg)?;
    let t_lo = params.t_lo(spec.horizon);
    let entries = runs
        .par_iter()
        .map(|(k, traj)| {
            let (eu, ev) = l2_window_error(traj, &prof, params.window, t_lo)?;
            let (a, se) = fitted(traj, &prof);
            Ok(ConvergenceEntry {
                value: *k,
                l2_window_error_u: eu,
                l2_window_error_v: ev,
                segregation_integral: segregation_integral(traj),
                reaction_mass: reaction_mass(traj)?,
                fitted_a: a,
                fitted_a_stderr: se,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = ConvergenceReport::new(SweepAxis::K, entries, prof)?;
    let slack = params.tolerances.k_slack;
    let err_u = report.column(|e| e.l2_window_error_u);
    let seg = report.column(|e| e.segregation_integral);
    let properties = vec![
        PropertyResult::required("window error nonincreasing in k", nonincreasing_within(&err_u, slack), worst_step(&err_u), 1.0 + slack),
        PropertyResult::required("segregation nonincreasing in k", nonincreasing_within(&seg, slack), worst_step(&seg), 1.0 + slack),
    ];
    Ok(SweepOutcome { report, reference: None, properties, failures })
}

/// Largest step ratio `values[i+1] / values[i]`; 0 for fewer than two values.
pub fn worst_step(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
}

/// Sweep over the substrate diffusivity against a `d_v = 0` reference run
/// of the same spec.
///
/// Entry errors are the window distances to the reference run. Required
/// property: both distances strictly decrease as `d_v` decreases.
pub fn dv_sweep(
    spec: &ProblemSpec,
    grid: &GridSpec,
    cfg: &SolverConfig,
    dvs: &[f64],
    params: &AnalysisParams,
) -> Result<SweepOutcome> {
    check_axis_values(dvs, false)?;
    params.validate()?;
    let base = spec.clone().with_d_v(0.0)?;
    grid.validate(&spec.clone().with_d_v(*dvs.last().expect("nonempty"))?)?;
    let prof = SelfSimilarProfile::from_spec(&base)?;
    let mut members = vec![(0.0, base)];
    for &dv in dvs {
        members.push((dv, spec.clone().with_d_v(dv)?));
    }
    let (mut runs, failures) = run_members(members, grid, cfg)?;
    let t_lo = params.t_lo(spec.horizon);
    let reference_traj = match runs.first() {
        Some((v, _)) if *v == 0.0 => Some(runs.remove(0).1),
        _ => None,
    };
    let Some(reference_traj) = reference_traj else {
        let report = ConvergenceReport::new(SweepAxis::DV, Vec::new(), prof)?;
        return Ok(SweepOutcome { report, reference: None, properties: Vec::new(), failures });
    };
    let entry = |value: f64, traj: &Trajectory| -> Result<ConvergenceEntry> {
        let (du, dv) = if value == 0.0 { (0.0, 0.0) } else { l2_window_distance(traj, &reference_traj, params.window, t_lo)? };
        let member_prof = SelfSimilarProfile::from_spec(&traj.spec)?;
        let (a, se) = fitted(traj, &member_prof);
        Ok(ConvergenceEntry {
            value,
            l2_window_error_u: du,
            l2_window_error_v: dv,
            segregation_integral: segregation_integral(traj),
            reaction_mass: reaction_mass(traj)?,
            fitted_a: a,
            fitted_a_stderr: se,
        })
    };
    let reference = entry(0.0, &reference_traj)?;
    let entries = runs.par_iter().map(|(v, t)| entry(*v, t)).collect::<Result<Vec<_>>>()?;
    let report = ConvergenceReport::new(SweepAxis::DV, entries, prof)?;
    // distances ascend strictly with d_v
    let mut du = report.column(|e| e.l2_window_error_u);
    let mut dv = report.column(|e| e.l2_window_error_v);
    du.reverse();
    dv.reverse();
    let properties = vec![
        PropertyResult::required("distance to d_v = 0 decreasing (u)", strictly_decreasing(&du), worst_step(&du), 1.0),
        PropertyResult::required("distance to d_v = 0 decreasing (v)", strictly_decreasing(&dv), worst_step(&dv), 1.0),
    ];
    Ok(SweepOutcome { report, reference: Some(reference), properties, failures })
}

/// Single run to the largest of `times` at fixed `k`, evaluating the
/// rescaled long-time error at each time.
///
/// Entry errors are `kamin_rescaled_error` values; segregation is the
/// instantaneous `int u v dx` and reaction mass is that of the whole run.
/// A sequence that is not nonincreasing within `longtime_slack` but still
/// ends below its start is reported as informational.
pub fn longtime(
    spec: &ProblemSpec,
    grid: &GridSpec,
    cfg: &SolverConfig,
    times: &[f64],
    params: &AnalysisParams,
) -> Result<SweepOutcome> {
    check_axis_values(times, false)?;
    params.validate()?;
    let t_max = *times.last().expect("nonempty");
    let mut spec = spec.clone();
    spec.horizon = t_max;
    spec.validate()?;
    let grid = GridSpec { snapshot_times: times.to_vec(), ..grid.clone() };
    grid.validate(&spec)?;
    let reach = params.window * t_max.sqrt();
    let lo = match spec.variant {
        DomainVariant::WholeLine => -reach,
        DomainVariant::HalfLine => 0.0,
    };
    if lo < grid.x_left || reach > grid.x_right {
        return invalid(format!(
            "window J sqrt(t_max) = {reach} exceeds grid [{}, {}]",
            grid.x_left, grid.x_right
        ));
    }
    let prof = SelfSimilarProfile::from_spec(&spec)?;
    let traj = run(&spec, &grid, cfg)?;
    let mut failures = Vec::new();
    if let Some(message) = &traj.failure {
        failures.push(MemberFailure { value: t_max, message: message.clone() });
    }
    let x = traj.x();
    let mass = reaction_mass(&traj)?;
    let (a, se) = fitted(&traj, &prof);
    let mut entries = Vec::new();
    for &t in times {
        let Some(snap) = traj.snapshot_at(t) else { continue };
        let (eu, ev) = kamin_rescaled_error(&traj, &prof, t, params.window)?;
        let uv: Vec<f64> = snap.u.iter().zip(&snap.v).map(|(u, v)| u * v).collect();
        entries.push(ConvergenceEntry {
            value: t,
            l2_window_error_u: eu,
            l2_window_error_v: ev,
            segregation_integral: crate::analysis::trapezoid(&x, &uv),
            reaction_mass: mass,
            fitted_a: a,
            fitted_a_stderr: se,
        });
    }
    let report = ConvergenceReport::new(SweepAxis::Time, entries, prof)?;
    let err_u = report.column(|e| e.l2_window_error_u);
    let slack = params.tolerances.longtime_slack;
    let monotone = nonincreasing_within(&err_u, slack);
    let property = if err_u.len() < 2 {
        PropertyResult::required("rescaled error decreasing in t", true, 0.0, 1.0 + slack)
            .with_note("single time: nothing to compare")
    } else if monotone {
        PropertyResult::required("rescaled error decreasing in t", true, worst_step(&err_u), 1.0 + slack)
    } else if err_u.last() < err_u.first() {
        PropertyResult::informational("rescaled error decreasing in t", false, worst_step(&err_u), 1.0 + slack)
            .with_note("non-monotone steps but decreasing overall trend")
    } else {
        PropertyResult::required("rescaled error decreasing in t", false, worst_step(&err_u), 1.0 + slack)
    };
    Ok(SweepOutcome { report, reference: None, properties: vec![property], failures })
}
