use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Result};
use segfront_core::analysis::{csv_row, SweepAxis};
use segfront_core::model::{DomainVariant, Trajectory};
use segfront_core::sweep::{self, SweepOutcome};
use segfront_core::{run, SelfSimilarProfile};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::Output;

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    SolverFailure(String),
    PropertyFailure(Vec<String>),
}

impl Status {
    pub fn code(&self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::SolverFailure(_) => 2,
            Status::PropertyFailure(_) => 3,
        }
    }
}

/// Wall-clock timing of named phases.
#[derive(Default)]
pub struct Timer {
    pub phases: BTreeMap<String, f64>,
}

impl Timer {
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.phases.entry(name.to_string()).or_default() += start.elapsed().as_secs_f64();
        out
    }
}

const PROFILE_POINTS: usize = 801;

pub fn profile(cfg: &RunConfig, out: &mut Output, timer: &mut Timer) -> Result<Status> {
    let prof = timer.time("solve", || SelfSimilarProfile::from_spec(&cfg.spec))?;
    let report = prof.residual_report();
    let p = prof.params;
    let reach = 8.0 * p.d_u.max(p.d_v).sqrt() + prof.a.abs();
    let (lo, hi) = match cfg.spec.variant {
        DomainVariant::WholeLine => (-reach, reach),
        DomainVariant::HalfLine => (0.0, reach),
    };
    let mut csv = String::from("eta,f,u,v\n");
    for i in 0..PROFILE_POINTS {
        let eta = lo + (hi - lo) * i as f64 / (PROFILE_POINTS - 1) as f64;
        let f = prof.f(eta)?;
        csv.push_str(&csv_row(&[eta, f, f.max(0.0), (-f).max(0.0)]));
    }
    out.write("profile.csv", &csv)?;
    let limit = cfg.analysis.tolerances.profile_residual;
    let passed = report.max_residual() <= limit;
    #[derive(Serialize)]
    struct Header<'a> {
        profile: &'a SelfSimilarProfile,
        residuals: segfront_core::ProfileResidualReport,
        residual_limit: f64,
        passed: bool,
    }
    out.json("profile.json", &Header { profile: &prof, residuals: report, residual_limit: limit, passed })?;
    log::info!("{:?}: a = {:.17e}, max residual {:.3e}", prof.case, prof.a, report.max_residual());
    Ok(if passed { Status::Pass } else { Status::PropertyFailure(vec!["profile residuals".into()]) })
}

fn write_snapshots(traj: &Trajectory, out: &mut Output) -> Result<()> {
    let x = traj.x();
    let mut index = String::from("index,t\n");
    for (i, s) in traj.snapshots.iter().enumerate() {
        let mut csv = String::from("x,u,v,w\n");
        for j in 0..x.len() {
            csv.push_str(&csv_row(&[x[j], s.u[j], s.v[j], s.u[j] - s.v[j]]));
        }
        out.write(&format!("snapshots/snapshot_{i:04}.csv"), &csv)?;
        index.push_str(&format!("{i},{}", csv_row(&[s.t])));
    }
    out.write("snapshots.csv", &index)
}

pub fn solve(cfg: &RunConfig, out: &mut Output, timer: &mut Timer) -> Result<Status> {
    cfg.grid.validate(&cfg.spec)?;
    let traj = timer.time("run", || run(&cfg.spec, &cfg.grid, &cfg.solver))?;
    timer.time("write", || write_snapshots(&traj, out))?;
    #[derive(Serialize)]
    struct Summary<'a> {
        bounds: segfront_core::model::BoundsRecord,
        bounds_held: bool,
        reaction_mass: Option<f64>,
        rate_quadrature: Option<f64>,
        max_conservation_defect: Option<f64>,
        max_solve_residual: Option<f64>,
        substeps: Option<usize>,
        failure: &'a Option<String>,
    }
    let d = traj.diagnostics.as_ref();
    out.json(
        "trajectory.json",
        &Summary {
            bounds: traj.bounds,
            bounds_held: traj.bounds.held(),
            reaction_mass: d.map(|d| d.total_mass()),
            rate_quadrature: d.map(|d| d.rate_quadrature),
            max_conservation_defect: d.map(|d| d.max_conservation_defect),
            max_solve_residual: d.map(|d| d.max_solve_residual),
            substeps: d.map(|d| d.substeps),
            failure: &traj.failure,
        },
    )?;
    if let Some(f) = &traj.failure {
        return Ok(Status::SolverFailure(f.clone()));
    }
    if !traj.bounds.held() {
        return Ok(Status::PropertyFailure(vec!["bounds".into()]));
    }
    Ok(Status::Pass)
}

fn sweep_status(outcome: &SweepOutcome) -> Status {
    if outcome.partial() {
        let msgs: Vec<String> = outcome.failures.iter().map(|f| format!("{}: {}", f.value, f.message)).collect();
        return Status::SolverFailure(msgs.join("; "));
    }
    let failing: Vec<String> =
        outcome.properties.iter().filter(|p| p.required && !p.passed).map(|p| p.name.clone()).collect();
    if failing.is_empty() {
        Status::Pass
    } else {
        Status::PropertyFailure(failing)
    }
}

fn write_outcome(stem: &str, outcome: &SweepOutcome, out: &mut Output) -> Result<()> {
    out.write(&format!("{stem}.csv"), &outcome.report.to_csv())?;
    #[derive(Serialize)]
    struct Summary<'a> {
        #[serde(flatten)]
        outcome: &'a SweepOutcome,
        partial: bool,
        passed: bool,
    }
    out.json(&format!("{stem}.json"), &Summary { outcome, partial: outcome.partial(), passed: outcome.passed() })
}

pub fn sweep(cfg: &RunConfig, out: &mut Output, timer: &mut Timer) -> Result<Status> {
    let axis = match &cfg.sweep {
        Some(s) => s.axis,
        None => bail!("config has no [sweep] section"),
    };
    let values = cfg.sweep(axis)?;
    let outcome = timer.time("sweep", || match axis {
        SweepAxis::K => sweep::k_sweep(&cfg.spec, &cfg.grid, &cfg.solver, values, &cfg.analysis),
        SweepAxis::DV => sweep::dv_sweep(&cfg.spec, &cfg.grid, &cfg.solver, values, &cfg.analysis),
        SweepAxis::Time => Err(segfront_core::Error::InvalidInput("time sweeps run through `longtime`".into())),
    })?;
    write_outcome("sweep", &outcome, out)?;
    Ok(sweep_status(&outcome))
}

pub fn longtime(cfg: &RunConfig, out: &mut Output, timer: &mut Timer) -> Result<Status> {
    let times = cfg.sweep(SweepAxis::Time)?;
    let outcome = timer.time("run", || sweep::longtime(&cfg.spec, &cfg.grid, &cfg.solver, times, &cfg.analysis))?;
    for p in outcome.properties.iter().filter(|p| !p.note.is_empty()) {
        log::info!("{}: {}", p.name, p.note);
    }
    write_outcome("longtime", &outcome, out)?;
    Ok(sweep_status(&outcome))
}

pub fn verify(cfg: &RunConfig, out: &mut Output, timer: &mut Timer) -> Result<Status> {
    let card = timer.time("verify", || sweep::verify(&cfg.spec, &cfg.grid, &cfg.solver, &cfg.analysis, cfg.seed))?;
    #[derive(Serialize)]
    struct Summary<'a> {
        #[serde(flatten)]
        card: &'a sweep::Scorecard,
        passed: bool,
    }
    out.json("scorecard.json", &Summary { card: &card, passed: card.passed() })?;
    for p in &card.properties {
        log::info!("{} {}: {:.3e} (limit {:.3e})", if p.passed { "pass" } else { "FAIL" }, p.name, p.measured, p.threshold);
    }
    if !card.failures.is_empty() {
        let msgs: Vec<String> = card.failures.iter().map(|f| f.message.clone()).collect();
        return Ok(Status::SolverFailure(msgs.join("; ")));
    }
    let failing: Vec<String> = card.failing().iter().map(|s| s.to_string()).collect();
    Ok(if failing.is_empty() { Status::Pass } else { Status::PropertyFailure(failing) })
}
