//! Strang-split finite-difference solver.
//!
//! One step of size `dt` is reaction(`dt/2`), implicit diffusion(`dt`),
//! reaction(`dt/2`). The reaction substeps are pointwise implicit Euler
//! solves, exact in `u - v` and positivity preserving for any `k dt`. The
//! diffusion step is a theta scheme: `theta = 1` (backward Euler) is an
//! M-matrix solve and keeps every state inside `[0, M]`; `theta = 1/2`
//! (Crank–Nicolson) does so only for `dt <= dx^2 / (2 max(d_u, d_v))`.

mod operator;
mod reaction;
mod tridiag;

pub use operator::{build_operator, Boundary, DiffusionStencil, DiscreteOperator};
pub use reaction::{reaction_substep, reaction_update, ReactionUpdate};
pub use tridiag::TridiagonalLu;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{BoundsRecord, GridSpec, Kinetics, ProblemSpec, ReactionDiagnostics, Snapshot, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    StrangSplit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub scheme: Scheme,
    /// 1.0 for backward Euler, 0.5 for Crank–Nicolson.
    pub diffusion_theta: f64,
    /// Reaction solves stop at `|g| <= reaction_tol * M`.
    pub reaction_tol: f64,
    pub max_reaction_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { scheme: Scheme::StrangSplit, diffusion_theta: 1.0, reaction_tol: 1e-12, max_reaction_iters: 100 }
    }
}

impl SolverConfig {
    pub fn crank_nicolson() -> Self {
        Self { diffusion_theta: 0.5, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.diffusion_theta != 0.5 && self.diffusion_theta != 1.0 {
            return invalid(format!("diffusion_theta must be 0.5 or 1.0, got {}", self.diffusion_theta));
        }
        if !(self.reaction_tol > 0.0 && self.reaction_tol.is_finite()) {
            return invalid("reaction_tol must be positive and finite");
        }
        if self.max_reaction_iters == 0 {
            return invalid("max_reaction_iters must be >= 1");
        }
        Ok(())
    }
}

/// Implicit diffusion for one component, with factorizations cached per
/// step size.
#[derive(Debug, Clone)]
struct DiffusionSolver {
    stencil: DiffusionStencil,
    theta: f64,
    cache: Vec<(f64, TridiagonalLu)>,
    scratch: Vec<f64>,
}

impl DiffusionSolver {
    fn new(stencil: DiffusionStencil, theta: f64) -> Self {
        let n = stencil.len();
        Self { stencil, theta, cache: Vec::new(), scratch: vec![0.0; n] }
    }

    fn factor_for(&mut self, dt: f64) -> Result<usize> {
        if let Some(i) = self.cache.iter().position(|(h, _)| *h == dt) {
            return Ok(i);
        }
        let s = &self.stencil;
        let w = self.theta * dt;
        let lower: Vec<f64> = s.lower.iter().map(|&l| -w * l).collect();
        let upper: Vec<f64> = s.upper.iter().map(|&l| -w * l).collect();
        let diag: Vec<f64> = s.diag.iter().map(|&d| 1.0 - w * d).collect();
        let lu = TridiagonalLu::factor(&lower, &diag, &upper)?;
        // the main step and the landing steps before snapshots
        if self.cache.len() >= 4 {
            self.cache.remove(1);
        }
        self.cache.push((dt, lu));
        Ok(self.cache.len() - 1)
    }

    fn advance(&mut self, u: &mut [f64], dt: f64) -> Result<()> {
        let idx = self.factor_for(dt)?;
        let explicit = (1.0 - self.theta) * dt;
        let s = &self.stencil;
        if explicit > 0.0 {
            s.apply_into(u, &mut self.scratch);
            for i in 0..u.len() {
                // A u + source, with the source added implicitly below
                self.scratch[i] = u[i] + explicit * (self.scratch[i] - s.source[i]) + dt * s.source[i];
            }
        } else {
            for i in 0..u.len() {
                self.scratch[i] = u[i] + dt * s.source[i];
            }
        }
        self.cache[idx].1.solve_in_place(&mut self.scratch);
        u.copy_from_slice(&self.scratch);
        Ok(())
    }
}

/// Advances `(u, v)` through Strang steps for one problem.
#[derive(Debug, Clone)]
pub struct Stepper {
    pub op: DiscreteOperator,
    cfg: SolverConfig,
    kinetics: Kinetics,
    k: f64,
    cap: f64,
    u_diff: DiffusionSolver,
    v_diff: Option<DiffusionSolver>,
    pub diagnostics: ReactionDiagnostics,
}

impl Stepper {
    pub fn new(spec: &ProblemSpec, grid: &GridSpec, cfg: &SolverConfig) -> Result<Self> {
        spec.validate()?;
        cfg.validate()?;
        let op = build_operator(spec, grid)?;
        let d_max = spec.d_u.max(spec.d_v);
        if cfg.diffusion_theta < 1.0 && grid.dt > op.dx * op.dx / (2.0 * d_max) {
            log::warn!(
                "Crank-Nicolson with dt = {} above dx^2/(2 d_max) = {}; nonnegativity is not guaranteed",
                grid.dt,
                op.dx * op.dx / (2.0 * d_max)
            );
        }
        let u_diff = DiffusionSolver::new(op.u.clone(), cfg.diffusion_theta);
        let v_diff = op.v.clone().map(|s| DiffusionSolver::new(s, cfg.diffusion_theta));
        Ok(Self {
            op,
            cfg: *cfg,
            kinetics: spec.kinetics.clone(),
            k: spec.k,
            cap: spec.cap(),
            u_diff,
            v_diff,
            diagnostics: ReactionDiagnostics::default(),
        })
    }

    /// Applies the reaction over `h` in every cell; returns the mass removed.
    fn react(&mut self, u: &mut [f64], v: &mut [f64], h: f64) -> Result<f64> {
        if self.k == 0.0 {
            return Ok(0.0);
        }
        let tol = self.cfg.reaction_tol * self.cap;
        let dx = self.op.dx;
        let mut removed = 0.0;
        let mut rate_sum = 0.0;
        let d = &mut self.diagnostics;
        for (ui, vi) in u.iter_mut().zip(v.iter_mut()) {
            let r = reaction_update(*ui, *vi, self.k, &self.kinetics, h, tol, self.cfg.max_reaction_iters)?;
            let before = *ui - *vi;
            let defect = ((r.u - r.v) - before).abs() / self.cap;
            d.max_conservation_defect = d.max_conservation_defect.max(defect);
            d.max_solve_residual = d.max_solve_residual.max(r.residual / self.cap);
            removed += *ui - r.u;
            rate_sum += r.rate;
            *ui = r.u;
            *vi = r.v;
        }
        d.rate_quadrature += dx * h * self.k * rate_sum;
        d.substeps += 1;
        Ok(dx * removed)
    }

    /// One Strang step of size `dt`, in place.
    pub fn step(&mut self, u: &mut [f64], v: &mut [f64], dt: f64) -> Result<()> {
        let mut mass = self.react(u, v, 0.5 * dt)?;
        self.u_diff.advance(u, dt)?;
        if let Some(vd) = self.v_diff.as_mut() {
            vd.advance(v, dt)?;
        }
        mass += self.react(u, v, 0.5 * dt)?;
        self.diagnostics.step_mass.push(mass);
        Ok(())
    }
}

/// Single Strang step from a fresh stepper; see [`Stepper::step`].
pub fn step(
    spec: &ProblemSpec,
    grid: &GridSpec,
    cfg: &SolverConfig,
    u: &mut [f64],
    v: &mut [f64],
    dt: f64,
) -> Result<ReactionDiagnostics> {
    let mut s = Stepper::new(spec, grid, cfg)?;
    s.step(u, v, dt)?;
    Ok(s.diagnostics)
}

/// Integrates the spec's own initial data to the horizon.
pub fn run(spec: &ProblemSpec, grid: &GridSpec, cfg: &SolverConfig) -> Result<Trajectory> {
    let (u0, v0) = crate::model::sample_initial(spec, grid)?;
    run_from(spec, grid, cfg, u0, v0)
}

/// Integrates from explicit initial arrays.
///
/// Snapshots are recorded at `t = 0`, at every `grid.snapshot_times` entry
/// and at the horizon; the step before each is shortened to land exactly.
/// Solver failures end the run early with `Trajectory::failure` set and the
/// snapshots reached so far retained.
pub fn run_from(
    spec: &ProblemSpec,
    grid: &GridSpec,
    cfg: &SolverConfig,
    mut u: Vec<f64>,
    mut v: Vec<f64>,
) -> Result<Trajectory> {
    let mut stepper = Stepper::new(spec, grid, cfg)?;
    if u.len() != grid.nx || v.len() != grid.nx {
        return invalid("initial arrays must have nx entries");
    }
    let cap = spec.cap();
    if u.iter().chain(&v).any(|&x| !(0.0..=cap).contains(&x)) {
        return invalid(format!("initial data must lie in [0, {cap}]"));
    }
    let mut targets = grid.snapshot_times.clone();
    if targets.last().map_or(true, |&t| t < spec.horizon * (1.0 - 1e-12)) {
        targets.push(spec.horizon);
    }
    let mut bounds = BoundsRecord::new(cap);
    bounds.observe(&u);
    bounds.observe(&v);
    let mut snapshots = vec![Snapshot { t: 0.0, u: u.clone(), v: v.clone() }];
    let mut failure = None;
    let mut t = 0.0;
    'outer: for &target in &targets {
        while t < target {
            let remaining = target - t;
            let (h, lands) = if remaining <= grid.dt * (1.0 + 1e-9) { (remaining, true) } else { (grid.dt, false) };
            if let Err(e) = stepper.step(&mut u, &mut v, h) {
                failure = Some(describe_failure(&e, t));
                break 'outer;
            }
            bounds.observe(&u);
            bounds.observe(&v);
            t = if lands { target } else { t + h };
        }
        snapshots.push(Snapshot { t, u: u.clone(), v: v.clone() });
    }
    Ok(Trajectory {
        spec: spec.clone(),
        grid: grid.clone(),
        snapshots,
        diagnostics: Some(stepper.diagnostics),
        bounds,
        failure,
    })
}

fn describe_failure(e: &Error, t: f64) -> String {
    format!("solver failed at t = {t}: {e}")
}
