use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{worst_step, MemberFailure, PropertyResult};
use crate::analysis::{
    comparison_check, nonincreasing_within, reaction_mass, segregation_integral, translate_contraction_check,
    AnalysisParams,
};
use crate::error::Result;
use crate::model::{sample_initial, Bump, DomainVariant, GridSpec, InitialData, ProblemSpec, Trajectory};
use crate::profile::SelfSimilarProfile;
use crate::solver::{run, SolverConfig};

/// Pass/fail record of the verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scorecard {
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
    pub failures: Vec<MemberFailure>,
}

impl Scorecard {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed || !p.required)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.properties.iter().filter(|p| p.required && !p.passed).map(|p| p.name.as_str()).collect()
    }
}

/// Random ordered pair built from the spec's initial data: the upper member
/// adds nonnegative bumps to `u` and removes them from `v`, the lower member
/// does the opposite. Both are clipped to `[0, M]`, which keeps the order.
pub fn ordered_pair(
    spec: &ProblemSpec,
    grid: &GridSpec,
    rng: &mut impl Rng,
) -> Result<((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>))> {
    let (u, v) = sample_initial(spec, grid)?;
    let cap = spec.cap();
    let length = grid.x_right - grid.x_left;
    let (lo, hi) = (grid.x_left + 0.25 * length, grid.x_right - 0.25 * length);
    let bumps = |rng: &mut dyn rand::RngCore| -> Vec<f64> {
        let n = rng.gen_range(1..=3);
        let bs: Vec<Bump> = (0..n)
            .map(|_| Bump {
                center: rng.gen_range(lo..hi),
                width: rng.gen_range(0.02..0.1) * length,
                amplitude: rng.gen_range(0.05..0.3) * cap,
            })
            .collect();
        grid.centers().map(|x| bs.iter().map(|b| b.at(x)).sum()).collect()
    };
    let clip = |x: f64| x.clamp(0.0, cap);
    let (bu_hi, bv_hi, bu_lo, bv_lo) = (bumps(rng), bumps(rng), bumps(rng), bumps(rng));
    let upper = (
        u.iter().zip(&bu_hi).map(|(a, b)| clip(a + b)).collect(),
        v.iter().zip(&bv_hi).map(|(a, b)| clip(a - b)).collect(),
    );
    let lower = (
        u.iter().zip(&bu_lo).map(|(a, b)| clip(a - b)).collect(),
        v.iter().zip(&bv_lo).map(|(a, b)| clip(a + b)).collect(),
    );
    Ok((upper, lower))
}

/// Final-time self-convergence of `u` under three successive halvings of
/// `(dx, dt)`.
///
/// Uses the whole-line problem with the spec's diffusivities, far-field
/// values and kinetics, `k = 10`, a smoothed step of width 1, `T = 0.5` and
/// Crank–Nicolson diffusion with `dt = 0.05 dx^2 / max(d_u, d_v)`. Fine
/// solutions are restricted to the coarsest grid by cell averaging. Returns
/// the two ratios of successive `L^2` differences.
pub fn self_convergence_ratios(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<[f64; 2]> {
    const HORIZON: f64 = 0.5;
    let d_max = spec.d_u.max(spec.d_v);
    let base = ProblemSpec { variant: DomainVariant::WholeLine, k: 10.0, horizon: HORIZON, ..spec.clone() }
        .with_initial(InitialData::SmoothedStep { width: 1.0 })?;
    let half = (8.0 * (d_max * HORIZON).sqrt() + 2.0).max(20.0);
    let nx0 = (2.0 * half / 0.2).ceil() as usize;
    let dx0 = 2.0 * half / nx0 as f64;
    let dt0 = 0.05 * dx0 * dx0 / d_max;
    let cfg = SolverConfig { diffusion_theta: 0.5, ..*cfg };
    let finals = (0..4)
        .into_par_iter()
        .map(|level| {
            let grid = GridSpec::new(-half, half, nx0 << level, dt0 / (1u32 << level) as f64, Vec::new())?;
            let traj = run(&base, &grid, &cfg)?;
            if let Some(f) = traj.failure {
                return Err(crate::Error::Internal(f));
            }
            let mut u = traj.final_snapshot().u.clone();
            for _ in 0..level {
                u = u.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect();
            }
            Ok(u)
        })
        .collect::<Result<Vec<_>>>()?;
    let diff = |a: &[f64], b: &[f64]| (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() * dx0).sqrt();
    let d: Vec<f64> = finals.windows(2).map(|w| diff(&w[0], &w[1])).collect();
    Ok([d[0] / d[1], d[1] / d[2]])
}

/// Runs the full property suite on `spec`.
///
/// * bounds and reaction conservation of the run itself,
/// * comparison on `comparison_pairs` seeded ordered pairs,
/// * translate contraction by `xi_shift` cells,
/// * segregation trend and reaction-mass ratio along the ladder
///   `k_b {1, 10, 100}`, `k_b = max(k, 100)`,
/// * residuals of the associated limit profile,
/// * solver self-convergence.
pub fn verify(
    spec: &ProblemSpec,
    grid: &GridSpec,
    cfg: &SolverConfig,
    params: &AnalysisParams,
    seed: u64,
) -> Result<Scorecard> {
    params.validate()?;
    cfg.validate()?;
    grid.validate(spec)?;
    let tol = &params.tolerances;
    let cap = spec.cap();
    let mut failures = Vec::new();
    let mut properties = Vec::new();
    let note_failure = |failures: &mut Vec<MemberFailure>, value: f64, traj: &Trajectory| {
        if let Some(m) = &traj.failure {
            failures.push(MemberFailure { value, message: m.clone() });
        }
    };

    let traj = run(spec, grid, cfg)?;
    note_failure(&mut failures, spec.k, &traj);

    let b = traj.bounds;
    let excess = (-b.min_value).max(b.max_value - cap) / cap;
    properties.push(PropertyResult::required("bounds", excess <= tol.bounds, excess, tol.bounds));

    let diag = traj.diagnostics.clone().unwrap_or_default();
    let conservation_tol = 4.0 * f64::EPSILON;
    let conserved = diag.max_conservation_defect <= conservation_tol && diag.max_solve_residual <= tol.reaction_residual;
    properties.push(
        PropertyResult::required("reaction conservation", conserved, diag.max_solve_residual, tol.reaction_residual)
            .with_note(format!(
                "u - v defect {:e} (limit {:e}); solve residual relative to M",
                diag.max_conservation_defect, conservation_tol
            )),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..params.comparison_pairs).map(|_| ordered_pair(spec, grid, &mut rng)).collect::<Result<Vec<_>>>()?;
    let violations = pairs
        .par_iter()
        .map(|(hi, lo)| comparison_check(spec, grid, cfg, (&hi.0, &hi.1), (&lo.0, &lo.1)))
        .collect::<Result<Vec<_>>>()?;
    let worst = violations.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(0.0);
    properties.push(PropertyResult::required("comparison", worst <= tol.comparison * cap, worst, tol.comparison * cap));

    let dx = grid.dx();
    let xi = params.xi_shift as f64 * dx;
    let contraction = translate_contraction_check(&traj, xi)?;
    let allowed = tol.contraction * cap * xi + 10.0 * dx * dx;
    properties.push(PropertyResult::required("translate contraction", contraction.max_excess <= allowed, contraction.max_excess, allowed));

    let k_base = spec.k.max(100.0);
    let ladder: Vec<f64> = [1.0, 10.0, 100.0].iter().map(|m| m * k_base).collect();
    let ladder_runs = ladder
        .par_iter()
        .map(|&k| {
            if k == spec.k {
                Ok(traj.clone())
            } else {
                run(&spec.clone().with_k(k)?, grid, cfg)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    for (k, t) in ladder.iter().zip(&ladder_runs) {
        note_failure(&mut failures, *k, t);
    }
    let seg: Vec<f64> = ladder_runs.iter().map(segregation_integral).collect();
    properties.push(PropertyResult::required(
        "segregation trend",
        nonincreasing_within(&seg, tol.k_slack),
        worst_step(&seg),
        1.0 + tol.k_slack,
    ));
    let masses = ladder_runs.iter().map(reaction_mass).collect::<Result<Vec<_>>>()?;
    let (lo, hi) = masses.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &m| (lo.min(m), hi.max(m)));
    let ratio = if lo > 0.0 { hi / lo } else if hi == 0.0 { 1.0 } else { f64::INFINITY };
    properties.push(PropertyResult::required("reaction mass bounded", ratio <= tol.reaction_mass_ratio, ratio, tol.reaction_mass_ratio));

    let residual = SelfSimilarProfile::from_spec(spec)?.residual_report().max_residual();
    properties.push(PropertyResult::required("profile residuals", residual <= tol.profile_residual, residual, tol.profile_residual));

    let ratios = self_convergence_ratios(spec, cfg)?;
    let worst_ratio = ratios[0].min(ratios[1]);
    properties.push(
        PropertyResult::required("self-convergence", worst_ratio >= tol.self_convergence, worst_ratio, tol.self_convergence)
            .with_note(format!("refinement ratios {:.4} {:.4}", ratios[0], ratios[1])),
    );

    Ok(Scorecard { seed, properties, failures })
}
