mod common;

use common::*;
use segfront_core::analysis::*;
use segfront_core::model::{BoundsRecord, DomainVariant, GridSpec, ProblemSpec, Snapshot, Trajectory};
use segfront_core::{run, run_from, sample_initial, SelfSimilarProfile, SolverConfig};

/// Trajectory whose snapshots are `fields(x, t)` on the benchmark grid.
fn synthetic(spec: &ProblemSpec, grid: &GridSpec, times: &[f64], fields: impl Fn(f64, f64) -> (f64, f64)) -> Trajectory {
    let snapshots = times
        .iter()
        .map(|&t| {
            let (u, v): (Vec<f64>, Vec<f64>) = grid.centers().map(|x| fields(x, t)).unzip();
            Snapshot { t, u, v }
        })
        .collect();
    Trajectory {
        spec: spec.clone(),
        grid: grid.clone(),
        snapshots,
        diagnostics: None,
        bounds: BoundsRecord::new(spec.cap()),
        failure: None,
    }
}

fn times() -> Vec<f64> {
    (0..=20).map(|i| 0.05 * i as f64).collect()
}

fn profile_trajectory(spec: &ProblemSpec, grid: &GridSpec) -> (Trajectory, SelfSimilarProfile) {
    let prof = SelfSimilarProfile::from_spec(spec).unwrap();
    let (u0, v0) = sample_initial(spec, grid).unwrap();
    let mut traj = synthetic(spec, grid, &times()[1..], |x, t| prof.limit_uv(x, t).unwrap());
    traj.snapshots.insert(0, Snapshot { t: 0.0, u: u0, v: v0 });
    (traj, prof)
}

fn asymmetric() -> ProblemSpec {
    ProblemSpec::new(DomainVariant::WholeLine, 1.0, 0.5, 1e4, 2.0, 1.0, 1.0).unwrap()
}

#[test]
fn exact_profile_fields_have_zero_error() {
    let grid = benchmark_grid(DomainVariant::WholeLine);
    let (traj, prof) = profile_trajectory(&asymmetric(), &grid);
    assert_eq!(l2_window_error(&traj, &prof, 4.0, 0.05).unwrap(), (0.0, 0.0));
    assert_eq!(l2_window_error(&traj, &prof, 0.0, 0.05).unwrap(), (0.0, 0.0));
    assert_eq!(kamin_rescaled_error(&traj, &prof, 0.5, 4.0).unwrap(), (0.0, 0.0));
    assert_eq!(segregation_integral(&traj), 0.0);
    assert!(l2_window_error(&traj, &prof, 41.0, 0.05).is_err());
    assert!(reaction_mass(&traj).is_err());
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// five analytic integrands against the quadrature oracle; the tolerances
// are the O(dx^2) trapezoid error at dx = 0.04

#[test]
fn window_error_of_a_gaussian_perturbation() {
    let spec = asymmetric();
    let grid = benchmark_grid(DomainVariant::WholeLine);
    let prof = SelfSimilarProfile::from_spec(&spec).unwrap();
    let eps = 1e-2;
    let traj = synthetic(&spec, &grid, &times(), |x, t| {
        let (u, v) = if t > 0.0 { prof.limit_uv(x, t).unwrap() } else { (0.0, 0.0) };
        (u + eps * (-x * x).exp(), v)
    });
    let (eu, ev) = l2_window_error(&traj, &prof, 4.0, 0.05).unwrap();
    let exact = (eps * eps * 0.95 * integrate(|x| (-2.0 * x * x).exp(), -4.0, 4.0, 1e-14)).sqrt();
    assert!(rel(eu, exact) < 1e-4, "{eu} vs {exact}");
    assert_eq!(ev, 0.0);
}

#[test]
fn rescaled_error_of_a_self_similar_perturbation() {
    let spec = asymmetric();
    let grid = benchmark_grid(DomainVariant::WholeLine);
    let prof = SelfSimilarProfile::from_spec(&spec).unwrap();
    let traj = synthetic(&spec, &grid, &[0.25, 1.0, 4.0], |x, t| {
        let (u, v) = prof.limit_uv(x, t).unwrap();
        (u, v + 0.1 * (-x * x / t).exp())
    });
    let exact = 0.01 * integrate(|y| (-2.0 * y * y).exp(), -4.0, 4.0, 1e-14);
    for t in [0.25, 1.0, 4.0] {
        let (eu, ev) = kamin_rescaled_error(&traj, &prof, t, 4.0).unwrap();
        assert_eq!(eu, 0.0);
        assert!(rel(ev, exact) < 1e-3, "t = {t}: {ev} vs {exact}");
    }
}

#[test]
fn segregation_of_overlapping_gaussians() {
    let spec = asymmetric();
    let grid = benchmark_grid(DomainVariant::WholeLine);
    let traj = synthetic(&spec, &grid, &[0.0, 0.5, 1.0], |x, t| {
        ((1.0 + t) * (-x * x).exp(), (-(x - 1.0) * (x - 1.0)).exp())
    });
    let exact = 1.5 * integrate(|x| (-x * x - (x - 1.0) * (x - 1.0)).exp(), -40.0, 40.0, 1e-14);
    assert!(rel(segregation_integral(&traj), exact) < 1e-4);
}

#[test]
fn window_distance_between_two_runs() {
    let spec = asymmetric();
    let grid = GridSpec::new(-40.0, 40.0, 2000, 2e-4, Vec::new()).unwrap();
    let a = synthetic(&spec, &grid, &times(), |x, t| (x.sin() * t.sqrt(), 0.0));
    let b = synthetic(&spec, &grid, &times(), |_, _| (0.0, 0.0));
    let (du, dv) = l2_window_distance(&a, &b, 3.0, 0.1).unwrap();
    let exact = (0.5 * (1.0 - 0.01) * integrate(|x| x.sin().powi(2), -3.0, 3.0, 1e-14)).sqrt();
    assert!(rel(du, exact) < 1e-3, "{du} vs {exact}");
    assert_eq!(dv, 0.0);
}

#[test]
fn translate_distance_of_the_symmetric_profile() {
    // for monotone w, |u - u(.+xi)| + |v - v(.+xi)| = |w - w(.+xi)|, whose
    // integral over the line is xi (U0 + V0) at every t
    let (spec, grid) = benchmark(1e2);
    let (traj, prof) = profile_trajectory(&spec, &grid);
    assert_eq!(prof.a, 0.0);
    let dx = grid.dx();
    let xi = 4.0 * dx;
    let r = translate_contraction_check(&traj, xi).unwrap();
    let (lo, hi) = (grid.x_left + 2.0 * dx, grid.x_right - 6.0 * dx);
    for &(t, lhs) in &r.lhs[1..] {
        let f = |x: f64| prof.f(x / t.sqrt()).unwrap();
        let exact = integrate(|x| (f(x) - f(x + xi)).abs(), lo, hi, 1e-14);
        assert!((lhs - exact).abs() < 10.0 * dx * dx, "t = {t}: {lhs} vs {exact}");
        assert!((exact - xi * 2.0).abs() < 1e-12);
    }
    let series: Vec<f64> = r.lhs.iter().map(|p| p.1).collect();
    assert!(nonincreasing_within(&series, 1e-12));
    assert!(r.max_excess <= 1e-12);
}

#[test]
fn translate_check_edge_cases() {
    let (spec, grid) = benchmark(1e2);
    let (traj, _) = profile_trajectory(&spec, &grid);
    let r = translate_contraction_check(&traj, 0.0).unwrap();
    assert!(r.lhs.iter().all(|p| p.1 == 0.0) && r.rhs == 0.0);
    assert!(translate_contraction_check(&traj, 0.5 * grid.dx()).is_err());
}

#[test]
fn front_of_exact_profile_is_within_a_cell() {
    let grid = benchmark_grid(DomainVariant::WholeLine);
    let (traj, prof) = profile_trajectory(&asymmetric(), &grid);
    let track = track_free_boundary(&traj, Some(&prof));
    assert!(track.missing.is_empty());
    assert_eq!(track.points.len(), 20);
    for &(t, xi) in &track.points {
        assert!((xi - prof.front(t)).abs() <= grid.dx(), "t = {t}");
    }
    let fit = fit_sqrt_law(&track.points).unwrap();
    assert!((fit.a - prof.a).abs() <= grid.dx());

    let (spec, grid) = benchmark(1e2);
    let (traj, _) = profile_trajectory(&spec, &grid);
    let track = track_free_boundary(&traj, None);
    assert!(track.points.iter().all(|p| p.1.abs() <= grid.dx()));
}

#[test]
fn snapshots_without_sign_change_are_reported_missing() {
    let spec = asymmetric();
    let grid = benchmark_grid(DomainVariant::WholeLine);
    let traj = synthetic(&spec, &grid, &[0.0, 0.5, 1.0], |_, _| (1.0, 0.0));
    let track = track_free_boundary(&traj, None);
    assert!(track.points.is_empty());
    assert_eq!(track.missing, vec![0.5, 1.0]);
}

#[test]
fn reaction_mass_examples() {
    let (spec, grid) = benchmark(0.0);
    let grid = GridSpec { snapshot_times: Vec::new(), ..grid };
    let spec = ProblemSpec { horizon: 0.2, ..spec };
    let traj = run(&spec, &grid, &SolverConfig::default()).unwrap();
    assert_eq!(reaction_mass(&traj).unwrap(), 0.0);

    // immobile substrate that starts empty stays empty
    let spec = ProblemSpec::new(DomainVariant::WholeLine, 1.0, 0.0, 1e2, 1.0, 1.0, 0.1).unwrap();
    let (u0, _) = sample_initial(&spec, &grid).unwrap();
    let traj = run_from(&spec, &grid, &SolverConfig::default(), u0, vec![0.0; grid.nx]).unwrap();
    assert_eq!(reaction_mass(&traj).unwrap(), 0.0);
}

#[test]
fn comparison_check_examples() {
    let (spec, grid) = benchmark(1e2);
    let spec = ProblemSpec { horizon: 0.2, ..spec };
    let grid = GridSpec { snapshot_times: vec![0.1], ..grid };
    let cfg = SolverConfig::default();
    let (u, v) = sample_initial(&spec, &grid).unwrap();
    assert!(comparison_check(&spec, &grid, &cfg, (&u, &v), (&u, &v)).unwrap() <= 1e-14);

    let bump: Vec<f64> = grid.centers().map(|x| if x.abs() < 5.0 { 0.2 } else { 0.0 }).collect();
    let u_hi: Vec<f64> = u.iter().zip(&bump).map(|(a, b)| (a + b).min(1.0)).collect();
    assert!(comparison_check(&spec, &grid, &cfg, (&u_hi, &v), (&u, &v)).unwrap() <= 1e-8);
    assert!(comparison_check(&spec, &grid, &cfg, (&u, &v), (&u_hi, &v)).is_err());
}

#[test]
fn report_csv_and_sorting() {
    let prof = SelfSimilarProfile::from_spec(&asymmetric()).unwrap();
    let entry = |value: f64| ConvergenceEntry {
        value,
        l2_window_error_u: 0.1,
        l2_window_error_v: 0.2,
        segregation_integral: 0.0,
        reaction_mass: 1.0,
        fitted_a: 0.5,
        fitted_a_stderr: 0.01,
    };
    let r = ConvergenceReport::new(SweepAxis::K, vec![entry(10.0), entry(1.0)], prof).unwrap();
    assert_eq!(r.entries[0].value, 1.0);
    let csv = r.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("k,l2_window_error_u"));
    assert_eq!(lines[1], "1,0.10000000000000001,0.20000000000000001,0,1,0.5,0.01");
    let bad = ConvergenceEntry { l2_window_error_u: f64::NAN, ..entry(2.0) };
    assert!(ConvergenceReport::new(SweepAxis::K, vec![bad], prof).is_err());
}
