use segfront_core::analysis::AnalysisParams;
use segfront_core::model::{DomainVariant, GridSpec, ProblemSpec};
use segfront_core::sweep::{dv_sweep, k_sweep, longtime, verify};
use segfront_core::SolverConfig;

fn small() -> (ProblemSpec, GridSpec) {
    let spec = ProblemSpec::new(DomainVariant::WholeLine, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5).unwrap();
    let grid = GridSpec::new(-20.0, 20.0, 400, 1e-3, GridSpec::uniform_snapshots(0.05, 0.5)).unwrap();
    (spec, grid)
}

#[test]
fn single_value_sweep_passes_trivially() {
    let (spec, grid) = small();
    let out = k_sweep(&spec, &grid, &SolverConfig::default(), &[10.0], &AnalysisParams::default()).unwrap();
    assert_eq!(out.report.entries.len(), 1);
    assert!(out.passed() && !out.partial());
}

#[test]
fn sweep_values_are_validated() {
    let (spec, grid) = small();
    let p = AnalysisParams::default();
    let cfg = SolverConfig::default();
    assert!(k_sweep(&spec, &grid, &cfg, &[], &p).is_err());
    assert!(k_sweep(&spec, &grid, &cfg, &[10.0, 1.0], &p).is_err());
    assert!(k_sweep(&spec, &grid, &cfg, &[0.0, 1.0], &p).is_err());
    assert!(dv_sweep(&spec, &grid, &cfg, &[-1.0], &p).is_err());
}

#[test]
fn k_sweep_is_monotone_on_a_small_grid() {
    let (spec, grid) = small();
    let out = k_sweep(&spec, &grid, &SolverConfig::default(), &[1.0, 1e2, 1e4], &AnalysisParams::default()).unwrap();
    assert!(out.passed(), "{:?}", out.properties);
    let csv = out.report.to_csv();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn dv_sweep_carries_its_reference() {
    let (spec, grid) = small();
    let spec = spec.with_k(1e2).unwrap();
    let out = dv_sweep(&spec, &grid, &SolverConfig::default(), &[1e-2, 1e-1], &AnalysisParams::default()).unwrap();
    let r = out.reference.unwrap();
    assert_eq!((r.value, r.l2_window_error_u), (0.0, 0.0));
    assert!(out.passed(), "{:?}", out.properties);
}

#[test]
fn longtime_window_must_fit() {
    let (spec, _) = small();
    let grid = GridSpec::new(-20.0, 20.0, 400, 1e-2, Vec::new()).unwrap();
    let p = AnalysisParams::default();
    assert!(longtime(&spec, &grid, &SolverConfig::default(), &[64.0], &p).is_err());
    let out = longtime(&spec, &grid, &SolverConfig::default(), &[4.0], &p).unwrap();
    assert!(out.passed());
    assert!(!out.properties[0].note.is_empty());
}

#[test]
fn verify_flags_a_loose_reaction_tolerance() {
    let (spec, grid) = small();
    let spec = spec.with_k(1e2).unwrap();
    let params = AnalysisParams { comparison_pairs: 2, ..AnalysisParams::default() };
    let good = verify(&spec, &grid, &SolverConfig::default(), &params, 1).unwrap();
    assert!(good.passed(), "{:?}", good.properties);
    let cfg = SolverConfig { reaction_tol: 1e-2, ..SolverConfig::default() };
    let bad = verify(&spec, &grid, &cfg, &params, 1).unwrap();
    assert!(bad.failing().contains(&"reaction conservation"));
}

#[test]
fn verify_is_reproducible() {
    let (spec, grid) = small();
    let spec = spec.with_k(1e2).unwrap();
    let params = AnalysisParams { comparison_pairs: 2, ..AnalysisParams::default() };
    let a = verify(&spec, &grid, &SolverConfig::default(), &params, 42).unwrap();
    let b = verify(&spec, &grid, &SolverConfig::default(), &params, 42).unwrap();
    assert_eq!(a, b);
}
