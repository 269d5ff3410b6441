mod common;

use common::*;
use segfront_core::model::LimitCase;
use segfront_core::special;
use segfront_core::{ProfileParams, SelfSimilarProfile};

#[test]
fn quadrature_reproduces_polynomials_and_gaussians() {
    for p in 0..=10 {
        let exact = 1.0 / (p as f64 + 1.0);
        assert!((integrate(|x| x.powi(p), 0.0, 1.0, 1e-15) - exact).abs() < 1e-15);
    }
    let half = integrate(|x| (-x * x).exp(), 0.0, 40.0, 1e-15);
    assert!((half - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-15);
}

#[test]
fn erfcx_agrees_with_quadrature() {
    let mut x = -5.0;
    while x <= 30.0 {
        let (lib, reference) = (special::erfcx(x), erfcx(x));
        assert!((lib - reference).abs() <= 1e-13 * reference, "x = {x}: {lib} vs {reference}");
        x += 0.173;
    }
    for x in [0.0, 0.5, 1.0, 2.0, 3.5] {
        assert!((special::erfc(x) - erfc(x)).abs() < 1e-15, "erfc({x})");
    }
}

#[test]
fn oracle_root_matches_closed_cases() {
    assert!(oracle_a(LimitCase::WholeDvPos, 1.0, 1.0, 1.0, 1.0).abs() < 1e-13);
    for case in LimitCase::ALL {
        let dv = if case.substrate_diffuses() { 0.5 } else { 0.0 };
        let p = SelfSimilarProfile::new(case, ProfileParams::new(1.0, dv, 2.0, 1.0)).unwrap();
        let a = oracle_a(case, 1.0, dv, 2.0, 1.0);
        assert!((p.a - a).abs() < 1e-10, "{case:?}: {} vs {a}", p.a);
    }
}

#[test]
fn profile_values_match_raw_integrals() {
    // f on the left of a whole-line front is U0 (1 - int_{-inf}^eta / int_{-inf}^a)
    let p = SelfSimilarProfile::new(LimitCase::WholeDvPos, ProfileParams::new(1.0, 0.5, 2.0, 1.0)).unwrap();
    let gauss = |s: f64| (-s * s / 4.0).exp();
    let denom = integrate(gauss, -60.0, p.a, 1e-15);
    for eta in [-3.0, -1.0, 0.0, 0.5] {
        let expect = 2.0 * (1.0 - integrate(gauss, -60.0, eta, 1e-15) / denom);
        assert!((p.f(eta).unwrap() - expect).abs() < 1e-13, "eta = {eta}");
    }
    let right = |s: f64| (-s * s / 2.0).exp();
    let denom = integrate(right, p.a, 60.0, 1e-15);
    for eta in [1.0, 2.0, 4.0] {
        let expect = -(1.0 - integrate(right, eta, 60.0, 1e-15) / denom);
        assert!((p.f(eta).unwrap() - expect).abs() < 1e-13, "eta = {eta}");
    }
}

#[test]
fn heat_oracle_is_a_heat_solution() {
    // u_t - u_xx by centred differences on the oracle
    let (x, t, h) = (0.7, 0.5, 1e-3);
    let u = |x: f64, t: f64| heat_step(1.0, 1.0, x, t);
    let ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
    let uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h);
    assert!((ut - uxx).abs() < 1e-6);
}
