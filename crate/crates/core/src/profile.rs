//! Self-similar fast-reaction limits `w(x, t) = f(x / sqrt(t))`.
//!
//! The limit is `u = w^+`, `v = -w^-`, with a single free boundary at
//! `x = a sqrt(t)`. To the left of it `f` is an error-function ramp from
//! `U0` down to 0 driven by `d_u`; to the right it is either the mirror ramp
//! down to `-V0` (mobile substrate) or the constant `-V0` (immobile
//! substrate). The constant `a` is fixed by the interface flux balance, or
//! by the Stefan condition `V0 a / 2 = -d_u f'(a-)` when `d_v = 0`.
//!
//! All Gaussian integrals are expressed through `erfcx`, `erfc` ratios and
//! `exp(x^2) erf(x)` so that nothing overflows for large `|a| / sqrt(d)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_finite, Error, Result};
use crate::model::{LimitCase, ProblemSpec};
use crate::root::{safeguarded_newton, RootFailure, RootOptions};
use crate::special::{
    erf, erf_ratio, erf_scaled, erfc, erfc_ratio, erfcx, ln_erf_scaled, ln_erfcx,
};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Diffusivities and far-field values entering the limit problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileParams {
    pub d_u: f64,
    pub d_v: f64,
    pub u0: f64,
    pub v0: f64,
}

impl ProfileParams {
    pub fn new(d_u: f64, d_v: f64, u0: f64, v0: f64) -> Self {
        Self { d_u, d_v, u0, v0 }
    }

    pub fn from_spec(spec: &ProblemSpec) -> Self {
        Self::new(spec.d_u, spec.d_v, spec.u0, spec.v0)
    }

    fn validate(&self, case: LimitCase) -> Result<()> {
        for (name, x) in [("d_u", self.d_u), ("d_v", self.d_v), ("u0", self.u0), ("v0", self.v0)] {
            require_finite(name, x)?;
        }
        if self.d_u <= 0.0 || self.u0 <= 0.0 || self.v0 <= 0.0 {
            return invalid("d_u, u0 and v0 must be > 0");
        }
        if case.substrate_diffuses() && self.d_v <= 0.0 {
            return invalid(format!("{case:?} requires d_v > 0"));
        }
        if !case.substrate_diffuses() && self.d_v != 0.0 {
            return invalid(format!("{case:?} requires d_v = 0"));
        }
        Ok(())
    }
}

/// The two sides of the free-boundary equation in logarithmic form, with
/// their derivatives in `a`. `g(a) = ln_lhs - ln_rhs` is strictly decreasing.
#[derive(Debug, Clone, Copy)]
struct RootTerms {
    ln_lhs: f64,
    ln_rhs: f64,
    dln_lhs: f64,
    dln_rhs: f64,
}

impl RootTerms {
    fn g(&self) -> f64 {
        self.ln_lhs - self.ln_rhs
    }
}

fn root_terms(p: &ProfileParams, case: LimitCase, a: f64) -> RootTerms {
    let su = p.d_u.sqrt();
    let xu = a / (2.0 * su);
    match case {
        LimitCase::WholeDvPos | LimitCase::HalfDvPos => {
            let sv = p.d_v.sqrt();
            let xv = a / (2.0 * sv);
            // d_u U0 e^{a^2/4d_v} int_a^inf e^{-s^2/4d_v} = d_u U0 sqrt(pi d_v) erfcx(xv)
            let ln_lhs = (p.d_u * p.u0 * SQRT_PI * sv).ln() + ln_erfcx(xv);
            let dln_lhs = (2.0 * xv - 2.0 / (SQRT_PI * erfcx(xv))) / (2.0 * sv);
            let scale = (p.d_v * p.v0 * SQRT_PI * su).ln();
            let (ln_rhs, dln_rhs) = if case == LimitCase::WholeDvPos {
                (scale + ln_erfcx(-xu), (2.0 * xu + 2.0 / (SQRT_PI * erfcx(-xu))) / (2.0 * su))
            } else if a > 0.0 {
                (scale + ln_erf_scaled(xu), (2.0 * xu + 2.0 / (SQRT_PI * erf_scaled(xu))) / (2.0 * su))
            } else {
                (f64::NEG_INFINITY, f64::INFINITY)
            };
            RootTerms { ln_lhs, ln_rhs, dln_lhs, dln_rhs }
        }
        LimitCase::WholeDvZero | LimitCase::HalfDvZero => {
            // U0 = V0 sqrt(pi) xu * (erfcx(-xu) | exp(xu^2) erf(xu))
            let ln_lhs = p.u0.ln();
            if a <= 0.0 {
                return RootTerms { ln_lhs, ln_rhs: f64::NEG_INFINITY, dln_lhs: 0.0, dln_rhs: f64::INFINITY };
            }
            let (ln_g, dln_g) = if case == LimitCase::WholeDvZero {
                (ln_erfcx(-xu), 2.0 * xu + 2.0 / (SQRT_PI * erfcx(-xu)))
            } else {
                (ln_erf_scaled(xu), 2.0 * xu + 2.0 / (SQRT_PI * erf_scaled(xu)))
            };
            let ln_rhs = (p.v0 * SQRT_PI).ln() + xu.ln() + ln_g;
            let dln_rhs = (1.0 / xu + dln_g) / (2.0 * su);
            RootTerms { ln_lhs, ln_rhs, dln_lhs: 0.0, dln_rhs }
        }
    }
}

/// Relative residual `|LHS - RHS| / max(LHS, RHS)` of the free-boundary
/// equation at `a`.
pub fn root_residual(p: &ProfileParams, case: LimitCase, a: f64) -> f64 {
    let g = root_terms(p, case, a).g();
    if g.is_nan() {
        return f64::NAN;
    }
    -(-g.abs()).exp_m1()
}

/// Both sides of the free-boundary equation, each multiplied by the common
/// factor `exp(-a^2 / 4d)` that the erfcx form removes. Exposed for
/// cross-checks against direct quadrature of the raw integrals.
pub fn root_equation_sides(p: &ProfileParams, case: LimitCase, a: f64) -> (f64, f64) {
    let t = root_terms(p, case, a);
    (t.ln_lhs.exp(), t.ln_rhs.exp())
}

fn initial_half_width(p: &ProfileParams) -> f64 {
    10.0 * (p.d_u.sqrt() + p.d_v.sqrt()) * (1.0 + (p.u0 / p.v0).ln().abs())
}

/// True when `g(a)` is nonincreasing on `samples` evenly spaced points of
/// `[lo, hi]`, and strictly decreasing wherever it is finite.
pub fn root_equation_is_monotone(p: &ProfileParams, case: LimitCase, lo: f64, hi: f64, samples: usize) -> bool {
    let mut prev = f64::INFINITY;
    for i in 0..samples {
        let a = lo + (hi - lo) * i as f64 / (samples - 1).max(1) as f64;
        let g = root_terms(p, case, a).g();
        if g.is_nan() || g > prev || (g.is_finite() && g == prev) {
            return false;
        }
        prev = g;
    }
    true
}

/// Solves for the free-boundary constant `a`.
pub fn solve_free_boundary(p: &ProfileParams, case: LimitCase) -> Result<f64> {
    p.validate(case)?;
    let g = |a: f64| root_terms(p, case, a).g();
    let positive_only = case != LimitCase::WholeDvPos;
    let mut b = initial_half_width(p);
    let mut lo = if positive_only { 0.0 } else { -b };
    let mut hi = b;
    for _ in 0..64 {
        let ok_hi = g(hi) < 0.0;
        let ok_lo = positive_only || g(lo) > 0.0;
        if ok_hi && ok_lo {
            break;
        }
        b *= 2.0;
        if !ok_hi {
            hi = b;
        }
        if !ok_lo {
            lo = -b;
        }
    }
    let opts = RootOptions { bisect_until: 1e-3, x_tol: 2.0 * f64::EPSILON, ..RootOptions::default() };
    let eval = |a: f64| {
        let t = root_terms(p, case, a);
        (t.g(), t.dln_lhs - t.dln_rhs)
    };
    match safeguarded_newton(eval, lo, hi, None, &opts) {
        Ok(r) => Ok(r.x),
        Err(RootFailure::NotBracketed { g_lo, g_hi }) => Err(Error::Bracketing { lo, hi, g_lo, g_hi }),
        Err(RootFailure::MaxIterations(r)) => {
            Err(Error::Internal(format!("free-boundary solve stalled at a = {} (g = {})", r.x, r.residual)))
        }
    }
}

/// Sign prediction from sufficient conditions on `(d_u, d_v, U0, V0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Zero,
    Negative,
    Positive,
    Indeterminate,
}

/// Predicts the sign of `a` for the whole line with mobile substrate.
///
/// `Zero` for `d_u = d_v`, `U0 = V0`. `Negative` when `d_u <= d_v` and
/// `sqrt(d_u) U0 <= sqrt(d_v) V0` with at least one strict inequality;
/// `Positive` for the mirrored conditions.
pub fn classify_sign(d_u: f64, d_v: f64, u0: f64, v0: f64) -> Result<SignClass> {
    for (name, x) in [("d_u", d_u), ("d_v", d_v), ("u0", u0), ("v0", v0)] {
        require_finite(name, x)?;
        if x <= 0.0 {
            return invalid(format!("{name} must be > 0"));
        }
    }
    if d_u == d_v && u0 == v0 {
        return Ok(SignClass::Zero);
    }
    let flux_u = d_u.sqrt() * u0;
    let flux_v = d_v.sqrt() * v0;
    if d_u <= d_v && flux_u <= flux_v {
        Ok(SignClass::Negative)
    } else if d_u >= d_v && flux_u >= flux_v {
        Ok(SignClass::Positive)
    } else {
        Ok(SignClass::Indeterminate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Residual diagnostics of a profile against the limit problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileResidualReport {
    pub root_residual: f64,
    /// Max of `|d f'' + (eta/2) f'|` left of the free boundary.
    pub ode_residual_left: f64,
    /// Same, right of the free boundary.
    pub ode_residual_right: f64,
    /// `|d_u f'(a-) - d_v f'(a+)| / |d_u f'(a-)|`; zero when `d_v = 0`.
    pub interface_flux_residual: f64,
    /// `|V0 a / 2 + d_u f'(a-)| / (V0 |a| / 2)`; zero when `d_v > 0`.
    pub stefan_residual: f64,
}

impl ProfileResidualReport {
    pub fn ode_residual_max(&self) -> f64 {
        self.ode_residual_left.max(self.ode_residual_right)
    }

    pub fn max_residual(&self) -> f64 {
        self.root_residual
            .max(self.ode_residual_max())
            .max(self.interface_flux_residual)
            .max(self.stefan_residual)
    }
}

/// A solved self-similar limit profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarProfile {
    pub case: LimitCase,
    pub a: f64,
    pub params: ProfileParams,
    /// `int e^{-s^2/4d_u}` over `(-inf, a)` (whole line) or `(0, a)` (half line).
    pub left_normalizer: f64,
    /// `int_a^inf e^{-s^2/4d_v}`; zero for an immobile substrate.
    pub right_normalizer: f64,
}

impl SelfSimilarProfile {
    pub fn new(case: LimitCase, params: ProfileParams) -> Result<Self> {
        let a = solve_free_boundary(&params, case)?;
        Ok(Self::with_constant(case, params, a))
    }

    pub fn from_spec(spec: &ProblemSpec) -> Result<Self> {
        Self::new(spec.limit_case(), ProfileParams::from_spec(spec))
    }

    /// Profile built around an arbitrary `a`; used to probe residual
    /// sensitivity.
    pub fn with_constant(case: LimitCase, params: ProfileParams, a: f64) -> Self {
        let xu = a / (2.0 * params.d_u.sqrt());
        let left_normalizer = match case.variant() {
            crate::model::DomainVariant::WholeLine => (PI * params.d_u).sqrt() * erfc(-xu),
            crate::model::DomainVariant::HalfLine => (PI * params.d_u).sqrt() * erf(xu),
        };
        let right_normalizer = if case.substrate_diffuses() {
            (PI * params.d_v).sqrt() * erfc(a / (2.0 * params.d_v.sqrt()))
        } else {
            0.0
        };
        Self { case, a, params, left_normalizer, right_normalizer }
    }

    fn half_line(&self) -> bool {
        self.case.variant() == crate::model::DomainVariant::HalfLine
    }

    fn check_eta(&self, eta: f64) -> Result<()> {
        if eta.is_nan() {
            return invalid("eta is NaN");
        }
        if self.half_line() && eta < 0.0 {
            return invalid(format!("half-line profile evaluated at eta = {eta} < 0"));
        }
        Ok(())
    }

    /// `f(eta)`. Left-continuous at the free boundary: `f(a) = 0`.
    pub fn f(&self, eta: f64) -> Result<f64> {
        self.check_eta(eta)?;
        Ok(self.f_unchecked(eta))
    }

    fn f_unchecked(&self, eta: f64) -> f64 {
        let p = &self.params;
        if eta <= self.a {
            let su2 = 2.0 * p.d_u.sqrt();
            let frac = if self.half_line() {
                erf_ratio(eta / su2, self.a / su2)
            } else if eta == f64::NEG_INFINITY {
                0.0
            } else {
                erfc_ratio(-eta / su2, -self.a / su2)
            };
            p.u0 * (1.0 - frac)
        } else if self.case.substrate_diffuses() {
            let sv2 = 2.0 * p.d_v.sqrt();
            let frac = if eta == f64::INFINITY { 0.0 } else { erfc_ratio(eta / sv2, self.a / sv2) };
            -p.v0 * (1.0 - frac)
        } else {
            -p.v0
        }
    }

    /// `(f', f'')` of the analytic continuation of the left branch.
    fn left_branch(&self, eta: f64) -> (f64, f64) {
        let p = &self.params;
        let xa = self.a / (2.0 * p.d_u.sqrt());
        let fp = if self.half_line() {
            -p.u0 * (-eta * eta / (4.0 * p.d_u)).exp() / ((PI * p.d_u).sqrt() * erf(xa))
        } else if self.a >= 0.0 {
            -p.u0 * (-eta * eta / (4.0 * p.d_u)).exp() / ((PI * p.d_u).sqrt() * erfc(-xa))
        } else {
            -p.u0 / ((PI * p.d_u).sqrt() * erfcx(-xa)) * ((self.a - eta) * (self.a + eta) / (4.0 * p.d_u)).exp()
        };
        (fp, fp * (-eta / (2.0 * p.d_u)))
    }

    /// Same for the right branch; identically zero for an immobile substrate.
    fn right_branch(&self, eta: f64) -> (f64, f64) {
        let p = &self.params;
        if !self.case.substrate_diffuses() {
            return (0.0, 0.0);
        }
        let xa = self.a / (2.0 * p.d_v.sqrt());
        let fp = if self.a >= 0.0 {
            -p.v0 / ((PI * p.d_v).sqrt() * erfcx(xa)) * ((self.a - eta) * (self.a + eta) / (4.0 * p.d_v)).exp()
        } else {
            -p.v0 * (-eta * eta / (4.0 * p.d_v)).exp() / ((PI * p.d_v).sqrt() * erfc(xa))
        };
        (fp, fp * (-eta / (2.0 * p.d_v)))
    }

    /// `(f', f'')` on the branch that governs `eta` from the given side.
    fn branch_derivatives(&self, eta: f64, side: Side) -> (f64, f64) {
        let on_left = match side {
            Side::Left => eta <= self.a,
            Side::Right => eta < self.a,
        };
        if on_left {
            self.left_branch(eta)
        } else {
            self.right_branch(eta)
        }
    }

    /// Exact one-sided derivative `f'(eta-)` or `f'(eta+)`.
    pub fn derivative(&self, eta: f64, side: Side) -> Result<f64> {
        self.check_eta(eta)?;
        Ok(self.branch_derivatives(eta, side).0)
    }

    /// One-sided second derivative, used by the ODE residual.
    pub fn second_derivative(&self, eta: f64, side: Side) -> Result<f64> {
        self.check_eta(eta)?;
        Ok(self.branch_derivatives(eta, side).1)
    }

    /// Limit pair `(u, v) = (w^+, -w^-)` at `(x, t)`.
    pub fn limit_uv(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        require_finite("x", x)?;
        if !(t > 0.0) || !t.is_finite() {
            return invalid(format!("limit profile needs t > 0, got {t}"));
        }
        let w = self.f(x / t.sqrt())?;
        Ok((w.max(0.0), (-w).max(0.0)))
    }

    /// Free-boundary position `a sqrt(t)`.
    pub fn front(&self, t: f64) -> f64 {
        self.a * t.sqrt()
    }

    pub fn residual_report(&self) -> ProfileResidualReport {
        const POINTS: usize = 400;
        const BAND: f64 = 1e-6;
        const STEP: f64 = 3e-3;
        let p = &self.params;
        // f'' by a five-point difference of f', independent of the closed form
        let ode = |d: f64, lo: f64, hi: f64, branch: &dyn Fn(f64) -> f64| -> f64 {
            let mut worst: f64 = 0.0;
            for i in 0..POINTS {
                let eta = lo + (hi - lo) * i as f64 / (POINTS - 1) as f64;
                let h = STEP / (0.5 * eta.abs() / d + 1.0 / d.sqrt());
                let f2 = (branch(eta - 2.0 * h) - 8.0 * branch(eta - h) + 8.0 * branch(eta + h) - branch(eta + 2.0 * h))
                    / (12.0 * h);
                worst = worst.max((d * f2 + 0.5 * eta * branch(eta)).abs());
            }
            worst
        };
        let left_lo = if self.half_line() { 0.0 } else { self.a - 10.0 * p.d_u.sqrt() };
        let ode_left = ode(p.d_u, left_lo, self.a - BAND, &|e| self.left_branch(e).0);
        let ode_right = if self.case.substrate_diffuses() {
            ode(p.d_v, self.a + BAND, self.a + 10.0 * p.d_v.sqrt(), &|e| self.right_branch(e).0)
        } else {
            0.0
        };
        let flux_left = p.d_u * self.branch_derivatives(self.a, Side::Left).0;
        let (interface, stefan) = if self.case.substrate_diffuses() {
            let flux_right = p.d_v * self.branch_derivatives(self.a, Side::Right).0;
            ((flux_left - flux_right).abs() / flux_left.abs(), 0.0)
        } else {
            let speed = 0.5 * p.v0 * self.a;
            (0.0, (speed + flux_left).abs() / (speed.abs() + 1e-300))
        };
        ProfileResidualReport {
            root_residual: root_residual(p, self.case, self.a),
            ode_residual_left: ode_left,
            ode_residual_right: ode_right,
            interface_flux_residual: interface,
            stefan_residual: stefan,
        }
    }
}
