//! Reference implementations used only by tests: adaptive Gauss–Kronrod
//! quadrature and a bisection solve for the free-boundary constant built on
//! the raw integrals.

#![allow(dead_code)]

use segfront_core::model::{DomainVariant, GridSpec, LimitCase, ProblemSpec};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = gk15(f, a, b);
    if err <= tol.max(1e-15 * k.abs()) || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// `int_a^b f` to roughly `rel_tol` relative accuracy.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let rough = adapt(&f, a, b, f64::INFINITY, 0);
    let scale = adapt(&|x| f(x).abs(), a, b, f64::INFINITY, 0).max(rough.abs());
    adapt(&f, a, b, rel_tol * scale.max(f64::MIN_POSITIVE), 40)
}

const REL: f64 = 1e-15;

/// `e^{x^2} erfc(x) = (2/sqrt(pi)) int_0^inf e^{-s^2 - 2xs} ds`.
pub fn erfcx(x: f64) -> f64 {
    let end = 2.0 * (-x).max(0.0) + 40.0;
    let mid = (-x).max(0.0);
    let g = |s: f64| (-s * s - 2.0 * x * s).exp();
    let split = if mid > 0.0 { integrate(g, 0.0, mid, REL) + integrate(g, mid, end, REL) } else { integrate(g, 0.0, end, REL) };
    std::f64::consts::FRAC_2_SQRT_PI * split
}

pub fn erfc(x: f64) -> f64 {
    if x >= 0.0 {
        (-x * x).exp() * erfcx(x)
    } else {
        2.0 - erfc(-x)
    }
}

/// `e^{a^2/4d} int_a^inf e^{-s^2/4d} ds = int_0^inf e^{-(2as + s^2)/4d} ds`.
fn scaled_right_tail(a: f64, d: f64) -> f64 {
    let end = 2.0 * (-a).max(0.0) + 14.0 * d.sqrt();
    integrate(|s| (-(2.0 * a * s + s * s) / (4.0 * d)).exp(), 0.0, end, REL)
}

/// `e^{a^2/4d} int_{-inf}^a e^{-s^2/4d} ds` (whole line) or over `(0, a)`
/// (half line), with `s -> a - s`.
fn scaled_left_mass(a: f64, d: f64, variant: DomainVariant) -> f64 {
    match variant {
        DomainVariant::WholeLine => scaled_right_tail(-a, d),
        DomainVariant::HalfLine => integrate(|s| ((2.0 * a * s - s * s) / (4.0 * d)).exp(), 0.0, a, REL),
    }
}

/// `G(a)`, strictly decreasing with the free-boundary constant as its root.
///
/// Mobile substrate: `ln(d_u U0 R) - ln(d_v V0 L)` with the scaled integrals
/// of the flux balance. Immobile: `ln(d_u U0 / L) - ln(V0 a / 2)`.
pub fn oracle_g(case: LimitCase, du: f64, dv: f64, u0: f64, v0: f64, a: f64) -> f64 {
    let variant = case.variant();
    if variant == DomainVariant::HalfLine && a <= 0.0 {
        return f64::INFINITY;
    }
    let left = scaled_left_mass(a, du, variant);
    if case.substrate_diffuses() {
        (du * u0 * scaled_right_tail(a, dv)).ln() - (dv * v0 * left).ln()
    } else if a <= 0.0 {
        f64::INFINITY
    } else {
        (du * u0 / left).ln() - (0.5 * v0 * a).ln()
    }
}

/// Bisection on `oracle_g` to a bracket width of `1e-13`.
pub fn oracle_a(case: LimitCase, du: f64, dv: f64, u0: f64, v0: f64) -> f64 {
    let g = |a: f64| oracle_g(case, du, dv, u0, v0, a);
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = if case == LimitCase::WholeDvPos { -1.0 } else { 0.0 };
    if case == LimitCase::WholeDvPos {
        while g(lo) < 0.0 {
            lo *= 2.0;
        }
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Whole-line heat solution from step data: `u = U0/2 erfc(x / (2 sqrt(d t)))`.
pub fn heat_step(u0: f64, d: f64, x: f64, t: f64) -> f64 {
    0.5 * u0 * erfc(x / (2.0 * (d * t).sqrt()))
}

/// The standard benchmark: whole line, product kinetics, unit data.
pub fn benchmark(k: f64) -> (ProblemSpec, GridSpec) {
    let spec = ProblemSpec::new(DomainVariant::WholeLine, 1.0, 1.0, k, 1.0, 1.0, 1.0).unwrap();
    (spec, benchmark_grid(DomainVariant::WholeLine))
}

/// `[-40, 40]` with 2000 cells (`[0, 40]` with 1000 on the half line),
/// `dt = 2e-4`, snapshots every 0.05 up to `T = 1`.
pub fn benchmark_grid(variant: DomainVariant) -> GridSpec {
    let (xl, nx) = match variant {
        DomainVariant::WholeLine => (-40.0, 2000),
        DomainVariant::HalfLine => (0.0, 1000),
    };
    GridSpec::new(xl, 40.0, nx, 2e-4, GridSpec::uniform_snapshots(0.05, 1.0)).unwrap()
}
