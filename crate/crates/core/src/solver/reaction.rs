//! Pointwise implicit-Euler reaction solve.
//!
//! Both species lose the same amount, so `c = u - v` is invariant and the
//! 2x2 implicit system collapses to the scalar monotone equation
//! `g(x) = x + h k F(x, x - c) - u = 0` on `[max(c, 0), u]`.

use crate::error::{Error, Result};
use crate::model::Kinetics;

/// Result of one cell's reaction solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionUpdate {
    pub u: f64,
    pub v: f64,
    /// `F(u', v')` at the accepted iterate.
    pub rate: f64,
    /// `|g(u')|`, the implicit-equation residual.
    pub residual: f64,
}

/// Solves `u' = u - h k F(u', v')`, `v' = v - h k F(u', v')` for one cell.
///
/// Stops once `|g| <= tol`; `max_iters` bounds the safeguarded Newton loop.
pub fn reaction_update(
    u: f64,
    v: f64,
    k: f64,
    kin: &Kinetics,
    h: f64,
    tol: f64,
    max_iters: usize,
) -> Result<ReactionUpdate> {
    let hk = h * k;
    if hk == 0.0 || u <= 0.0 || v <= 0.0 {
        return Ok(ReactionUpdate { u, v, rate: 0.0, residual: 0.0 });
    }
    let c = u - v;
    let mut lo = c.max(0.0);
    let mut hi = u;
    let floor = 4.0 * f64::EPSILON * u.max(v);

    let mut x = hi;
    let mut prev_abs = f64::INFINITY;
    let mut best = ReactionUpdate { u, v, rate: f64::NAN, residual: f64::INFINITY };
    for _ in 0..max_iters {
        let (f, fu, fv) = kin.rate_and_partials(x, x - c);
        let g = x + hk * f - u;
        if g.abs() < best.residual {
            best = ReactionUpdate { u: x, v: x - c, rate: f, residual: g.abs() };
        }
        if g.abs() <= tol {
            return Ok(best);
        }
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= floor {
            return Ok(best);
        }
        let newton = x - g / (1.0 + hk * (fu + fv));
        let stalled = g.abs() > 0.5 * prev_abs;
        prev_abs = g.abs();
        x = if newton > lo && newton < hi && !stalled { newton } else { 0.5 * (lo + hi) };
    }
    Err(Error::ReactionSolve { u, v, k, dt: h, iters: max_iters })
}

/// `(u', v')` for one cell; see [`reaction_update`].
pub fn reaction_substep(
    u: f64,
    v: f64,
    k: f64,
    kin: &Kinetics,
    h: f64,
    tol: f64,
    max_iters: usize,
) -> Result<(f64, f64)> {
    reaction_update(u, v, k, kin, h, tol, max_iters).map(|r| (r.u, r.v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn no_substrate_means_no_change() {
        let kin = Kinetics::product();
        assert_eq!(reaction_substep(0.8, 0.0, 1e4, &kin, 0.1, TOL, 100).unwrap(), (0.8, 0.0));
        assert_eq!(reaction_substep(0.0, 0.3, 1e4, &kin, 0.1, TOL, 100).unwrap(), (0.0, 0.3));
    }

    #[test]
    fn quadratic_golden_value() {
        // u' + 0.1 u'(u' - 0.5) = 1  =>  0.1 u'^2 + 0.95 u' - 1 = 0
        let (a, b, c) = (0.1, 0.95, -1.0);
        let golden = (-b + f64::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
        let (u, v) = reaction_substep(1.0, 0.5, 1.0, &Kinetics::product(), 0.1, TOL, 100).unwrap();
        assert!((u - golden).abs() < 1e-13, "{u} vs {golden}");
        assert!((v - (golden - 0.5)).abs() < 1e-13);
    }

    #[test]
    fn equal_amounts_annihilate_in_the_stiff_limit() {
        let kin = Kinetics::product();
        let mut prev = 1.0;
        for hk in [1e2, 1e4, 1e6, 1e8] {
            let (u, v) = reaction_substep(1.0, 1.0, hk, &kin, 1.0, TOL, 100).unwrap();
            assert_eq!(u, v);
            // u'^2 hk = 1 - u'  =>  u' ~ hk^{-1/2}
            assert!(u < prev && u <= 1.0 / hk.sqrt());
            prev = u;
        }
    }

    #[test]
    fn fractional_power_kinetics_converge() {
        let kin = Kinetics::power(0.3, 0.5).unwrap();
        let r = reaction_update(0.7, 0.2, 1e4, &kin, 1e-4, TOL, 100).unwrap();
        assert!(r.residual <= TOL);
        assert!(r.v >= 0.0 && r.u >= 0.5 - 1e-15);
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let kin = Kinetics::product();
        let e = reaction_update(1.0, 0.5, 1.0, &kin, 0.1, 0.0, 1);
        assert!(matches!(e, Err(Error::ReactionSolve { iters: 1, .. })));
    }

    proptest! {
        #[test]
        fn bounds_and_conservation(
            u in 0.0f64..1.0,
            v in 0.0f64..1.0,
            log_hk in -4.0f64..8.0,
            m in prop::sample::select(vec![0.3, 0.5, 1.0, 2.0]),
            n in prop::sample::select(vec![0.3, 0.75, 1.0]),
        ) {
            let kin = Kinetics::power(m, n).unwrap();
            let r = reaction_update(u, v, 10f64.powf(log_hk), &kin, 1.0, TOL, 100).unwrap();
            let c = u - v;
            prop_assert!(r.u >= c.max(0.0) && r.u <= u);
            prop_assert!(r.v >= (-c).max(0.0) && r.v <= v);
            prop_assert!(((r.u - r.v) - c).abs() <= 4.0 * f64::EPSILON * 1.0);
        }
    }
}
