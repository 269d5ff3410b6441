//! Safeguarded Newton iteration on a sign-change bracket.
//!
//! Shared by the free-boundary constant solve and the pointwise reaction
//! substep. Every Newton candidate that leaves the current bracket, or fails
//! to halve the residual, is replaced by a bisection step.

/// Stopping rules and safeguards.
#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Absolute residual at which the iterate is accepted.
    pub f_tol: f64,
    /// Relative bracket width (scaled by `1 + |x|`) at which iteration stops.
    pub x_tol: f64,
    /// Pure bisection is used until the bracket is narrower than this.
    pub bisect_until: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            f_tol: 0.0,
            x_tol: 4.0 * f64::EPSILON,
            bisect_until: f64::INFINITY,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// Residual at `x`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootFailure {
    /// `g(lo)` and `g(hi)` share a sign.
    NotBracketed { g_lo: f64, g_hi: f64 },
    /// Iteration budget exhausted; carries the best iterate.
    MaxIterations(Root),
}

/// Finds a root of `g` in `[lo, hi]`. `g` returns the value and derivative.
///
/// `start` seeds the Newton phase; the midpoint is used otherwise.
pub fn safeguarded_newton<G>(
    mut g: G,
    mut lo: f64,
    mut hi: f64,
    start: Option<f64>,
    opts: &RootOptions,
) -> Result<Root, RootFailure>
where
    G: FnMut(f64) -> (f64, f64),
{
    debug_assert!(lo <= hi);
    let (g_lo, _) = g(lo);
    if g_lo == 0.0 {
        return Ok(Root { x: lo, residual: 0.0, iterations: 0 });
    }
    let (g_hi, _) = g(hi);
    if g_hi == 0.0 {
        return Ok(Root { x: hi, residual: 0.0, iterations: 0 });
    }
    if g_lo.is_nan() || g_hi.is_nan() || g_lo.signum() == g_hi.signum() {
        return Err(RootFailure::NotBracketed { g_lo, g_hi });
    }
    // orient so that g < 0 on the `neg` side
    let lo_is_neg = g_lo < 0.0;
    let mut iterations = 0;

    let update = |x: f64, gx: f64, lo: &mut f64, hi: &mut f64| {
        if (gx < 0.0) == lo_is_neg {
            *lo = x;
        } else {
            *hi = x;
        }
    };

    while hi - lo > opts.bisect_until && iterations < opts.max_iter {
        let mid = 0.5 * (lo + hi);
        let (gm, _) = g(mid);
        iterations += 1;
        if gm == 0.0 {
            return Ok(Root { x: mid, residual: 0.0, iterations });
        }
        update(mid, gm, &mut lo, &mut hi);
    }

    let mut x = match start {
        Some(s) if s >= lo && s <= hi => s,
        _ => 0.5 * (lo + hi),
    };
    let mut best = Root { x, residual: f64::INFINITY, iterations };
    let mut prev_abs = f64::INFINITY;
    while iterations < opts.max_iter {
        let (gx, dgx) = g(x);
        iterations += 1;
        if gx.abs() < best.residual.abs() || best.residual.is_infinite() {
            best = Root { x, residual: gx, iterations };
        }
        if gx == 0.0 || gx.abs() <= opts.f_tol {
            return Ok(Root { x, residual: gx, iterations });
        }
        if gx.is_finite() {
            update(x, gx, &mut lo, &mut hi);
        }
        if hi - lo <= opts.x_tol * (1.0 + x.abs()) {
            best.iterations = iterations;
            return Ok(best);
        }
        let newton = x - gx / dgx;
        let stalled = gx.abs() > 0.5 * prev_abs;
        prev_abs = gx.abs();
        let next = if newton.is_finite() && newton > lo && newton < hi && !stalled {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= opts.x_tol * (1.0 + x.abs()) {
            let (gn, _) = g(next);
            iterations += 1;
            let r = if gn.abs() <= gx.abs() {
                Root { x: next, residual: gn, iterations }
            } else {
                Root { x, residual: gx, iterations }
            };
            return Ok(r);
        }
        x = next;
    }
    best.iterations = iterations;
    Err(RootFailure::MaxIterations(best))
}
