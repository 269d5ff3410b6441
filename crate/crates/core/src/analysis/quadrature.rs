/// Integral over `[lo, hi]` of the piecewise-linear interpolant of samples
/// `(x_i, g_i)` (the trapezoidal rule, with interpolated end pieces). The
/// window is clipped to `[x_0, x_{n-1}]`.
pub fn trapezoid_window(x: &[f64], g: &[f64], lo: f64, hi: f64) -> f64 {
    debug_assert_eq!(x.len(), g.len());
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let lo = lo.max(x[0]);
    let hi = hi.min(x[n - 1]);
    if hi <= lo {
        return 0.0;
    }
    let mut total = 0.0;
    let start = x.partition_point(|&xi| xi <= lo).max(1);
    for i in start..n {
        let (x0, x1) = (x[i - 1], x[i]);
        if x0 >= hi {
            break;
        }
        let a = x0.max(lo);
        let b = x1.min(hi);
        if b <= a {
            continue;
        }
        let slope = (g[i] - g[i - 1]) / (x1 - x0);
        let ga = g[i - 1] + slope * (a - x0);
        let gb = g[i - 1] + slope * (b - x0);
        total += 0.5 * (ga + gb) * (b - a);
    }
    total
}

/// Trapezoidal rule over all samples.
pub fn trapezoid(x: &[f64], g: &[f64]) -> f64 {
    x.windows(2).zip(g.windows(2)).map(|(xs, gs)| 0.5 * (gs[0] + gs[1]) * (xs[1] - xs[0])).sum()
}
