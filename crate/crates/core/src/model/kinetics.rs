//! Interaction functions `F(u, v)` and their C^1 regularization.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_finite, Result};

/// Monotone interaction table evaluated by bilinear interpolation.
///
/// Rows follow `u_grid`, columns follow `v_grid`. Both grids start at 0 and
/// are strictly increasing; the first row and first column are zero, every
/// other entry is positive, and values are nondecreasing along both axes.
/// Arguments beyond the last sample are clamped to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct MonotoneTable {
    u_grid: Vec<f64>,
    v_grid: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawTable {
    u_grid: Vec<f64>,
    v_grid: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TryFrom<RawTable> for MonotoneTable {
    type Error = crate::Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        MonotoneTable::new(raw.u_grid, raw.v_grid, raw.values)
    }
}

impl From<MonotoneTable> for RawTable {
    fn from(t: MonotoneTable) -> Self {
        RawTable { u_grid: t.u_grid, v_grid: t.v_grid, values: t.values }
    }
}

fn check_axis(name: &str, grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return invalid(format!("{name} needs at least two samples"));
    }
    if grid[0] != 0.0 {
        return invalid(format!("{name} must start at 0"));
    }
    for w in grid.windows(2) {
        require_finite(name, w[1])?;
        if w[1] <= w[0] {
            return invalid(format!("{name} must be strictly increasing"));
        }
    }
    Ok(())
}

impl MonotoneTable {
    pub fn new(u_grid: Vec<f64>, v_grid: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        check_axis("u_grid", &u_grid)?;
        check_axis("v_grid", &v_grid)?;
        if values.len() != u_grid.len() || values.iter().any(|row| row.len() != v_grid.len()) {
            return invalid("table shape must be u_grid.len() x v_grid.len()");
        }
        for (i, row) in values.iter().enumerate() {
            for (j, &f) in row.iter().enumerate() {
                require_finite("table value", f)?;
                if (i == 0 || j == 0) && f != 0.0 {
                    return invalid(format!("table must vanish on the axes, F[{i}][{j}] = {f}"));
                }
                if i > 0 && j > 0 && f <= 0.0 {
                    return invalid(format!("table must be positive off the axes, F[{i}][{j}] = {f}"));
                }
                if i > 0 && f < values[i - 1][j] {
                    return invalid(format!("table not monotone in u at [{i}][{j}]"));
                }
                if j > 0 && f < row[j - 1] {
                    return invalid(format!("table not monotone in v at [{i}][{j}]"));
                }
            }
        }
        Ok(Self { u_grid, v_grid, values })
    }

    fn locate(grid: &[f64], x: f64) -> (usize, f64, bool) {
        let last = grid.len() - 1;
        if x >= grid[last] {
            return (last - 1, 1.0, true);
        }
        let j = grid.partition_point(|&g| g <= x).clamp(1, last);
        let (g0, g1) = (grid[j - 1], grid[j]);
        (j - 1, (x - g0) / (g1 - g0), false)
    }

    /// Value and partial derivatives at clamped, nonnegative arguments.
    fn eval(&self, u: f64, v: f64) -> (f64, f64, f64) {
        let (i, s, u_sat) = Self::locate(&self.u_grid, u);
        let (j, r, v_sat) = Self::locate(&self.v_grid, v);
        let f00 = self.values[i][j];
        let f10 = self.values[i + 1][j];
        let f01 = self.values[i][j + 1];
        let f11 = self.values[i + 1][j + 1];
        let f = (1.0 - s) * (1.0 - r) * f00 + s * (1.0 - r) * f10 + (1.0 - s) * r * f01 + s * r * f11;
        let du = self.u_grid[i + 1] - self.u_grid[i];
        let dv = self.v_grid[j + 1] - self.v_grid[j];
        let fu = if u_sat { 0.0 } else { ((1.0 - r) * (f10 - f00) + r * (f11 - f01)) / du };
        let fv = if v_sat { 0.0 } else { ((1.0 - s) * (f01 - f00) + s * (f11 - f10)) / dv };
        (f, fu, fv)
    }
}

/// Shape of the interaction function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KineticsKind {
    /// `F(u, v) = u v`.
    Product,
    /// `F(u, v) = u^m v^n`.
    Power { m: f64, n: f64 },
    Tabulated { table: MonotoneTable },
}

/// Interaction function with optional smoothing width `mu`.
///
/// With `mu > 0` the rate is `F(u, v) s(u/mu) s(v/mu)` where `s` is the cubic
/// smoothstep, which is C^1 at the axes even for fractional exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kinetics {
    #[serde(flatten)]
    pub kind: KineticsKind,
    #[serde(default)]
    pub mu: f64,
}

impl Default for Kinetics {
    fn default() -> Self {
        Self::product()
    }
}

fn smoothstep(r: f64) -> (f64, f64) {
    if r <= 0.0 {
        (0.0, 0.0)
    } else if r >= 1.0 {
        (1.0, 0.0)
    } else {
        (r * r * (3.0 - 2.0 * r), 6.0 * r * (1.0 - r))
    }
}

/// `a * b` with `0 * inf = 0`.
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl Kinetics {
    pub fn product() -> Self {
        Self { kind: KineticsKind::Product, mu: 0.0 }
    }

    pub fn power(m: f64, n: f64) -> Result<Self> {
        let k = Self { kind: KineticsKind::Power { m, n }, mu: 0.0 };
        k.validate()?;
        Ok(k)
    }

    pub fn tabulated(table: MonotoneTable) -> Self {
        Self { kind: KineticsKind::Tabulated { table }, mu: 0.0 }
    }

    pub fn with_regularization(mut self, mu: f64) -> Result<Self> {
        self.mu = mu;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        require_finite("mu", self.mu)?;
        if self.mu < 0.0 {
            return invalid(format!("mu must be >= 0, got {}", self.mu));
        }
        if let KineticsKind::Power { m, n } = self.kind {
            require_finite("m", m)?;
            require_finite("n", n)?;
            if m <= 0.0 || n <= 0.0 {
                return invalid(format!("power exponents must be positive, got m = {m}, n = {n}"));
            }
        }
        Ok(())
    }

    /// Evaluates `F` (or `F_mu`) with negative arguments clamped to zero.
    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        require_finite("u", u)?;
        require_finite("v", v)?;
        Ok(self.rate(u, v))
    }

    /// Unchecked rate for the solver hot path.
    #[inline]
    pub fn rate(&self, u: f64, v: f64) -> f64 {
        self.rate_and_partials(u, v).0
    }

    /// `(F, dF/du, dF/dv)` at clamped arguments. Partials may be `+inf` on the
    /// axes for fractional exponents without regularization.
    pub fn rate_and_partials(&self, u: f64, v: f64) -> (f64, f64, f64) {
        let u = u.max(0.0);
        let v = v.max(0.0);
        let (f, fu, fv) = match &self.kind {
            KineticsKind::Product => (u * v, v, u),
            KineticsKind::Power { m, n } => {
                let um = u.powf(*m);
                let vn = v.powf(*n);
                let fu = mul0(m * u.powf(m - 1.0), vn);
                let fv = mul0(um, n * v.powf(n - 1.0));
                (um * vn, fu, fv)
            }
            KineticsKind::Tabulated { table } => table.eval(u, v),
        };
        if self.mu > 0.0 {
            let (su, dsu) = smoothstep(u / self.mu);
            let (sv, dsv) = smoothstep(v / self.mu);
            let g = f * su * sv;
            let gu = mul0(fu, su) * sv + f * dsu / self.mu * sv;
            let gv = mul0(fv, sv) * su + f * dsv / self.mu * su;
            (g, gu, gv)
        } else {
            (f, fu, fv)
        }
    }
}
