use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{DomainVariant, GridSpec, ProblemSpec};

/// Boundary treatment at one end of a cell-centred grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    /// Value prescribed on the boundary face (ghost value `2g - u_0`).
    Dirichlet(f64),
    /// Zero flux (ghost value `u_0`).
    Neumann,
}

/// `d u_xx` discretized as `A u + source` with a second-order central
/// stencil. `A` is symmetric with `d / dx^2` off the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionStencil {
    pub diffusivity: f64,
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub source: Vec<f64>,
    pub left: Boundary,
    pub right: Boundary,
}

impl DiffusionStencil {
    pub fn new(diffusivity: f64, nx: usize, dx: f64, left: Boundary, right: Boundary) -> Self {
        let c = diffusivity / (dx * dx);
        let mut lower = vec![c; nx];
        let mut upper = vec![c; nx];
        let mut diag = vec![-2.0 * c; nx];
        let mut source = vec![0.0; nx];
        lower[0] = 0.0;
        upper[nx - 1] = 0.0;
        match left {
            Boundary::Dirichlet(g) => {
                diag[0] = -3.0 * c;
                source[0] = 2.0 * c * g;
            }
            Boundary::Neumann => diag[0] = -c,
        }
        match right {
            Boundary::Dirichlet(g) => {
                diag[nx - 1] = -3.0 * c;
                source[nx - 1] = 2.0 * c * g;
            }
            Boundary::Neumann => diag[nx - 1] = -c,
        }
        Self { diffusivity, lower, diag, upper, source, left, right }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A u + source`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        self.apply_into(u, &mut out);
        out
    }

    pub fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let mut s = self.diag[i] * u[i] + self.source[i];
            if i > 0 {
                s += self.lower[i] * u[i - 1];
            }
            if i + 1 < n {
                s += self.upper[i] * u[i + 1];
            }
            out[i] = s;
        }
    }

    /// Row sums of `A`.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.lower[i] + self.diag[i] + self.upper[i]).collect()
    }
}

/// Spatial discretization of both components.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    pub dx: f64,
    pub x: Vec<f64>,
    pub u: DiffusionStencil,
    /// `None` when the substrate does not diffuse: `v` then changes only
    /// through the reaction.
    pub v: Option<DiffusionStencil>,
}

/// Builds the operator: Dirichlet far-field values at truncated ends,
/// `u(0) = U0` and zero-flux `v` at the half-line boundary.
pub fn build_operator(spec: &ProblemSpec, grid: &GridSpec) -> Result<DiscreteOperator> {
    if grid.nx < crate::model::MIN_CELLS {
        return invalid(format!("grid too coarse: nx = {}", grid.nx));
    }
    grid.validate(spec)?;
    let dx = grid.dx();
    let nx = grid.nx;
    let (u_left, v_left) = match spec.variant {
        DomainVariant::WholeLine => (Boundary::Dirichlet(spec.u0), Boundary::Dirichlet(0.0)),
        DomainVariant::HalfLine => (Boundary::Dirichlet(spec.u0), Boundary::Neumann),
    };
    let u = DiffusionStencil::new(spec.d_u, nx, dx, u_left, Boundary::Dirichlet(0.0));
    let v = (spec.d_v > 0.0)
        .then(|| DiffusionStencil::new(spec.d_v, nx, dx, v_left, Boundary::Dirichlet(spec.v0)));
    Ok(DiscreteOperator { dx, x: grid.centers().collect(), u, v })
}
