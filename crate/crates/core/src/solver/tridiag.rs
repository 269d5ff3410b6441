//! Thomas algorithm with the elimination factors stored, so one factorization
//! serves every time step of a given size.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<f64>,
    inv_pivot: Vec<f64>,
    upper_scaled: Vec<f64>,
}

impl TridiagonalLu {
    /// Factorizes the matrix with sub-diagonal `lower` (`lower[0]` unused),
    /// diagonal `diag` and super-diagonal `upper` (`upper[n-1]` unused).
    pub fn factor(lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<Self> {
        let n = diag.len();
        debug_assert!(lower.len() == n && upper.len() == n);
        let mut inv_pivot = vec![0.0; n];
        let mut upper_scaled = vec![0.0; n];
        let mut prev = 0.0;
        for i in 0..n {
            let pivot = if i == 0 { diag[0] } else { diag[i] - lower[i] * prev };
            if !(pivot.abs() > f64::MIN_POSITIVE) || !pivot.is_finite() {
                return Err(Error::TridiagonalBreakdown { row: i, pivot });
            }
            inv_pivot[i] = 1.0 / pivot;
            upper_scaled[i] = if i + 1 < n { upper[i] * inv_pivot[i] } else { 0.0 };
            prev = upper_scaled[i];
        }
        Ok(Self { lower: lower.to_vec(), inv_pivot, upper_scaled })
    }

    /// Solves in place: `rhs` is overwritten with the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.upper_scaled[i] * rhs[i + 1];
        }
    }
}
