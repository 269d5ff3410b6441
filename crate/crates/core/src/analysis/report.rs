use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::profile::SelfSimilarProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    K,
    #[serde(rename = "d_v")]
    DV,
    Time,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::K => "k",
            SweepAxis::DV => "d_v",
            SweepAxis::Time => "time",
        }
    }
}

/// Slack and threshold constants of the property checks. All amounts that
/// scale with concentration are relative to the cap `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative slack per step for nonincreasing k-sweep sequences.
    pub k_slack: f64,
    /// Relative slack per step for the long-time sequence.
    pub longtime_slack: f64,
    /// Comparison violation bound, times `M`.
    pub comparison: f64,
    /// Contraction excess bound, times `M |xi|`, plus `10 dx^2`.
    pub contraction: f64,
    /// Bound on every profile residual.
    pub profile_residual: f64,
    /// Bounds invariant tolerance, times `M`.
    pub bounds: f64,
    /// Largest allowed max/min ratio of reaction masses.
    pub reaction_mass_ratio: f64,
    /// Required error ratio between the largest and smallest k of a sweep.
    pub k_error_ratio: f64,
    /// Required segregation ratio between the largest and smallest k.
    pub segregation_ratio: f64,
    /// Relative accuracy of the fitted front constant.
    pub front_fit: f64,
    /// Largest per-cell reaction solve residual, times `M`.
    pub reaction_residual: f64,
    /// Required error reduction under one grid refinement.
    pub self_convergence: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            k_slack: 0.02,
            longtime_slack: 0.05,
            comparison: 1e-8,
            contraction: 1e-6,
            profile_residual: 1e-10,
            bounds: 1e-10,
            reaction_mass_ratio: 2.0,
            k_error_ratio: 0.25,
            segregation_ratio: 0.1,
            front_fit: 0.05,
            reaction_residual: 1e-10,
            self_convergence: 3.0,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.k_slack,
            self.longtime_slack,
            self.comparison,
            self.contraction,
            self.profile_residual,
            self.bounds,
            self.reaction_mass_ratio,
            self.k_error_ratio,
            self.segregation_ratio,
            self.front_fit,
            self.reaction_residual,
            self.self_convergence,
        ];
        if all.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return invalid("tolerances must be finite and >= 0");
        }
        Ok(())
    }
}

/// Window and shift settings shared by the analysis operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisParams {
    /// Window half-width `J`.
    #[serde(rename = "J", alias = "j")]
    pub window: f64,
    /// Start of the space-time window; `None` means `0.05 T`.
    pub t_lo: Option<f64>,
    /// Translate shift in cells for the contraction check.
    pub xi_shift: usize,
    /// Number of seeded ordered pairs in the comparison check.
    pub comparison_pairs: usize,
    pub tolerances: Tolerances,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        AnalysisParams { window: 4.0, t_lo: None, xi_shift: 4, comparison_pairs: 20, tolerances: Tolerances::default() }
    }
}

impl AnalysisParams {
    pub fn t_lo(&self, horizon: f64) -> f64 {
        self.t_lo.unwrap_or(0.05 * horizon)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.window.is_finite() && self.window >= 0.0) {
            return invalid(format!("window J must be finite and >= 0, got {}", self.window));
        }
        if let Some(t) = self.t_lo {
            if !(t.is_finite() && t > 0.0) {
                return invalid(format!("t_lo must be > 0, got {t}"));
            }
        }
        if self.comparison_pairs == 0 {
            return invalid("comparison_pairs must be >= 1");
        }
        self.tolerances.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    pub value: f64,
    pub l2_window_error_u: f64,
    pub l2_window_error_v: f64,
    pub segregation_integral: f64,
    pub reaction_mass: f64,
    pub fitted_a: f64,
    pub fitted_a_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub axis: SweepAxis,
    pub entries: Vec<ConvergenceEntry>,
    pub profile: SelfSimilarProfile,
}

impl ConvergenceReport {
    /// Sorts `entries` by axis value and checks that the error fields are
    /// finite and nonnegative.
    pub fn new(axis: SweepAxis, mut entries: Vec<ConvergenceEntry>, profile: SelfSimilarProfile) -> Result<Self> {
        entries.sort_by(|a, b| a.value.total_cmp(&b.value));
        for e in &entries {
            let errs = [e.l2_window_error_u, e.l2_window_error_v, e.segregation_integral, e.reaction_mass];
            if errs.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                return invalid(format!("non-finite or negative error field at {} = {}", axis.name(), e.value));
            }
        }
        Ok(ConvergenceReport { axis, entries, profile })
    }

    pub fn column(&self, pick: impl Fn(&ConvergenceEntry) -> f64) -> Vec<f64> {
        self.entries.iter().map(pick).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "{},l2_window_error_u,l2_window_error_v,segregation_integral,reaction_mass,fitted_a,fitted_a_stderr\n",
            self.axis.name()
        );
        for e in &self.entries {
            let row = [
                e.value,
                e.l2_window_error_u,
                e.l2_window_error_v,
                e.segregation_integral,
                e.reaction_mass,
                e.fitted_a,
                e.fitted_a_stderr,
            ];
            out.push_str(&csv_row(&row));
        }
        out
    }
}

/// `values[i+1] <= (1 + slack) values[i]` for every step.
pub fn nonincreasing_within(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= (1.0 + slack) * w[0])
}

pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

/// C `%.17g` formatting, which round-trips every finite `f64`.
pub fn format_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..P).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One comma-separated line of `%.17g` numbers.
pub fn csv_row(values: &[f64]) -> String {
    let mut line = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        let _ = write!(line, "{}", format_g17(*v));
    }
    line.push('\n');
    line
}
