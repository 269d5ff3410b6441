use serde::{Deserialize, Serialize};

use super::initial::InitialData;
use super::kinetics::Kinetics;
use crate::error::{invalid, require_finite, Result};

/// Whole line `R` or half line `(0, inf)` with `u(0, t) = U0`, `d_v v_x(0, t) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainVariant {
    WholeLine,
    HalfLine,
}

/// Which of the four self-similar limits a problem converges to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitCase {
    WholeDvPos,
    WholeDvZero,
    HalfDvPos,
    HalfDvZero,
}

impl LimitCase {
    pub fn new(variant: DomainVariant, d_v: f64) -> Self {
        match (variant, d_v > 0.0) {
            (DomainVariant::WholeLine, true) => LimitCase::WholeDvPos,
            (DomainVariant::WholeLine, false) => LimitCase::WholeDvZero,
            (DomainVariant::HalfLine, true) => LimitCase::HalfDvPos,
            (DomainVariant::HalfLine, false) => LimitCase::HalfDvZero,
        }
    }

    pub fn variant(self) -> DomainVariant {
        match self {
            LimitCase::WholeDvPos | LimitCase::WholeDvZero => DomainVariant::WholeLine,
            LimitCase::HalfDvPos | LimitCase::HalfDvZero => DomainVariant::HalfLine,
        }
    }

    pub fn substrate_diffuses(self) -> bool {
        matches!(self, LimitCase::WholeDvPos | LimitCase::HalfDvPos)
    }

    pub const ALL: [LimitCase; 4] =
        [LimitCase::WholeDvPos, LimitCase::WholeDvZero, LimitCase::HalfDvPos, LimitCase::HalfDvZero];
}

/// One problem instance: `u_t = d_u u_xx - kF(u,v)`, `v_t = d_v v_xx - kF(u,v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub variant: DomainVariant,
    pub d_u: f64,
    pub d_v: f64,
    /// Reaction rate. Zero is accepted and turns the reaction off.
    pub k: f64,
    /// Far-field value of `u`.
    pub u0: f64,
    /// Far-field value of `v`.
    pub v0: f64,
    /// Concentration cap `M`; defaults to `max(u0, v0)`.
    #[serde(default, rename = "m", skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
    /// Time horizon `T`.
    pub horizon: f64,
    #[serde(default)]
    pub kinetics: Kinetics,
    #[serde(default)]
    pub initial: InitialData,
}

impl ProblemSpec {
    /// Product kinetics with sharp-step initial data.
    pub fn new(
        variant: DomainVariant,
        d_u: f64,
        d_v: f64,
        k: f64,
        u0: f64,
        v0: f64,
        horizon: f64,
    ) -> Result<Self> {
        let spec = Self {
            variant,
            d_u,
            d_v,
            k,
            u0,
            v0,
            cap: None,
            horizon,
            kinetics: Kinetics::product(),
            initial: InitialData::SharpStep,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_kinetics(mut self, kinetics: Kinetics) -> Result<Self> {
        self.kinetics = kinetics;
        self.validate()?;
        Ok(self)
    }

    pub fn with_initial(mut self, initial: InitialData) -> Result<Self> {
        self.initial = initial;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cap(mut self, cap: f64) -> Result<Self> {
        self.cap = Some(cap);
        self.validate()?;
        Ok(self)
    }

    pub fn with_k(mut self, k: f64) -> Result<Self> {
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_d_v(mut self, d_v: f64) -> Result<Self> {
        self.d_v = d_v;
        self.validate()?;
        Ok(self)
    }

    pub fn cap(&self) -> f64 {
        self.cap.unwrap_or(self.u0.max(self.v0))
    }

    pub fn limit_case(&self) -> LimitCase {
        LimitCase::new(self.variant, self.d_v)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("d_u", self.d_u),
            ("d_v", self.d_v),
            ("k", self.k),
            ("u0", self.u0),
            ("v0", self.v0),
            ("horizon", self.horizon),
        ] {
            require_finite(name, x)?;
        }
        if self.d_u <= 0.0 {
            return invalid(format!("d_u must be > 0, got {}", self.d_u));
        }
        if self.d_v < 0.0 {
            return invalid(format!("d_v must be >= 0, got {}", self.d_v));
        }
        if self.k < 0.0 {
            return invalid(format!("k must be >= 0, got {}", self.k));
        }
        if self.u0 <= 0.0 || self.v0 <= 0.0 {
            return invalid("far-field values u0, v0 must be > 0");
        }
        if self.horizon <= 0.0 {
            return invalid(format!("horizon must be > 0, got {}", self.horizon));
        }
        if let Some(m) = self.cap {
            require_finite("m", m)?;
            if m < self.u0.max(self.v0) {
                return invalid(format!("cap m = {m} must be >= max(u0, v0)"));
            }
        }
        self.kinetics.validate()?;
        self.initial.validate()?;
        Ok(())
    }
}
