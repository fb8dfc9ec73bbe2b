//! Market model: short-rate dynamics, jump schedules, and the grid operators
//! applied at relevant dates during a backward sweep.
//!
//! The short rate follows `dρ = μ(t,ρ) dt + σ(t,ρ) dW + dJ`, where `J` jumps
//! only at announced dates `s_i` by independent random sizes, and the
//! numéraire picks up a factor `e^{ρ}` at each roll-over date `t_n`.

mod grid;
mod jump_condition;
mod jumps;
mod timeline;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use grid::{GridFunction, UniformGrid};
pub use jump_condition::{apply_jump_condition, neglected_jump_mass};
pub use jumps::{log_mgf_neg, JumpDistribution};
pub use timeline::{merge_relevant_dates, DateKind, JumpSchedule, RateJump, RelevantDate, Timeline};

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type StateFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Constant-coefficient Vasicek dynamics `dρ = (α + βρ) dt + σ dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vasicek {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
}

impl Vasicek {
    pub fn new(alpha: f64, beta: f64, sigma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && sigma.is_finite()) {
            return Err(Error::param("Vasicek coefficients must be finite"));
        }
        if beta == 0.0 {
            return Err(Error::param("Vasicek requires beta != 0"));
        }
        if sigma <= 0.0 {
            return Err(Error::param("Vasicek requires sigma > 0"));
        }
        Ok(Self { alpha, beta, sigma })
    }

    /// `B(t,T) = (e^{β(T-t)} - 1)/β` for a time-to-maturity `tau`.
    pub fn b_plain(&self, tau: f64) -> f64 {
        (self.beta * tau).exp_m1() / self.beta
    }

    /// `A(t,T)` of the jump-free Vasicek bond for a time-to-maturity `tau`.
    pub fn a_plain(&self, tau: f64) -> f64 {
        let (a, b, s) = (self.alpha, self.beta, self.sigma);
        let bb = self.b_plain(tau);
        a / b * (bb - tau) - s * s / (2.0 * b * b) * (b / 2.0 * bb * bb - bb + tau)
    }
}

/// Time-dependent affine coefficients: drift `α(t) + β(t)x`, squared
/// volatility `γ(t) + δ(t)x`.
#[derive(Clone)]
pub struct AffineCoefficients {
    pub alpha: TimeFn,
    pub beta: TimeFn,
    pub gamma: TimeFn,
    pub delta: TimeFn,
}

impl AffineCoefficients {
    pub fn new(alpha: TimeFn, beta: TimeFn, gamma: TimeFn, delta: TimeFn) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// Hull-White style coefficients with `δ ≡ 0` and `γ = σ²`.
    pub fn hull_white(alpha: TimeFn, beta: TimeFn, sigma: TimeFn) -> Self {
        Self {
            alpha,
            beta,
            gamma: Arc::new(move |t| {
                let s = sigma(t);
                s * s
            }),
            delta: Arc::new(|_| 0.0),
        }
    }

    pub fn constant(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self {
            alpha: Arc::new(move |_| alpha),
            beta: Arc::new(move |_| beta),
            gamma: Arc::new(move |_| gamma),
            delta: Arc::new(move |_| delta),
        }
    }
}

/// Non-affine dynamics given directly by drift and volatility callables.
#[derive(Clone)]
pub struct GeneralSde {
    pub drift: StateFn,
    pub volatility: StateFn,
}

/// Short-rate dynamics between relevant dates.
#[derive(Clone)]
pub enum ModelSpec {
    Vasicek(Vasicek),
    Affine(AffineCoefficients),
    General(GeneralSde),
}

impl fmt::Debug for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Vasicek(v) => f.debug_tuple("Vasicek").field(v).finish(),
            ModelSpec::Affine(_) => f.write_str("Affine(..)"),
            ModelSpec::General(_) => f.write_str("General(..)"),
        }
    }
}

impl From<Vasicek> for ModelSpec {
    fn from(v: Vasicek) -> Self {
        ModelSpec::Vasicek(v)
    }
}

impl ModelSpec {
    pub fn vasicek(alpha: f64, beta: f64, sigma: f64) -> Result<Self> {
        Vasicek::new(alpha, beta, sigma).map(ModelSpec::Vasicek)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ModelSpec::Vasicek(_) => "vasicek",
            ModelSpec::Affine(_) => "affine",
            ModelSpec::General(_) => "general",
        }
    }

    pub fn as_vasicek(&self) -> Option<&Vasicek> {
        match self {
            ModelSpec::Vasicek(v) => Some(v),
            _ => None,
        }
    }

    /// `(α, β, γ, δ)` at time `t`, or `None` for a non-affine model.
    pub fn affine_at(&self, t: f64) -> Option<(f64, f64, f64, f64)> {
        match self {
            ModelSpec::Vasicek(v) => Some((v.alpha, v.beta, v.sigma * v.sigma, 0.0)),
            ModelSpec::Affine(c) => Some(((c.alpha)(t), (c.beta)(t), (c.gamma)(t), (c.delta)(t))),
            ModelSpec::General(_) => None,
        }
    }

    pub fn drift(&self, t: f64, x: f64) -> f64 {
        match self {
            ModelSpec::Vasicek(v) => v.alpha + v.beta * x,
            ModelSpec::Affine(c) => (c.alpha)(t) + (c.beta)(t) * x,
            ModelSpec::General(g) => (g.drift)(t, x),
        }
    }

    /// Squared volatility; an error where `γ(t) + δ(t)x < 0`.
    pub fn variance(&self, t: f64, x: f64) -> Result<f64> {
        let value = match self {
            ModelSpec::Vasicek(v) => return Ok(v.sigma * v.sigma),
            ModelSpec::Affine(c) => (c.gamma)(t) + (c.delta)(t) * x,
            ModelSpec::General(g) => {
                let s = (g.volatility)(t, x);
                s * s
            }
        };
        if value < 0.0 || !value.is_finite() {
            return Err(Error::InadmissibleVolatility { t, x, value });
        }
        Ok(value)
    }

    pub fn volatility(&self, t: f64, x: f64) -> Result<f64> {
        match self {
            ModelSpec::Vasicek(v) => Ok(v.sigma),
            ModelSpec::General(g) => Ok((g.volatility)(t, x).abs()),
            ModelSpec::Affine(_) => self.variance(t, x).map(f64::sqrt),
        }
    }

    /// Checks `γ(t) + δ(t)x ≥ 0` on the corners of a working domain.
    ///
    /// The squared volatility is linear in `x`, so the endpoints suffice at
    /// each sampled time.
    pub fn check_admissible(&self, lo: f64, hi: f64, t0: f64, t1: f64) -> Result<()> {
        if let ModelSpec::Affine(_) = self {
            const SAMPLES: usize = 64;
            for k in 0..=SAMPLES {
                let t = t0 + (t1 - t0) * k as f64 / SAMPLES as f64;
                self.variance(t, lo)?;
                self.variance(t, hi)?;
            }
        }
        Ok(())
    }
}
