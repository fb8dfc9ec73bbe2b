use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{log_add_exp, norm_cdf};

/// Law of the rate jump at one announced date.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JumpDistribution {
    /// `N(m, gamma²)`.
    Gaussian { m: f64, gamma: f64 },
    /// `+m` with probability `p`, `-m` with probability `1 - p`.
    TwoPoint { m: f64, p: f64 },
}

impl JumpDistribution {
    pub fn gaussian(m: f64, gamma: f64) -> Result<Self> {
        let d = JumpDistribution::Gaussian { m, gamma };
        d.validate()?;
        Ok(d)
    }

    pub fn two_point(m: f64, p: f64) -> Result<Self> {
        let d = JumpDistribution::TwoPoint { m, p };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            JumpDistribution::Gaussian { m, gamma } => {
                if !m.is_finite() || !gamma.is_finite() || gamma < 0.0 {
                    return Err(Error::param(format!(
                        "Gaussian jump needs finite m and gamma >= 0 (m={m}, gamma={gamma})"
                    )));
                }
            }
            JumpDistribution::TwoPoint { m, p } => {
                if !m.is_finite() || !(0.0..=1.0).contains(&p) {
                    return Err(Error::param(format!(
                        "two-point jump needs finite m and p in [0,1] (m={m}, p={p})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, JumpDistribution::Gaussian { .. })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            JumpDistribution::Gaussian { m, .. } => m,
            JumpDistribution::TwoPoint { m, p } => m * (2.0 * p - 1.0),
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            JumpDistribution::Gaussian { gamma, .. } => gamma * gamma,
            JumpDistribution::TwoPoint { m, p } => 4.0 * m * m * p * (1.0 - p),
        }
    }

    /// `log E[e^{-ξ b}]`.
    pub fn log_mgf_neg(&self, b: f64) -> f64 {
        match *self {
            JumpDistribution::Gaussian { m, gamma } => -m * b + 0.5 * gamma * gamma * b * b,
            JumpDistribution::TwoPoint { m, p } => {
                // factor out the dominant exponential so b = 0 gives exactly 0
                let s = m * b;
                let v = if s >= 0.0 {
                    s + (p * (-2.0 * s).exp_m1()).ln_1p()
                } else {
                    -s + ((1.0 - p) * (2.0 * s).exp_m1()).ln_1p()
                };
                if v.is_finite() {
                    v
                } else {
                    log_add_exp(p.ln() - s, (1.0 - p).ln() + s)
                }
            }
        }
    }

    /// Probability mass the jump puts on `[lo, hi]`.
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            JumpDistribution::Gaussian { m, gamma } if gamma > 0.0 => {
                let upper = norm_cdf((hi - m) / gamma);
                let lower = norm_cdf((lo - m) / gamma);
                (upper - lower).max(0.0)
            }
            JumpDistribution::Gaussian { m, .. } => f64::from(u8::from((lo..=hi).contains(&m))),
            JumpDistribution::TwoPoint { m, p } => {
                let mut mass = 0.0;
                if (lo..=hi).contains(&m) {
                    mass += p;
                }
                if (lo..=hi).contains(&-m) {
                    mass += 1.0 - p;
                }
                mass
            }
        }
    }

    /// Draws one jump size. With `mirror` the underlying normal is negated
    /// (Gaussian) or the uniform is reflected (two-point), which yields the
    /// antithetic partner of the unmirrored draw from the same stream state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, mirror: bool) -> f64 {
        match *self {
            JumpDistribution::Gaussian { m, gamma } => {
                let z: f64 = rng.sample(StandardNormal);
                m + gamma * if mirror { -z } else { z }
            }
            JumpDistribution::TwoPoint { m, p } => {
                let u: f64 = rng.random();
                let u = if mirror { 1.0 - u } else { u };
                if u < p {
                    m
                } else {
                    -m
                }
            }
        }
    }
}

/// `log E[e^{-ξ b}]` for a jump law; finite for every finite `b`.
pub fn log_mgf_neg(dist: &JumpDistribution, b: f64) -> f64 {
    dist.log_mgf_neg(b)
}
