//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! name = "case4_zcb"
//! engines = ["closed_form", "semianalytic", "fd"]
//!
//! [model]
//! kind = "vasicek"            # or "hull_white" / "affine"
//! alpha = 0.075
//! beta = -0.3
//! sigma = 0.1
//!
//! [timeline]
//! rollovers = [0.8]
//! [[timeline.rate_jumps]]
//! date = 0.5
//! kind = "gaussian"           # or "two_point" with m, p
//! m = 0.09
//! gamma = 0.5
//!
//! [product]
//! kind = "zcb"                # or "call" with strike, expiry, bond_maturity
//! maturity = 1.0
//!
//! [numerics]
//! theta = 0.5
//! dx = 0.005
//! dt = 0.004
//! region = [-0.5, 1.0]
//! domain = [-5.1204, 5.6196]  # optional; the certified domain otherwise
//!
//! [mc]                        # optional
//! paths = 200000
//! steps_per_year = 512
//! seed = 1
//! x0 = [0.0, 0.05]
//! ```
//!
//! Coefficients of `hull_white` and `affine` models are numbers or logistic
//! steps `{ base, step, steepness, center }`, meaning
//! `base + step / (1 + exp(-steepness (t - center)))`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localization::LocalizationTolerances;
use crate::model::{AffineCoefficients, JumpDistribution, JumpSchedule, ModelSpec, RateJump, TimeFn, Vasicek};
use crate::result::Method;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub engines: Vec<String>,
    pub model: ModelConfig,
    #[serde(default)]
    pub timeline: TimelineConfig,
    pub product: ProductConfig,
    pub numerics: NumericsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Constant(f64),
    Logistic {
        base: f64,
        step: f64,
        steepness: f64,
        center: f64,
    },
}

impl Coefficient {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Coefficient::Constant(c) => c,
            Coefficient::Logistic {
                base,
                step,
                steepness,
                center,
            } => base + step / (1.0 + (-steepness * (t - center)).exp()),
        }
    }

    fn function(self) -> TimeFn {
        Arc::new(move |t| self.at(t))
    }

    fn is_finite(&self) -> bool {
        match *self {
            Coefficient::Constant(c) => c.is_finite(),
            Coefficient::Logistic {
                base,
                step,
                steepness,
                center,
            } => [base, step, steepness, center].iter().all(|v| v.is_finite()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Vasicek {
        alpha: f64,
        beta: f64,
        sigma: f64,
    },
    HullWhite {
        alpha: Coefficient,
        beta: Coefficient,
        sigma: Coefficient,
    },
    Affine {
        alpha: Coefficient,
        beta: Coefficient,
        gamma: Coefficient,
        delta: Coefficient,
    },
}

impl ModelConfig {
    pub fn build(&self) -> Result<ModelSpec> {
        Ok(match self {
            ModelConfig::Vasicek { alpha, beta, sigma } => {
                ModelSpec::Vasicek(Vasicek::new(*alpha, *beta, *sigma)?)
            }
            ModelConfig::HullWhite { alpha, beta, sigma } => {
                check_finite(&[alpha, beta, sigma])?;
                ModelSpec::Affine(AffineCoefficients::hull_white(
                    alpha.function(),
                    beta.function(),
                    sigma.function(),
                ))
            }
            ModelConfig::Affine {
                alpha,
                beta,
                gamma,
                delta,
            } => {
                check_finite(&[alpha, beta, gamma, delta])?;
                ModelSpec::Affine(AffineCoefficients::new(
                    alpha.function(),
                    beta.function(),
                    gamma.function(),
                    delta.function(),
                ))
            }
        })
    }
}

fn check_finite(cs: &[&Coefficient]) -> Result<()> {
    if cs.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::Validation("model coefficients must be finite".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimelineConfig {
    #[serde(default)]
    pub rollovers: Vec<f64>,
    #[serde(default)]
    pub rate_jumps: Vec<RateJumpConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateJumpConfig {
    pub date: f64,
    #[serde(flatten)]
    pub dist: JumpDistribution,
}

impl TimelineConfig {
    pub fn schedule(&self) -> Result<JumpSchedule> {
        let jumps = self.rate_jumps.iter().map(|j| RateJump::new(j.date, j.dist)).collect();
        JumpSchedule::new(jumps, self.rollovers.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProductConfig {
    Zcb { maturity: f64 },
    Call { strike: f64, expiry: f64, bond_maturity: f64 },
}

impl ProductConfig {
    /// Horizon of the pricing problem (bond maturity or option expiry).
    pub fn horizon(&self) -> f64 {
        match *self {
            ProductConfig::Zcb { maturity } => maturity,
            ProductConfig::Call { expiry, .. } => expiry,
        }
    }
}

fn default_theta() -> f64 {
    0.5
}

fn default_dt() -> f64 {
    0.004
}

fn default_kernel_tol() -> f64 {
    LocalizationTolerances::default().kernel
}

fn default_jump_tol() -> f64 {
    LocalizationTolerances::default().jump
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(default = "default_theta")]
    pub theta: f64,
    pub dx: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub region: [f64; 2],
    #[serde(default = "default_kernel_tol")]
    pub kernel_tol: f64,
    #[serde(default = "default_jump_tol")]
    pub jump_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
}

impl NumericsConfig {
    pub fn tolerances(&self) -> LocalizationTolerances {
        LocalizationTolerances {
            kernel: self.kernel_tol,
            jump: self.jump_tol,
        }
    }
}

fn default_steps() -> usize {
    512
}

fn default_x0() -> Vec<f64> {
    vec![0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub paths: usize,
    #[serde(default = "default_steps")]
    pub steps_per_year: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub antithetic: bool,
    #[serde(default = "default_x0")]
    pub x0: Vec<f64>,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            paths: 100_000,
            steps_per_year: default_steps(),
            seed: 0,
            antithetic: false,
            x0: default_x0(),
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates; syntax errors carry the offending line.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::Config {
                line,
                message: e.message().trim().to_string(),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(format!("serializing scenario: {e}")))
    }

    pub fn methods(&self) -> Result<Vec<Method>> {
        self.engines
            .iter()
            .map(|e| {
                Method::from_tag(e).ok_or_else(|| {
                    Error::Validation(format!(
                        "unknown engine `{e}` (expected closed_form, semianalytic, fd or mc)"
                    ))
                })
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.engines.is_empty() {
            return Err(Error::Validation("engines list is empty".into()));
        }
        self.methods()?;
        self.model.build()?;
        self.timeline.schedule()?;
        match self.product {
            ProductConfig::Zcb { maturity } => {
                if !(maturity > 0.0) {
                    return Err(Error::Validation(format!("maturity must be positive, got {maturity}")));
                }
            }
            ProductConfig::Call {
                strike,
                expiry,
                bond_maturity,
            } => {
                crate::affine::CallSpec::new(strike, expiry, bond_maturity)?;
            }
        }
        let n = &self.numerics;
        if !(0.0..=1.0).contains(&n.theta) {
            return Err(Error::Validation(format!("theta must lie in [0, 1], got {}", n.theta)));
        }
        if !(n.dx > 0.0) || !(n.dt > 0.0) {
            return Err(Error::Validation("dx and dt must be positive".into()));
        }
        if !(n.region[0] <= n.region[1]) {
            return Err(Error::Validation("region must satisfy x_min <= x_max".into()));
        }
        if let Some([lo, hi]) = n.domain {
            if !(lo < n.region[0] && n.region[1] < hi) {
                return Err(Error::Validation(format!(
                    "domain [{lo}, {hi}] must strictly contain the region [{}, {}]",
                    n.region[0], n.region[1]
                )));
            }
        }
        if let Some(mc) = &self.mc {
            crate::mc::PathConfig::new(mc.paths, mc.steps_per_year, mc.seed, mc.antithetic)?;
            if mc.x0.is_empty() {
                return Err(Error::Validation("mc.x0 is empty".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE4: &str = r#"
name = "case4"
engines = ["closed_form", "fd"]

[model]
kind = "vasicek"
alpha = 0.075
beta = -0.3
sigma = 0.1

[timeline]
rollovers = [0.8]
[[timeline.rate_jumps]]
date = 0.5
kind = "gaussian"
m = 0.09
gamma = 0.5

[product]
kind = "zcb"
maturity = 1.0

[numerics]
dx = 0.005
region = [-0.5, 1.0]
domain = [-5.1204, 5.6196]
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ScenarioConfig::parse(CASE4).unwrap();
        assert_eq!(cfg.numerics.theta, 0.5);
        assert_eq!(cfg.numerics.dt, 0.004);
        assert_eq!(
            cfg.timeline.rate_jumps[0].dist,
            JumpDistribution::Gaussian { m: 0.09, gamma: 0.5 }
        );
        let again = ScenarioConfig::parse(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let broken = CASE4.replace("sigma = 0.1", "sigma = = 0.1");
        match ScenarioConfig::parse(&broken) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_engine_list_is_rejected() {
        let cfg = CASE4.replace(r#"engines = ["closed_form", "fd"]"#, "engines = []");
        let err = ScenarioConfig::parse(&cfg).unwrap_err();
        assert!(err.is_validation());
    }

    #[test]
    fn logistic_coefficients() {
        let text = CASE4.replace(
            "kind = \"vasicek\"\nalpha = 0.075\nbeta = -0.3\nsigma = 0.1",
            "kind = \"hull_white\"\nalpha = { base = 0.0, step = 0.0075, steepness = 2000.0, center = 0.4 }\n\
             beta = -0.3\nsigma = 0.1",
        );
        let cfg = ScenarioConfig::parse(&text).unwrap();
        let model = cfg.model.build().unwrap();
        let (a_early, ..) = model.affine_at(0.0).unwrap();
        let (a_late, ..) = model.affine_at(1.0).unwrap();
        assert!(a_early.abs() < 1e-12 && (a_late - 0.0075).abs() < 1e-12);
        assert_eq!(ScenarioConfig::parse(&cfg.to_toml().unwrap()).unwrap(), cfg);
    }
}
