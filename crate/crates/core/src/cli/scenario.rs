//! Running a parsed scenario through the requested engines.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{McConfig, ProductConfig, ScenarioConfig};
use crate::affine::{CallPricer, CallSpec, ZcbCoefficients};
use crate::error::{Error, Result};
use crate::fd::{sweep_fd, FdConfig};
use crate::localization::{localize_domain, DomainCertificate};
use crate::math::loglog_slope;
use crate::mc::{mc_price, McEstimate, PathConfig};
use crate::model::{JumpSchedule, ModelSpec, Timeline, UniformGrid};
use crate::result::{
    max_mean_abs_error, mean_abs_difference, ErrorSummary, Method, PriceResult, ResultMeta, Snapshot,
};
use crate::semianalytic::{sweep_semianalytic, GreenKernel};

pub type Payoff = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed-form prices of the scenario's product.
#[derive(Debug, Clone)]
pub enum ClosedForm {
    Zcb(Box<ZcbCoefficients>),
    Call(Box<CallPricer>),
}

impl ClosedForm {
    pub fn prices(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        match self {
            ClosedForm::Zcb(c) => c.prices(t, xs),
            ClosedForm::Call(c) => c.prices(t, xs),
        }
    }
}

/// A validated scenario with its model objects built.
#[derive(Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub model: ModelSpec,
    pub schedule: JumpSchedule,
    /// Relevant dates up to the product horizon.
    pub timeline: Timeline,
    pub methods: Vec<Method>,
}

/// Error of `engine` measured against `reference`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairError {
    pub engine: Method,
    pub reference: Method,
    /// Max in time when the reference is the closed form, `t = 0` otherwise.
    pub summary: ErrorSummary,
}

impl PairError {
    pub fn label(&self) -> String {
        format!("{}_vs_{}", self.engine.tag(), self.reference.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McPoint {
    pub x0: f64,
    pub estimate: McEstimate,
    pub reference: Option<(Method, f64)>,
}

impl McPoint {
    /// `(mean - reference) / std_error`.
    pub fn z_score(&self) -> Option<f64> {
        self.reference
            .map(|(_, r)| (self.estimate.mean - r) / self.estimate.std_error)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub certificate: DomainCertificate,
    pub grid: UniformGrid,
    pub results: Vec<PriceResult>,
    pub errors: Vec<PairError>,
    pub mc: Vec<McPoint>,
}

impl Report {
    pub fn result(&self, method: Method) -> Option<&PriceResult> {
        self.results.iter().find(|r| r.method == method)
    }

    pub fn error(&self, engine: Method, reference: Method) -> Option<&PairError> {
        self.errors
            .iter()
            .find(|e| e.engine == engine && e.reference == reference)
    }
}

/// One rung of a convergence study.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub errors: Vec<PairError>,
    pub wall_time: std::time::Duration,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Fitted log-log slope of the absolute error against `dx` per pair.
    pub slopes: Vec<(String, f64)>,
}

impl ConvergenceTable {
    pub fn column(&self, engine: Method, reference: Method) -> Vec<f64> {
        self.rows
            .iter()
            .filter_map(|r| {
                r.errors
                    .iter()
                    .find(|e| e.engine == engine && e.reference == reference)
                    .map(|e| e.summary.abs)
            })
            .collect()
    }
}

const PRIORITY: [Method; 3] = [Method::ClosedForm, Method::SemiAnalytic, Method::FiniteDifference];

fn tagged(engine: Method) -> impl Fn(Error) -> Error {
    move |e| Error::Engine {
        engine: engine.tag(),
        source: Box::new(e),
    }
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let model = config.model.build()?;
        let schedule = config.timeline.schedule()?;
        let timeline = schedule.timeline(config.product.horizon())?;
        let methods = config.methods()?;
        Ok(Self {
            config,
            model,
            schedule,
            timeline,
            methods,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::new(ScenarioConfig::load(path)?)
    }

    pub fn region(&self) -> (f64, f64) {
        let [lo, hi] = self.config.numerics.region;
        (lo, hi)
    }

    pub fn certificate(&self) -> Result<DomainCertificate> {
        let (lo, hi) = self.region();
        localize_domain(&self.model, &self.timeline, lo, hi, self.config.numerics.tolerances())
    }

    /// Grid on the configured domain, or on the certified one.
    pub fn grid(&self, cert: &DomainCertificate, dx: f64) -> Result<UniformGrid> {
        match self.config.numerics.domain {
            Some([lo, hi]) => UniformGrid::covering(lo, hi, dx),
            None => cert.grid(dx),
        }
    }

    pub fn payoff(&self) -> Result<Payoff> {
        match self.config.product {
            ProductConfig::Zcb { .. } => Ok(Arc::new(|_| 1.0)),
            ProductConfig::Call {
                strike,
                expiry,
                bond_maturity,
            } => {
                let bond = ZcbCoefficients::new(&self.model, &self.schedule.timeline(bond_maturity)?)?;
                Ok(Arc::new(move |x| {
                    (bond.price(expiry, x).unwrap_or(f64::NAN) - strike).max(0.0)
                }))
            }
        }
    }

    pub fn closed_form(&self) -> Result<ClosedForm> {
        match self.config.product {
            ProductConfig::Zcb { .. } => Ok(ClosedForm::Zcb(Box::new(ZcbCoefficients::new(&self.model, &self.timeline)?))),
            ProductConfig::Call {
                strike,
                expiry,
                bond_maturity,
            } => {
                let v = self
                    .model
                    .as_vasicek()
                    .ok_or_else(|| Error::unsupported("closed-form call", "non-Vasicek models"))?;
                let spec = CallSpec::new(strike, expiry, bond_maturity)?;
                Ok(ClosedForm::Call(Box::new(CallPricer::new(v, &self.schedule, spec)?)))
            }
        }
    }

    fn run_engine(&self, method: Method, grid: &UniformGrid, payoff: &Payoff) -> Result<PriceResult> {
        match method {
            Method::ClosedForm => {
                let started = Instant::now();
                let cf = self.closed_form()?;
                let xs = grid.nodes();
                let values = cf.prices(0.0, &xs)?;
                let meta = ResultMeta {
                    domain: Some((grid.lo, grid.hi())),
                    dx: Some(grid.dx),
                    wall_time: started.elapsed(),
                    ..ResultMeta::default()
                };
                Ok(PriceResult::new(method, xs, vec![Snapshot { t: 0.0, values }], meta))
            }
            Method::SemiAnalytic => {
                let v = self
                    .model
                    .as_vasicek()
                    .ok_or_else(|| Error::unsupported("semi-analytic engine", "non-Vasicek models"))?;
                sweep_semianalytic(&GreenKernel::new(*v), &self.timeline, payoff.as_ref(), grid)
            }
            Method::FiniteDifference => {
                let n = &self.config.numerics;
                let cfg = FdConfig::new(n.theta, n.dt, *grid)?;
                sweep_fd(&self.model, &self.timeline, payoff.as_ref(), &cfg)
            }
            Method::MonteCarlo => Err(Error::unsupported("grid runner", "Monte Carlo")),
        }
    }

    /// Grid engines at spacing `dx` with their pairwise errors.
    pub fn run_grid(&self, cert: &DomainCertificate, dx: f64) -> Result<(UniformGrid, Vec<PriceResult>, Vec<PairError>)> {
        let grid = self.grid(cert, dx)?;
        let payoff = self.payoff()?;
        let methods: Vec<Method> = PRIORITY
            .iter()
            .copied()
            .filter(|m| self.methods.contains(m))
            .collect();
        let mut results = Vec::with_capacity(methods.len());
        for &m in &methods {
            let mut r = self.run_engine(m, &grid, &payoff).map_err(tagged(m))?;
            r.meta.certificate = Some(*cert);
            results.push(r);
        }
        let errors = self.pair_errors(&results)?;
        Ok((grid, results, errors))
    }

    fn pair_errors(&self, results: &[PriceResult]) -> Result<Vec<PairError>> {
        let region = self.region();
        let closed = if results.iter().any(|r| r.method == Method::ClosedForm) {
            Some(self.closed_form()?)
        } else {
            None
        };
        let mut out = Vec::new();
        for (k, reference) in results.iter().enumerate() {
            for engine in &results[k + 1..] {
                let summary = match (&closed, reference.method) {
                    (Some(cf), Method::ClosedForm) => max_mean_abs_error(engine, region, |t, xs| cf.prices(t, xs))?,
                    _ => mean_abs_difference(engine, reference, region)?,
                };
                out.push(PairError {
                    engine: engine.method,
                    reference: reference.method,
                    summary,
                });
            }
        }
        Ok(out)
    }

    /// Monte-Carlo estimates at the configured starting rates.
    pub fn run_mc(&self, mc: &McConfig, grid_results: &[PriceResult]) -> Result<Vec<McPoint>> {
        let cfg = PathConfig::new(mc.paths, mc.steps_per_year, mc.seed, mc.antithetic)?;
        let payoff = self.payoff()?;
        let closed = self.closed_form().ok();
        mc.x0
            .iter()
            .map(|&x0| {
                let estimate = mc_price(&self.model, &self.timeline, payoff.as_ref(), 0.0, x0, &cfg)
                    .map_err(tagged(Method::MonteCarlo))?;
                let reference = match &closed {
                    Some(cf) => Some((Method::ClosedForm, cf.prices(0.0, &[x0])?[0])),
                    None => grid_results
                        .iter()
                        .find_map(|r| r.value_at(x0).map(|v| (r.method, v))),
                };
                Ok(McPoint { x0, estimate, reference })
            })
            .collect()
    }

    /// Every requested engine at the configured resolution.
    pub fn run(&self) -> Result<Report> {
        let certificate = self.certificate()?;
        let (grid, results, errors) = self.run_grid(&certificate, self.config.numerics.dx)?;
        let mc = if self.methods.contains(&Method::MonteCarlo) {
            let mc_cfg = self.config.mc.clone().unwrap_or_default();
            self.run_mc(&mc_cfg, &results)?
        } else {
            Vec::new()
        };
        Ok(Report {
            certificate,
            grid,
            results,
            errors,
            mc,
        })
    }

    /// Grid engines over a descending `dx` ladder (at least three rungs).
    pub fn convergence(&self, ladder: &[f64]) -> Result<ConvergenceTable> {
        if ladder.len() < 3 {
            return Err(Error::Validation(format!(
                "convergence ladder needs at least 3 values, got {}",
                ladder.len()
            )));
        }
        if ladder.windows(2).any(|w| !(w[1] < w[0])) || ladder.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::Validation("convergence ladder must be positive and strictly descending".into()));
        }
        let certificate = self.certificate()?;
        let rows = ladder
            .par_iter()
            .map(|&dx| {
                let started = Instant::now();
                let (_, _, errors) = self.run_grid(&certificate, dx)?;
                Ok(ConvergenceRow {
                    dx,
                    errors,
                    wall_time: started.elapsed(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let slopes = rows[0]
            .errors
            .iter()
            .map(|e| {
                let ys: Vec<f64> = rows
                    .iter()
                    .filter_map(|r| {
                        r.errors
                            .iter()
                            .find(|o| o.engine == e.engine && o.reference == e.reference)
                            .map(|o| o.summary.abs)
                    })
                    .collect();
                (e.label(), loglog_slope(ladder, &ys))
            })
            .collect();
        Ok(ConvergenceTable { rows, slopes })
    }
}
