//! Green's-function engine for Vasicek dynamics.
//!
//! Between relevant dates the price is the integral of the next terminal
//! data against the explicit transition kernel, so a whole interval is
//! crossed in one quadrature without time stepping.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{apply_jump_condition, GridFunction, Timeline, UniformGrid, Vasicek};
use crate::result::{Method, PriceResult, ResultMeta, Snapshot};

/// Kernel exponent below which a quadrature term underflows.
const UNDERFLOW_EXPONENT: f64 = -760.0;

/// Discounted transition kernel `G(t,s;x,ξ)` of the Vasicek short rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenKernel {
    pub model: Vasicek,
}

impl GreenKernel {
    pub fn new(model: Vasicek) -> Self {
        Self { model }
    }

    /// `Σ²(τ) = -σ²/(2β) (1 - e^{2βτ})`.
    pub fn variance(&self, tau: f64) -> f64 {
        let (b, s) = (self.model.beta, self.model.sigma);
        s * s / (2.0 * b) * (2.0 * b * tau).exp_m1()
    }

    /// `μ(τ; x)`.
    pub fn mean(&self, tau: f64, x: f64) -> f64 {
        let Vasicek { alpha: a, beta: b, sigma: s } = self.model;
        let e = (b * tau).exp();
        x * e + a / b * (b * tau).exp_m1() + s * s / (2.0 * b * b) * ((-b * tau).exp() + e - 2.0)
    }

    /// `log C₁ + log C₂`, affine in `ξ`.
    pub fn log_c(&self, tau: f64, xi: f64) -> f64 {
        let Vasicek { alpha: a, beta: b, sigma: s } = self.model;
        let (s2, b2, b3) = (s * s, b * b, b * b * b);
        let em = (-b * tau).exp();
        let log_c1 = -(s2 * em * em - 4.0 * xi * b2 * em - 4.0 * s2 * em - 4.0 * a * b * em) / (4.0 * b3);
        let log_c2 = (s2 / (2.0 * b2) + a / b) * tau - 3.0 * s2 / (4.0 * b3) - xi / b - a / b2;
        log_c1 + log_c2
    }

    /// `G` for a time-to-go `τ = s - t > 0`.
    pub fn eval_tau(&self, tau: f64, x: f64, xi: f64) -> f64 {
        let var = self.variance(tau);
        let d = xi - self.mean(tau, x);
        (self.log_c(tau, xi) - 0.5 * d * d / var - 0.5 * (std::f64::consts::TAU * var).ln()).exp()
    }

    /// `G(t,s;x,ξ)`.
    pub fn eval(&self, t: f64, s: f64, x: f64, xi: f64) -> Result<f64> {
        if !(s > t) {
            return Err(Error::param(format!("Green kernel needs s > t (t={t}, s={s})")));
        }
        Ok(self.eval_tau(s - t, x, xi))
    }
}

/// `G(t,s;x,ξ)` of the given kernel.
pub fn green_eval(kernel: &GreenKernel, t: f64, s: f64, x: f64, xi: f64) -> Result<f64> {
    kernel.eval(t, s, x, xi)
}

/// `f(t_from, x_i) = ∫ G(t_from, t_to; x_i, ξ) g(ξ) dξ` by the trapezoidal
/// rule on the grid of `terminal`.
pub fn propagate_interval(
    kernel: &GreenKernel,
    terminal: &GridFunction,
    t_from: f64,
    t_to: f64,
) -> Result<GridFunction> {
    if !(t_from < t_to) {
        return Err(Error::param(format!(
            "propagation needs t_from < t_to (got {t_from}, {t_to})"
        )));
    }
    let dx = terminal
        .dx()
        .ok_or_else(|| Error::InvalidGrid("semi-analytic quadrature needs a uniform grid".into()))?;
    let tau = t_to - t_from;
    let xs = terminal.xs();
    let g = terminal.vals();
    let var = kernel.variance(tau);
    let log_norm = 0.5 * (std::f64::consts::TAU * var).ln();
    let log_c: Vec<f64> = xs.iter().map(|&xi| kernel.log_c(tau, xi) - log_norm).collect();
    let c_max = log_c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // beyond this distance from the mean every term underflows
    let reach = (2.0 * var * (c_max - UNDERFLOW_EXPONENT).max(0.0)).sqrt();
    let last = xs.len() - 1;

    let out = xs
        .par_iter()
        .map(|&x| {
            let mu = kernel.mean(tau, x);
            let lo = xs.partition_point(|&n| n < mu - reach);
            let hi = xs.partition_point(|&n| n <= mu + reach);
            let mut acc = 0.0;
            for l in lo..hi {
                let d = xs[l] - mu;
                let w = if l == 0 || l == last { 0.5 } else { 1.0 };
                acc += w * g[l] * (log_c[l] - 0.5 * d * d / var).exp();
            }
            acc * dx
        })
        .collect();
    Ok(terminal.with_vals(out))
}

/// Backward sweep over the relevant dates: jump condition at each date,
/// then one kernel propagation per interval.
///
/// Snapshots are the right-continuous values at the start of each interval.
pub fn sweep_semianalytic(
    kernel: &GreenKernel,
    timeline: &Timeline,
    payoff: &(dyn Fn(f64) -> f64 + Sync),
    grid: &UniformGrid,
) -> Result<PriceResult> {
    let started = Instant::now();
    let mut f = grid.function(payoff);
    let mut snapshots = Vec::new();
    let intervals = timeline.intervals();
    for (lo, hi, event) in intervals.iter().rev() {
        if let Some(ev) = event {
            f = apply_jump_condition(&f, &ev.kind)?;
        }
        f = propagate_interval(kernel, &f, *lo, *hi)?;
        snapshots.push(Snapshot {
            t: *lo,
            values: f.vals().to_vec(),
        });
    }
    let meta = ResultMeta {
        domain: Some((grid.lo, grid.hi())),
        dx: Some(grid.dx),
        time_steps: intervals.len(),
        wall_time: started.elapsed(),
        ..ResultMeta::default()
    };
    Ok(PriceResult::new(Method::SemiAnalytic, grid.nodes(), snapshots, meta))
}
