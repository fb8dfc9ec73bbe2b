//! Monte-Carlo pricing by Euler-Maruyama simulation of the short rate.
//!
//! Paths are discounted with `exp(-∫ρ du)` (trapezoid on the path) times
//! `e^{-ρ_{t_n}}` at every roll-over date. Rate jumps are applied after the
//! diffusion step that lands on their date.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::math::pairwise_sum;
use crate::model::{ModelSpec, RelevantDate, Timeline};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathConfig {
    pub n_paths: usize,
    pub n_steps_per_year: usize,
    pub seed: u64,
    /// Pair every path with its mirrored-noise partner.
    pub antithetic: bool,
}

impl PathConfig {
    pub fn new(n_paths: usize, n_steps_per_year: usize, seed: u64, antithetic: bool) -> Result<Self> {
        if n_paths < 2 {
            return Err(Error::param(format!("need at least 2 paths, got {n_paths}")));
        }
        if n_steps_per_year < 16 {
            return Err(Error::param(format!(
                "need at least 16 steps per year, got {n_steps_per_year}"
            )));
        }
        Ok(Self {
            n_paths,
            n_steps_per_year,
            seed,
            antithetic,
        })
    }

    /// Independent generator for path (or antithetic pair) `index`.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: usize,
}

impl McEstimate {
    /// `|mean - value| <= k · std_error`.
    pub fn covers(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// One simulated trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    /// `(t, ρ_t)` at every time node; at a rate-jump date the post-jump value.
    pub nodes: Vec<(f64, f64)>,
    pub discount: f64,
}

impl Path {
    pub fn terminal(&self) -> f64 {
        self.nodes.last().map(|n| n.1).unwrap_or(f64::NAN)
    }
}

fn dates_in(timeline: &Timeline, t0: f64, t1: f64) -> Vec<RelevantDate> {
    timeline
        .relevant
        .iter()
        .filter(|r| r.date > t0 && r.date <= t1)
        .copied()
        .collect()
}

/// Simulates `ρ` on `[t0, t1]` and returns `(ρ_{t1}, discount)`.
#[allow(clippy::too_many_arguments)]
fn walk<R: Rng + ?Sized>(
    model: &ModelSpec,
    dates: &[RelevantDate],
    x0: f64,
    t0: f64,
    t1: f64,
    steps_per_year: usize,
    rng: &mut R,
    mirror: bool,
    mut record: Option<&mut Vec<(f64, f64)>>,
) -> Result<(f64, f64)> {
    let sign = if mirror { -1.0 } else { 1.0 };
    let mut x = x0;
    let mut integral = 0.0;
    let mut point_mass = 0.0;
    if let Some(rec) = record.as_deref_mut() {
        rec.push((t0, x0));
    }
    let mut a = t0;
    let ends = dates.iter().map(|d| (d.date, Some(d))).chain(std::iter::once((t1, None)));
    for (b, date) in ends {
        if b > a {
            let n = (((b - a) * steps_per_year as f64).ceil() as usize).max(1);
            let h = (b - a) / n as f64;
            let sqrt_h = h.sqrt();
            for k in 0..n {
                let t = a + k as f64 * h;
                let z: f64 = rng.sample(StandardNormal);
                let next = x + model.drift(t, x) * h + model.volatility(t, x)? * sqrt_h * sign * z;
                integral += 0.5 * (x + next) * h;
                x = next;
                if let Some(rec) = record.as_deref_mut() {
                    let tn = if k + 1 == n { b } else { a + (k + 1) as f64 * h };
                    rec.push((tn, x));
                }
            }
        }
        if let Some(d) = date {
            if let Some(dist) = d.kind.jump() {
                x += dist.sample(rng, mirror);
                if let Some(rec) = record.as_deref_mut() {
                    if let Some(last) = rec.last_mut() {
                        last.1 = x;
                    }
                }
            }
            if d.kind.has_rollover() {
                point_mass += x;
            }
        }
        a = b;
    }
    Ok((x, (-integral - point_mass).exp()))
}

/// One Euler-Maruyama trajectory from `(t0, x0)` to `t1`, with every
/// relevant date in `(t0, t1]` on the time grid.
pub fn simulate_path<R: Rng + ?Sized>(
    model: &ModelSpec,
    timeline: &Timeline,
    x0: f64,
    t0: f64,
    t1: f64,
    cfg: &PathConfig,
    rng: &mut R,
) -> Result<Path> {
    check_span(x0, t0, t1)?;
    let dates = dates_in(timeline, t0, t1);
    let mut nodes = Vec::new();
    let (_, discount) = walk(model, &dates, x0, t0, t1, cfg.n_steps_per_year, rng, false, Some(&mut nodes))?;
    Ok(Path { nodes, discount })
}

fn check_span(x0: f64, t0: f64, t1: f64) -> Result<()> {
    if !(t0 < t1) || !x0.is_finite() {
        return Err(Error::param(format!(
            "simulation needs t0 < t1 and finite x0 (t0={t0}, t1={t1}, x0={x0})"
        )));
    }
    Ok(())
}

/// `E[exp(-∫_{t0}^T ρ η(du)) H(ρ_T) | ρ_{t0} = x0]` with its standard error.
///
/// Deterministic for a given seed regardless of the thread count.
pub fn mc_price(
    model: &ModelSpec,
    timeline: &Timeline,
    payoff: &(dyn Fn(f64) -> f64 + Sync),
    t0: f64,
    x0: f64,
    cfg: &PathConfig,
) -> Result<McEstimate> {
    let t1 = timeline.maturity;
    check_span(x0, t0, t1)?;
    let dates = dates_in(timeline, t0, t1);
    let steps = cfg.n_steps_per_year;
    let samples = if cfg.antithetic { cfg.n_paths.div_ceil(2) } else { cfg.n_paths };

    let values = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.stream(i as u64);
            if cfg.antithetic {
                let mut twin = rng.clone();
                let (xa, da) = walk(model, &dates, x0, t0, t1, steps, &mut rng, false, None)?;
                let (xb, db) = walk(model, &dates, x0, t0, t1, steps, &mut twin, true, None)?;
                Ok(0.5 * (da * payoff(xa) + db * payoff(xb)))
            } else {
                let (x, d) = walk(model, &dates, x0, t0, t1, steps, &mut rng, false, None)?;
                Ok(d * payoff(x))
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let n = values.len() as f64;
    let mean = pairwise_sum(&values) / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        n_paths: cfg.n_paths,
    })
}
