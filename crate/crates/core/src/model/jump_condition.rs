use rayon::prelude::*;

use super::{DateKind, GridFunction, JumpDistribution};
use crate::error::{Error, Result};
use crate::math::{norm_cdf, norm_pdf, trapezoid_weights};

/// Relative tolerance for `m = c·dx` with integer `c`.
const ALIGNMENT_TOL: f64 = 1e-9;

/// Beyond this many standard deviations the Gaussian density underflows.
const DENSITY_CUTOFF: f64 = 38.5;

/// Below this ratio of jump deviation to grid spacing the plain trapezoid
/// rule cannot resolve the density, and the piecewise-linear interpolant is
/// integrated against it exactly instead.
const TRAPEZOID_MIN_RESOLUTION: f64 = 4.0;

/// Maps `f(r_k, ·)` to `f(r_k⁻, ·)` across one relevant date.
///
/// * roll-over: `f(x) e^{-x}`;
/// * rate jump: `∫ f(x + z) Q(dz)` restricted to the grid (mass outside
///   the grid is neglected; two-point shifts leaving the grid take the
///   boundary value);
/// * both: `∫ e^{-(x+z)} f(x + z) Q(dz)`.
pub fn apply_jump_condition(f_after: &GridFunction, kind: &DateKind) -> Result<GridFunction> {
    match kind {
        DateKind::RolloverOnly => Ok(discount_rollover(f_after)),
        DateKind::RateJumpOnly(dist) => convolve(f_after, dist),
        DateKind::Both(dist) => convolve(&discount_rollover(f_after), dist),
    }
}

fn discount_rollover(f: &GridFunction) -> GridFunction {
    f.map(|x, v| v * (-x).exp())
}

fn convolve(f: &GridFunction, dist: &JumpDistribution) -> Result<GridFunction> {
    match *dist {
        JumpDistribution::Gaussian { m, gamma } => Ok(gaussian_convolve(f, m, gamma)),
        JumpDistribution::TwoPoint { m, p } => two_point_shift(f, m, p),
    }
}

fn two_point_shift(f: &GridFunction, m: f64, p: f64) -> Result<GridFunction> {
    let dx = f
        .dx()
        .ok_or_else(|| Error::InvalidGrid("two-point jumps need a uniform grid".into()))?;
    let c = (m / dx).round();
    if (m - c * dx).abs() > ALIGNMENT_TOL * m.abs().max(dx) {
        return Err(Error::MisalignedJump { m, dx });
    }
    let c = c as i64;
    let last = f.len() as i64 - 1;
    let v = f.vals();
    let at = |k: i64| v[k.clamp(0, last) as usize];
    let vals = (0..=last).map(|i| p * at(i + c) + (1.0 - p) * at(i - c)).collect();
    Ok(f.with_vals(vals))
}

fn gaussian_convolve(f: &GridFunction, m: f64, gamma: f64) -> GridFunction {
    let xs = f.xs();
    let vals = f.vals();
    if gamma == 0.0 {
        let out = xs
            .iter()
            .map(|&x| f.interpolate(x + m).unwrap_or(0.0))
            .collect();
        return f.with_vals(out);
    }
    let max_h = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let out: Vec<f64> = if gamma >= TRAPEZOID_MIN_RESOLUTION * max_h {
        let w = trapezoid_weights(xs);
        xs.par_iter()
            .map(|&x| {
                let c = x + m;
                let lo = xs.partition_point(|&n| n < c - DENSITY_CUTOFF * gamma);
                let hi = xs.partition_point(|&n| n <= c + DENSITY_CUTOFF * gamma);
                let mut acc = 0.0;
                for l in lo..hi {
                    acc += w[l] * vals[l] * norm_pdf((xs[l] - c) / gamma);
                }
                acc / gamma
            })
            .collect()
    } else {
        xs.par_iter()
            .map(|&x| linear_product_integral(xs, vals, x + m, gamma))
            .collect()
    };
    f.with_vals(out)
}

/// `∫ L(ξ) φ((ξ - c)/γ)/γ dξ` over the grid, `L` the piecewise-linear
/// interpolant of the nodal values.
fn linear_product_integral(xs: &[f64], vals: &[f64], c: f64, gamma: f64) -> f64 {
    let lo = xs
        .partition_point(|&n| n < c - DENSITY_CUTOFF * gamma)
        .saturating_sub(1);
    let hi = xs
        .partition_point(|&n| n <= c + DENSITY_CUTOFF * gamma)
        .min(xs.len() - 1);
    let mut acc = 0.0;
    for k in lo..hi {
        let (a, b) = (xs[k], xs[k + 1]);
        let slope = (vals[k + 1] - vals[k]) / (b - a);
        let intercept = vals[k] - slope * a;
        let (ua, ub) = ((a - c) / gamma, (b - c) / gamma);
        let mass = norm_cdf(ub) - norm_cdf(ua);
        let first = c * mass - gamma * (norm_pdf(ub) - norm_pdf(ua));
        acc += intercept * mass + slope * first;
    }
    acc
}

/// Jump-density mass falling outside `[lo, hi]` when the jump starts at `x`.
pub fn neglected_jump_mass(dist: &JumpDistribution, lo: f64, hi: f64, x: f64) -> f64 {
    (1.0 - dist.mass_in(lo - x, hi - x)).max(0.0)
}
