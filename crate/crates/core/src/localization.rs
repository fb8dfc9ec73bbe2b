//! Choice of the bounded computational domain `[Ā, Ā̄]` around a region of
//! interest.
//!
//! For Vasicek dynamics the Green kernel weighted by `e^{(ξ-x)/β}` integrates
//! to `e^{(σ²/2β² + α/β)(s-t)}` over the real line. The domain is widened
//! until the truncated integral matches that value for every `x` in the
//! region, and until every Gaussian jump density keeps all but a small
//! fraction of its mass inside.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{neglected_jump_mass, JumpDistribution, ModelSpec, Timeline, UniformGrid, Vasicek};
use crate::semianalytic::GreenKernel;

const CHECK_POINTS: usize = 33;
const BISECTION_RESOLUTION: f64 = 1e-3;
const BRACKET_LIMIT: f64 = 50.0;
const HEURISTIC_STDS: f64 = 8.0;

/// Accepted truncation errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationTolerances {
    /// Neglected weighted kernel mass.
    pub kernel: f64,
    /// Neglected jump-density mass.
    pub jump: f64,
}

impl Default for LocalizationTolerances {
    fn default() -> Self {
        Self {
            kernel: 1e-8,
            jump: 1e-10,
        }
    }
}

impl LocalizationTolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            kernel: tol,
            jump: tol,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("kernel", self.kernel), ("jump", self.jump)] {
            if !(v > 0.0 && v <= 1e-2) {
                return Err(Error::param(format!("{name} tolerance must lie in (0, 1e-2], got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainCertificate {
    pub a_lo: f64,
    pub a_hi: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Worst neglected kernel mass over the check points; `None` when the
    /// domain is heuristic.
    pub eps_kernel: Option<f64>,
    pub eps_jump: f64,
    /// Kernel margin.
    pub m: f64,
    /// Jump margin.
    pub m_bar: f64,
    /// Interval length `s - t` the kernel check was run for.
    pub interval: f64,
    pub heuristic: bool,
}

impl DomainCertificate {
    /// Uniform grid of spacing `dx` from `Ā` reaching at least `Ā̄`.
    pub fn grid(&self, dx: f64) -> Result<UniformGrid> {
        UniformGrid::covering(self.a_lo, self.a_hi, dx)
    }

    pub fn margin(&self) -> f64 {
        self.m.max(self.m_bar)
    }
}

/// `e^{(σ²/2β² + α/β) τ}`.
pub fn kernel_lemma_value(model: &Vasicek, tau: f64) -> f64 {
    let (a, b, s) = (model.alpha, model.beta, model.sigma);
    ((s * s / (2.0 * b * b) + a / b) * tau).exp()
}

/// Trapezoidal `∫_lo^hi G(t,s;x,ξ) e^{(ξ-x)/β} dξ`.
pub fn kernel_mass(model: &Vasicek, t: f64, s: f64, x: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(s > t) || !(hi > lo) {
        return Err(Error::param(format!(
            "kernel mass needs s > t and lo < hi (t={t}, s={s}, lo={lo}, hi={hi})"
        )));
    }
    let kernel = GreenKernel::new(*model);
    let tau = s - t;
    let sd = kernel.variance(tau).sqrt();
    let n = (((hi - lo) / (sd / 20.0)).ceil() as usize).clamp(2000, 2_000_000);
    let h = (hi - lo) / n as f64;
    let weighted = |xi: f64| kernel.eval_tau(tau, x, xi) * ((xi - x) / model.beta).exp();
    let mut acc = 0.5 * (weighted(lo) + weighted(hi));
    for k in 1..n {
        acc += weighted(lo + k as f64 * h);
    }
    Ok(acc * h)
}

fn check_points(x_min: f64, x_max: f64) -> Vec<f64> {
    if x_max == x_min {
        return vec![x_min];
    }
    (0..CHECK_POINTS)
        .map(|i| x_min + (x_max - x_min) * i as f64 / (CHECK_POINTS - 1) as f64)
        .collect()
}

/// Smallest `M` on a `1e-3` lattice with `worst(M) <= tol`, `worst`
/// non-increasing in `M`.
fn bisect_margin<F: Fn(f64) -> Result<f64>>(worst: F, tol: f64) -> Result<(f64, f64)> {
    let mut hi = 0.25;
    let mut err_hi = worst(hi)?;
    while err_hi > tol {
        if hi >= BRACKET_LIMIT {
            return Err(Error::BracketFailure { limit: BRACKET_LIMIT });
        }
        hi = (2.0 * hi).min(BRACKET_LIMIT);
        err_hi = worst(hi)?;
    }
    let mut lo = 0.0;
    while hi - lo > BISECTION_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        let err = worst(mid)?;
        if err <= tol {
            hi = mid;
            err_hi = err;
        } else {
            lo = mid;
        }
    }
    Ok((hi, err_hi))
}

fn jump_margin(
    timeline: &Timeline,
    x_min: f64,
    x_max: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let gaussians: Vec<JumpDistribution> = timeline
        .rate_jumps
        .iter()
        .map(|j| j.dist)
        .filter(|d| d.is_gaussian())
        .collect();
    let two_point = timeline
        .rate_jumps
        .iter()
        .filter_map(|j| match j.dist {
            JumpDistribution::TwoPoint { m, .. } => Some(3.0 * m.abs()),
            _ => None,
        })
        .fold(0.0, f64::max);
    if gaussians.is_empty() {
        return Ok((two_point, 0.0));
    }
    let xs = check_points(x_min, x_max);
    let worst = |m_bar: f64| -> Result<f64> {
        let (lo, hi) = (x_min - m_bar, x_max + m_bar);
        Ok(gaussians
            .iter()
            .flat_map(|d| xs.iter().map(move |&x| neglected_jump_mass(d, lo, hi, x)))
            .fold(0.0, f64::max))
    };
    let (m_bar, eps) = bisect_margin(worst, tol)?;
    Ok((m_bar.max(two_point), eps))
}

/// Certifies `[Ā, Ā̄] = [x_min - max(M, M̄), x_max + max(M, M̄)]`.
///
/// The kernel check uses the longest interval between relevant dates. Models
/// without a known Green kernel get a heuristic margin of eight stationary
/// standard deviations, flagged in the certificate.
pub fn localize_domain(
    model: &ModelSpec,
    timeline: &Timeline,
    x_min: f64,
    x_max: f64,
    tol: LocalizationTolerances,
) -> Result<DomainCertificate> {
    tol.validate()?;
    if !(x_min <= x_max) || !x_min.is_finite() || !x_max.is_finite() {
        return Err(Error::param(format!("invalid region of interest [{x_min}, {x_max}]")));
    }
    let interval = timeline.longest_interval();
    let (m_bar, eps_jump) = jump_margin(timeline, x_min, x_max, tol.jump)?;

    let (m, eps_kernel, heuristic) = match model {
        ModelSpec::Vasicek(v) => {
            let exact = kernel_lemma_value(v, interval);
            let xs = check_points(x_min, x_max);
            let worst = |m: f64| -> Result<f64> {
                let errs = xs
                    .par_iter()
                    .map(|&x| kernel_mass(v, 0.0, interval, x, x_min - m, x_max + m).map(|q| (q - exact).abs()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(errs.into_iter().fold(0.0, f64::max))
            };
            let (m, eps) = bisect_margin(worst, tol.kernel)?;
            (m, Some(eps), false)
        }
        _ => (heuristic_margin(model, timeline, x_min, x_max)?, None, true),
    };

    let margin = m.max(m_bar);
    Ok(DomainCertificate {
        a_lo: x_min - margin,
        a_hi: x_max + margin,
        x_min,
        x_max,
        eps_kernel,
        eps_jump,
        m,
        m_bar,
        interval,
        heuristic,
    })
}

/// Linearizes the drift at the region midpoint and returns eight stationary
/// standard deviations (or eight horizon standard deviations when the drift
/// does not mean-revert).
fn heuristic_margin(model: &ModelSpec, timeline: &Timeline, x_min: f64, x_max: f64) -> Result<f64> {
    let mid = 0.5 * (x_min + x_max);
    let h = 1e-4;
    let slope = (model.drift(0.0, mid + h) - model.drift(0.0, mid - h)) / (2.0 * h);
    let var = model.variance(0.0, mid)?;
    let sd = if slope < 0.0 {
        (var / (-2.0 * slope)).sqrt()
    } else {
        (var * timeline.maturity).sqrt()
    };
    Ok(HEURISTIC_STDS * sd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AffineCoefficients, RateJump};

    fn vasicek() -> Vasicek {
        Vasicek::new(0.075, -0.3, 0.1).unwrap()
    }

    #[test]
    fn kernel_mass_converges_to_lemma() {
        let v = vasicek();
        let exact = kernel_lemma_value(&v, 1.0);
        assert!((exact - (0.01f64 / 0.18 - 0.25).exp()).abs() < 1e-15);
        assert!((exact - 0.82333).abs() < 1e-4);
        let q = kernel_mass(&v, 0.0, 1.0, 0.0, -50.0, 50.0).unwrap();
        assert!((q - exact).abs() < 1e-13, "{q} vs {exact}");
    }

    #[test]
    fn kernel_mass_is_monotone_in_window() {
        let v = vasicek();
        let narrow = kernel_mass(&v, 0.0, 1.0, 0.3, 0.3 - 1e-6, 0.3 + 1e-6).unwrap();
        assert!(narrow < 1e-4);
        let mut prev = 0.0;
        for w in [0.05, 0.1, 0.2, 0.4, 0.8] {
            let q = kernel_mass(&v, 0.0, 1.0, 0.3, 0.3 - w, 0.3 + w).unwrap();
            assert!(q >= prev - 1e-15);
            prev = q;
        }
    }

    #[test]
    fn certificate_meets_its_tolerances() {
        let v = vasicek();
        let tl = Timeline::plain(1.0).unwrap();
        let tol = LocalizationTolerances::default();
        let c = localize_domain(&v.into(), &tl, -0.5, 1.0, tol).unwrap();
        assert!(c.a_lo < -0.5 && c.a_hi > 1.0);
        assert!(c.eps_kernel.unwrap() <= tol.kernel);
        let exact = kernel_lemma_value(&v, 1.0);
        for x in check_points(-0.5, 1.0) {
            let q = kernel_mass(&v, 0.0, 1.0, x, c.a_lo, c.a_hi).unwrap();
            assert!((q - exact).abs() <= tol.kernel);
        }
    }

    #[test]
    fn tighter_tolerance_widens_domain() {
        let v: ModelSpec = vasicek().into();
        let jump = RateJump::new(0.5, JumpDistribution::Gaussian { m: 0.09, gamma: 0.5 });
        let tl = crate::model::merge_relevant_dates(&[jump], &[], 1.0).unwrap();
        let loose = localize_domain(&v, &tl, -0.5, 1.0, LocalizationTolerances::uniform(1e-4)).unwrap();
        let tight = localize_domain(&v, &tl, -0.5, 1.0, LocalizationTolerances::uniform(1e-6)).unwrap();
        assert!(tight.a_lo < loose.a_lo && tight.a_hi > loose.a_hi);
        assert!(tight.m_bar > tight.m);
    }

    #[test]
    fn two_point_margin_is_three_jump_sizes() {
        let v: ModelSpec = vasicek().into();
        let jump = RateJump::new(0.5, JumpDistribution::TwoPoint { m: 2.0, p: 0.7 });
        let tl = crate::model::merge_relevant_dates(&[jump], &[], 1.0).unwrap();
        let c = localize_domain(&v, &tl, -0.5, 1.0, LocalizationTolerances::default()).unwrap();
        assert_eq!(c.m_bar, 6.0);
        assert_eq!(c.a_lo, -6.5);
    }

    #[test]
    fn affine_models_get_flagged_heuristic() {
        let m = ModelSpec::Affine(AffineCoefficients::constant(0.075, -0.3, 0.01, 0.0));
        let tl = Timeline::plain(1.0).unwrap();
        let c = localize_domain(&m, &tl, -0.5, 1.0, LocalizationTolerances::default()).unwrap();
        assert!(c.heuristic && c.eps_kernel.is_none());
        let sd = (0.01f64 / 0.6).sqrt();
        assert!((c.m - 8.0 * sd).abs() < 1e-6);
    }

    #[test]
    fn bad_tolerance_rejected() {
        let tl = Timeline::plain(1.0).unwrap();
        let v: ModelSpec = vasicek().into();
        assert!(localize_domain(&v, &tl, -0.5, 1.0, LocalizationTolerances::uniform(0.5)).is_err());
    }
}
