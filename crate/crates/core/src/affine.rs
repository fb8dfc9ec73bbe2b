//! Closed-form engine for affine short-rate models.
//!
//! Zero-coupon bonds are exponential-affine, `P_T(t,x) = exp(-a(t,T) - x b(t,T))`.
//! Between roll-over dates `b` solves the Riccati equation
//! `b' + β b - ½ δ b² + 1 = 0`, and it jumps by `+1` going backward across a
//! roll-over. `a` integrates `α b - ½ γ b²` and picks up `-log E[e^{-ξ b}]` at
//! each rate-jump date. Calls on bonds have a Black-type closed form under
//! constant-coefficient Vasicek dynamics with Gaussian jumps.

use crate::error::{Error, Result};
use crate::math::norm_cdf;
use crate::model::{JumpSchedule, ModelSpec, RateJump, Timeline, Vasicek};

/// RK4 substeps per Riccati piece (`h = 1e-4 · piece length`).
const RICCATI_STEPS: usize = 10_000;
const RICCATI_BLOWUP: f64 = 1e8;
const SIMPSON_PANELS_CLOSED: usize = 1024;
const SIMPSON_PANELS_TABULATED: usize = 8192;

/// Slope coefficient `b(·, T)`.
#[derive(Debug, Clone)]
pub enum BCurve {
    /// `B(t,T) + Σ_n e^{β(t_n - t)} 1_{t < t_n}`.
    Vasicek {
        model: Vasicek,
        rollovers: Vec<f64>,
        maturity: f64,
    },
    /// Numerical Riccati solution, one piece per inter-roll-over interval.
    Tabulated { pieces: Vec<RiccatiPiece> },
}

/// RK4 nodes of one Riccati piece on `[lo, hi)`, ascending in time, with
/// the ODE right-hand side stored for Hermite interpolation.
#[derive(Debug, Clone)]
pub struct RiccatiPiece {
    pub lo: f64,
    pub hi: f64,
    ts: Vec<f64>,
    bs: Vec<f64>,
    slopes: Vec<f64>,
}

impl RiccatiPiece {
    fn eval(&self, t: f64) -> f64 {
        let n = self.ts.len();
        let k = self.ts.partition_point(|&s| s <= t).clamp(1, n - 1) - 1;
        let h = self.ts[k + 1] - self.ts[k];
        let s = (t - self.ts[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.bs[k] + h10 * h * self.slopes[k] + h01 * self.bs[k + 1] + h11 * h * self.slopes[k + 1]
    }

    /// Left limit at the upper end of the piece.
    fn at_upper(&self) -> f64 {
        self.bs[self.bs.len() - 1]
    }
}

impl BCurve {
    /// `b(t, T)`, right-continuous at roll-over dates.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            BCurve::Vasicek {
                model,
                rollovers,
                maturity,
            } => {
                let mut b = model.b_plain(maturity - t);
                for &tn in rollovers.iter().filter(|&&tn| t < tn) {
                    b += (model.beta * (tn - t)).exp();
                }
                b
            }
            BCurve::Tabulated { pieces } => {
                let k = pieces
                    .partition_point(|p| p.hi <= t)
                    .min(pieces.len() - 1);
                pieces[k].eval(t)
            }
        }
    }

    /// `lim_{u ↑ t} b(u, T)`.
    pub fn left_limit(&self, t: f64) -> f64 {
        match self {
            BCurve::Vasicek { rollovers, .. } => {
                let bump = rollovers.iter().filter(|&&tn| tn == t).count() as f64;
                self.eval(t) + bump
            }
            BCurve::Tabulated { pieces } => match pieces.iter().find(|p| p.hi == t) {
                Some(p) => p.at_upper(),
                None => self.eval(t),
            },
        }
    }
}

fn require_closed_form_timeline(timeline: &Timeline) -> Result<()> {
    if timeline.has_common_dates() {
        return Err(Error::unsupported(
            "closed form",
            "common rate-jump and roll-over dates",
        ));
    }
    if timeline.date_at_maturity() {
        return Err(Error::unsupported(
            "closed form",
            "a relevant date at maturity",
        ));
    }
    Ok(())
}

/// Solves for `b(·, T)` backward from `b(T,T) = 0`.
///
/// Constant-coefficient Vasicek uses the closed form; other affine models
/// integrate the Riccati equation with classic RK4.
pub fn riccati_b(model: &ModelSpec, timeline: &Timeline) -> Result<BCurve> {
    require_closed_form_timeline(timeline)?;
    match model {
        ModelSpec::Vasicek(v) => Ok(BCurve::Vasicek {
            model: *v,
            rollovers: timeline.rollovers.clone(),
            maturity: timeline.maturity,
        }),
        ModelSpec::Affine(_) => riccati_numeric(model, timeline),
        ModelSpec::General(_) => Err(Error::unsupported("closed form", "non-affine models")),
    }
}

fn riccati_numeric(model: &ModelSpec, timeline: &Timeline) -> Result<BCurve> {
    let rhs = |t: f64, b: f64| -> f64 {
        let (_, beta, _, delta) = model.affine_at(t).expect("affine model");
        -beta * b + 0.5 * delta * b * b - 1.0
    };

    let mut edges = vec![0.0];
    edges.extend(timeline.rollovers.iter().copied());
    edges.push(timeline.maturity);

    let mut pieces = Vec::with_capacity(edges.len() - 1);
    let mut terminal = 0.0;
    for w in edges.windows(2).rev() {
        let (lo, hi) = (w[0], w[1]);
        let h = (hi - lo) / RICCATI_STEPS as f64;
        let mut ts = vec![0.0; RICCATI_STEPS + 1];
        let mut bs = vec![0.0; RICCATI_STEPS + 1];
        ts[RICCATI_STEPS] = hi;
        bs[RICCATI_STEPS] = terminal;
        let mut b = terminal;
        for k in (0..RICCATI_STEPS).rev() {
            let t = lo + (k + 1) as f64 * h;
            // backward step of size -h
            let k1 = rhs(t, b);
            let k2 = rhs(t - 0.5 * h, b - 0.5 * h * k1);
            let k3 = rhs(t - 0.5 * h, b - 0.5 * h * k2);
            let k4 = rhs(t - h, b - h * k3);
            b -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if !b.is_finite() || b.abs() > RICCATI_BLOWUP {
                return Err(Error::RiccatiBlowUp { lo, hi });
            }
            ts[k] = lo + k as f64 * h;
            bs[k] = b;
        }
        let slopes = ts.iter().zip(&bs).map(|(&t, &b)| rhs(t, b)).collect();
        pieces.push(RiccatiPiece {
            lo,
            hi,
            ts,
            bs,
            slopes,
        });
        // crossing the roll-over at `lo` going backward
        terminal = b + 1.0;
    }
    pieces.reverse();
    Ok(BCurve::Tabulated { pieces })
}

/// Intercept coefficient `a(·, T)`.
#[derive(Debug, Clone)]
pub struct ACurve {
    model: ModelSpec,
    b: BCurve,
    /// Smooth pieces of the integrand, split at every relevant date.
    edges: Vec<f64>,
    /// `(s_j, log E[e^{-ξ_j b(s_j,T)}])`.
    jump_terms: Vec<(f64, f64)>,
    panels: usize,
}

impl ACurve {
    pub fn eval(&self, t: f64) -> f64 {
        let mut total = 0.0;
        for w in self.edges.windows(2) {
            let (lo, hi) = (w[0].max(t), w[1]);
            if hi > lo {
                total += self.piece_integral(lo, hi);
            }
        }
        for &(s, lmgf) in &self.jump_terms {
            if t < s {
                total -= lmgf;
            }
        }
        total
    }

    pub fn jump_terms(&self) -> &[(f64, f64)] {
        &self.jump_terms
    }

    fn integrand(&self, u: f64, b: f64) -> f64 {
        let (alpha, _, gamma, _) = self.model.affine_at(u).expect("affine model");
        alpha * b - 0.5 * gamma * b * b
    }

    /// Simpson over one smooth piece; the upper end uses the left limit of
    /// `b` so a roll-over there stays outside the piece.
    fn piece_integral(&self, lo: f64, hi: f64) -> f64 {
        let n = self.panels;
        let h = (hi - lo) / n as f64;
        let mut acc = self.integrand(lo, self.b.eval(lo))
            + self.integrand(hi, self.b.left_limit(hi));
        for k in 1..n {
            let u = lo + k as f64 * h;
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.integrand(u, self.b.eval(u));
        }
        acc * h / 3.0
    }
}

/// Builds `a(·, T)` from `b(·, T)`.
pub fn integrate_a(model: &ModelSpec, timeline: &Timeline, b: &BCurve) -> Result<ACurve> {
    require_closed_form_timeline(timeline)?;
    if model.affine_at(0.0).is_none() {
        return Err(Error::unsupported("closed form", "non-affine models"));
    }
    let mut edges = vec![0.0];
    edges.extend(timeline.relevant.iter().map(|r| r.date));
    edges.push(timeline.maturity);
    let jump_terms = timeline
        .rate_jumps
        .iter()
        .map(|j: &RateJump| (j.date, j.dist.log_mgf_neg(b.eval(j.date))))
        .collect();
    let panels = match model {
        ModelSpec::Vasicek(_) => SIMPSON_PANELS_CLOSED,
        _ => SIMPSON_PANELS_TABULATED,
    };
    Ok(ACurve {
        model: model.clone(),
        b: b.clone(),
        edges,
        jump_terms,
        panels,
    })
}

/// `a` and `b` for one bond maturity.
#[derive(Debug, Clone)]
pub struct ZcbCoefficients {
    pub maturity: f64,
    pub breakpoints: Vec<f64>,
    b: BCurve,
    a: ACurve,
}

impl ZcbCoefficients {
    pub fn new(model: &ModelSpec, timeline: &Timeline) -> Result<Self> {
        let b = riccati_b(model, timeline)?;
        let a = integrate_a(model, timeline, &b)?;
        Ok(Self {
            maturity: timeline.maturity,
            breakpoints: timeline.relevant.iter().map(|r| r.date).collect(),
            b,
            a,
        })
    }

    pub fn b(&self, t: f64) -> f64 {
        self.b.eval(t)
    }

    pub fn a(&self, t: f64) -> f64 {
        self.a.eval(t)
    }

    pub fn b_curve(&self) -> &BCurve {
        &self.b
    }

    pub fn a_curve(&self) -> &ACurve {
        &self.a
    }

    /// `log P_T(t, x)`.
    pub fn log_price(&self, t: f64, x: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(-self.a(t) - x * self.b(t))
    }

    pub fn price(&self, t: f64, x: f64) -> Result<f64> {
        self.log_price(t, x).map(f64::exp)
    }

    /// Prices a whole slice of rates at one time, evaluating `a`, `b` once.
    pub fn prices(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        self.check_time(t)?;
        let (a, b) = (self.a(t), self.b(t));
        Ok(xs.iter().map(|&x| (-a - x * b).exp()).collect())
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if t > self.maturity {
            return Err(Error::TimeAfterMaturity {
                t,
                maturity: self.maturity,
            });
        }
        if t < 0.0 {
            return Err(Error::param(format!("negative time {t}")));
        }
        Ok(())
    }
}

/// `P_T(t,x) = exp(-a(t,T) - x b(t,T))`.
pub fn zcb_price(coeffs: &ZcbCoefficients, t: f64, x: f64) -> Result<f64> {
    coeffs.price(t, x)
}

/// European call on a zero-coupon bond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CallSpec {
    pub strike: f64,
    pub option_expiry: f64,
    pub bond_maturity: f64,
}

impl CallSpec {
    pub fn new(strike: f64, option_expiry: f64, bond_maturity: f64) -> Result<Self> {
        if !(strike > 0.0) {
            return Err(Error::param(format!("strike must be positive, got {strike}")));
        }
        if !(option_expiry > 0.0 && bond_maturity > option_expiry) {
            return Err(Error::param(format!(
                "need 0 < option expiry < bond maturity (got {option_expiry}, {bond_maturity})"
            )));
        }
        Ok(Self {
            strike,
            option_expiry,
            bond_maturity,
        })
    }
}

/// A call value with the effective volatility used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CallQuote {
    pub price: f64,
    pub sigma_c: f64,
    /// Set when `σ_c = 0` before expiry and the deterministic limit was used.
    pub deterministic: bool,
}

/// Closed-form call on a bond under Vasicek dynamics with Gaussian jumps.
#[derive(Debug, Clone)]
pub struct CallPricer {
    model: Vasicek,
    spec: CallSpec,
    bond: ZcbCoefficients,
    expiry_bond: ZcbCoefficients,
    /// `b(T, S)`.
    b_expiry: f64,
    /// `(s_j, γ_j²)` for jumps before expiry.
    jump_variances: Vec<(f64, f64)>,
}

impl CallPricer {
    pub fn new(model: &Vasicek, schedule: &JumpSchedule, spec: CallSpec) -> Result<Self> {
        let to_expiry = schedule.timeline(spec.option_expiry)?;
        let to_bond = schedule.timeline(spec.bond_maturity)?;
        let mut jump_variances = Vec::new();
        for j in &to_expiry.rate_jumps {
            match j.dist {
                crate::model::JumpDistribution::Gaussian { gamma, .. } => {
                    jump_variances.push((j.date, gamma * gamma))
                }
                _ => {
                    return Err(Error::unsupported(
                        "closed-form call",
                        "non-Gaussian rate jumps before expiry",
                    ))
                }
            }
        }
        let m = ModelSpec::Vasicek(*model);
        let bond = ZcbCoefficients::new(&m, &to_bond)?;
        let expiry_bond = ZcbCoefficients::new(&m, &to_expiry)?;
        let b_expiry = bond.b(spec.option_expiry);
        Ok(Self {
            model: *model,
            spec,
            bond,
            expiry_bond,
            b_expiry,
            jump_variances,
        })
    }

    pub fn spec(&self) -> &CallSpec {
        &self.spec
    }

    /// Bond (maturity `S`) coefficients.
    pub fn bond(&self) -> &ZcbCoefficients {
        &self.bond
    }

    /// Bond maturing at expiry `T`.
    pub fn expiry_bond(&self) -> &ZcbCoefficients {
        &self.expiry_bond
    }

    /// `σ_c²(t)`.
    pub fn sigma_c_squared(&self, t: f64) -> Result<f64> {
        let expiry = self.spec.option_expiry;
        if t > expiry {
            return Err(Error::TimeAfterMaturity { t, maturity: expiry });
        }
        let (beta, sigma) = (self.model.beta, self.model.sigma);
        let diffusive = sigma * sigma / (2.0 * beta) * (2.0 * beta * (expiry - t)).exp_m1();
        let jumps: f64 = self
            .jump_variances
            .iter()
            .filter(|(s, _)| t < *s)
            .map(|(s, g2)| g2 * (2.0 * beta * (expiry - s)).exp())
            .sum();
        Ok(self.b_expiry * self.b_expiry * (diffusive + jumps))
    }

    pub fn sigma_c(&self, t: f64) -> Result<f64> {
        self.sigma_c_squared(t).map(|v| v.max(0.0).sqrt())
    }

    pub fn price(&self, t: f64, x: f64) -> Result<CallQuote> {
        Ok(self.at(t)?.quote(x))
    }

    /// Prices a slice of rates at one time, evaluating the coefficients once.
    pub fn prices(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        let slice = self.at(t)?;
        Ok(xs.iter().map(|&x| slice.quote(x).price).collect())
    }

    fn at(&self, t: f64) -> Result<CallSlice> {
        let expiry = self.spec.option_expiry;
        let sigma_c = self.sigma_c(t)?;
        self.bond.check_time(t)?;
        let bond = (self.bond.a(t), self.bond.b(t));
        let expiry_bond = if t == expiry {
            None
        } else {
            self.expiry_bond.check_time(t)?;
            Some((self.expiry_bond.a(t), self.expiry_bond.b(t)))
        };
        Ok(CallSlice {
            strike: self.spec.strike,
            sigma_c,
            bond,
            expiry_bond,
        })
    }
}

/// Call coefficients frozen at one time.
struct CallSlice {
    strike: f64,
    sigma_c: f64,
    bond: (f64, f64),
    /// `None` at expiry.
    expiry_bond: Option<(f64, f64)>,
}

impl CallSlice {
    fn quote(&self, x: f64) -> CallQuote {
        let (k, sigma_c) = (self.strike, self.sigma_c);
        let log_ps = -self.bond.0 - x * self.bond.1;
        let ps = log_ps.exp();
        let Some((a_t, b_t)) = self.expiry_bond else {
            return CallQuote {
                price: (ps - k).max(0.0),
                sigma_c,
                deterministic: false,
            };
        };
        let log_pt = -a_t - x * b_t;
        let pt = log_pt.exp();
        if sigma_c == 0.0 {
            return CallQuote {
                price: (ps - k * pt).max(0.0),
                sigma_c,
                deterministic: true,
            };
        }
        let d1 = (log_ps - log_pt - k.ln()) / sigma_c + 0.5 * sigma_c;
        let d2 = d1 - sigma_c;
        CallQuote {
            price: ps * norm_cdf(d1) - k * pt * norm_cdf(d2),
            sigma_c,
            deterministic: false,
        }
    }
}

/// `σ_c(t)` of the closed-form call.
pub fn call_sigma_c(
    model: &Vasicek,
    schedule: &JumpSchedule,
    spec: CallSpec,
    t: f64,
) -> Result<f64> {
    CallPricer::new(model, schedule, spec)?.sigma_c(t)
}

pub fn call_price(
    model: &Vasicek,
    schedule: &JumpSchedule,
    spec: CallSpec,
    t: f64,
    x: f64,
) -> Result<CallQuote> {
    CallPricer::new(model, schedule, spec)?.price(t, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{norm_pdf, simpson};
    use crate::model::{AffineCoefficients, JumpDistribution};
    use proptest::prelude::*;

    fn vasicek() -> Vasicek {
        Vasicek::new(0.075, -0.3, 0.1).unwrap()
    }

    fn schedule(jump: Option<f64>, rollovers: &[f64]) -> JumpSchedule {
        let jumps = jump
            .map(|s| vec![RateJump::new(s, JumpDistribution::Gaussian { m: 0.09, gamma: 0.5 })])
            .unwrap_or_default();
        JumpSchedule::new(jumps, rollovers.to_vec()).unwrap()
    }

    fn coeffs(model: &ModelSpec, sched: &JumpSchedule, maturity: f64) -> ZcbCoefficients {
        ZcbCoefficients::new(model, &sched.timeline(maturity).unwrap()).unwrap()
    }

    /// Explicit intercept of the Vasicek bond with roll-over dates `tn`.
    fn explicit_a(v: &Vasicek, t: f64, big_t: f64, tn: &[f64]) -> f64 {
        let (al, be, s) = (v.alpha, v.beta, v.sigma);
        let s2 = s * s;
        let live: Vec<f64> = tn.iter().copied().filter(|&d| t < d).collect();
        let mut a = v.a_plain(big_t - t);
        for &d in &live {
            a += (al + s2 / be) * v.b_plain(d - t);
            a -= 0.5
                * s2
                * (((be * (big_t + d - 2.0 * t)).exp() - (be * (big_t - d)).exp()) / (be * be)
                    + (2.0 * be * (d - t)).exp_m1() / (2.0 * be));
        }
        for (n, &d) in live.iter().enumerate() {
            for &l in &live[n + 1..] {
                a -= s2 * ((be * (d + l - 2.0 * t)).exp() - (be * (l - d)).exp()) / (2.0 * be);
            }
        }
        a
    }

    #[test]
    fn plain_vasicek_matches_textbook() {
        let v = vasicek();
        let c = coeffs(&v.into(), &JumpSchedule::empty(), 1.0);
        for t in [0.0, 0.25, 0.7, 1.0] {
            assert!((c.b(t) - v.b_plain(1.0 - t)).abs() < 1e-15);
            assert!((c.a(t) - v.a_plain(1.0 - t)).abs() < 1e-14, "t={t}");
        }
        assert!((c.b(0.0) - 0.863_939_264_4).abs() < 1e-10);
    }

    #[test]
    fn rollover_intercept_matches_explicit_formula() {
        let v = vasicek();
        let tn = [0.3, 0.8];
        let c = coeffs(&v.into(), &schedule(None, &tn), 1.0);
        for t in [0.0, 0.1, 0.3, 0.5, 0.8, 0.95] {
            let want = explicit_a(&v, t, 1.0, &tn);
            assert!((c.a(t) - want).abs() < 1e-13, "t={t}: {} vs {want}", c.a(t));
        }
        // b jumps by one across each roll-over
        assert!((c.b_curve().left_limit(0.8) - c.b(0.8) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_jump_adds_log_mgf() {
        let v = vasicek();
        let c = coeffs(&v.into(), &schedule(Some(0.5), &[]), 1.0);
        let b = v.b_plain(0.5);
        let lmgf = -0.09 * b + 0.125 * b * b;
        assert!((c.a(0.2) - (v.a_plain(0.8) - lmgf)).abs() < 1e-14);
        assert!((c.a(0.6) - v.a_plain(0.4)).abs() < 1e-14);
    }

    #[test]
    fn riccati_matches_closed_form_with_rollovers() {
        let v = vasicek();
        let affine = ModelSpec::Affine(AffineCoefficients::constant(0.075, -0.3, 0.01, 0.0));
        let sched = schedule(Some(0.5), &[0.3, 0.8]);
        let numeric = coeffs(&affine, &sched, 1.0);
        let closed = coeffs(&v.into(), &sched, 1.0);
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            assert!((numeric.b(t) - closed.b(t)).abs() < 1e-10, "b at t={t}");
            assert!((numeric.a(t) - closed.a(t)).abs() < 1e-10, "a at t={t}");
        }
    }

    #[test]
    fn bond_satisfies_pricing_pde_between_dates() {
        let v = vasicek();
        let c = coeffs(&v.into(), &schedule(Some(0.5), &[0.8]), 1.0);
        let (t, x, h) = (0.3, 0.1, 1e-4);
        let p = c.price(t, x).unwrap();
        let dt = (c.price(t + h, x).unwrap() - c.price(t - h, x).unwrap()) / (2.0 * h);
        let b = c.b(t);
        let residual = dt - (v.alpha + v.beta * x) * b * p + 0.5 * v.sigma * v.sigma * b * b * p - x * p;
        assert!(residual.abs() < 1e-8 * p, "residual {residual}");
    }

    #[test]
    fn rejects_unsupported_timelines() {
        let v: ModelSpec = vasicek().into();
        let at_maturity = schedule(None, &[1.0]).timeline(1.0).unwrap();
        assert!(matches!(
            ZcbCoefficients::new(&v, &at_maturity),
            Err(Error::Unsupported { .. })
        ));
        let both = schedule(Some(0.5), &[0.5]).timeline(1.0).unwrap();
        assert!(ZcbCoefficients::new(&v, &both).is_err());
        let c = coeffs(&v, &JumpSchedule::empty(), 1.0);
        assert!(matches!(c.price(1.2, 0.0), Err(Error::TimeAfterMaturity { .. })));
    }

    #[test]
    fn riccati_blow_up_is_reported() {
        let cir = ModelSpec::Affine(AffineCoefficients::constant(0.0, 0.0, 0.0, -50.0));
        let tl = Timeline::plain(1.0).unwrap();
        assert!(matches!(riccati_b(&cir, &tl), Err(Error::RiccatiBlowUp { .. })));
    }

    fn spec() -> CallSpec {
        CallSpec::new(0.5, 1.0, 1.5).unwrap()
    }

    #[test]
    fn call_without_jumps_matches_jamshidian() {
        let v = vasicek();
        let kappa = -v.beta;
        let pricer = CallPricer::new(&v, &JumpSchedule::empty(), spec()).unwrap();
        for (t, x) in [(0.0, 0.05), (0.4, -0.3), (0.9, 0.8)] {
            let tau = 1.0 - t;
            let sp = v.sigma / kappa
                * (1.0 - (-kappa * 0.5).exp())
                * ((1.0 - (-2.0 * kappa * tau).exp()) / (2.0 * kappa)).sqrt();
            let ps = (-v.a_plain(1.5 - t) - x * v.b_plain(1.5 - t)).exp();
            let pt = (-v.a_plain(tau) - x * v.b_plain(tau)).exp();
            let h = (ps / (0.5 * pt)).ln() / sp + 0.5 * sp;
            let want = ps * norm_cdf(h) - 0.5 * pt * norm_cdf(h - sp);
            let got = pricer.price(t, x).unwrap();
            assert!((got.sigma_c - sp).abs() < 1e-15);
            assert!((got.price - want).abs() < 1e-14, "t={t}");
        }
    }

    /// Call value from the joint Gaussian law of `(∫ρ, ρ_T)`: discounting
    /// tilts the mean of `ρ_T` by `-Cov(∫ρ, ρ_T)`.
    fn joint_gaussian_call(v: &Vasicek, t: f64, x: f64, jump: (f64, f64, f64)) -> f64 {
        let (al, be, s) = (v.alpha, v.beta, v.sigma);
        let (sj, m, g) = jump;
        let big_t = 1.0;
        let mean = (be * (big_t - t)).exp() * x + al / be * (be * (big_t - t)).exp_m1()
            + m * (be * (big_t - sj)).exp();
        let var = s * s * (2.0 * be * (big_t - t)).exp_m1() / (2.0 * be)
            + g * g * (2.0 * be * (big_t - sj)).exp();
        let inner = |u: f64| {
            (be * (u + big_t)).exp() * ((-2.0 * be * t).exp() - (-2.0 * be * u).exp()) / (2.0 * be)
        };
        let cov = s * s * simpson(inner, t, big_t, 4000)
            + g * g * (be * (big_t - sj)).exp() * v.b_plain(big_t - sj);
        let tilted = mean - cov;
        let sd = var.sqrt();
        let bond = coeffs(&(*v).into(), &schedule(Some(sj), &[]), 1.5);
        let to_t = coeffs(&(*v).into(), &schedule(Some(sj), &[]), 1.0);
        let payoff = |y: f64| {
            let z = (y - tilted) / sd;
            (bond.price(big_t, y).unwrap() - 0.5).max(0.0) * norm_pdf(z) / sd
        };
        let expectation = simpson(payoff, tilted - 12.0 * sd, tilted + 12.0 * sd, 200_000);
        to_t.price(t, x).unwrap() * expectation
    }

    #[test]
    fn call_with_gaussian_jump_matches_joint_gaussian_oracle() {
        let v = vasicek();
        let pricer = CallPricer::new(&v, &schedule(Some(0.5), &[]), spec()).unwrap();
        for (t, x) in [(0.0, 0.05), (0.3, 0.5)] {
            let want = joint_gaussian_call(&v, t, x, (0.5, 0.09, 0.5));
            let got = pricer.price(t, x).unwrap().price;
            assert!((got - want).abs() < 1e-9, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn sigma_c_drops_jump_variance_after_jump() {
        let v = vasicek();
        let pricer = CallPricer::new(&v, &schedule(Some(0.5), &[0.8]), spec()).unwrap();
        let b_ts = pricer.bond().b(1.0);
        let before = pricer.sigma_c_squared(0.5 - 1e-12).unwrap();
        let after = pricer.sigma_c_squared(0.5).unwrap();
        let jump_part = b_ts * b_ts * 0.25 * (2.0 * v.beta * 0.5).exp();
        assert!((before - after - jump_part).abs() < 1e-10);
        assert_eq!(pricer.sigma_c(1.0).unwrap(), 0.0);
    }

    #[test]
    fn call_rejects_two_point_jumps_before_expiry() {
        let v = vasicek();
        let tp = JumpDistribution::TwoPoint { m: 0.09, p: 0.7 };
        let sched = JumpSchedule::new(vec![RateJump::new(0.5, tp)], vec![]).unwrap();
        assert!(matches!(
            CallPricer::new(&v, &sched, spec()),
            Err(Error::Unsupported { .. })
        ));
        let later = JumpSchedule::new(vec![RateJump::new(1.2, tp)], vec![]).unwrap();
        assert!(CallPricer::new(&v, &later, spec()).is_ok());
    }

    #[test]
    fn call_at_expiry_is_payoff() {
        let v = vasicek();
        let pricer = CallPricer::new(&v, &JumpSchedule::empty(), spec()).unwrap();
        let q = pricer.price(1.0, 0.1).unwrap();
        let ps = pricer.bond().price(1.0, 0.1).unwrap();
        assert_eq!(q.price, (ps - 0.5).max(0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn call_bounded_and_monotone_in_strike(
            x in -0.5..1.0f64, t in 0.0..0.99f64, k in 0.05..1.2f64, dk in 0.0..0.3f64,
        ) {
            let v = vasicek();
            let sched = schedule(Some(0.5), &[0.8]);
            let lo = CallPricer::new(&v, &sched, CallSpec::new(k, 1.0, 1.5).unwrap()).unwrap();
            let hi = CallPricer::new(&v, &sched, CallSpec::new(k + dk, 1.0, 1.5).unwrap()).unwrap();
            let c_lo = lo.price(t, x).unwrap().price;
            let c_hi = hi.price(t, x).unwrap().price;
            let ps = lo.bond().price(t, x).unwrap();
            prop_assert!(c_lo >= -1e-15 && c_lo <= ps + 1e-15);
            prop_assert!(c_hi <= c_lo + 1e-15);
        }
    }
}
