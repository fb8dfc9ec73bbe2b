//! Engine output: price curves, time snapshots and the error metric used in
//! the convergence tables.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::localization::DomainCertificate;
use crate::model::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    SemiAnalytic,
    FiniteDifference,
    MonteCarlo,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::SemiAnalytic => "semianalytic",
            Method::FiniteDifference => "fd",
            Method::MonteCarlo => "mc",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [
            Method::ClosedForm,
            Method::SemiAnalytic,
            Method::FiniteDifference,
            Method::MonteCarlo,
        ]
        .into_iter()
        .find(|m| m.tag() == tag)
    }
}

/// Values on the grid at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct ResultMeta {
    pub certificate: Option<DomainCertificate>,
    pub domain: Option<(f64, f64)>,
    pub dx: Option<f64>,
    pub dt: Option<f64>,
    pub theta: Option<f64>,
    pub time_steps: usize,
    pub wall_time: Duration,
    pub warnings: Vec<String>,
}

/// Price curve `f(0, ·)` with the intermediate time levels kept for the
/// max-in-time error metric.
#[derive(Debug, Clone)]
pub struct PriceResult {
    pub method: Method,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    /// Time levels in increasing time; the first is `t = 0`.
    pub snapshots: Vec<Snapshot>,
    pub meta: ResultMeta,
}

impl PriceResult {
    pub fn new(method: Method, xs: Vec<f64>, mut snapshots: Vec<Snapshot>, meta: ResultMeta) -> Self {
        snapshots.sort_by(|a, b| a.t.total_cmp(&b.t));
        let values = snapshots
            .first()
            .map(|s| s.values.clone())
            .unwrap_or_default();
        Self {
            method,
            xs,
            values,
            snapshots,
            meta,
        }
    }

    pub fn at_zero(&self) -> Result<GridFunction> {
        GridFunction::new(self.xs.clone(), self.values.clone())
    }

    /// Linear interpolation of `f(0, x)`.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        self.at_zero().ok()?.interpolate(x)
    }
}

/// Maximum over time of the mean absolute (and relative) error on a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub abs: f64,
    pub rel: f64,
    /// Time level attaining the maximum absolute error.
    pub worst_t: f64,
}

/// `max_j (1/|I|) Σ_{x_i ∈ I} |V_i^j - f(t^j, x_i)|` over all stored
/// snapshots, with `reference(t, xs)` giving the exact values.
pub fn max_mean_abs_error<F>(result: &PriceResult, region: (f64, f64), reference: F) -> Result<ErrorSummary>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let range = region_indices(&result.xs, region)?;
    let xs = &result.xs[range.clone()];
    let mut worst = ErrorSummary {
        abs: 0.0,
        rel: 0.0,
        worst_t: f64::NAN,
    };
    for snap in &result.snapshots {
        let exact = reference(snap.t, xs)?;
        let (abs, rel) = mean_errors(&snap.values[range.clone()], &exact);
        if abs > worst.abs || worst.worst_t.is_nan() {
            worst.abs = abs;
            worst.worst_t = snap.t;
        }
        worst.rel = worst.rel.max(rel);
    }
    Ok(worst)
}

/// Mean absolute difference of `f(0, ·)` between two results on a region.
/// `reference` is interpolated onto the nodes of `result`.
pub fn mean_abs_difference(result: &PriceResult, reference: &PriceResult, region: (f64, f64)) -> Result<ErrorSummary> {
    let range = region_indices(&result.xs, region)?;
    let other = reference.at_zero()?;
    let exact = result.xs[range.clone()]
        .iter()
        .map(|&x| {
            other
                .interpolate(x)
                .ok_or_else(|| Error::Validation(format!("reference grid does not cover x={x}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let (abs, rel) = mean_errors(&result.values[range], &exact);
    Ok(ErrorSummary { abs, rel, worst_t: 0.0 })
}

fn region_indices(xs: &[f64], region: (f64, f64)) -> Result<std::ops::Range<usize>> {
    let eps = 1e-9 * (xs.get(1).copied().unwrap_or(1.0) - xs.first().copied().unwrap_or(0.0)).abs();
    let start = xs.partition_point(|&x| x < region.0 - eps);
    let end = xs.partition_point(|&x| x <= region.1 + eps);
    if end <= start {
        return Err(Error::Validation(format!(
            "no grid nodes inside the region [{}, {}]",
            region.0, region.1
        )));
    }
    Ok(start..end)
}

fn mean_errors(values: &[f64], exact: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let abs = values.iter().zip(exact).map(|(v, e)| (v - e).abs()).sum::<f64>() / n;
    let rel = values
        .iter()
        .zip(exact)
        .map(|(v, e)| if *e != 0.0 { ((v - e) / e).abs() } else { (v - e).abs() })
        .sum::<f64>()
        / n;
    (abs, rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(snaps: Vec<Snapshot>) -> PriceResult {
        let xs = vec![-1.0, -0.5, 0.0, 0.5, 1.0];
        PriceResult::new(Method::FiniteDifference, xs, snaps, ResultMeta::default())
    }

    #[test]
    fn metric_takes_max_over_time_of_region_mean() {
        let r = result(vec![
            Snapshot { t: 0.5, values: vec![9.0, 1.0, 1.0, 1.3, 9.0] },
            Snapshot { t: 0.0, values: vec![9.0, 1.1, 1.0, 1.0, 9.0] },
        ]);
        assert_eq!(r.values[1], 1.1);
        let e = max_mean_abs_error(&r, (-0.5, 0.5), |_, xs| Ok(vec![1.0; xs.len()])).unwrap();
        assert!((e.abs - 0.1).abs() < 1e-15);
        assert_eq!(e.worst_t, 0.5);
    }

    #[test]
    fn empty_region_is_an_error() {
        let r = result(vec![Snapshot { t: 0.0, values: vec![0.0; 5] }]);
        assert!(max_mean_abs_error(&r, (2.0, 3.0), |_, xs| Ok(vec![0.0; xs.len()])).is_err());
    }

    #[test]
    fn method_tags_round_trip() {
        for m in [Method::ClosedForm, Method::SemiAnalytic, Method::FiniteDifference, Method::MonteCarlo] {
            assert_eq!(Method::from_tag(m.tag()), Some(m));
        }
    }
}
