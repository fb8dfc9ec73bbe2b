use serde::{Deserialize, Serialize};

use super::JumpDistribution;
use crate::error::{Error, Result};

/// Dates closer than this are treated as the same calendar date.
const SAME_DATE: f64 = 1e-12;

/// An announced rate-jump date with its size distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateJump {
    pub date: f64,
    pub dist: JumpDistribution,
}

impl RateJump {
    pub fn new(date: f64, dist: JumpDistribution) -> Self {
        Self { date, dist }
    }
}

/// What happens at a relevant date.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DateKind {
    RolloverOnly,
    RateJumpOnly(JumpDistribution),
    Both(JumpDistribution),
}

impl DateKind {
    pub fn jump(&self) -> Option<&JumpDistribution> {
        match self {
            DateKind::RolloverOnly => None,
            DateKind::RateJumpOnly(d) | DateKind::Both(d) => Some(d),
        }
    }

    pub fn has_rollover(&self) -> bool {
        matches!(self, DateKind::RolloverOnly | DateKind::Both(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelevantDate {
    pub date: f64,
    pub kind: DateKind,
}

/// Rate-jump and roll-over dates independent of any product maturity.
///
/// A schedule can be cut to several horizons, e.g. the option expiry and the
/// underlying bond maturity of a call.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JumpSchedule {
    pub rate_jumps: Vec<RateJump>,
    pub rollovers: Vec<f64>,
}

impl JumpSchedule {
    pub fn new(rate_jumps: Vec<RateJump>, rollovers: Vec<f64>) -> Result<Self> {
        check_dates("rate-jump", rate_jumps.iter().map(|j| j.date))?;
        check_dates("roll-over", rollovers.iter().copied())?;
        for j in &rate_jumps {
            j.dist.validate()?;
        }
        Ok(Self {
            rate_jumps,
            rollovers,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn timeline(&self, maturity: f64) -> Result<Timeline> {
        merge_relevant_dates(&self.rate_jumps, &self.rollovers, maturity)
    }
}

/// Relevant dates `(S ∪ T) ∩ (0, T]` of one pricing problem, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    pub rate_jumps: Vec<RateJump>,
    pub rollovers: Vec<f64>,
    pub maturity: f64,
    pub relevant: Vec<RelevantDate>,
}

fn check_dates(list: &'static str, dates: impl Iterator<Item = f64>) -> Result<()> {
    let mut prev: Option<f64> = None;
    for (index, date) in dates.enumerate() {
        if !(date > 0.0) || !date.is_finite() {
            return Err(Error::NonPositiveDate { list, date });
        }
        if let Some(p) = prev {
            if date <= p {
                return Err(Error::UnsortedDates {
                    list,
                    index,
                    prev: p,
                    next: date,
                });
            }
        }
        prev = Some(date);
    }
    Ok(())
}

/// Merges rate-jump and roll-over dates into the ordered relevant-date list.
///
/// Dates after `maturity` are dropped; a date equal to `maturity` is kept.
pub fn merge_relevant_dates(
    rate_jumps: &[RateJump],
    rollovers: &[f64],
    maturity: f64,
) -> Result<Timeline> {
    if !(maturity > 0.0) || !maturity.is_finite() {
        return Err(Error::InvalidMaturity(maturity));
    }
    check_dates("rate-jump", rate_jumps.iter().map(|j| j.date))?;
    check_dates("roll-over", rollovers.iter().copied())?;

    let keep = |d: f64| d <= maturity + SAME_DATE;
    let jumps: Vec<RateJump> = rate_jumps.iter().copied().filter(|j| keep(j.date)).collect();
    let rolls: Vec<f64> = rollovers.iter().copied().filter(|d| keep(*d)).collect();

    let mut relevant = Vec::with_capacity(jumps.len() + rolls.len());
    let (mut i, mut k) = (0, 0);
    while i < jumps.len() || k < rolls.len() {
        let next_jump = jumps.get(i);
        let next_roll = rolls.get(k);
        match (next_jump, next_roll) {
            (Some(j), Some(&r)) if (j.date - r).abs() <= SAME_DATE => {
                relevant.push(RelevantDate {
                    date: j.date,
                    kind: DateKind::Both(j.dist),
                });
                i += 1;
                k += 1;
            }
            (Some(j), Some(&r)) if j.date < r => {
                relevant.push(RelevantDate {
                    date: j.date,
                    kind: DateKind::RateJumpOnly(j.dist),
                });
                i += 1;
            }
            (Some(j), None) => {
                relevant.push(RelevantDate {
                    date: j.date,
                    kind: DateKind::RateJumpOnly(j.dist),
                });
                i += 1;
            }
            (_, Some(&r)) => {
                relevant.push(RelevantDate {
                    date: r,
                    kind: DateKind::RolloverOnly,
                });
                k += 1;
            }
            (None, None) => unreachable!(),
        }
    }

    Ok(Timeline {
        rate_jumps: jumps,
        rollovers: rolls,
        maturity,
        relevant,
    })
}

impl Timeline {
    /// A timeline with no relevant dates.
    pub fn plain(maturity: f64) -> Result<Self> {
        merge_relevant_dates(&[], &[], maturity)
    }

    pub fn has_common_dates(&self) -> bool {
        self.relevant
            .iter()
            .any(|r| matches!(r.kind, DateKind::Both(_)))
    }

    /// True when the last relevant date coincides with maturity.
    pub fn date_at_maturity(&self) -> bool {
        self.relevant
            .last()
            .is_some_and(|r| (r.date - self.maturity).abs() <= SAME_DATE)
    }

    /// The relevant date at maturity, if any.
    pub fn maturity_event(&self) -> Option<&RelevantDate> {
        self.relevant
            .last()
            .filter(|r| (r.date - self.maturity).abs() <= SAME_DATE)
    }

    /// Jump-free intervals `[r_{k-1}, r_k)` covering `[0, T]`, in time order.
    ///
    /// Each interval carries the relevant date at its upper end, if any.
    pub fn intervals(&self) -> Vec<(f64, f64, Option<RelevantDate>)> {
        let mut out = Vec::with_capacity(self.relevant.len() + 1);
        let mut lo = 0.0;
        for r in &self.relevant {
            if (r.date - self.maturity).abs() <= SAME_DATE {
                break;
            }
            out.push((lo, r.date, Some(*r)));
            lo = r.date;
        }
        out.push((lo, self.maturity, self.maturity_event().copied()));
        out
    }

    pub fn longest_interval(&self) -> f64 {
        self.intervals()
            .iter()
            .map(|(lo, hi, _)| hi - lo)
            .fold(0.0, f64::max)
    }

    pub fn gaussian_only(&self) -> bool {
        self.rate_jumps.iter().all(|j| j.dist.is_gaussian())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gauss() -> JumpDistribution {
        JumpDistribution::Gaussian { m: 0.09, gamma: 0.5 }
    }

    #[test]
    fn case_four_dates() {
        let tl = merge_relevant_dates(&[RateJump::new(0.5, gauss())], &[0.8], 1.0).unwrap();
        assert_eq!(tl.relevant.len(), 2);
        assert_eq!(tl.relevant[0].date, 0.5);
        assert!(matches!(tl.relevant[0].kind, DateKind::RateJumpOnly(_)));
        assert_eq!(tl.relevant[1].date, 0.8);
        assert_eq!(tl.relevant[1].kind, DateKind::RolloverOnly);
    }

    #[test]
    fn empty_inputs() {
        let tl = merge_relevant_dates(&[], &[], 1.0).unwrap();
        assert!(tl.relevant.is_empty());
        assert_eq!(tl.intervals(), vec![(0.0, 1.0, None)]);
    }

    #[test]
    fn common_date_becomes_both() {
        let tl = merge_relevant_dates(&[RateJump::new(0.8, gauss())], &[0.8], 1.0).unwrap();
        assert_eq!(tl.relevant.len(), 1);
        assert_eq!(tl.relevant[0].kind, DateKind::Both(gauss()));
        assert!(tl.has_common_dates());
    }

    #[test]
    fn dates_after_maturity_dropped_and_maturity_kept() {
        let tl = merge_relevant_dates(&[RateJump::new(1.0, gauss())], &[0.5, 1.2], 1.0).unwrap();
        assert_eq!(tl.relevant.len(), 2);
        assert!(tl.date_at_maturity());
        let iv = tl.intervals();
        assert_eq!(iv.len(), 2);
        assert_eq!((iv[1].0, iv[1].1), (0.5, 1.0));
        assert!(iv[1].2.is_some());
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(matches!(
            merge_relevant_dates(&[], &[0.5, 0.3], 1.0),
            Err(Error::UnsortedDates { .. })
        ));
        assert!(matches!(
            merge_relevant_dates(&[], &[0.5, 0.5], 1.0),
            Err(Error::UnsortedDates { .. })
        ));
        assert!(matches!(
            merge_relevant_dates(&[RateJump::new(0.0, gauss())], &[], 1.0),
            Err(Error::NonPositiveDate { .. })
        ));
        assert!(merge_relevant_dates(&[], &[], 0.0).is_err());
    }

    fn sorted_dates(max: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::btree_set(1u32..200, 0..max)
            .prop_map(|s| s.into_iter().map(|k| k as f64 / 100.0).collect())
    }

    proptest! {
        #[test]
        fn merge_is_idempotent_and_sorted(
            jd in sorted_dates(6), rd in sorted_dates(6), t in 0.5..2.5f64,
        ) {
            let jumps: Vec<RateJump> = jd.iter().map(|&d| RateJump::new(d, gauss())).collect();
            let tl = merge_relevant_dates(&jumps, &rd, t).unwrap();
            prop_assert!(tl.relevant.windows(2).all(|w| w[0].date < w[1].date));
            prop_assert!(tl.relevant.len() <= tl.rate_jumps.len() + tl.rollovers.len());
            let again = merge_relevant_dates(&tl.rate_jumps, &tl.rollovers, t).unwrap();
            prop_assert_eq!(&again.relevant, &tl.relevant);
            let common = jd.iter().filter(|d| rd.contains(d) && **d <= t).count();
            prop_assert_eq!(tl.relevant.len() + common, tl.rate_jumps.len() + tl.rollovers.len());
        }
    }
}
