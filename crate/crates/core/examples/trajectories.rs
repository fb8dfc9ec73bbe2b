//! Hull-White short-rate paths with jumps at fixed dates: a spike under fast
//! mean reversion, then level shifts once reversion slows down.

use std::sync::Arc;

use rfrjump::mc::{simulate_path, PathConfig};
use rfrjump::model::{AffineCoefficients, JumpDistribution, JumpSchedule, ModelSpec, RateJump};

fn logistic(t: f64) -> f64 {
    1.0 / (1.0 + (-2000.0 * (t - 0.4)).exp())
}

fn main() -> rfrjump::Result<()> {
    let panels = [
        (
            AffineCoefficients::hull_white(
                Arc::new(|t| 0.0075 * logistic(t)),
                Arc::new(|t| -0.3 - 99.7 * logistic(t)),
                Arc::new(|t| 0.2 - 0.1 * logistic(t)),
            ),
            JumpDistribution::gaussian(0.05, 0.1)?,
        ),
        (
            AffineCoefficients::hull_white(
                Arc::new(|t| 0.1 - 0.0925 * logistic(t)),
                Arc::new(|t| -0.3 - 99.7 * logistic(t)),
                Arc::new(|t| 0.05 + 0.05 * logistic(t)),
            ),
            JumpDistribution::two_point(0.04, 0.9)?,
        ),
    ];
    let dates = [0.3, 0.5, 0.6, 0.8, 0.9];
    for (k, (coeffs, dist)) in panels.into_iter().enumerate() {
        let model = ModelSpec::Affine(coeffs);
        let jumps = dates.iter().map(|&d| RateJump::new(d, dist)).collect();
        let timeline = JumpSchedule::new(jumps, vec![])?.timeline(1.0)?;
        let cfg = PathConfig::new(2, 10_000, 2024 + k as u64, false)?;
        let path = simulate_path(&model, &timeline, 0.0, 0.0, 1.0, &cfg, &mut cfg.stream(0))?;
        println!("panel {}", k + 1);
        for t in [0.0, 0.29, 0.3, 0.35, 0.45, 0.5, 0.55, 0.6, 0.7, 0.8, 0.85, 0.9, 1.0] {
            let i = path.nodes.partition_point(|&(s, _)| s < t).min(path.nodes.len() - 1);
            println!("  t={t:.2} rate={:+.5}", path.nodes[i].1);
        }
    }
    Ok(())
}
