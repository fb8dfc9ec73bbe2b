//! The two jump conditions applied to a grid function: a roll-over
//! multiplies by e^{-x}, a rate jump averages over the jump law.

use rfrjump::model::{apply_jump_condition, DateKind, JumpDistribution, UniformGrid};

fn main() -> rfrjump::Result<()> {
    let grid = UniformGrid::covering(-1.6, 2.065, 5e-3)?;
    let after = grid.function(|x| (-0.9 * x).exp());
    let kinds = [
        DateKind::RolloverOnly,
        DateKind::RateJumpOnly(JumpDistribution::gaussian(0.09, 0.5)?),
        DateKind::RateJumpOnly(JumpDistribution::two_point(0.09, 0.7)?),
    ];
    for kind in kinds {
        let before = apply_jump_condition(&after, &kind)?;
        let at = |x: f64| before.interpolate(x).unwrap_or(f64::NAN);
        println!("{kind:?}: f(0)={:.8} f(0.5)={:.8}", at(0.0), at(0.5));
    }
    Ok(())
}
