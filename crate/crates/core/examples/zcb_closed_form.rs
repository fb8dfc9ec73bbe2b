//! Zero-coupon bond prices from the affine coefficients, with and without
//! stochastic discontinuities.

use rfrjump::affine::ZcbCoefficients;
use rfrjump::model::{JumpDistribution, JumpSchedule, ModelSpec, RateJump};

fn main() -> rfrjump::Result<()> {
    let model = ModelSpec::vasicek(0.075, -0.3, 0.1)?;
    let gauss = JumpDistribution::gaussian(0.09, 0.5)?;
    let cases = [
        ("case1", JumpSchedule::empty()),
        ("case2", JumpSchedule::new(vec![], vec![0.8])?),
        ("case3", JumpSchedule::new(vec![RateJump::new(0.5, gauss)], vec![])?),
        ("case4", JumpSchedule::new(vec![RateJump::new(0.5, gauss)], vec![0.8])?),
    ];
    println!("{:>6} {:>12} {:>12} {:>14} {:>14}", "case", "a(0,1)", "b(0,1)", "P(0,1; x=0)", "P(0,1; x=0.05)");
    for (name, schedule) in cases {
        let zcb = ZcbCoefficients::new(&model, &schedule.timeline(1.0)?)?;
        println!(
            "{name:>6} {:>12.8} {:>12.8} {:>14.10} {:>14.10}",
            zcb.a(0.0),
            zcb.b(0.0),
            zcb.price(0.0, 0.0)?,
            zcb.price(0.0, 0.05)?
        );
    }
    Ok(())
}
