//! Closed-form call on a zero-coupon bond under Gaussian rate jumps.

use rfrjump::affine::{CallPricer, CallSpec};
use rfrjump::model::{JumpDistribution, JumpSchedule, RateJump, Vasicek};

fn main() -> rfrjump::Result<()> {
    let v = Vasicek::new(0.075, -0.3, 0.1)?;
    let jump = RateJump::new(0.5, JumpDistribution::gaussian(0.09, 0.5)?);
    let schedule = JumpSchedule::new(vec![jump], vec![0.8])?;
    let pricer = CallPricer::new(&v, &schedule, CallSpec::new(0.5, 1.0, 1.5)?)?;

    println!("sigma_c(0) = {:.6}, sigma_c(0.6) = {:.6}", pricer.sigma_c(0.0)?, pricer.sigma_c(0.6)?);
    println!("{:>6} {:>14} {:>14}", "x", "call", "bond P(0,1.5)");
    for x in [-0.5, -0.25, 0.0, 0.05, 0.25, 0.5, 1.0] {
        let q = pricer.price(0.0, x)?;
        println!("{x:>6.2} {:>14.10} {:>14.10}", q.price, pricer.bond().price(0.0, x)?);
    }
    Ok(())
}
