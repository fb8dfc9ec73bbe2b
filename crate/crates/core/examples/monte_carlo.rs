//! Feynman-Kac estimates against the closed form, plain and antithetic.

use rfrjump::affine::ZcbCoefficients;
use rfrjump::mc::{mc_price, PathConfig};
use rfrjump::model::{JumpDistribution, JumpSchedule, ModelSpec, RateJump};

fn main() -> rfrjump::Result<()> {
    let model = ModelSpec::vasicek(0.075, -0.3, 0.1)?;
    let jump = RateJump::new(0.5, JumpDistribution::two_point(0.09, 0.7)?);
    let timeline = JumpSchedule::new(vec![jump], vec![0.8])?.timeline(1.0)?;
    let exact = ZcbCoefficients::new(&model, &timeline)?.price(0.0, 0.05)?;

    for (antithetic, steps) in [(false, 128), (false, 512), (true, 512), (true, 2048)] {
        let cfg = PathConfig::new(100_000, steps, 42, antithetic)?;
        let est = mc_price(&model, &timeline, &|_| 1.0, 0.0, 0.05, &cfg)?;
        println!(
            "antithetic={antithetic:<5} steps/yr={steps:<5} mean={:.8} se={:.2e} z={:+.2}",
            est.mean,
            est.std_error,
            (est.mean - exact) / est.std_error
        );
    }
    println!("closed form {exact:.8}");
    Ok(())
}
