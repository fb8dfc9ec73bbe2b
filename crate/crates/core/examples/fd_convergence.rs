//! Crank-Nicolson ladder for the bond with a roll-over and a rate jump.

use rfrjump::affine::ZcbCoefficients;
use rfrjump::fd::{sweep_fd, FdConfig};
use rfrjump::math::loglog_slope;
use rfrjump::model::{JumpDistribution, JumpSchedule, ModelSpec, RateJump, UniformGrid};
use rfrjump::result::max_mean_abs_error;

fn main() -> rfrjump::Result<()> {
    let model = ModelSpec::vasicek(0.075, -0.3, 0.1)?;
    let jump = RateJump::new(0.5, JumpDistribution::gaussian(0.09, 0.5)?);
    let timeline = JumpSchedule::new(vec![jump], vec![0.8])?.timeline(1.0)?;
    let exact = ZcbCoefficients::new(&model, &timeline)?;

    let ladder = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let mut errors = Vec::new();
    println!("{:>9} {:>12} {:>12}", "dx", "abs error", "rel error");
    for dx in ladder {
        let grid = UniformGrid::covering(-5.1204, 5.6196, dx)?;
        let result = sweep_fd(&model, &timeline, &|_| 1.0, &FdConfig::new(0.5, 0.004, grid)?)?;
        let err = max_mean_abs_error(&result, (-0.5, 1.0), |t, xs| exact.prices(t, xs))?;
        println!("{dx:>9.2e} {:>12.3e} {:>12.3e}", err.abs, err.rel);
        errors.push(err.abs);
    }
    println!("log-log slope over the first three rungs: {:.2}", loglog_slope(&ladder[..3], &errors[..3]));
    Ok(())
}
