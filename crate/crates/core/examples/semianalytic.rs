//! Green's-function sweep against the closed form, for a Gaussian and a
//! two-point rate jump.

use rfrjump::affine::ZcbCoefficients;
use rfrjump::model::{JumpDistribution, JumpSchedule, RateJump, UniformGrid, Vasicek};
use rfrjump::result::max_mean_abs_error;
use rfrjump::semianalytic::{sweep_semianalytic, GreenKernel};

fn main() -> rfrjump::Result<()> {
    let v = Vasicek::new(0.075, -0.3, 0.1)?;
    let kernel = GreenKernel::new(v);
    let grid = UniformGrid::covering(-5.1204, 5.6196, 5e-3)?;
    for dist in [JumpDistribution::gaussian(0.09, 0.5)?, JumpDistribution::two_point(0.09, 0.7)?] {
        let schedule = JumpSchedule::new(vec![RateJump::new(0.5, dist)], vec![0.8])?;
        let timeline = schedule.timeline(1.0)?;
        let exact = ZcbCoefficients::new(&v.into(), &timeline)?;
        let result = sweep_semianalytic(&kernel, &timeline, &|_| 1.0, &grid)?;
        let err = max_mean_abs_error(&result, (-0.5, 1.0), |t, xs| exact.prices(t, xs))?;
        println!(
            "{dist:?}: P(0,1; 0.05) = {:.12}, mean abs error {:.2e} ({} ms)",
            result.value_at(0.05).unwrap_or(f64::NAN),
            err.abs,
            result.meta.wall_time.as_millis()
        );
    }
    Ok(())
}
