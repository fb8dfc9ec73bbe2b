use rfrjump::affine::{CallPricer, CallSpec, ZcbCoefficients};
use rfrjump::fd::{sweep_fd, FdConfig};
use rfrjump::mc::{mc_price, PathConfig};
use rfrjump::model::{AffineCoefficients, JumpDistribution, JumpSchedule, ModelSpec, RateJump, UniformGrid, Vasicek};
use rfrjump::result::{max_mean_abs_error, mean_abs_difference};
use rfrjump::semianalytic::{sweep_semianalytic, GreenKernel};

const REGION: (f64, f64) = (-0.5, 1.0);

fn vasicek() -> Vasicek {
    Vasicek::new(0.075, -0.3, 0.1).unwrap()
}

fn case4(dist: JumpDistribution) -> JumpSchedule {
    JumpSchedule::new(vec![RateJump::new(0.5, dist)], vec![0.8]).unwrap()
}

#[test]
fn three_engines_agree_on_case4_zcb() {
    let v = vasicek();
    let model: ModelSpec = v.into();
    let tl = case4(JumpDistribution::gaussian(0.09, 0.5).unwrap()).timeline(1.0).unwrap();
    let zcb = ZcbCoefficients::new(&model, &tl).unwrap();
    let grid = UniformGrid::covering(-5.1204, 5.6196, 5e-3).unwrap();
    let sa = sweep_semianalytic(&GreenKernel::new(v), &tl, &|_| 1.0, &grid).unwrap();
    let fd = sweep_fd(&model, &tl, &|_| 1.0, &FdConfig::new(0.5, 0.004, grid).unwrap()).unwrap();
    assert!(max_mean_abs_error(&sa, REGION, |t, xs| zcb.prices(t, xs)).unwrap().abs < 1e-12);
    assert!(max_mean_abs_error(&fd, REGION, |t, xs| zcb.prices(t, xs)).unwrap().abs < 3e-6);
    let cfg = PathConfig::new(40_000, 256, 11, false).unwrap();
    let est = mc_price(&model, &tl, &|_| 1.0, 0.0, 0.05, &cfg).unwrap();
    assert!(est.covers(zcb.price(0.0, 0.05).unwrap(), 4.0), "{est:?}");
}

#[test]
fn discrete_jump_call_engines_agree() {
    let v = vasicek();
    let model: ModelSpec = v.into();
    let sched = case4(JumpDistribution::two_point(0.09, 0.7).unwrap());
    let tl = sched.timeline(1.0).unwrap();
    let bond = ZcbCoefficients::new(&model, &sched.timeline(1.5).unwrap()).unwrap();
    let payoff = move |x: f64| (bond.price(1.0, x).unwrap() - 0.5).max(0.0);
    let grid = UniformGrid::covering(-1.6, 2.065, 2.5e-3).unwrap();
    let sa = sweep_semianalytic(&GreenKernel::new(v), &tl, &payoff, &grid).unwrap();
    let fd = sweep_fd(&model, &tl, &payoff, &FdConfig::new(0.5, 0.004, grid).unwrap()).unwrap();
    assert!(mean_abs_difference(&fd, &sa, REGION).unwrap().abs < 1e-6);
}

#[test]
fn gaussian_call_closed_form_matches_semianalytic() {
    let v = vasicek();
    let sched = case4(JumpDistribution::gaussian(0.09, 0.5).unwrap());
    let tl = sched.timeline(1.0).unwrap();
    let pricer = CallPricer::new(&v, &sched, CallSpec::new(0.5, 1.0, 1.5).unwrap()).unwrap();
    let bond = pricer.bond().clone();
    let payoff = move |x: f64| (bond.price(1.0, x).unwrap() - 0.5).max(0.0);
    let grid = UniformGrid::covering(-5.1204, 5.6196, 2.5e-3).unwrap();
    let sa = sweep_semianalytic(&GreenKernel::new(v), &tl, &payoff, &grid).unwrap();
    let err = max_mean_abs_error(&sa, REGION, |t, xs| pricer.prices(t, xs)).unwrap();
    assert!(err.abs < 1e-9, "{err:?}");
}

#[test]
fn time_dependent_model_fd_matches_riccati() {
    let logistic = |base: f64, step: f64| std::sync::Arc::new(move |t: f64| base + step / (1.0 + (-20.0 * (t - 0.5)).exp()));
    let model = ModelSpec::Affine(AffineCoefficients::hull_white(
        logistic(0.05, 0.05),
        logistic(-0.3, 0.0),
        logistic(0.1, 0.05),
    ));
    let sched = JumpSchedule::new(vec![], vec![0.8]).unwrap();
    let tl = sched.timeline(1.0).unwrap();
    let zcb = ZcbCoefficients::new(&model, &tl).unwrap();
    let grid = UniformGrid::covering(-2.0, 2.5, 5e-3).unwrap();
    let fd = sweep_fd(&model, &tl, &|_| 1.0, &FdConfig::new(0.5, 0.004, grid).unwrap()).unwrap();
    let err = max_mean_abs_error(&fd, REGION, |t, xs| zcb.prices(t, xs)).unwrap();
    assert!(err.abs < 5e-6, "{err:?}");
}
