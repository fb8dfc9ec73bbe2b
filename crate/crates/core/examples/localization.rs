//! Certified computational domains and the kernel mass identity behind them.

use rfrjump::localization::{kernel_lemma_value, kernel_mass, localize_domain, LocalizationTolerances};
use rfrjump::model::{JumpDistribution, JumpSchedule, ModelSpec, RateJump};

fn main() -> rfrjump::Result<()> {
    let model = ModelSpec::vasicek(0.075, -0.3, 0.1)?;
    let v = *model.as_vasicek().expect("Vasicek");
    let gauss = RateJump::new(0.5, JumpDistribution::gaussian(0.09, 0.5)?);
    let cases = [
        ("case2", JumpSchedule::new(vec![], vec![0.8])?),
        ("case4", JumpSchedule::new(vec![gauss], vec![0.8])?),
    ];
    for (name, schedule) in cases {
        let timeline = schedule.timeline(1.0)?;
        for tol in [1e-6, 1e-8, 1e-10] {
            let cert = localize_domain(&model, &timeline, -0.5, 1.0, LocalizationTolerances::uniform(tol))?;
            let mass = kernel_mass(&v, 0.0, cert.interval, cert.x_max, cert.a_lo, cert.a_hi)?;
            println!(
                "{name} tol {tol:.0e}: [{:.4}, {:.4}] M={:.4} M_bar={:.4} lemma gap at x_max {:.1e}",
                cert.a_lo,
                cert.a_hi,
                cert.m,
                cert.m_bar,
                (mass - kernel_lemma_value(&v, cert.interval)).abs()
            );
        }
    }
    Ok(())
}
