//! Loads a scenario file, runs every engine it lists and prints the errors.
//!
//! cargo run --release --example scenario_runner -- configs/case4_call.toml

use std::path::PathBuf;

use rfrjump::cli::Scenario;

fn main() -> rfrjump::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/case4_zcb.toml"));
    let scenario = Scenario::load(&path)?;
    let report = scenario.run()?;
    println!(
        "{}: certified [{:.4}, {:.4}], grid [{:.4}, {:.4}] with {} nodes",
        scenario.config.name,
        report.certificate.a_lo,
        report.certificate.a_hi,
        report.grid.lo,
        report.grid.hi(),
        report.grid.len()
    );
    for x in [-0.25, 0.0, 0.05, 0.5] {
        let row: Vec<String> = report
            .results
            .iter()
            .map(|r| format!("{}={:.10}", r.method.tag(), r.value_at(x).unwrap_or(f64::NAN)))
            .collect();
        println!("  x={x:+.2} {}", row.join(" "));
    }
    for e in &report.errors {
        println!("  {}: abs {:.3e} rel {:.3e}", e.label(), e.summary.abs, e.summary.rel);
    }
    for p in &report.mc {
        println!("  mc x={:+.2}: {:.8} +- {:.1e}", p.x0, p.estimate.mean, p.estimate.std_error);
    }
    Ok(())
}
