// Running the invariant suite from a declarative config.

use std::path::Path;

use lightcone_doppler::scenario::{evaluate, ScenarioConfig};

const CONFIG: &str = r#"
boosts = [-0.3, 0.6]

[grid]
step = 0.01
count = 16384

[state]
kind = "gaussian_carrier"
width = 2.0
carrier_k = 20.0
"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = ScenarioConfig::parse(CONFIG, "inline", Path::new("."))?;
    let report = evaluate(&config);
    for c in &report.checks {
        println!(
            "{:<28} {:<5} error {:.2e} (tolerance {:.0e})",
            c.name,
            if c.pass { "pass" } else { "FAIL" },
            c.compared_error().unwrap_or(f64::NAN),
            c.tolerance
        );
    }
    assert!(report.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
