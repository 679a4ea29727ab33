// Boost factors and the radar-style signal exchange that measures them.

use lightcone_doppler::kinematics::{simulate_signal_exchange, BoostParams, Direction};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>6} {:>10} {:>10} {:>12} {:>12}",
        "beta", "kappa(+1)", "xi(+1)", "kappa meas.", "gamma meas."
    );
    for beta in [0.1, 0.5, 0.9] {
        let b = BoostParams::new(beta)?;
        let r = simulate_signal_exchange(&b, 1.0, 1.0)?;
        println!(
            "{beta:>6} {:>10.6} {:>10.6} {:>12.6} {:>12.6}",
            b.kappa(Direction::Right),
            b.xi(Direction::Right),
            r.kappa_measured,
            r.gamma_inferred
        );
        assert!((r.kappa_measured - b.kappa(Direction::Right)).abs() < 1e-12);
        assert!((r.gamma_inferred - b.gamma()).abs() < 1e-12);
    }

    // Reversing the boost undoes it; composing two boosts adds velocities.
    let b = BoostParams::new(0.6)?;
    for s in Direction::BOTH {
        assert!((b.kappa(s) * b.inverse().kappa(s) - 1.0).abs() < 1e-12);
    }
    let twice = b.compose(&b);
    println!("0.6 (+) 0.6 = {:.6}", twice.beta());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
