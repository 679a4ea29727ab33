// A one-photon blip state under boosts: photon number is unchanged, and
// boosting in position space agrees with boosting in wavenumber space.

use std::f64::consts::PI;

use lightcone_doppler::blip::{
    boost_blip, boost_momentum_state, photon_number, to_momentum_state, BlipState,
};
use lightcone_doppler::classical::FieldConstants;
use lightcone_doppler::grid::{l2_distance, Axis, Polarization, SampledFunction};
use lightcone_doppler::kinematics::{BoostParams, Direction};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let axis = Axis::centered(0.02, 8192)?;
    let w = 2.0;
    for s in Direction::BOTH {
        let psi = SampledFunction::from_fn(axis, s, Polarization::H, |x| {
            Complex64::from_polar(
                (PI * w * w).powf(-0.25) * (-x * x / (2.0 * w * w)).exp(),
                s.s() * 8.0 * x,
            )
        });
        let state = BlipState::single(psi, FieldConstants::default())?;
        for beta in [-0.6, 0.3, 0.9] {
            let b = BoostParams::new(beta)?;
            let boosted = boost_blip(&state, &b, &axis)?.state;
            let lhs = to_momentum_state(&boosted)?;
            let rhs = boost_momentum_state(&to_momentum_state(&state)?, &b, &axis.conjugate())?.state;
            let d = l2_distance(lhs.channel(s, Polarization::H)?, rhs.channel(s, Polarization::H)?)?;
            println!(
                "s = {s}, beta = {beta:>4}: photons {:.10} -> {:.10}, path difference {d:.1e}",
                photon_number(&state),
                photon_number(&boosted)
            );
            assert!((photon_number(&boosted) - 1.0).abs() < 1e-6 && d < 1e-6);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
