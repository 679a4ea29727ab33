// A narrow-band photon that fills one mode for Alice is found in a
// different mode by Bob.

use std::f64::consts::PI;

use lightcone_doppler::blip::{boost_momentum_state, mode_occupation, to_momentum_state, BlipState};
use lightcone_doppler::classical::FieldConstants;
use lightcone_doppler::grid::{Axis, Polarization, SampledFunction};
use lightcone_doppler::kinematics::{BoostParams, Direction};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (s, k_a, w) = (Direction::Right, 10.0, 20.0);
    let axis = Axis::centered(0.05, 16384)?;
    let psi = SampledFunction::from_fn(axis, s, Polarization::H, |x| {
        Complex64::from_polar((PI * w * w).powf(-0.25) * (-x * x / (2.0 * w * w)).exp(), k_a * x)
    });
    let alice = to_momentum_state(&BlipState::single(psi, FieldConstants::default())?)?;
    let boost = BoostParams::new(0.5)?;
    let bob = boost_momentum_state(&alice, &boost, &axis.conjugate())?.state;

    let half = 0.15;
    let k_b = boost.xi(s) * k_a;
    let before = mode_occupation(&alice, k_a - half, k_a + half)?;
    let after = mode_occupation(&bob, k_a - half, k_a + half)?;
    let moved = mode_occupation(&bob, k_b - half, k_b + half)?;
    println!("window at k = {k_a}: {before:.6} before, {after:.2e} after");
    println!("window at k = {k_b:.4}: {moved:.6} after");
    assert!(before >= 0.98 && after <= 1e-3 && moved >= 0.98);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
