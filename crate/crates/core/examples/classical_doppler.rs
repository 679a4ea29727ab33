// A classical wave packet seen from a moving frame: Doppler-shifted
// spectrum, conserved box energy, and the uncorrected energy ratio.

use lightcone_doppler::classical::{
    boost_packet, box_energy, spectrum, total_energy, ClassicalWavePacket, FieldConstants, WorldlineBox,
};
use lightcone_doppler::grid::{Axis, Polarization, SampledFunction};
use lightcone_doppler::kinematics::{BoostParams, Direction};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let s = Direction::Right;
    let axis = Axis::centered(0.01, 16384)?;
    let e = SampledFunction::from_fn(axis, s, Polarization::H, |x| {
        Complex64::from_polar((-x * x / 8.0).exp(), 20.0 * x)
    });
    let alice = ClassicalWavePacket::single(e, FieldConstants::default())?;
    let boost = BoostParams::new(0.6)?;
    let bob = boost_packet(&alice, &boost, &axis)?.packet;

    let ka = spectrum(&alice, s)?.centroid.expect("non-zero field");
    let kb = spectrum(&bob, s)?.centroid.expect("non-zero field");
    println!(
        "centroid {ka:.6} -> {kb:.6}, ratio {:.6} (xi = {:.6})",
        kb / ka,
        boost.xi(s)
    );

    let bx = WorldlineBox::new(-15.0, 15.0, 1.0, 1.0, 1.0)?;
    let ea = box_energy(&alice, &bx)?;
    let eb = box_energy(&bob, &bx.boosted(s, &boost))?;
    println!("box energy {ea:.12} vs {eb:.12}");

    let ratio = total_energy(&bob).energy / total_energy(&alice).energy;
    println!("energy ratio without the density correction {ratio:.12}");
    assert!((kb / ka - 0.5).abs() < 1e-3);
    assert!((eb / ea - 1.0).abs() < 1e-6);
    assert!((ratio - 0.5).abs() < 1e-6);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
