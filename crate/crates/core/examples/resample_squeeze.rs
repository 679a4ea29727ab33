// Band-limited resampling of a sampled profile onto a scaled coordinate.

use lightcone_doppler::grid::{resample, Axis, Interpolation, Polarization, SampledFunction};
use lightcone_doppler::kinematics::Direction;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let axis = Axis::centered(0.05, 1024)?;
    let gaussian = |w: f64| move |x: f64| Complex64::new((-x * x / (2.0 * w * w)).exp(), 0.0);
    let f = SampledFunction::from_fn(axis, Direction::Right, Polarization::H, gaussian(1.0));

    // g(x) = 0.5 f(0.5 x) is the same pulse stretched to width 2.
    let out = resample(&f, 0.5, 0.5, &axis, Interpolation::BandLimited)?;
    let exact = SampledFunction::from_fn(axis, Direction::Right, Polarization::H, |x| {
        gaussian(2.0)(x) * 0.5
    });
    let err = lightcone_doppler::grid::relative_l2(&out.function, &exact)?;
    println!(
        "stretch by 2: relative L2 error {err:.2e}, leakage {:.1e}",
        out.diagnostics.leakage
    );

    // Squeezing by 40 pushes the spectrum past the grid's Nyquist limit.
    let squeezed = resample(&f, 40.0, 1.0, &axis, Interpolation::BandLimited)?;
    println!(
        "squeeze by 40: leakage {:.3}, warning {}",
        squeezed.diagnostics.leakage, squeezed.diagnostics.band_limit_warning
    );
    assert!(err < 1e-10);
    assert!(squeezed.diagnostics.band_limit_warning);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
