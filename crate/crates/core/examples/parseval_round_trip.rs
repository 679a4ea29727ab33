// Position/wavenumber transforms for both propagation directions.

use lightcone_doppler::grid::{relative_l2, Axis, Polarization, SampledFunction};
use lightcone_doppler::kinematics::Direction;
use lightcone_doppler::spectral::{parseval_check, to_momentum, to_position};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let axis = Axis::centered(0.02, 4096)?;
    for s in Direction::BOTH {
        let f = SampledFunction::from_fn(axis, s, Polarization::H, |x| {
            Complex64::from_polar((-x * x / 2.0).exp(), s.s() * 12.0 * x)
        });
        let spectrum = to_momentum(&f)?;
        let (k_peak, _) = spectrum
            .axis()
            .points()
            .zip(spectrum.values())
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("non-empty");
        let report = parseval_check(&f)?;
        let round_trip = relative_l2(&to_position(&spectrum)?, &f)?;
        println!(
            "s = {s}: peak at k = {k_peak:.3}, Parseval error {:.1e}, round trip {round_trip:.1e}",
            report.rel_error
        );
        assert!(report.rel_error < 1e-10 && round_trip < 1e-10);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
