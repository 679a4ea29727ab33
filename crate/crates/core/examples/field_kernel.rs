// The field matrix element of a blip state, computed with the spectral
// multiplier and checked against direct finite-part quadrature.

use std::f64::consts::PI;

use lightcone_doppler::blip::{field_matrix_element, BlipState, RegularisationKernel};
use lightcone_doppler::classical::FieldConstants;
use lightcone_doppler::finite_part::FinitePartQuadrature;
use lightcone_doppler::grid::{Axis, Polarization, SampledFunction};
use lightcone_doppler::kinematics::Direction;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (s, w, k0) = (Direction::Right, 1.0, 5.0);
    let axis = Axis::centered(0.05, 2048)?;
    let constants = FieldConstants::default();
    let profile = move |x: f64| {
        Complex64::from_polar((PI * w * w).powf(-0.25) * (-x * x / (2.0 * w * w)).exp(), k0 * x)
    };
    let state = BlipState::single(
        SampledFunction::from_fn(axis, s, Polarization::H, profile),
        constants,
    )?;

    let kernel = RegularisationKernel::new(axis, &constants)?;
    let m = kernel.multiplier();
    let k = kernel.k_axis();
    let (i1, i4) = (k.count() / 2 + 10, k.count() / 2 + 40);
    println!("m(4k) / m(k) = {:.12}", m[i4].re / m[i1].re);

    let field = field_matrix_element(&state, s)?;
    let quad = FinitePartQuadrature::new(150.0, 1500, 8);
    let scale = constants.c * kernel.prefactor();
    println!("{:>6} {:>24} {:>24}", "chi", "spectral", "quadrature");
    for i in (axis.count() / 2 - 40..=axis.count() / 2 + 40).step_by(20) {
        let x = axis.point(i);
        let oracle = quad.apply(&profile, x) * scale;
        println!("{x:>6.2} {:>24.6} {:>24.6}", field.values()[i], oracle);
        assert!((field.values()[i] - oracle).norm() < 1e-3 * field.max_abs());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
