//! Direction-signed Fourier transforms between light-cone position and
//! wavenumber representations.
//!
//! Forward: `F(k) = (1/sqrt(2 pi)) * step * sum_j exp(-i s k chi_j) f(chi_j)`
//! Inverse: `f(chi) = (1/sqrt(2 pi)) * dk * sum_m exp(+i s k_m chi) F(k_m)`
//!
//! The sign of the exponent follows the direction `s` carried by the
//! function. The wavenumber axis is the conjugate of the position grid and
//! always contains negative wavenumbers.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Axis, Representation, SampledFunction};
use crate::kinematics::Direction;

/// The transform convention used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourierConvention;

impl FourierConvention {
    /// Forward kernel is `exp(-i s k chi)`, inverse `exp(+i s k chi)`.
    pub const SIGN_WITH_S: bool = true;

    /// Symmetric normalisation applied to both directions.
    pub fn normalization() -> f64 {
        1.0 / (2.0 * PI).sqrt()
    }
}

fn expect(f: &SampledFunction, rep: Representation) -> Result<()> {
    if f.representation() != rep {
        return Err(Error::WrongRepresentation {
            expected: rep.name(),
            found: f.representation().name(),
        });
    }
    Ok(())
}

// chi_j = chi0 + j h and k_m = -(n/2) dk + m dk give
// exp(-i s k_m chi_j) = exp(-i s k_m chi0) (-1)^j exp(-2 pi i s m j / n),
// so each direction is a plain FFT between two phase ramps.
fn fft_signed(buf: &mut [Complex64], s: Direction, forward: bool) {
    let mut planner = FftPlanner::new();
    let plan = if (s == Direction::Right) == forward {
        planner.plan_fft_forward(buf.len())
    } else {
        planner.plan_fft_inverse(buf.len())
    };
    plan.process(buf);
}

fn alternate(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Position to wavenumber representation.
pub fn to_momentum(f: &SampledFunction) -> Result<SampledFunction> {
    expect(f, Representation::PositionChi)?;
    let axis = *f.axis();
    let k_axis = axis.conjugate();
    let s = f.s();
    let chi0 = axis.start();

    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| v * alternate(j))
        .collect();
    fft_signed(&mut buf, s, true);

    let pref = axis.step() * FourierConvention::normalization();
    let values = buf
        .into_iter()
        .zip(k_axis.points())
        .map(|(x, k)| x * Complex64::from_polar(pref, -s.s() * k * chi0))
        .collect();
    Ok(SampledFunction::new(k_axis, values, Representation::MomentumK, s, f.lambda())?.with_origin(chi0))
}

/// Wavenumber to position representation, onto the grid starting at the
/// function's recorded origin.
pub fn to_position(f: &SampledFunction) -> Result<SampledFunction> {
    expect(f, Representation::MomentumK)?;
    let k_axis = *f.axis();
    let n = k_axis.count();
    let step = 2.0 * PI / k_axis.period();
    let axis = Axis::new(f.origin(), step, n)?;
    let s = f.s();
    let chi0 = axis.start();

    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .zip(k_axis.points())
        .map(|(v, k)| v * Complex64::from_polar(1.0, s.s() * k * chi0))
        .collect();
    fft_signed(&mut buf, s, false);

    let pref = k_axis.step() * FourierConvention::normalization();
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(j, x)| x * (pref * alternate(j)))
        .collect();
    SampledFunction::new(axis, values, Representation::PositionChi, s, f.lambda())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalReport {
    pub position_norm: f64,
    pub momentum_norm: f64,
    /// Relative error of the squared norms, or the absolute error when the
    /// function is zero (see `absolute`).
    pub rel_error: f64,
    /// Set when the input was zero and `rel_error` holds an absolute error.
    pub absolute: bool,
}

pub fn parseval_check(f: &SampledFunction) -> Result<ParsevalReport> {
    let momentum = to_momentum(f)?;
    let p = f.norm_sqr();
    let m = momentum.norm_sqr();
    let (rel_error, absolute) = if p > 0.0 {
        ((p - m).abs() / p, false)
    } else {
        ((p - m).abs(), true)
    };
    Ok(ParsevalReport {
        position_norm: p.sqrt(),
        momentum_norm: m.sqrt(),
        rel_error,
        absolute,
    })
}
