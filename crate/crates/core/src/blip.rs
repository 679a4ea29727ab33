//! Single-excitation blip states.
//!
//! A one-photon state is `sum_{s,lambda} int dchi psi_{s lambda}(chi) a^dagger_{s lambda}(chi) |0>`,
//! so it is fully described by one complex amplitude per channel. The
//! squared norm summed over channels is the photon-number expectation.
//! Distinct channels never mix.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::classical::FieldConstants;
use crate::error::{Error, Result};
use crate::finite_part;
use crate::grid::{
    self, fmt17, Axis, Interpolation, Polarization, Representation, ResampleDiagnostics, SampledFunction,
};
use crate::kinematics::{BoostParams, Direction};
use crate::spectral;

fn check_channels(channels: &[SampledFunction], rep: Representation) -> Result<()> {
    for (i, ch) in channels.iter().enumerate() {
        if ch.representation() != rep {
            return Err(Error::WrongRepresentation {
                expected: rep.name(),
                found: ch.representation().name(),
            });
        }
        if channels[..i]
            .iter()
            .any(|o| o.s() == ch.s() && o.lambda() == ch.lambda())
        {
            return Err(Error::DuplicateChannel {
                s: ch.s().sign(),
                lambda: ch.lambda().name(),
            });
        }
    }
    Ok(())
}

fn find(channels: &[SampledFunction], s: Direction, lambda: Polarization) -> Result<&SampledFunction> {
    channels
        .iter()
        .find(|c| c.s() == s && c.lambda() == lambda)
        .ok_or(Error::MissingChannel {
            s: s.sign(),
            lambda: lambda.name(),
        })
}

/// Position-space amplitudes of a single-excitation state.
#[derive(Debug, Clone)]
pub struct BlipState {
    channels: Vec<SampledFunction>,
    constants: FieldConstants,
}

impl BlipState {
    pub fn new(channels: Vec<SampledFunction>, constants: FieldConstants) -> Result<Self> {
        constants.validate()?;
        check_channels(&channels, Representation::PositionChi)?;
        Ok(Self { channels, constants })
    }

    pub fn single(psi: SampledFunction, constants: FieldConstants) -> Result<Self> {
        Self::new(vec![psi], constants)
    }

    /// A single blip at grid point `index`, amplitude `1/sqrt(step)` so that
    /// it carries exactly one photon.
    pub fn localized(
        axis: Axis,
        index: usize,
        s: Direction,
        lambda: Polarization,
        constants: FieldConstants,
    ) -> Result<Self> {
        if index >= axis.count() {
            return Err(Error::InvalidParameter(format!(
                "blip index {index} outside grid of {} points",
                axis.count()
            )));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); axis.count()];
        values[index] = Complex64::new(1.0 / axis.step().sqrt(), 0.0);
        let psi = SampledFunction::new(axis, values, Representation::PositionChi, s, lambda)?;
        Self::single(psi, constants)
    }

    pub fn channels(&self) -> &[SampledFunction] {
        &self.channels
    }

    pub fn channel(&self, s: Direction, lambda: Polarization) -> Result<&SampledFunction> {
        find(&self.channels, s, lambda)
    }

    pub fn constants(&self) -> &FieldConstants {
        &self.constants
    }
}

/// Wavenumber-space amplitudes of a single-excitation state.
#[derive(Debug, Clone)]
pub struct MomentumBlipState {
    channels: Vec<SampledFunction>,
    constants: FieldConstants,
}

impl MomentumBlipState {
    pub fn new(channels: Vec<SampledFunction>, constants: FieldConstants) -> Result<Self> {
        constants.validate()?;
        check_channels(&channels, Representation::MomentumK)?;
        Ok(Self { channels, constants })
    }

    pub fn channels(&self) -> &[SampledFunction] {
        &self.channels
    }

    pub fn channel(&self, s: Direction, lambda: Polarization) -> Result<&SampledFunction> {
        find(&self.channels, s, lambda)
    }

    pub fn constants(&self) -> &FieldConstants {
        &self.constants
    }

    pub fn norm_sqr(&self) -> f64 {
        self.channels.iter().map(SampledFunction::norm_sqr).sum()
    }
}

/// A blip state viewed at time `t`. Amplitudes are looked up along
/// world-lines; the state itself does not change.
#[derive(Debug, Clone, Copy)]
pub struct PropagatedBlip<'a> {
    state: &'a BlipState,
    t: f64,
}

impl PropagatedBlip<'_> {
    pub fn time(&self) -> f64 {
        self.t
    }

    /// `psi_{s lambda}(x - s c t)`.
    pub fn amplitude(&self, x: f64, s: Direction, lambda: Polarization) -> Result<Complex64> {
        let psi = self.state.channel(s, lambda)?;
        psi.interpolate(x - s.s() * self.state.constants.c * self.t)
    }

    pub fn photon_number(&self) -> f64 {
        photon_number(self.state)
    }
}

pub fn propagate_blip(state: &BlipState, t: f64) -> PropagatedBlip<'_> {
    PropagatedBlip { state, t }
}

/// `sum over channels of int |psi|^2 dchi`.
pub fn photon_number(state: &BlipState) -> f64 {
    state.channels.iter().map(SampledFunction::norm_sqr).sum()
}

#[derive(Debug, Clone)]
pub struct BoostedBlip {
    pub state: BlipState,
    pub diagnostics: ResampleDiagnostics,
}

/// Bob's amplitudes `psi_B(chi) = sqrt(xi) psi_A(xi chi)` with
/// `xi = gamma (1 - s beta)` per channel.
pub fn boost_blip(state: &BlipState, boost: &BoostParams, target: &Axis) -> Result<BoostedBlip> {
    let mut diagnostics = ResampleDiagnostics::clean();
    let mut channels = Vec::with_capacity(state.channels.len());
    for ch in &state.channels {
        let xi = boost.xi(ch.s());
        let r = grid::resample(ch, xi, xi.sqrt(), target, Interpolation::BandLimited)?;
        diagnostics = diagnostics.merge(r.diagnostics);
        channels.push(r.function);
    }
    Ok(BoostedBlip {
        state: BlipState::new(channels, state.constants)?,
        diagnostics,
    })
}

pub fn to_momentum_state(state: &BlipState) -> Result<MomentumBlipState> {
    let channels = state
        .channels
        .iter()
        .map(spectral::to_momentum)
        .collect::<Result<Vec<_>>>()?;
    MomentumBlipState::new(channels, state.constants)
}

pub fn to_position_state(mstate: &MomentumBlipState) -> Result<BlipState> {
    let channels = mstate
        .channels
        .iter()
        .map(spectral::to_position)
        .collect::<Result<Vec<_>>>()?;
    BlipState::new(channels, mstate.constants)
}

#[derive(Debug, Clone)]
pub struct BoostedMomentumBlip {
    pub state: MomentumBlipState,
    pub diagnostics: ResampleDiagnostics,
}

/// Bob's monochromatic amplitudes `psi_B(k) = sqrt(kappa) psi_A(kappa k)`
/// with `kappa = gamma (1 + s beta)`, on the wavenumber axis `target`.
pub fn boost_momentum_state(
    mstate: &MomentumBlipState,
    boost: &BoostParams,
    target: &Axis,
) -> Result<BoostedMomentumBlip> {
    let mut diagnostics = ResampleDiagnostics::clean();
    let mut channels = Vec::with_capacity(mstate.channels.len());
    for ch in &mstate.channels {
        let kappa = boost.kappa(ch.s());
        let r = grid::resample(ch, kappa, kappa.sqrt(), target, Interpolation::BandLimited)?;
        diagnostics = diagnostics.merge(r.diagnostics);
        channels.push(r.function);
    }
    Ok(BoostedMomentumBlip {
        state: MomentumBlipState::new(channels, mstate.constants)?,
        diagnostics,
    })
}

/// Occupation of the wavenumber window `[lo, hi]`, summed over channels.
pub fn mode_occupation(mstate: &MomentumBlipState, lo: f64, hi: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let mut total = 0.0;
    for ch in &mstate.channels {
        let axis = ch.axis();
        for k in [lo, hi] {
            if !axis.contains(k) {
                return Err(Error::OutOfGrid {
                    coordinate: k,
                    start: axis.start(),
                    end: axis.end(),
                });
            }
        }
        let mut hits = 0usize;
        let mut sum = 0.0;
        for (k, v) in axis.points().zip(ch.values()) {
            if k >= lo && k <= hi {
                hits += 1;
                sum += v.norm_sqr();
            }
        }
        if hits == 0 {
            return Err(Error::EmptyWindow { lo, hi });
        }
        total += sum * axis.step();
    }
    Ok(total)
}

/// The regularisation kernel `R(u) = -sqrt(hbar / (4 pi eps c A)) |u|^{-3/2}`
/// tabulated as a Fourier multiplier on a grid's wavenumber axis.
///
/// Convolution with `c R` becomes multiplication by
/// `m(k) = c * prefactor * (-2 sqrt(2 pi)) * sqrt|k|`, which is real,
/// positive and even, with `m(0) = 0`.
#[derive(Debug, Clone)]
pub struct RegularisationKernel {
    prefactor: f64,
    position_axis: Axis,
    k_axis: Axis,
    multiplier: Vec<Complex64>,
}

impl RegularisationKernel {
    pub fn new(position_axis: Axis, constants: &FieldConstants) -> Result<Self> {
        constants.validate()?;
        let prefactor = Self::prefactor_for(constants);
        let k_axis = position_axis.conjugate();
        let scale = constants.c * prefactor;
        let multiplier = k_axis
            .points()
            .map(|k| Complex64::new(scale * finite_part::closed_form_coefficient(k), 0.0))
            .collect();
        Ok(Self {
            prefactor,
            position_axis,
            k_axis,
            multiplier,
        })
    }

    /// `-sqrt(hbar / (4 pi eps c A))`.
    pub fn prefactor_for(constants: &FieldConstants) -> f64 {
        -(constants.hbar / (4.0 * PI * constants.epsilon * constants.c * constants.area)).sqrt()
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn k_axis(&self) -> &Axis {
        &self.k_axis
    }

    pub fn position_axis(&self) -> &Axis {
        &self.position_axis
    }

    pub fn multiplier(&self) -> &[Complex64] {
        &self.multiplier
    }

    /// `R(u)` in position space, for `u != 0`.
    pub fn kernel(&self, u: f64) -> f64 {
        self.prefactor * u.abs().powf(-1.5)
    }

    /// `int c R(chi - chi') psi(chi') dchi'` on the kernel's grid.
    pub fn apply(&self, psi: &SampledFunction) -> Result<SampledFunction> {
        if psi.representation() != Representation::PositionChi {
            return Err(Error::WrongRepresentation {
                expected: Representation::PositionChi.name(),
                found: psi.representation().name(),
            });
        }
        let a = psi.axis();
        let b = &self.position_axis;
        let tol = 1e-12 * b.step();
        if a.count() != b.count() || (a.step() - b.step()).abs() > tol {
            return Err(Error::Incompatible(format!(
                "kernel built for {} but state lives on {}",
                b, a
            )));
        }
        let spectrum = spectral::to_momentum(psi)?;
        let shaped = spectrum.with_values(
            spectrum
                .values()
                .iter()
                .zip(&self.multiplier)
                .map(|(v, m)| v * m)
                .collect(),
        )?;
        spectral::to_position(&shaped)
    }

    /// Writes `k,m_re,m_im` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["k", "m_re", "m_im"])?;
        for (k, m) in self.k_axis.points().zip(&self.multiplier) {
            w.write_record([fmt17(k), fmt17(m.re), fmt17(m.im)])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Vacuum-to-one-photon matrix element of the electric field observable,
/// from the `(s, H)` channel.
pub fn field_matrix_element(state: &BlipState, s: Direction) -> Result<SampledFunction> {
    let psi = state.channel(s, Polarization::H)?;
    let kernel = RegularisationKernel::new(*psi.axis(), &state.constants)?;
    kernel.apply(psi)
}

/// Same as [`field_matrix_element`] with a prebuilt kernel.
pub fn field_matrix_element_with(
    kernel: &RegularisationKernel,
    state: &BlipState,
    s: Direction,
) -> Result<SampledFunction> {
    kernel.apply(state.channel(s, Polarization::H)?)
}

/// Magnetic counterpart `s E / c` of a field matrix element.
pub fn magnetic_matrix_element(state: &BlipState, s: Direction) -> Result<SampledFunction> {
    let e = field_matrix_element(state, s)?;
    Ok(e.scaled(s.s() / state.constants.c))
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelConsistencyReport {
    /// Worst relative L2 discrepancy over the H channels.
    pub discrepancy: f64,
    pub per_channel: Vec<(i8, f64)>,
    pub diagnostics: ResampleDiagnostics,
}

/// Compares Bob's field matrix element built from the boosted blip state
/// with Alice's field matrix element carried over by the classical
/// amplitude law `E_B(chi) = xi E_A(xi chi)`.
pub fn kernel_consistency_check(
    state: &BlipState,
    boost: &BoostParams,
    target: &Axis,
) -> Result<KernelConsistencyReport> {
    let boosted = boost_blip(state, boost, target)?;
    let mut diagnostics = boosted.diagnostics;
    let mut per_channel = Vec::new();
    for ch in state.channels.iter().filter(|c| c.lambda() == Polarization::H) {
        let s = ch.s();
        let xi = boost.xi(s);
        let lhs = field_matrix_element(&boosted.state, s)?;
        let field_a = field_matrix_element(state, s)?;
        let rhs = grid::resample(&field_a, xi, xi, target, Interpolation::BandLimited)?;
        diagnostics = diagnostics.merge(rhs.diagnostics);
        per_channel.push((s.sign(), grid::relative_l2(&lhs, &rhs.function)?));
    }
    if per_channel.is_empty() {
        return Err(Error::MissingChannel {
            s: 1,
            lambda: Polarization::H.name(),
        });
    }
    let discrepancy = per_channel.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    Ok(KernelConsistencyReport {
        discrepancy,
        per_channel,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_part::FinitePartQuadrature;
    use crate::grid::{inner_product, l2_distance};

    const R: Direction = Direction::Right;
    const L: Direction = Direction::Left;
    const H: Polarization = Polarization::H;
    const V: Polarization = Polarization::V;

    fn unit_profile(w: f64, c: f64, k0: f64, s: Direction) -> impl Fn(f64) -> Complex64 {
        let norm = (PI * w * w).powf(-0.25);
        move |x: f64| Complex64::from_polar(norm * (-(x - c) * (x - c) / (2.0 * w * w)).exp(), s.s() * k0 * x)
    }

    fn state(axis: Axis, s: Direction, lambda: Polarization, w: f64, k0: f64) -> BlipState {
        let psi = SampledFunction::from_fn(axis, s, lambda, unit_profile(w, 0.0, k0, s));
        BlipState::single(psi, FieldConstants::default()).unwrap()
    }

    #[test]
    fn rejects_bad_channel_sets() {
        let a = Axis::centered(0.1, 64).unwrap();
        let psi = SampledFunction::from_fn(a, R, H, unit_profile(1.0, 0.0, 0.0, R));
        assert!(BlipState::new(vec![psi.clone(), psi.clone()], FieldConstants::default()).is_err());
        let m = spectral::to_momentum(&psi).unwrap();
        assert!(BlipState::single(m.clone(), FieldConstants::default()).is_err());
        assert!(MomentumBlipState::new(vec![psi], FieldConstants::default()).is_err());
        assert!(MomentumBlipState::new(vec![m], FieldConstants::default()).is_ok());
    }

    #[test]
    fn propagation_relabels() {
        let a = Axis::centered(0.05, 1024).unwrap();
        let st = BlipState::single(
            SampledFunction::from_fn(a, L, V, unit_profile(1.0, 2.0, 0.0, L)),
            FieldConstants::default(),
        )
        .unwrap();
        let p0 = propagate_blip(&st, 0.0);
        let x = a.point(411);
        assert_eq!(
            p0.amplitude(x, L, V).unwrap(),
            st.channel(L, V).unwrap().values()[411]
        );
        let peak = (PI).powf(-0.25);
        for t in [0.3, 1.0, 4.5] {
            let p = propagate_blip(&st, t);
            assert!((p.amplitude(2.0 - t, L, V).unwrap().re - peak).abs() < 1e-10);
            assert_eq!(p.photon_number(), photon_number(&st));
        }
        assert!(propagate_blip(&st, 100.0).amplitude(0.0, L, V).is_err());
        assert!(p0.amplitude(0.0, R, V).is_err());
    }

    #[test]
    fn photon_number_examples() {
        let a = Axis::centered(0.05, 1024).unwrap();
        let vac = BlipState::single(
            SampledFunction::zeros(a, Representation::PositionChi, R, H),
            FieldConstants::default(),
        )
        .unwrap();
        assert_eq!(photon_number(&vac), 0.0);
        let st = state(a, R, H, 1.0, 0.0);
        assert!((photon_number(&st) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn boost_blip_examples() {
        let a = Axis::centered(0.02, 8192).unwrap();
        let st = state(a, R, H, 1.0, 0.0);
        let id = boost_blip(&st, &BoostParams::identity(), &a).unwrap();
        assert!(l2_distance(id.state.channel(R, H).unwrap(), st.channel(R, H).unwrap()).unwrap() < 1e-10);

        let b = BoostParams::new(0.6).unwrap();
        let out = boost_blip(&st, &b, &a).unwrap();
        let expected = unit_profile(2.0, 0.0, 0.0, R);
        for (x, v) in a.points().zip(out.state.channel(R, H).unwrap().values()) {
            assert!((v - expected(x)).norm() < 1e-8, "x={x}");
        }
        let peak = out.state.channel(R, H).unwrap().max_abs();
        assert!((peak - 0.5f64.sqrt() * PI.powf(-0.25)).abs() < 1e-8);
        assert!((photon_number(&out.state) - 1.0).abs() < 1e-8);

        let back = boost_blip(&out.state, &b.inverse(), &a).unwrap();
        assert!(l2_distance(back.state.channel(R, H).unwrap(), st.channel(R, H).unwrap()).unwrap() < 1e-6);
    }

    #[test]
    fn momentum_state_examples() {
        let a = Axis::centered(0.05, 1024).unwrap();
        let st = state(a, L, V, 1.3, 0.0);
        let m = to_momentum_state(&st).unwrap();
        let amp = (1.3f64 * 1.3 / PI).powf(0.25);
        let ch = m.channel(L, V).unwrap();
        for (k, v) in ch.axis().points().zip(ch.values()) {
            assert!((v.re - amp * (-k * k * 1.69 / 2.0).exp()).abs() < 1e-8);
        }
        let back = to_position_state(&m).unwrap();
        assert!(l2_distance(back.channel(L, V).unwrap(), st.channel(L, V).unwrap()).unwrap() < 1e-10);
        let zero = BlipState::single(
            SampledFunction::zeros(a, Representation::PositionChi, R, H),
            FieldConstants::default(),
        )
        .unwrap();
        assert_eq!(to_momentum_state(&zero).unwrap().norm_sqr(), 0.0);
    }

    #[test]
    fn momentum_boost_moves_peak_and_commutes() {
        let a = Axis::centered(0.02, 8192).unwrap();
        let (k0, b) = (8.0, BoostParams::new(0.6).unwrap());
        for s in [R, L] {
            let st = state(a, s, H, 3.0, k0);
            let m = to_momentum_state(&st).unwrap();
            let id =
                boost_momentum_state(&m, &BoostParams::identity(), m.channel(s, H).unwrap().axis()).unwrap();
            assert!(l2_distance(id.state.channel(s, H).unwrap(), m.channel(s, H).unwrap()).unwrap() < 1e-10);

            let k_axis = a.conjugate();
            let mb = boost_momentum_state(&m, &b, &k_axis).unwrap();
            let ch = mb.state.channel(s, H).unwrap();
            let (kpeak, _) = k_axis
                .points()
                .zip(ch.values())
                .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
                .unwrap();
            assert!((kpeak - b.xi(s) * k0).abs() <= k_axis.step(), "s={s}: {kpeak}");
            assert!((mb.state.norm_sqr() - 1.0).abs() < 1e-6);

            let via_position = to_momentum_state(&boost_blip(&st, &b, &a).unwrap().state).unwrap();
            let d = l2_distance(via_position.channel(s, H).unwrap(), ch).unwrap();
            assert!(d <= 1e-6, "s={s}: {d}");
        }
    }

    #[test]
    fn mode_occupation_examples() {
        let a = Axis::centered(0.02, 16384).unwrap();
        let (w, k0) = (5.0, 20.0);
        let st = state(a, R, H, w, k0);
        let m = to_momentum_state(&st).unwrap();
        let k_axis = *m.channel(R, H).unwrap().axis();
        let full = mode_occupation(&m, k_axis.start(), k_axis.end()).unwrap();
        assert!((full - photon_number(&st)).abs() < 1e-8);

        // |psi(k)|^2 has standard deviation 1 / (sqrt 2 w).
        let sigma = 1.0 / (2.0f64.sqrt() * w);
        let (lo, hi) = (k0 - 5.0 * sigma, k0 + 5.0 * sigma);
        assert!(mode_occupation(&m, lo, hi).unwrap() > 0.98);
        let b = BoostParams::new(0.6).unwrap();
        let mb = to_momentum_state(&boost_blip(&st, &b, &a).unwrap().state).unwrap();
        assert!(mode_occupation(&mb, lo, hi).unwrap() < 2e-2);
        let xi = b.xi(R);
        assert!(mode_occupation(&mb, xi * lo, xi * hi).unwrap() > 0.98);

        assert!(mode_occupation(&m, 30.0, 31.0).unwrap() <= 1e-6);
        assert!(matches!(
            mode_occupation(&m, 2.0, 1.0),
            Err(Error::EmptyWindow { .. })
        ));
        assert!(mode_occupation(&m, 1.0, 1e6).is_err());
        let step = k_axis.step();
        let between = k_axis.point(10) + 0.25 * step;
        assert!(matches!(
            mode_occupation(&m, between, between + 0.5 * step),
            Err(Error::EmptyWindow { .. })
        ));
    }

    #[test]
    fn commutator_normalization_of_spikes() {
        let a = Axis::centered(0.1, 64).unwrap();
        let k = FieldConstants::default();
        for i in [3usize, 20, 40] {
            for j in [3usize, 21, 40] {
                let bi = BlipState::localized(a, i, R, H, k).unwrap();
                let bj = BlipState::localized(a, j, R, H, k).unwrap();
                let ip = inner_product(bi.channel(R, H).unwrap(), bj.channel(R, H).unwrap()).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        // Bob's grid with step kappa * step puts each spike on a node.
        let b = BoostParams::new(0.6).unwrap();
        for s in [R, L] {
            let kappa = b.kappa(s);
            let bob = Axis::new(kappa * a.start(), kappa * a.step(), a.count()).unwrap();
            let spikes: Vec<_> = [5usize, 6, 30]
                .iter()
                .map(|&i| {
                    let st = BlipState::localized(a, i, s, H, k).unwrap();
                    boost_blip(&st, &b, &bob).unwrap().state
                })
                .collect();
            for (p, x) in spikes.iter().enumerate() {
                for (q, y) in spikes.iter().enumerate() {
                    let ip = inner_product(x.channel(s, H).unwrap(), y.channel(s, H).unwrap()).unwrap();
                    let expect = if p == q { 1.0 } else { 0.0 };
                    assert!(
                        (ip - Complex64::new(expect, 0.0)).norm() < 1e-12,
                        "s={s} {p} {q}: {ip}"
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_table_properties() {
        let a = Axis::centered(0.05, 512).unwrap();
        let kernel = RegularisationKernel::new(a, &FieldConstants::default()).unwrap();
        let ks: Vec<f64> = kernel.k_axis().points().collect();
        let zero = ks.iter().position(|k| *k == 0.0).unwrap();
        assert_eq!(kernel.multiplier()[zero], Complex64::new(0.0, 0.0));
        for (i, k) in ks.iter().enumerate() {
            let m = kernel.multiplier()[i];
            assert_eq!(m.im, 0.0);
            if let Some(j) = ks.iter().position(|q| (q + k).abs() < 1e-12) {
                assert!((kernel.multiplier()[j] - m).norm() < 1e-12);
            }
        }
        // sqrt|k| law.
        let (m1, m2) = (kernel.multiplier()[zero + 3], kernel.multiplier()[zero + 48]);
        assert!(((m2.norm() / m1.norm()) - (ks[zero + 48] / ks[zero + 3]).sqrt()).abs() < 1e-10);
        // Defaults give m(k) = sqrt(2 |k|).
        assert!((m1.re - (2.0 * ks[zero + 3]).sqrt()).abs() < 1e-12);

        let mut buf = Vec::new();
        kernel.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,m_re,m_im\n"));
        assert_eq!(text.lines().count(), 513);
    }

    #[test]
    fn field_of_zero_is_zero() {
        let a = Axis::centered(0.05, 256).unwrap();
        let vac = BlipState::single(
            SampledFunction::zeros(a, Representation::PositionChi, R, H),
            FieldConstants::default(),
        )
        .unwrap();
        assert!(field_matrix_element(&vac, R).unwrap().max_abs() == 0.0);
        assert!(field_matrix_element(&vac, L).is_err());
        let v_only = state(a, R, V, 1.0, 0.0);
        assert!(field_matrix_element(&v_only, R).is_err());
    }

    #[test]
    fn kernel_rejects_foreign_grid() {
        let a = Axis::centered(0.05, 256).unwrap();
        let kernel =
            RegularisationKernel::new(Axis::centered(0.1, 256).unwrap(), &FieldConstants::default()).unwrap();
        assert!(field_matrix_element_with(&kernel, &state(a, R, H, 1.0, 0.0), R).is_err());
    }

    #[test]
    fn field_amplitude_scales_as_sqrt_k() {
        let a = Axis::centered(0.02, 16384).unwrap();
        let peak = |k0: f64| {
            let st = state(a, R, H, 10.0, k0);
            field_matrix_element(&st, R).unwrap().max_abs()
        };
        let ratio = peak(10.0) / peak(5.0);
        assert!((ratio - 2.0f64.sqrt()).abs() < 1e-3, "{ratio}");
    }

    #[test]
    fn spectral_field_matches_finite_part_quadrature() {
        let a = Axis::centered(0.05, 2048).unwrap();
        let (w, k0) = (1.0, 5.0);
        let profile = unit_profile(w, 0.0, k0, R);
        let st = state(a, R, H, w, k0);
        let spectral = field_matrix_element(&st, R).unwrap();

        let q = FinitePartQuadrature::new(2500.0, 4000, 8);
        let pref = RegularisationKernel::prefactor_for(st.constants()) * st.constants().c;
        let idx: Vec<usize> = (0..a.count()).step_by(16).collect();
        let (mut num, mut den) = (0.0, 0.0);
        for &i in &idx {
            let oracle = q.apply(&profile, a.point(i)) * pref;
            num += (spectral.values()[i] - oracle).norm_sqr();
            den += oracle.norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel <= 1e-3, "{rel}");
    }

    #[test]
    fn kernel_consistency_examples() {
        let a = Axis::centered(0.02, 8192).unwrap();
        let st = state(a, R, H, 1.5, 5.0);
        let id = kernel_consistency_check(&st, &BoostParams::identity(), &a).unwrap();
        assert!(id.discrepancy <= 1e-10, "{}", id.discrepancy);
        let b = BoostParams::new(0.6).unwrap();
        let r = kernel_consistency_check(&st, &b, &a).unwrap();
        assert!(r.discrepancy <= 1e-3, "{}", r.discrepancy);
        // Swap frames: start from Bob's state and boost back.
        let bob = boost_blip(&st, &b, &a).unwrap().state;
        let back = kernel_consistency_check(&bob, &b.inverse(), &a).unwrap();
        assert!(back.discrepancy <= 1e-3);
        assert!((back.discrepancy - r.discrepancy).abs() <= 1e-3);
        assert!(kernel_consistency_check(&state(a, R, V, 1.0, 0.0), &b, &a).is_err());
    }

    #[test]
    fn kernel_homogeneity() {
        // Field of psi(a x) equals a^{1/2} times the field of psi at a x.
        let grid = Axis::centered(0.02, 8192).unwrap();
        let (w, k0, scale) = (1.5, 4.0, 1.6);
        let base = state(grid, R, H, w, k0);
        let squeezed = BlipState::single(
            SampledFunction::from_fn(grid, R, H, |x| unit_profile(w, 0.0, k0, R)(scale * x)),
            FieldConstants::default(),
        )
        .unwrap();
        let lhs = field_matrix_element(&squeezed, R).unwrap();
        let field = field_matrix_element(&base, R).unwrap();
        let rhs = grid::resample(&field, scale, scale.sqrt(), &grid, Interpolation::BandLimited).unwrap();
        let rel = grid::relative_l2(&lhs, &rhs.function).unwrap();
        assert!(rel <= 1e-3, "{rel}");
    }
}
