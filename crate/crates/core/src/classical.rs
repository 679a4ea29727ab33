//! Classical wave packets on the light cone.
//!
//! A free packet is a function of `chi = x - s c t` alone, one channel per
//! direction. Only the electric amplitude is stored; the magnetic amplitude
//! of a travelling wave is `B = s E / c`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    self, Axis, Interpolation, Polarization, Representation, ResampleDiagnostics, SampledFunction,
};
use crate::kinematics::{BoostParams, Direction};
use crate::spectral;

/// Edge-to-peak ratio below which a packet counts as decayed.
pub const EDGE_DECAY_LIMIT: f64 = 1e-12;

/// Physical constants shared by packets and blip states. All default to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct FieldConstants {
    pub c: f64,
    pub hbar: f64,
    pub epsilon: f64,
    pub area: f64,
}

impl Default for FieldConstants {
    fn default() -> Self {
        Self {
            c: 1.0,
            hbar: 1.0,
            epsilon: 1.0,
            area: 1.0,
        }
    }
}

impl FieldConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c", self.c),
            ("hbar", self.hbar),
            ("epsilon", self.epsilon),
            ("area", self.area),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ClassicalWavePacket {
    channels: Vec<SampledFunction>,
    constants: FieldConstants,
}

impl ClassicalWavePacket {
    /// Builds a packet from horizontally polarised position-space channels
    /// with distinct directions.
    pub fn new(channels: Vec<SampledFunction>, constants: FieldConstants) -> Result<Self> {
        constants.validate()?;
        for (i, ch) in channels.iter().enumerate() {
            if ch.representation() != Representation::PositionChi {
                return Err(Error::WrongRepresentation {
                    expected: Representation::PositionChi.name(),
                    found: ch.representation().name(),
                });
            }
            if ch.lambda() != Polarization::H {
                return Err(Error::InvalidParameter(
                    "classical packets carry the H polarization only".into(),
                ));
            }
            if channels[..i].iter().any(|o| o.s() == ch.s()) {
                return Err(Error::DuplicateChannel {
                    s: ch.s().sign(),
                    lambda: ch.lambda().name(),
                });
            }
        }
        Ok(Self { channels, constants })
    }

    pub fn single(e: SampledFunction, constants: FieldConstants) -> Result<Self> {
        Self::new(vec![e], constants)
    }

    pub fn constants(&self) -> &FieldConstants {
        &self.constants
    }

    pub fn channels(&self) -> &[SampledFunction] {
        &self.channels
    }

    /// Electric amplitude of the channel moving in direction `s`.
    pub fn electric(&self, s: Direction) -> Result<&SampledFunction> {
        self.channels
            .iter()
            .find(|c| c.s() == s)
            .ok_or(Error::MissingChannel {
                s: s.sign(),
                lambda: Polarization::H.name(),
            })
    }

    /// Magnetic amplitude `s E / c` of the channel moving in direction `s`.
    pub fn magnetic(&self, s: Direction) -> Result<SampledFunction> {
        let e = self.electric(s)?;
        Ok(e.scaled(s.s() / self.constants.c))
    }
}

/// `E(x, t)` of channel `s`: the packet's profile at `chi = x - s c t`.
pub fn evaluate_at(packet: &ClassicalWavePacket, x: f64, t: f64, s: Direction) -> Result<Complex64> {
    let e = packet.electric(s)?;
    let chi = x - s.s() * packet.constants.c * t;
    e.interpolate(chi)
}

#[derive(Debug, Clone)]
pub struct BoostedPacket {
    pub packet: ClassicalWavePacket,
    pub diagnostics: ResampleDiagnostics,
}

/// Bob's view of the packet: `E_B(chi) = xi E_A(xi chi)` per channel, with
/// `xi = gamma (1 - s beta)`. B follows with the same factor since it is
/// derived from E.
pub fn boost_packet(
    packet: &ClassicalWavePacket,
    boost: &BoostParams,
    target: &Axis,
) -> Result<BoostedPacket> {
    let mut diagnostics = ResampleDiagnostics::clean();
    let mut channels = Vec::with_capacity(packet.channels.len());
    for ch in &packet.channels {
        let xi = boost.xi(ch.s());
        let r = grid::resample(ch, xi, xi, target, Interpolation::BandLimited)?;
        diagnostics = diagnostics.merge(r.diagnostics);
        channels.push(r.function);
    }
    Ok(BoostedPacket {
        packet: ClassicalWavePacket::new(channels, packet.constants)?,
        diagnostics,
    })
}

/// A bundle of light-like world-lines through the chi-interval `[a1, a2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorldlineBox {
    pub a1: f64,
    pub a2: f64,
    /// World-line density (lines per unit chi).
    pub h: f64,
    pub area: f64,
    pub epsilon: f64,
}

impl WorldlineBox {
    pub fn new(a1: f64, a2: f64, h: f64, area: f64, epsilon: f64) -> Result<Self> {
        if !(a1.is_finite() && a2.is_finite() && a2 > a1) {
            return Err(Error::InvalidParameter(format!(
                "box needs a1 < a2, got [{a1}, {a2}]"
            )));
        }
        for (name, v) in [("h", h), ("area", area), ("epsilon", epsilon)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "box {name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            a1,
            a2,
            h,
            area,
            epsilon,
        })
    }

    /// The same bundle seen by Bob: endpoints scaled by kappa, density by xi.
    pub fn boosted(&self, s: Direction, boost: &BoostParams) -> Self {
        let k = boost.kappa(s);
        Self {
            a1: k * self.a1,
            a2: k * self.a2,
            h: transform_density(self.h, s, boost),
            ..*self
        }
    }
}

fn energy_sum(e: &SampledFunction, c: f64, s: Direction, range: Option<(f64, f64)>) -> f64 {
    let step = e.axis().step();
    e.axis()
        .points()
        .zip(e.values())
        .filter(|(x, _)| range.is_none_or(|(lo, hi)| *x >= lo && *x <= hi))
        .map(|(_, v)| {
            let b = v * (s.s() / c);
            v.norm_sqr() + c * c * b.norm_sqr()
        })
        .sum::<f64>()
        * step
}

/// Energy of the world-lines in the box, summed over channels:
/// `(A eps / 2h) * sum step (|E|^2 + c^2 |B|^2)` over grid points in `[a1, a2]`.
pub fn box_energy(packet: &ClassicalWavePacket, bx: &WorldlineBox) -> Result<f64> {
    let mut total = 0.0;
    for ch in &packet.channels {
        let axis = ch.axis();
        for a in [bx.a1, bx.a2] {
            if !axis.contains(a) {
                return Err(Error::OutOfGrid {
                    coordinate: a,
                    start: axis.start(),
                    end: axis.end(),
                });
            }
        }
        total += energy_sum(ch, packet.constants.c, ch.s(), Some((bx.a1, bx.a2)));
    }
    Ok(bx.area * bx.epsilon / (2.0 * bx.h) * total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalEnergy {
    pub energy: f64,
    /// Worst edge-to-peak amplitude ratio over channels.
    pub edge_decay: f64,
    /// Set when some channel has not decayed at the grid edges.
    pub edge_warning: bool,
}

/// `(A eps / 2) * integral (|E|^2 + c^2 |B|^2)` over the whole grid, with no
/// world-line density factor.
pub fn total_energy(packet: &ClassicalWavePacket) -> TotalEnergy {
    let k = &packet.constants;
    let mut energy = 0.0;
    let mut edge_decay: f64 = 0.0;
    for ch in &packet.channels {
        energy += energy_sum(ch, k.c, ch.s(), None);
        edge_decay = edge_decay.max(ch.edge_decay());
    }
    TotalEnergy {
        energy: k.area * k.epsilon / 2.0 * energy,
        edge_decay,
        edge_warning: edge_decay > EDGE_DECAY_LIMIT,
    }
}

/// World-line density in Bob's frame: `h_B = gamma (1 - s beta) h_A`.
pub fn transform_density(h_a: f64, s: Direction, boost: &BoostParams) -> f64 {
    boost.xi(s) * h_a
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub function: SampledFunction,
    /// `|E(k)|^2`-weighted mean wavenumber; `None` for a zero field.
    pub centroid: Option<f64>,
}

pub fn spectrum(packet: &ClassicalWavePacket, s: Direction) -> Result<Spectrum> {
    let function = spectral::to_momentum(packet.electric(s)?)?;
    let centroid = spectral_centroid(&function);
    Ok(Spectrum { function, centroid })
}

pub(crate) fn spectral_centroid(f: &SampledFunction) -> Option<f64> {
    let (num, den) = f
        .axis()
        .points()
        .zip(f.values())
        .fold((0.0, 0.0), |(n, d), (k, v)| {
            (n + k * v.norm_sqr(), d + v.norm_sqr())
        });
    (den > 0.0).then(|| num / den)
}

/// `k_B = gamma (1 - s beta) k_A`.
pub fn doppler_shift_wavenumber(k_a: f64, s: Direction, boost: &BoostParams) -> f64 {
    boost.xi(s) * k_a
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralTransformReport {
    /// Relative L2 distance between Bob's spectrum and Alice's spectrum
    /// evaluated at `kappa k_B`.
    pub discrepancy: f64,
    pub centroid_a: Option<f64>,
    pub centroid_b: Option<f64>,
    pub diagnostics: ResampleDiagnostics,
}

/// Compares the spectrum of the boosted packet with Alice's spectrum
/// evaluated at `kappa k_B`.
pub fn spectral_transform_check(
    packet: &ClassicalWavePacket,
    boost: &BoostParams,
    s: Direction,
    target: &Axis,
) -> Result<SpectralTransformReport> {
    let boosted = boost_packet(packet, boost, target)?;
    let lhs = spectrum(&boosted.packet, s)?;
    let rhs_a = spectrum(packet, s)?;
    let rhs = grid::resample(
        &rhs_a.function,
        boost.kappa(s),
        1.0,
        lhs.function.axis(),
        Interpolation::BandLimited,
    )?;
    let discrepancy = grid::relative_l2(&lhs.function, &rhs.function)?;
    Ok(SpectralTransformReport {
        discrepancy,
        centroid_a: rhs_a.centroid,
        centroid_b: lhs.centroid,
        diagnostics: boosted.diagnostics.merge(rhs.diagnostics),
    })
}
