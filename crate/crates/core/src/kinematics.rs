//! Boost parameters and light-cone coordinate transformations between two
//! inertial observers moving along the x axis.
//!
//! Alice is at rest; Bob moves with velocity `beta * c`. Both sit at their
//! own spatial origin and meet at `t = 0`. A light-like world-line moving in
//! direction `s` is labelled by `chi = x - s c t` in each frame, and the two
//! labels are related by the Doppler factor `kappa = gamma (1 + s beta)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Direction of propagation along x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Direction {
    /// `s = +1`, moving towards increasing x.
    Right,
    /// `s = -1`, moving towards decreasing x.
    Left,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Right, Direction::Left];

    pub fn from_sign(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Direction::Right),
            -1 => Ok(Direction::Left),
            other => Err(Error::InvalidDirection(other)),
        }
    }

    /// The flag `s` as an integer.
    pub fn sign(self) -> i8 {
        match self {
            Direction::Right => 1,
            Direction::Left => -1,
        }
    }

    /// The flag `s` as a float, for use in formulas.
    pub fn s(self) -> f64 {
        f64::from(self.sign())
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Right => Direction::Left,
            Direction::Left => Direction::Right,
        }
    }
}

impl TryFrom<i64> for Direction {
    type Error = Error;

    fn try_from(s: i64) -> Result<Self> {
        Direction::from_sign(s)
    }
}

impl From<Direction> for i64 {
    fn from(d: Direction) -> i64 {
        i64::from(d.sign())
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.sign())
    }
}

/// Relative velocity of Bob's frame with respect to Alice's, with the Lorentz
/// factor cached at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoostParams {
    beta: f64,
    gamma: f64,
}

impl BoostParams {
    /// Builds a boost from `beta = v / c`. Rejects `|beta| >= 1` and
    /// non-finite input.
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta.abs() >= 1.0 {
            return Err(Error::Superluminal(beta));
        }
        // (1 - b)(1 + b) keeps full precision near |b| -> 1 where 1 - b*b
        // would cancel.
        let gamma = 1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt();
        Ok(Self { beta, gamma })
    }

    pub fn identity() -> Self {
        Self {
            beta: 0.0,
            gamma: 1.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Bob's frame seen from Bob: the relative velocity changes sign.
    pub fn inverse(&self) -> Self {
        Self {
            beta: -self.beta,
            gamma: self.gamma,
        }
    }

    /// Doppler factor `gamma (1 + s beta)` mapping `chi_A` to `chi_B`.
    pub fn kappa(&self, s: Direction) -> f64 {
        self.gamma * (1.0 + s.s() * self.beta)
    }

    /// Field amplitude factor `gamma (1 - s beta)`; the reciprocal of kappa.
    pub fn xi(&self, s: Direction) -> f64 {
        self.gamma * (1.0 - s.s() * self.beta)
    }

    /// Relativistic velocity addition: the frame moving at `second` relative
    /// to a frame that itself moves at `self`.
    pub fn compose(&self, second: &BoostParams) -> Self {
        let mut beta = (self.beta + second.beta) / (1.0 + self.beta * second.beta);
        // Rounding can land exactly on +-1 for inputs within an ulp of light speed.
        if beta.abs() >= 1.0 {
            beta = beta.signum() * (1.0 - f64::EPSILON / 2.0);
        }
        BoostParams::new(beta).expect("velocity addition stays subluminal")
    }
}

pub fn make_boost(beta: f64) -> Result<BoostParams> {
    BoostParams::new(beta)
}

pub fn kappa(s: Direction, boost: &BoostParams) -> f64 {
    boost.kappa(s)
}

pub fn xi(s: Direction, boost: &BoostParams) -> f64 {
    boost.xi(s)
}

pub fn inverse_boost(boost: &BoostParams) -> BoostParams {
    boost.inverse()
}

pub fn compose_boosts(first: &BoostParams, second: &BoostParams) -> BoostParams {
    first.compose(second)
}

/// A light-cone label `chi` together with the direction it refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LightConeCoord {
    pub chi: f64,
    pub s: Direction,
}

/// `chi = x - s c t` for the event `(x, t)`.
pub fn chi_of_event(x: f64, t: f64, s: Direction, c: f64) -> Result<LightConeCoord> {
    if !(x.is_finite() && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "event coordinates must be finite, got x = {x}, t = {t}"
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "speed of light must be positive, got {c}"
        )));
    }
    Ok(LightConeCoord {
        chi: x - s.s() * c * t,
        s,
    })
}

/// Relabels a world-line from Alice's coordinates to Bob's. The direction
/// is frame-invariant.
pub fn boost_coord(coord: LightConeCoord, boost: &BoostParams) -> LightConeCoord {
    LightConeCoord {
        chi: boost.kappa(coord.s) * coord.chi,
        s: coord.s,
    }
}

/// Times of a single right-moving light signal sent from Alice to Bob.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalExchangeRecord {
    /// Emission at Alice's position, Alice's clock.
    pub t_emit_a: f64,
    /// Reception at Bob's position, Alice's clock.
    pub t_receive_a: f64,
    /// Emission event, Bob's clock.
    pub t_emit_b: f64,
    /// Reception at Bob's position, Bob's clock.
    pub t_receive_b: f64,
    /// `t_receive_b / t_emit_a`.
    pub kappa_measured: f64,
    /// Lorentz factor recovered from the four times alone.
    pub gamma_inferred: f64,
    /// `t_receive_b - (1 + beta) t_emit_b`; zero up to rounding.
    pub delay_residual: f64,
}

/// Replays the signal exchange between the two observers event by event.
///
/// The reception event is found by intersecting the light ray with Bob's
/// world-line in Alice's frame; both events are then mapped into Bob's frame
/// by the moving-clock relations. Nothing here uses the closed form for
/// kappa, so `kappa_measured` is an independent check of it.
pub fn simulate_signal_exchange(boost: &BoostParams, t_emit_a: f64, c: f64) -> Result<SignalExchangeRecord> {
    if !(t_emit_a.is_finite() && t_emit_a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "emission time must be positive, got {t_emit_a}"
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "speed of light must be positive, got {c}"
        )));
    }
    let beta = boost.beta();
    let gamma = boost.gamma();
    let v = beta * c;

    // Light: x = c (t - t_emit). Bob: x = v t. Intersection:
    let t_receive_a = c * t_emit_a / (c - v);
    let x_receive_a = v * t_receive_a;
    debug_assert!((x_receive_a - c * (t_receive_a - t_emit_a)).abs() <= 1e-9 * x_receive_a.abs().max(1.0));

    // Bob's clock moves relative to Alice; Alice's emitter moves relative to Bob.
    let t_receive_b = t_receive_a / gamma;
    let t_emit_b = gamma * t_emit_a;

    let kappa_measured = t_receive_b / t_emit_a;
    // t_receive_a = gamma t_receive_b = gamma (1 + beta) t_emit_b
    //             = gamma^2 (1 + beta) t_emit_a
    let gamma_inferred = (t_receive_a / ((1.0 + beta) * t_emit_a)).sqrt();
    let delay_residual = t_receive_b - (1.0 + beta) * t_emit_b;

    Ok(SignalExchangeRecord {
        t_emit_a,
        t_receive_a,
        t_emit_b,
        t_receive_b,
        kappa_measured,
        gamma_inferred,
        delay_residual,
    })
}
