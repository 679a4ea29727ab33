//! Relativistic Doppler transformations on the light cone, in one space
//! dimension.
//!
//! Free fields that move in direction `s = +-1` depend only on
//! `chi = x - s c t`. A boost with velocity `beta c` rescales chi by
//! `kappa = gamma (1 + s beta)` and field amplitudes by `xi = 1 / kappa`.
//! This crate applies that rule to sampled classical packets and to one-photon
//! blip states, and checks the consequences numerically.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod blip;
pub mod classical;
pub mod error;
pub mod finite_part;
pub mod grid;
pub mod kinematics;
pub mod scenario;
pub mod spectral;

pub use error::{Error, Result};
