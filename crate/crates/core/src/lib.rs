//! OTFS-based radar sensing of range-migrating targets.
//!
//! The crate is split the way a receiver chain is: `frame` holds numerology and the
//! symplectic transforms, `chansim` synthesizes echoes from the continuous-time model,
//! `ddmodel` holds the closed-form delay-Doppler responses, `estimator` turns a received
//! frame into target estimates and `bench` runs Monte Carlo experiments over all of it.

pub mod bench;
pub mod chansim;
pub mod ddmodel;
pub mod error;
pub mod estimator;
pub mod frame;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
