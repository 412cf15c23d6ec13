//! Characteristic-based solver and smoothness certifier for
//! one-dimensional relativistic cold-plasma oscillations.
//!
//! The crate integrates plasma oscillations along characteristics,
//! certifies smoothness on a requested horizon from Cauchy data, locates
//! the first gradient blow-up of a Gaussian pulse, and reproduces a set
//! of reference experiments end to end.

pub mod certifier;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod scenario;

pub use error::{PlasmaError, Result};
