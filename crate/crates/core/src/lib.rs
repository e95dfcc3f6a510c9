//! Adaptive estimation of the smoothness index ρ(N) of an unknown function
//! observed through regression, density or stationary-sequence data, with
//! confidence sets, Orlicz-type tail calculus and parametric model fitting.

mod error;
mod numeric;

pub mod confidence;
pub mod estimate;
pub mod fit;
pub mod fourier;
pub mod simulate;
pub mod tail;

pub use error::{Error, Result};
