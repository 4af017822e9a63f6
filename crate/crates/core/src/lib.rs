//! Floquet decompositions and frequency-domain few-photon scattering for
//! periodically modulated, excitation-number-conserving open quantum systems.

pub mod error;
pub mod floquet;
pub mod fourier;
pub mod interp;
pub mod models;
pub mod ode;
pub mod quad;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;
