//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("ODE step size underflow near t = {t}; the problem appears stiff at this tolerance")]
    Stiffness { t: f64 },

    #[error("monodromy eigenvector matrix is ill-conditioned (cond = {cond:.3e}); Floquet spectrum is (near-)defective")]
    DegenerateFloquet { cond: f64 },

    #[error("monodromy multiplier exceeds the unit circle (|mu| = {max_abs:.12}); effective Hamiltonian is not passive")]
    PassivityViolation { max_abs: f64 },

    #[error("requested harmonic cutoff {requested} exceeds the stored cutoff {stored}")]
    InsufficientHarmonics { requested: usize, stored: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parameter derivative unavailable for parameter index {index}")]
    DerivativeUnavailable { index: usize },

    #[error("resolvent solve is singular in the {n}-excitation subspace")]
    ResolventSingular { n: usize },

    #[error("quadrature did not reach the requested tolerance: achieved {achieved:.3e} with estimate {estimate:.6e}")]
    QuadratureAccuracy { achieved: f64, estimate: f64 },

    #[error("integration window too short: truncation bound {bound:.3e} exceeds {required:.3e}")]
    WindowTooShort { bound: f64, required: f64 },

    #[error("linear algebra backend error: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<V> = std::result::Result<V, Error>;
