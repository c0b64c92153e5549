//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Parameter validation failed at construction.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A pivot fell below the singularity tolerance during LU factorization.
    /// When solving the input-output problem this signals an undamped pole at
    /// the requested frequency; perturb the frequency and retry.
    #[error("singular matrix (pivot ratio {pivot_ratio:.3e})")]
    SingularMatrix { pivot_ratio: f64 },

    /// The ODE state left the representable range, usually meaning the step
    /// size is too large for a trajectory past the instability.
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    /// FFT input length is not a power of two.
    #[error("bad length {len}: expected a power of two >= 2")]
    BadLength { len: usize },

    /// The scattering denominator N[omega] vanished at this frequency.
    #[error("response pole at omega = {omega}")]
    PoleAtFrequency { omega: f64 },

    /// |A(omega)| below tolerance; added noise referred to the input is
    /// undefined.
    #[error("zero gain at omega = {omega}")]
    ZeroGain { omega: f64 },

    /// Trajectory segment too short for the requested analysis.
    #[error("trajectory too short: {0}")]
    TooShort(String),

    /// A threshold scan found no Decay <-> LimitCycle flip in the range.
    #[error("no stability flip in scanned range [{lo}, {hi}]")]
    NoFlipInRange { lo: f64, hi: f64 },

    /// Ground-state check requested without a bath temperature.
    #[error("device temperature missing")]
    MissingTemperature,
}
