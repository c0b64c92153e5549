//! Numerical toolkit for cavity optomechanics in the reversed dissipation
//! regime, where the mechanical oscillator relaxes faster than the
//! electromagnetic mode and acts as its engineered reservoir.
//!
//! The crate covers four layers:
//!
//! - [`params`]: parameter model, validation, and dimensionless quantities
//!   (cooperativity, dissipation-regime classification).
//! - [`linear_response`] / [`three_mode`]: frequency-domain engine for the
//!   linearized fluctuation dynamics — susceptibilities, mechanical
//!   self-energy, dynamical backaction on the cavity, input-output scattering
//!   matrices (4×4 one-mode, 6×6 two-mode), amplifier gain and added noise.
//! - [`dynamics`]: classical mean-field equations — steady states and
//!   bistability, time integration through the parametric instability,
//!   limit-cycle detection and emission spectra.
//! - [`feasibility`]: pump-power and photon-number estimates for
//!   superconducting microwave implementations.
//!
//! Everything is backed by the self-contained primitives in [`numkernel`]
//! (complex LU solve, RK4, radix-2 FFT, cubic roots), so no external linear
//! algebra backend is required. Frequency grids and parameter sweeps are
//! data-parallel; the `parallel` feature (on by default) maps them over a
//! rayon pool, and disabling it falls back to sequential iteration with
//! identical results.

pub mod dynamics;
pub mod error;
pub mod feasibility;
pub mod linear_response;
pub mod numkernel;
pub mod parallel;
pub mod params;
pub mod selftest;
pub mod spectrum;
pub mod stability;
pub mod three_mode;

pub use error::{Error, Result};
pub use params::{RegimeClass, RegimeKind, SystemParams, ThreeModeParams};
pub use spectrum::{ComplexSpectrum, SpectrumKind};
