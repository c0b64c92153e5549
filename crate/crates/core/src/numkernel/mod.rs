//! Self-contained numerical primitives: complex dense linear solve, fixed-step
//! RK4, power-of-two FFT, cubic real roots. Keeping these in-tree makes the
//! physics modules backend independent and the outputs reproducible bit for
//! bit.

mod fft;
mod matrix;
mod ode;
mod roots;

pub use fft::{power_spectrum, Window};
pub use matrix::ComplexMatrix;
pub use ode::{rk4_integrate, rk4_step, TimeSeries};
pub use roots::cubic_real_roots;

/// Relative pivot tolerance below which a matrix is declared singular.
pub const SINGULAR_TOL: f64 = 1e-13;

/// Relative residual guaranteed by [`ComplexMatrix::solve`] on
/// well-conditioned systems.
pub const SOLVE_TOL: f64 = 1e-10;
