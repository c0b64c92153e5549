//! Radix-2 FFT and one-sided power spectra of real time series.

use num_complex::Complex64;

use super::TimeSeries;
use crate::error::{Error, Result};
use crate::spectrum::{ComplexSpectrum, SpectrumKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// No tapering. Preferred for Parseval-style invariant checks.
    Rect,
    /// Hann taper; the default for limit-cycle spectra where leakage would
    /// bury weak harmonics.
    Hann,
}

/// In-place iterative Cooley-Tukey, length must be a power of two.
/// Sign convention e^{+i omega t}, matching the project-wide transform
/// f[omega] = Int f(t) e^{+i omega t} dt.
fn fft_in_place(data: &mut [Complex64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = 2.0 * std::f64::consts::PI / len as f64;
        let wlen = Complex64::new(ang.cos(), ang.sin());
        let mut i = 0;
        while i < n {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = data[i + k];
                let v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// One-sided power spectrum |X(omega_k)|^2 of the real part of `ts` on the
/// grid omega_k = 2 pi k / (N dt), k = 0..N/2.
///
/// Interior bins carry the doubled two-sided power, so with the Rect window
/// the sum of values times the grid weight dt/N equals the signal power
/// Sum |x_n|^2 dt (Parseval).
///
/// The sample count must be a power of two; callers truncate.
pub fn power_spectrum(ts: &TimeSeries, window: Window) -> Result<ComplexSpectrum> {
    let n = ts.samples.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::BadLength { len: n });
    }
    let mut data: Vec<Complex64> = ts
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let w = match window {
                Window::Rect => 1.0,
                Window::Hann => {
                    let phase = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    0.5 * (1.0 - phase.cos())
                }
            };
            Complex64::new(s.re * w, 0.0)
        })
        .collect();
    fft_in_place(&mut data);

    let half = n / 2;
    let d_omega = 2.0 * std::f64::consts::PI / (n as f64 * ts.dt);
    let omegas: Vec<f64> = (0..=half).map(|k| k as f64 * d_omega).collect();
    let values: Vec<Complex64> = (0..=half)
        .map(|k| {
            let p = data[k].norm_sqr();
            let scale = if k == 0 || k == half { 1.0 } else { 2.0 };
            Complex64::new(scale * p, 0.0)
        })
        .collect();
    Ok(ComplexSpectrum { omegas, values, kind: SpectrumKind::Emission })
}
