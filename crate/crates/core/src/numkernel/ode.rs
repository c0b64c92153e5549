//! Classical fixed-step RK4 over complex state vectors.
//!
//! Fixed step rather than adaptive: the stiffness ratios in this project stay
//! below ~10^3, and a deterministic grid makes spectra and regression tests
//! reproducible.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniformly sampled complex time series.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<Complex64>,
}

impl TimeSeries {
    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }
}

/// One RK4 step of `dy/dt = deriv(t, y)` in place. `k` buffers must all have
/// the state length.
pub fn rk4_step<F>(deriv: &F, t: f64, y: &mut [Complex64], dt: f64, k: &mut [Vec<Complex64>; 4])
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let n = y.len();
    let mut stage = vec![Complex64::default(); n];

    deriv(t, y, &mut k[0]);
    for i in 0..n {
        stage[i] = y[i] + 0.5 * dt * k[0][i];
    }
    let (k0, rest) = k.split_at_mut(1);
    deriv(t + 0.5 * dt, &stage, &mut rest[0]);
    for i in 0..n {
        stage[i] = y[i] + 0.5 * dt * rest[0][i];
    }
    deriv(t + 0.5 * dt, &stage, &mut rest[1]);
    for i in 0..n {
        stage[i] = y[i] + dt * rest[1][i];
    }
    deriv(t + dt, &stage, &mut rest[2]);
    for i in 0..n {
        y[i] += dt / 6.0 * (k0[0][i] + 2.0 * rest[0][i] + 2.0 * rest[1][i] + rest[2][i]);
    }
}

/// Integrate `dy/dt = deriv(t, y)` from `t_span.0` to `t_span.1` with fixed
/// step `dt`, returning one series per state component (including the initial
/// state). The step count is `ceil((t1 - t0)/dt)`.
///
/// Fails with [`Error::NonFinite`] as soon as any component leaves the
/// representable range.
pub fn rk4_integrate<F>(
    deriv: F,
    y0: &[Complex64],
    t_span: (f64, f64),
    dt: f64,
) -> Result<Vec<TimeSeries>>
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    assert!(dt > 0.0, "dt must be positive");
    let (t0, t1) = t_span;
    assert!(t1 > t0, "empty time span");
    let steps = ((t1 - t0) / dt).ceil() as usize;
    let n = y0.len();

    let mut y = y0.to_vec();
    let mut k = std::array::from_fn(|_| vec![Complex64::default(); n]);
    let mut series: Vec<TimeSeries> =
        (0..n).map(|_| TimeSeries { t0, dt, samples: Vec::with_capacity(steps + 1) }).collect();
    for (i, s) in series.iter_mut().enumerate() {
        s.samples.push(y[i]);
    }

    for step in 0..steps {
        let t = t0 + dt * step as f64;
        rk4_step(&deriv, t, &mut y, dt, &mut k);
        if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite { t: t + dt });
        }
        for (i, s) in series.iter_mut().enumerate() {
            s.samples.push(y[i]);
        }
    }
    Ok(series)
}
