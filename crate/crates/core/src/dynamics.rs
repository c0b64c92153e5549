//! Classical mean-field dynamics of the driven cavity-mechanics pair:
//! steady states and static bistability, time integration through the
//! parametric instability, limit-cycle detection, and emission spectra.
//!
//! This module works with the bare detuning and the drive strength; the
//! static mechanical displacement is resolved self-consistently. Linearizing
//! around a fixed point hands over to [`crate::linear_response`] with the
//! shifted detuning and the pump-enhanced coupling.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{self, cubic_real_roots, power_spectrum, TimeSeries, Window};
use crate::parallel;
use crate::params::{cooperativity, DetuningConvention, SystemParams};
use crate::spectrum::ComplexSpectrum;
use crate::stability;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coherent drive: strength Omega (from -i Omega = sqrt(kappa) a_in) and the
/// bare detuning between drive and cavity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DriveParams {
    pub drive_amp: f64,
    pub detuning0: f64,
}

impl DriveParams {
    pub fn new(drive_amp: f64, detuning0: f64) -> Result<Self> {
        if !(drive_amp >= 0.0) || !drive_amp.is_finite() || !detuning0.is_finite() {
            return Err(Error::InvalidParams(format!(
                "drive_amp must be nonnegative and finite, detuning0 finite; got ({drive_amp}, {detuning0})"
            )));
        }
        Ok(Self { drive_amp, detuning0 })
    }
}

/// Steady state of the mean-field equations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FixedPoint {
    #[serde(with = "complex_pair")]
    pub a_bar: Complex64,
    #[serde(with = "complex_pair")]
    pub b_bar: Complex64,
    pub stable: bool,
    /// Which cubic branch this is, counting photon numbers upwards.
    pub branch_index: usize,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }
}

/// Right-hand sides of the mean-field equations at (a, b).
fn mean_field_rhs(
    p: &SystemParams,
    d: &DriveParams,
    a: Complex64,
    b: Complex64,
) -> (Complex64, Complex64) {
    let da = (I * d.detuning0 - 0.5 * p.kappa) * a + I * p.g0 * a * (b + b.conj())
        - I * d.drive_amp;
    let db = (-I * p.omega_m - 0.5 * p.gamma_m) * b + I * p.g0 * a.norm_sqr();
    (da, db)
}

/// Static detuning shift per intracavity photon:
/// Delta(n) = Delta_0 + shift_per_photon * n.
fn shift_per_photon(p: &SystemParams) -> f64 {
    2.0 * p.g0 * p.g0 * p.omega_m / (p.omega_m * p.omega_m + 0.25 * p.gamma_m * p.gamma_m)
}

/// All steady states, ordered by intracavity photon number.
///
/// Eliminating the mechanics leaves a real cubic in n = |a_bar|^2:
///   n [ (kappa/2)^2 + (Delta_0 + eta n)^2 ] = Omega^2
/// with eta the static shift per photon. Each root is polished on this
/// well-scaled form before reconstructing the amplitudes, and stability comes
/// from the eigenvalue signs of the mean-field linearization.
pub fn fixed_points(p: &SystemParams, d: &DriveParams) -> Vec<FixedPoint> {
    let eta = shift_per_photon(p);
    let half_kappa_sq = 0.25 * p.kappa * p.kappa;
    let c3 = eta * eta;
    let c2 = 2.0 * d.detuning0 * eta;
    let c1 = half_kappa_sq + d.detuning0 * d.detuning0;
    let c0 = -d.drive_amp * d.drive_amp;

    let mut roots: Vec<f64> = cubic_real_roots(c3, c2, c1, c0)
        .into_iter()
        .map(|n| polish_photon_number(n, p, d))
        .filter(|&n| n >= 0.0)
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));

    roots
        .into_iter()
        .enumerate()
        .map(|(branch_index, n)| {
            let detuning = d.detuning0 + eta * n;
            let a_bar = -I * d.drive_amp / Complex64::new(0.5 * p.kappa, -detuning);
            let b_bar = I * p.g0 * n / Complex64::new(0.5 * p.gamma_m, p.omega_m);
            let stable = stability::is_stable(&mean_field_drift(p, d, a_bar, b_bar));
            FixedPoint { a_bar, b_bar, stable, branch_index }
        })
        .collect()
}

/// Newton on f(n) = n [(kappa/2)^2 + (Delta_0 + eta n)^2] - Omega^2. The
/// cubic solver works on expanded coefficients that can span twenty orders of
/// magnitude; this form stays conditioned at the physical scale.
fn polish_photon_number(mut n: f64, p: &SystemParams, d: &DriveParams) -> f64 {
    let eta = shift_per_photon(p);
    let half_kappa_sq = 0.25 * p.kappa * p.kappa;
    for _ in 0..5 {
        let det = d.detuning0 + eta * n;
        let f = n * (half_kappa_sq + det * det) - d.drive_amp * d.drive_amp;
        let df = half_kappa_sq + det * det + 2.0 * n * det * eta;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        n -= step;
        if step.abs() <= 1e-15 * (1.0 + n.abs()) {
            break;
        }
    }
    n
}

/// Linearization of the mean-field equations around (a_bar, b_bar) in the
/// fluctuation ordering (da, da+, db, db+). Unlike the gauge-fixed Langevin
/// drift, the coupling g0 a_bar here keeps its phase.
pub fn mean_field_drift(
    p: &SystemParams,
    d: &DriveParams,
    a_bar: Complex64,
    b_bar: Complex64,
) -> numkernel::ComplexMatrix {
    let detuning = d.detuning0 + p.g0 * (b_bar + b_bar.conj()).re;
    let g = I * p.g0 * a_bar; // i g0 a_bar
    let gc = I * p.g0 * a_bar.conj();
    let z = Complex64::new(0.0, 0.0);
    numkernel::ComplexMatrix::from_rows(&[
        vec![Complex64::new(-0.5 * p.kappa, detuning), z, g, g],
        vec![z, Complex64::new(-0.5 * p.kappa, -detuning), -gc, -gc],
        vec![gc, g, Complex64::new(-0.5 * p.gamma_m, -p.omega_m), z],
        vec![-gc, -g, z, Complex64::new(-0.5 * p.gamma_m, p.omega_m)],
    ])
}

/// Max-norm residual of the mean-field right-hand sides at a fixed point,
/// relative to the natural scale kappa |a| + Gamma_m |b| + Omega.
pub fn fixed_point_residual(p: &SystemParams, d: &DriveParams, fp: &FixedPoint) -> f64 {
    let (da, db) = mean_field_rhs(p, d, fp.a_bar, fp.b_bar);
    let scale = p.kappa * fp.a_bar.norm() + p.gamma_m * fp.b_bar.norm() + d.drive_amp;
    (da.norm() + db.norm()) / scale.max(f64::MIN_POSITIVE)
}

/// Linear-response parameters at a fixed point: shifted detuning and
/// pump-enhanced coupling G = g0 |a_bar|.
pub fn linearized_params(p: &SystemParams, d: &DriveParams, fp: &FixedPoint) -> SystemParams {
    let mut lin = *p;
    lin.detuning = d.detuning0 + p.g0 * 2.0 * fp.b_bar.re;
    lin.coupling = p.g0 * fp.a_bar.norm();
    lin.detuning_convention = DetuningConvention::Shifted;
    lin
}

/// How a trajectory is started.
#[derive(Debug, Clone, Copy)]
pub enum InitialCondition {
    /// Steady state plus eps * (1 + i) on the mechanical amplitude with
    /// eps = factor * max(1, |b_bar|); deterministic, seed-free trigger of
    /// the unstable mode. Starts from the lowest stable branch (lowest branch
    /// overall if none is stable).
    FixedPointPerturbed { factor: f64 },
    Custom { a0: Complex64, b0: Complex64 },
    Zero,
}

impl InitialCondition {
    pub fn perturbed() -> Self {
        InitialCondition::FixedPointPerturbed { factor: 1e-3 }
    }
}

/// Integrated mean-field trajectory, sampled every `stride` RK4 steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t0: f64,
    /// Sample spacing (integration step times stride).
    pub dt: f64,
    pub a_bar: Vec<Complex64>,
    pub b_bar: Vec<Complex64>,
    /// True when the blow-up guard truncated the run.
    pub diverged: bool,
    pub params: SystemParams,
    pub drive: DriveParams,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.a_bar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_bar.is_empty()
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    /// Index where the steady segment starts after discarding the transient
    /// fraction.
    pub fn steady_start(&self, transient_fraction: f64) -> usize {
        ((self.len() as f64) * transient_fraction) as usize
    }
}

/// Default integration step, one two-hundredth of a mechanical period.
pub fn default_dt(p: &SystemParams) -> f64 {
    (2.0 * std::f64::consts::PI / p.omega_m) / 200.0
}

/// Fraction of a trajectory treated as transient by default.
pub const DEFAULT_TRANSIENT_FRACTION: f64 = 0.5;

/// Integrate the mean-field equations with fixed-step RK4.
///
/// The run is truncated (and flagged diverged) if |a_bar| exceeds
/// 1e6 * max(1, 2 Omega / kappa): the physical limit cycle saturates well
/// below that, so crossing it signals a numerical blow-up, not physics.
pub fn simulate(
    p: &SystemParams,
    d: &DriveParams,
    t_span: (f64, f64),
    dt: f64,
    init: InitialCondition,
    stride: usize,
) -> Result<Trajectory> {
    assert!(dt > 0.0 && stride > 0, "need positive dt and stride");
    let (a0, b0) = match init {
        InitialCondition::Zero => (Complex64::default(), Complex64::default()),
        InitialCondition::Custom { a0, b0 } => (a0, b0),
        InitialCondition::FixedPointPerturbed { factor } => {
            let fps = fixed_points(p, d);
            let fp = fps
                .iter()
                .find(|f| f.stable)
                .or_else(|| fps.first())
                .copied()
                .unwrap_or(FixedPoint {
                    a_bar: Complex64::default(),
                    b_bar: Complex64::default(),
                    stable: false,
                    branch_index: 0,
                });
            let eps = factor * fp.b_bar.norm().max(1.0);
            (fp.a_bar, fp.b_bar + eps * Complex64::new(1.0, 1.0))
        }
    };

    let (t0, t1) = t_span;
    assert!(t1 > t0, "empty time span");
    let steps = ((t1 - t0) / dt).ceil() as usize;
    let guard = 1e6 * (2.0 * d.drive_amp / p.kappa).max(1.0);

    let deriv = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let (da, db) = mean_field_rhs(p, d, y[0], y[1]);
        dy[0] = da;
        dy[1] = db;
    };

    let mut y = [a0, b0];
    let mut k = std::array::from_fn(|_| vec![Complex64::default(); 2]);
    let mut a_bar = Vec::with_capacity(steps / stride + 2);
    let mut b_bar = Vec::with_capacity(steps / stride + 2);
    a_bar.push(y[0]);
    b_bar.push(y[1]);
    let mut diverged = false;

    for step in 0..steps {
        let t = t0 + dt * step as f64;
        numkernel::rk4_step(&deriv, t, &mut y, dt, &mut k);
        let bad = y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite());
        if bad || y[0].norm() > guard {
            diverged = true;
            break;
        }
        if (step + 1) % stride == 0 {
            a_bar.push(y[0]);
            b_bar.push(y[1]);
        }
    }

    Ok(Trajectory {
        t0,
        dt: dt * stride as f64,
        a_bar,
        b_bar,
        diverged,
        params: *p,
        drive: *d,
    })
}

/// Hann-windowed power spectra of Re a_bar and Re b_bar over the steady
/// segment (transient discarded, length truncated to a power of two).
pub fn emission_spectrum(
    traj: &Trajectory,
    transient_fraction: f64,
) -> Result<(ComplexSpectrum, ComplexSpectrum)> {
    let start = traj.steady_start(transient_fraction);
    let steady = traj.len().saturating_sub(start);
    let n = if steady >= 2 { steady.next_power_of_two() >> 1 } else { 0 };
    if n < 64 {
        return Err(Error::TooShort(format!(
            "{steady} steady samples after transient discard, need >= 64"
        )));
    }
    let from = traj.len() - n;
    let make = |values: &[Complex64]| -> Result<ComplexSpectrum> {
        let ts = TimeSeries {
            t0: traj.time_at(from),
            dt: traj.dt,
            samples: values[from..].to_vec(),
        };
        power_spectrum(&ts, Window::Hann)
    };
    Ok((make(&traj.a_bar)?, make(&traj.b_bar)?))
}

/// Long-time behaviour of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrajectoryClass {
    Decay,
    LimitCycle,
    Irregular,
}

/// Which static-shift convention the measured oscillation frequency matched;
/// the full shift is Delta_0 + 2 g0 <Re b>, the half shift drops the factor
/// of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShiftCandidate {
    FullStaticShift,
    HalfStaticShift,
}

/// Summary of a developed trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    pub classification: TrajectoryClass,
    /// Peak frequency of |Re a_bar(omega)|^2 over the steady segment.
    pub dominant_freq_a: f64,
    /// Peak frequency of |Re b_bar(omega)|^2.
    pub dominant_freq_b: f64,
    /// Power ratio of the second cavity harmonic to the fundamental.
    pub harmonic_content_a: f64,
    /// max|a_bar| / max|b_bar| over the steady segment.
    pub amplitude_ratio: f64,
    /// Delta_0 + 2 g0 <Re b_bar>: oscillation-frequency prediction with the
    /// full static spring shift.
    pub freq_full_shift: f64,
    /// Delta_0 + g0 <Re b_bar>: the half-shift variant.
    pub freq_half_shift: f64,
    /// Which prediction lies closer to the measured cavity line.
    pub closer_candidate: ShiftCandidate,
    /// FFT bin width of the steady-segment spectra.
    pub freq_resolution: f64,
}

/// Classify the steady segment with the default transient fraction.
pub fn classify_regime(traj: &Trajectory) -> Result<RegimeReport> {
    classify_regime_with(traj, DEFAULT_TRANSIENT_FRACTION)
}

/// Classification rules: Decay when the steady-segment peak-to-peak of
/// Re a_bar falls below 1e-6 of its overall maximum; LimitCycle when one
/// spectral line (peak bin and its two neighbours, mean removed) carries more
/// than half of the AC power; Irregular otherwise, and always for diverged
/// runs.
pub fn classify_regime_with(traj: &Trajectory, transient_fraction: f64) -> Result<RegimeReport> {
    let start = traj.steady_start(transient_fraction);
    let steady_len = traj.len().saturating_sub(start);
    let min_periods = 64.0;
    let period = 2.0 * std::f64::consts::PI / traj.params.omega_m;
    if (steady_len as f64) * traj.dt < min_periods * period {
        return Err(Error::TooShort(format!(
            "steady segment covers {:.1} mechanical periods, need >= {min_periods}",
            (steady_len as f64) * traj.dt / period
        )));
    }

    let steady_a = &traj.a_bar[start..];
    let steady_b = &traj.b_bar[start..];

    let max_re_a = traj.a_bar.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let (re_min, re_max) = steady_a
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.re), hi.max(v.re)));
    let ptp = re_max - re_min;

    let amplitude_ratio = {
        let max_a = steady_a.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let max_b = steady_b.iter().map(|v| v.norm()).fold(0.0, f64::max);
        max_a / max_b.max(f64::MIN_POSITIVE)
    };

    // spectra of the mean-removed steady segments
    let spec_of = |vals: &[Complex64]| -> Result<ComplexSpectrum> {
        let n = vals.len().next_power_of_two() >> 1;
        let tail = &vals[vals.len() - n..];
        let mean = tail.iter().map(|v| v.re).sum::<f64>() / n as f64;
        let ts = TimeSeries {
            t0: 0.0,
            dt: traj.dt,
            samples: tail.iter().map(|v| Complex64::new(v.re - mean, 0.0)).collect(),
        };
        power_spectrum(&ts, Window::Hann)
    };
    let spec_a = spec_of(steady_a)?;
    let spec_b = spec_of(steady_b)?;
    let freq_resolution = spec_a.omegas[1] - spec_a.omegas[0];

    let peak_a = spec_a.peak_index(true);
    let peak_b = spec_b.peak_index(true);
    let dominant_freq_a = spec_a.omegas[peak_a];
    let dominant_freq_b = spec_b.omegas[peak_b];

    // line power = peak bin plus its Hann main-lobe neighbours
    let line_power = |spec: &ComplexSpectrum, center: usize| -> f64 {
        let lo = center.saturating_sub(1);
        let hi = (center + 1).min(spec.values.len() - 1);
        spec.values[lo..=hi].iter().map(|v| v.re).sum()
    };
    let total_ac: f64 = spec_a.values.iter().skip(1).map(|v| v.re).sum();
    let fundamental = line_power(&spec_a, peak_a);

    // second harmonic of the cavity line, if it fits under Nyquist
    let harmonic_content_a = {
        let k2 = 2 * peak_a;
        if k2 + 1 < spec_a.values.len() && fundamental > 0.0 {
            let window: f64 = (k2.saturating_sub(2)..=(k2 + 2).min(spec_a.values.len() - 1))
                .map(|k| spec_a.values[k].re)
                .fold(0.0, f64::max);
            3.0 * window / fundamental
        } else {
            0.0
        }
    };

    let classification = if traj.diverged {
        TrajectoryClass::Irregular
    } else if ptp < 1e-6 * max_re_a.max(f64::MIN_POSITIVE) {
        TrajectoryClass::Decay
    } else if fundamental > 0.5 * total_ac {
        TrajectoryClass::LimitCycle
    } else {
        TrajectoryClass::Irregular
    };

    let mean_re_b = steady_b.iter().map(|v| v.re).sum::<f64>() / steady_len as f64;
    let freq_full_shift = traj.drive.detuning0 + 2.0 * traj.params.g0 * mean_re_b;
    let freq_half_shift = traj.drive.detuning0 + traj.params.g0 * mean_re_b;
    let closer_candidate =
        if (dominant_freq_a - freq_full_shift).abs() <= (dominant_freq_a - freq_half_shift).abs() {
            ShiftCandidate::FullStaticShift
        } else {
            ShiftCandidate::HalfStaticShift
        };

    Ok(RegimeReport {
        classification,
        dominant_freq_a,
        dominant_freq_b,
        harmonic_content_a,
        amplitude_ratio,
        freq_full_shift,
        freq_half_shift,
        closer_candidate,
        freq_resolution,
    })
}

/// Outcome of a lasing-threshold scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThresholdEstimate {
    /// Drive strength at the Decay <-> LimitCycle flip.
    pub drive: f64,
    /// Linear-response cooperativity at the flip's fixed point.
    pub cooperativity: f64,
}

/// Locate the parametric-instability drive by bisection on the time-domain
/// simulation.
///
/// Each probe integrates from a perturbed fixed point and watches the
/// deviation envelope: growth by x100 marks the limit-cycle side, decay to
/// x0.01 the stable side. Near the flip the envelope rate goes through zero,
/// so probes are capped in time and judged by their net drift; this is the
/// same Decay <-> LimitCycle discrimination the spectral classifier makes on
/// developed trajectories, but it exits orders of magnitude earlier.
pub fn threshold_scan(
    p: &SystemParams,
    drive_range: (f64, f64),
    n_points: usize,
) -> Result<ThresholdEstimate> {
    assert!(n_points >= 2, "need at least two scan points");
    let (lo, hi) = drive_range;
    if !(hi > lo) || lo < 0.0 {
        return Err(Error::InvalidParams(format!(
            "drive range must be increasing and nonnegative, got [{lo}, {hi}]"
        )));
    }
    let grid = crate::spectrum::linear_grid(lo, hi, n_points);
    let outcomes = parallel::map_collect(&grid, |&omega_d| probe_unstable(p, omega_d));
    let flip = outcomes.windows(2).position(|w| !w[0] && w[1]);
    let Some(i) = flip else {
        return Err(Error::NoFlipInRange { lo, hi });
    };

    let (mut d_lo, mut d_hi) = (grid[i], grid[i + 1]);
    while (d_hi - d_lo) > 1e-3 * d_hi {
        let mid = 0.5 * (d_lo + d_hi);
        if probe_unstable(p, mid) {
            d_hi = mid;
        } else {
            d_lo = mid;
        }
    }
    let drive = 0.5 * (d_lo + d_hi);
    let d = DriveParams { drive_amp: drive, detuning0: p.detuning };
    let fp = fixed_points(p, &d)
        .into_iter()
        .next()
        .expect("driven system has a fixed point");
    let lin = linearized_params(p, &d, &fp);
    Ok(ThresholdEstimate { drive, cooperativity: cooperativity(&lin) })
}

/// True when a small perturbation of the fixed point grows.
fn probe_unstable(p: &SystemParams, drive_amp: f64) -> bool {
    let d = DriveParams { drive_amp, detuning0: p.detuning };
    let fps = fixed_points(p, &d);
    let Some(fp) = fps.first().copied() else { return false };
    let eps = 1e-6 * fp.b_bar.norm().max(1.0);
    let dt = default_dt(p);

    let deriv = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let (da, db) = mean_field_rhs(p, &d, y[0], y[1]);
        dy[0] = da;
        dy[1] = db;
    };
    let mut y = [fp.a_bar, fp.b_bar + eps * Complex64::new(1.0, 1.0)];
    let mut k = std::array::from_fn(|_| vec![Complex64::default(); 2]);

    let deviation = |y: &[Complex64; 2]| (y[0] - fp.a_bar).norm() + (y[1] - fp.b_bar).norm();

    // let the fast mechanical transient settle before taking the reference
    let settle = (10.0 / p.gamma_m / dt).ceil() as usize;
    let t_max = 1200.0 / p.kappa;
    let max_steps = (t_max / dt).ceil() as usize;

    let mut d_ref = deviation(&y);
    for step in 0..max_steps {
        numkernel::rk4_step(&deriv, step as f64 * dt, &mut y, dt, &mut k);
        if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return true;
        }
        if step == settle {
            d_ref = deviation(&y).max(f64::MIN_POSITIVE);
        }
        if step > settle {
            let dev = deviation(&y);
            if dev > 100.0 * d_ref {
                return true;
            }
            if dev < 0.01 * d_ref {
                return false;
            }
        }
    }
    // inconclusive within the cap: judge by the net drift
    deviation(&y) > d_ref
}
