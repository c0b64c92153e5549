//! Two electromagnetic modes sharing one mechanical oscillator: sideband
//! cooling by the dissipative mode 2 establishes the reversed dissipation
//! regime for mode 1, which then amplifies. Covers the effective mechanical
//! bath, the 6x6 scattering matrix, two-mode amplifier gain and added noise,
//! and the backaction-cancellation configuration kappa_2 = kappa, G_2 = G.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::linear_response::{scattering_from_drift, GAIN_CAP};
use crate::numkernel::ComplexMatrix;
use crate::parallel;
use crate::params::{cooperativity, cooperativity2, SystemParams, ThreeModeParams};
use crate::spectrum::{ComplexSpectrum, SpectrumKind};
use crate::stability;

/// Mechanical bath as seen by mode 1 after sideband cooling by mode 2.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EffectiveMechanics {
    /// Broadened mechanical linewidth (C_2 + 1) Gamma_m.
    pub gamma_eff: f64,
    /// Residual phonon occupancy after cooling.
    pub n_eff: f64,
    /// Cooperativity (in terms of the bare Gamma_m) at which mode 1 turns
    /// unstable: the cooling displaces the threshold to Gamma_eff/Gamma_m.
    pub instability_coop: f64,
}

/// Cooling-mode effect on the mechanics, assuming mode 2 is pumped on the red
/// sideband (Delta_2 = -Omega_m) in the weak-coupling regime:
///
///   Gamma_eff = (C_2 + 1) Gamma_m
///   n_eff = n_th / (C_2 + 1) + C_2/(C_2 + 1) * kappa_2^2 / (16 Omega_m^2)
///
/// The second term is the counter-rotating heating floor left by a sideband
/// cooler of linewidth kappa_2. Callers should warn when
/// `p.cooling_weakly_coupled()` is false.
pub fn effective_mechanics(p: &ThreeModeParams) -> EffectiveMechanics {
    let c2 = cooperativity2(p);
    let floor = p.kappa2 * p.kappa2 / (16.0 * p.base.omega_m * p.base.omega_m);
    EffectiveMechanics {
        gamma_eff: (c2 + 1.0) * p.base.gamma_m,
        n_eff: p.base.n_th / (c2 + 1.0) + c2 / (c2 + 1.0) * floor,
        instability_coop: c2 + 1.0,
    }
}

/// Drift matrix of the three-mode fluctuation system in the ordering
/// (da1, da1+, da2, da2+, db, db+).
pub fn drift_matrix6(p: &ThreeModeParams) -> ComplexMatrix {
    let b = &p.base;
    let g = Complex64::new(0.0, b.coupling);
    let g2 = Complex64::new(0.0, p.coupling2);
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(-0.5 * b.kappa, b.detuning), z, z, z, g, g],
        vec![z, Complex64::new(-0.5 * b.kappa, -b.detuning), z, z, -g, -g],
        vec![z, z, Complex64::new(-0.5 * p.kappa2, p.detuning2), z, g2, g2],
        vec![z, z, z, Complex64::new(-0.5 * p.kappa2, -p.detuning2), -g2, -g2],
        vec![g, g, g2, g2, Complex64::new(-0.5 * b.gamma_m, -b.omega_m), z],
        vec![-g, -g, -g2, -g2, z, Complex64::new(-0.5 * b.gamma_m, b.omega_m)],
    ])
}

/// L = Diag[sqrt(kappa), sqrt(kappa), sqrt(kappa_2), sqrt(kappa_2),
/// sqrt(Gamma_m), sqrt(Gamma_m)].
pub fn input_coupling6(p: &ThreeModeParams) -> Vec<Complex64> {
    let sk = Complex64::new(p.base.kappa.sqrt(), 0.0);
    let sk2 = Complex64::new(p.kappa2.sqrt(), 0.0);
    let sg = Complex64::new(p.base.gamma_m.sqrt(), 0.0);
    vec![sk, sk, sk2, sk2, sg, sg]
}

/// 6x6 scattering matrix U(omega) = 1 + L [i omega 1 + M]^-1 L.
pub fn scattering_matrix_6(omega: f64, p: &ThreeModeParams) -> Result<ComplexMatrix> {
    scattering_from_drift(omega, &drift_matrix6(p), &input_coupling6(p))
}

/// Row-wise bosonic commutator sum of a scattering matrix with alternating
/// (mode, conjugate) ordering: Sum_j sigma_j |U_ij|^2 with sigma = (+1, -1, ...).
/// Equals sigma_i for every row of a consistent solution.
pub fn commutator_row_sum(u: &ComplexMatrix, row: usize) -> f64 {
    (0..u.cols())
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * u[(row, j)].norm_sqr()
        })
        .sum()
}

/// Gain and input-referred added noise of the two-mode amplifier on a grid of
/// signal detunings. Mode 1 carries the signal; every other input channel
/// (its conjugate, both quadratures of mode 2, and the thermal mechanics) is
/// referred to the output and divided by the gain:
///
///   N = [ (n_th + 1/2)(|U15|^2 + |U16|^2)
///       + 1/2 (|U12|^2 + |U13|^2 + |U14|^2) ] / |U11|^2
///
/// Mode-2 noise is taken as vacuum (dilution-refrigerator microwave bath).
pub fn two_mode_gain_noise(
    grid: &[f64],
    p: &ThreeModeParams,
) -> Result<(ComplexSpectrum, ComplexSpectrum)> {
    let rows: Vec<Result<(f64, f64)>> = parallel::map_collect(grid, |&omega| {
        let u = scattering_matrix_6(omega, p)?;
        Ok(gain_noise_from_row(&u, p.base.n_th))
    });
    let mut gains = Vec::with_capacity(grid.len());
    let mut noises = Vec::with_capacity(grid.len());
    for r in rows {
        let (g, n) = r?;
        gains.push(Complex64::new(g.min(GAIN_CAP), 0.0));
        noises.push(Complex64::new(n, 0.0));
    }
    Ok((
        ComplexSpectrum::new(grid.to_vec(), gains, SpectrumKind::Gain2),
        ComplexSpectrum::new(grid.to_vec(), noises, SpectrumKind::Noise2),
    ))
}

fn gain_noise_from_row(u: &ComplexMatrix, n_th: f64) -> (f64, f64) {
    let gain = u[(0, 0)].norm_sqr();
    let thermal = (n_th + 0.5) * (u[(0, 4)].norm_sqr() + u[(0, 5)].norm_sqr());
    let vacuum = 0.5 * (u[(0, 1)].norm_sqr() + u[(0, 2)].norm_sqr() + u[(0, 3)].norm_sqr());
    (gain, (thermal + vacuum) / gain)
}

/// Build the backaction-cancellation configuration from a one-mode parameter
/// set: kappa_2 = kappa and G_2 = G with mode 2 on the red sideband, so the
/// two radiation-pressure backactions cancel (Gamma_eff = Gamma_m).
pub fn cancellation_params(base: &SystemParams) -> ThreeModeParams {
    ThreeModeParams {
        base: *base,
        kappa2: base.kappa,
        coupling2: base.coupling,
        detuning2: -base.omega_m,
    }
}

/// Gain and added noise in the cancellation configuration. Stable for any
/// coupling strength: there is no instability threshold to cross, and the
/// gain-bandwidth product grows with G instead of saturating at kappa.
pub fn cancellation_case(
    grid: &[f64],
    base: &SystemParams,
) -> Result<(ComplexSpectrum, ComplexSpectrum)> {
    two_mode_gain_noise(grid, &cancellation_params(base))
}

/// Strict stability of the linearized three-mode system.
pub fn is_stable(p: &ThreeModeParams) -> bool {
    stability::is_stable(&drift_matrix6(p))
}

/// Signal detuning of maximum gain near the mechanical sideband -Omega_m,
/// located numerically (coarse scan plus one refinement pass). Window spans
/// +-3 kappa around the sideband, wide enough for the spring shifts of both
/// pumps in the resolved-sideband limit.
pub fn two_mode_resonance(p: &ThreeModeParams) -> Result<f64> {
    let center = -p.base.omega_m;
    let kappa = p.base.kappa;
    let mut lo = center - 3.0 * kappa;
    let mut hi = center + 3.0 * kappa;
    let mut best = center;
    for _ in 0..3 {
        let grid = crate::spectrum::linear_grid(lo, hi, 1201);
        let (gain, _) = two_mode_gain_noise(&grid, p)?;
        let idx = gain.peak_index(false);
        best = grid[idx];
        let step = grid[1] - grid[0];
        lo = best - 2.0 * step;
        hi = best + 2.0 * step;
    }
    Ok(best)
}

/// Instability threshold of the two-mode system in terms of the mode-1
/// cooperativity (bare Gamma_m), found by bisection on G. Returns None when
/// the system stays stable all the way to `coop_max` (the cancellation case).
pub fn numeric_instability_coop(p: &ThreeModeParams, coop_max: f64) -> Option<f64> {
    let with_g = |g: f64| {
        let mut q = *p;
        q.base.coupling = g;
        q
    };
    let g_max = 0.5 * (coop_max * p.base.gamma_m * p.base.kappa).sqrt();
    if is_stable(&with_g(g_max)) {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, g_max);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if is_stable(&with_g(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(cooperativity(&with_g(0.5 * (lo + hi)).base))
}
