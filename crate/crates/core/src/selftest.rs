//! Invariant suites runnable from the command line and from the acceptance
//! tests. Each check pits an implementation path against an independent one
//! (closed form vs numerical inversion, algebraic identity vs direct
//! evaluation), so a sign or convention slip anywhere in the frequency-domain
//! engine shows up here.
//!
//! All randomness is seeded; two runs produce identical verdicts.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linear_response::{
    self, backaction, backaction_lorentzian, coefficients_with_sigma, response_denominator,
    scattering_coefficients, scattering_matrix, self_energy, transition_rates,
};
use crate::numkernel::{self, ComplexMatrix};
use crate::params::{SystemParams, ThreeModeParams};
use crate::three_mode;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, detail: String) -> Self {
        Self { name: name.into(), passed: true, detail }
    }

    fn fail(name: &str, detail: String) -> Self {
        Self { name: name.into(), passed: false, detail }
    }

    fn from_worst(name: &str, worst: f64, tol: f64) -> Self {
        let detail = format!("worst {worst:.3e}, tolerance {tol:.1e}");
        if worst <= tol {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail)
        }
    }
}

fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

/// Draw a random stable one-mode parameter set. Detunings concentrate around
/// the sidebands where the physics happens; couplings stay below threshold.
fn random_stable_params(rng: &mut impl Rng) -> SystemParams {
    loop {
        let gamma_m = 10f64.powf(rng.gen_range(-1.0..1.5));
        let omega_m = rng.gen_range(5.0..100.0) * gamma_m.max(1.0);
        let detuning = rng.gen_range(-1.2..1.2) * omega_m;
        let coupling = rng.gen_range(0.0..0.95) * 0.5 * gamma_m.sqrt();
        let n_th = rng.gen_range(0.0..20.0);
        let p = SystemParams::new(1.0, gamma_m, omega_m, 0.0, detuning, coupling, n_th)
            .expect("sampled parameters are valid");
        if linear_response::is_stable(&p) {
            return p;
        }
    }
}

fn random_stable_three_mode(rng: &mut impl Rng) -> ThreeModeParams {
    loop {
        let gamma_m = 10f64.powf(rng.gen_range(-2.0..-0.5));
        let omega_m = rng.gen_range(30.0..100.0);
        let kappa2 = rng.gen_range(2.0..8.0);
        let coupling2 = rng.gen_range(0.0..0.4);
        let coupling = rng.gen_range(0.0..0.9) * 0.5 * gamma_m.sqrt();
        let base =
            SystemParams::new(1.0, gamma_m, omega_m, 0.0, omega_m, coupling, rng.gen_range(0.0..15.0))
                .expect("sampled parameters are valid");
        let p = ThreeModeParams::new(base, kappa2, coupling2, -omega_m)
            .expect("sampled parameters are valid");
        if three_mode::is_stable(&p) {
            return p;
        }
    }
}

/// Sigma[omega] = Sigma*[-omega] and N[omega] = N*[-omega] on random
/// parameter sets and frequencies.
pub fn check_symmetries() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = random_stable_params(&mut rng);
        for _ in 0..40 {
            let omega = rng.gen_range(-2.0..2.0) * p.omega_m;
            let sigma = self_energy(omega, &p);
            let sigma_m = self_energy(-omega, &p).conj();
            worst = worst.max((sigma - sigma_m).norm() / sigma.norm().max(1e-300));
            let n = response_denominator(omega, &p);
            let n_m = response_denominator(-omega, &p).conj();
            worst = worst.max((n - n_m).norm() / n.norm().max(1e-300));
        }
    }
    CheckResult::from_worst("self-energy and denominator reflection symmetry", worst, 1e-12)
}

/// The backaction through the self-energy against the explicit Lorentzian
/// route (1e-12), the golden-rule rate difference (1e-10), and the detuning
/// antisymmetry (1e-12).
pub fn check_backaction_consistency() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst_routes: f64 = 0.0;
    let mut worst_rates: f64 = 0.0;
    for _ in 0..200 {
        let p = random_stable_params(&mut rng);
        let ba = backaction(&p);
        let (kappa_om, delta_om) = backaction_lorentzian(&p);
        let scale = ba.kappa_om.abs().max(ba.delta_om.abs()).max(1e-300);
        worst_routes = worst_routes.max((ba.kappa_om - kappa_om).abs() / scale);
        worst_routes = worst_routes.max((ba.delta_om - delta_om).abs() / scale);

        let rates = transition_rates(&p);
        worst_rates =
            worst_rates.max((rates.gamma_down - rates.gamma_up - ba.kappa_om).abs() / scale);

        let mut flipped = p;
        flipped.detuning = -p.detuning;
        let ba_f = backaction(&flipped);
        worst_routes = worst_routes.max((ba.kappa_om + ba_f.kappa_om).abs() / scale);
    }
    let name = "backaction route agreement, rate difference, antisymmetry";
    let detail = format!("routes {worst_routes:.3e} (tol 1e-12), rates {worst_rates:.3e} (tol 1e-10)");
    if worst_routes <= 1e-12 && worst_rates <= 1e-10 {
        CheckResult::pass(name, detail)
    } else {
        CheckResult::fail(name, detail)
    }
}

/// Closed-form (A, B, C, D) against row 1 of the numerically inverted
/// U(omega): 50 random stable parameter sets, 100 frequencies each.
pub fn check_oracle_equivalence() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = random_stable_params(&mut rng);
        for _ in 0..100 {
            let omega = rng.gen_range(-2.0..2.0) * p.omega_m;
            let (Ok(u), Ok(row)) = (scattering_matrix(omega, &p), scattering_coefficients(omega, &p))
            else {
                continue; // an exact pole cannot occur for stable parameters
            };
            worst = worst.max(rel_err(row.a_coef, u[(0, 0)]));
            worst = worst.max(rel_err(row.b_coef, u[(0, 1)]));
            worst = worst.max(rel_err(row.c_coef, u[(0, 2)]));
            worst = worst.max(rel_err(row.d_coef, u[(0, 3)]));
        }
    }
    CheckResult::from_worst("closed-form coefficients vs inverted scattering matrix", worst, 1e-9)
}

/// |A|^2 - |B|^2 + |C|^2 - |D|^2 = 1 on random stable parameter sets, plus
/// the row-wise version for all six rows of the two-mode matrix.
pub fn check_commutator_preservation() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = random_stable_params(&mut rng);
        for _ in 0..40 {
            let omega = rng.gen_range(-2.0..2.0) * p.omega_m;
            if let Ok(row) = scattering_coefficients(omega, &p) {
                worst = worst.max((row.commutator_sum() - 1.0).abs());
            }
        }
    }
    for _ in 0..20 {
        let p = random_stable_three_mode(&mut rng);
        for _ in 0..20 {
            let omega = rng.gen_range(-2.0..2.0) * p.base.omega_m;
            if let Ok(u) = three_mode::scattering_matrix_6(omega, &p) {
                for row in 0..6 {
                    let want = if row % 2 == 0 { 1.0 } else { -1.0 };
                    worst = worst.max((three_mode::commutator_row_sum(&u, row) - want).abs());
                }
            }
        }
    }
    CheckResult::from_worst("bosonic commutator preservation (4x4 and 6x6)", worst, 1e-8)
}

/// The 6x6 matrix with the cooling tone off must contain the one-mode 4x4 in
/// rows/columns {1, 2, 5, 6}.
pub fn check_three_mode_reduction() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mut p = random_stable_three_mode(&mut rng);
        p.coupling2 = 0.0;
        for _ in 0..20 {
            let omega = rng.gen_range(-1.5..1.5) * p.base.omega_m;
            let (Ok(u6), Ok(u4)) = (
                three_mode::scattering_matrix_6(omega, &p),
                scattering_matrix(omega, &p.base),
            ) else {
                continue;
            };
            let map = [0usize, 1, 4, 5];
            for (i4, &i6) in map.iter().enumerate() {
                for (j4, &j6) in map.iter().enumerate() {
                    worst = worst.max(rel_err(u6[(i6, j6)], u4[(i4, j4)]));
                }
            }
        }
    }
    CheckResult::from_worst("two-mode matrix reduces to one-mode at G2 = 0", worst, 1e-10)
}

/// RK4 order, FFT Parseval, and linear-solve residual.
pub fn check_numerics() -> CheckResult {
    // RK4: halving dt shrinks the exponential-decay error by >= 12x
    let err = |dt: f64| {
        let series = numkernel::rk4_integrate(
            |_t, y, dy| dy[0] = -y[0],
            &[Complex64::new(1.0, 0.0)],
            (0.0, 1.0),
            dt,
        )
        .expect("smooth integration");
        (series[0].samples.last().unwrap().re - (-1.0f64).exp()).abs()
    };
    let ratio = err(2e-2) / err(1e-2);
    if ratio < 12.0 {
        return CheckResult::fail("numerics", format!("RK4 convergence ratio {ratio:.1} < 12"));
    }

    // Parseval with the Rect window
    let n = 1024;
    let dt = 0.01;
    let mut s = 0.42f64;
    let ts = numkernel::TimeSeries {
        t0: 0.0,
        dt,
        samples: (0..n)
            .map(|_| {
                s = (s * 871.3 + 0.19).fract();
                Complex64::new(2.0 * s - 1.0, 0.0)
            })
            .collect(),
    };
    let spec = numkernel::power_spectrum(&ts, numkernel::Window::Rect).expect("power of two");
    let time_power: f64 = ts.samples.iter().map(|v| v.re * v.re * dt).sum();
    let spec_power: f64 = spec.values.iter().map(|v| v.re * dt / n as f64).sum();
    let parseval = (time_power - spec_power).abs() / time_power;
    if parseval > 1e-9 {
        return CheckResult::fail("numerics", format!("Parseval defect {parseval:.2e}"));
    }

    // linear solve residual on a random 6x6 system
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mut m = ComplexMatrix::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                m[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let mut b = ComplexMatrix::zeros(6, 1);
        for i in 0..6 {
            b[(i, 0)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let Ok(x) = m.solve(&b) else { continue };
        let r = m.mul(&x);
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for i in 0..6 {
            num = num.max((r[(i, 0)] - b[(i, 0)]).norm());
            den = den.max(b[(i, 0)].norm());
        }
        worst = worst.max(num / den);
    }
    if worst > 1e-10 {
        return CheckResult::fail("numerics", format!("solve residual {worst:.2e}"));
    }

    CheckResult::pass(
        "numerics",
        format!("RK4 ratio {ratio:.0}, Parseval {parseval:.1e}, solve residual {worst:.1e}"),
    )
}

/// Commutator check with a deliberately corrupted self-energy sign. This
/// must FAIL: it demonstrates that the invariant suite catches the classic
/// transcription error.
pub fn check_commutator_with_corrupted_sigma() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = random_stable_params(&mut rng);
        for _ in 0..20 {
            let omega = rng.gen_range(-1.5..1.5) * p.omega_m;
            let sigma = -self_energy(omega, &p); // corrupted sign
            if let Ok(row) = coefficients_with_sigma(omega, &p, sigma) {
                worst = worst.max((row.commutator_sum() - 1.0).abs());
            }
        }
    }
    CheckResult::from_worst("commutator with corrupted self-energy sign", worst, 1e-8)
}

/// The full suite in deterministic order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_symmetries(),
        check_backaction_consistency(),
        check_oracle_equivalence(),
        check_commutator_preservation(),
        check_three_mode_reduction(),
        check_numerics(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_green() {
        for check in run_all() {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn corrupted_sigma_is_caught() {
        let check = check_commutator_with_corrupted_sigma();
        assert!(!check.passed, "mutation must violate the commutator invariant");
    }
}
