//! Feasibility calculator for superconducting electromechanical
//! implementations: pump powers and intracavity photon numbers needed to
//! (a) broaden the mechanical linewidth by sideband cooling until it exceeds
//! the amplifier-mode linewidth, and (b) pump the amplifier mode up to the
//! parametric-instability threshold.
//!
//! This is the only module that touches SI units. Device files store ordinary
//! frequencies in Hz (fields carry the `_hz` suffix); all internal math is in
//! angular units. Mixing the two is the classic feasibility-calculator bug,
//! so the conversion happens in exactly one place.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant over 2 pi [J s], 6 significant figures.
pub const HBAR: f64 = 1.05457e-34;
/// Boltzmann constant [J/K], 6 significant figures.
pub const K_B: f64 = 1.38065e-23;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A superconducting optomechanical device. Frequencies are ordinary (Hz);
/// the cooling mode is specified relative to the amplifier mode through
/// `kappa2_ratio`, and the cooling target through `gamma_eff_target_ratio`
/// (both scenario choices rather than device properties).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviceParams {
    pub name: String,
    /// Cavity resonance frequency [Hz]. The cooling mode is assumed
    /// degenerate with it for power estimates.
    pub omega_c_hz: f64,
    /// Amplifier-mode linewidth [Hz].
    pub kappa_hz: f64,
    /// Mechanical frequency [Hz].
    pub omega_m_hz: f64,
    /// Bare mechanical linewidth [Hz].
    pub gamma_m_hz: f64,
    /// Vacuum optomechanical coupling [Hz].
    pub g0_hz: f64,
    /// kappa_2 / kappa.
    #[serde(default = "default_kappa2_ratio")]
    pub kappa2_ratio: f64,
    /// Cooling target Gamma_eff / kappa.
    #[serde(default = "default_gamma_eff_ratio")]
    pub gamma_eff_target_ratio: f64,
    /// Bath temperature [K], needed only for the ground-state check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
}

fn default_kappa2_ratio() -> f64 {
    20.0
}

fn default_gamma_eff_ratio() -> f64 {
    10.0
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_c_hz", self.omega_c_hz),
            ("kappa_hz", self.kappa_hz),
            ("omega_m_hz", self.omega_m_hz),
            ("gamma_m_hz", self.gamma_m_hz),
            ("g0_hz", self.g0_hz),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("kappa2_ratio", self.kappa2_ratio),
            ("gamma_eff_target_ratio", self.gamma_eff_target_ratio),
        ] {
            if !(v > 1.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must exceed 1, got {v}")));
            }
        }
        Ok(())
    }

    /// Resolved-sideband sanity for the cooling mode, kappa_2 < Omega_m.
    /// Warn, do not reject.
    pub fn resolved_sideband(&self) -> bool {
        self.kappa2_ratio * self.kappa_hz < self.omega_m_hz
    }

    fn gamma_eff(&self) -> f64 {
        // angular
        self.gamma_eff_target_ratio * TWO_PI * self.kappa_hz
    }
}

/// Pump power and intracavity photon number for one tone.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PumpBudget {
    pub power_w: f64,
    pub photons: f64,
}

/// Power launched on the lower sideband of the cooling mode to broaden the
/// mechanics to the target Gamma_eff = 4 g0^2 n_p2 / kappa_2:
///
///   P_in_2 = hbar omega_R2 Gamma_eff Omega_m^2 / g0^2,
///   n_p2  = Gamma_eff kappa_2 / (4 g0^2).
pub fn cooling_pump_power(d: &DeviceParams) -> PumpBudget {
    let omega_r2 = TWO_PI * d.omega_c_hz; // omega_R2 ~ omega_R
    let omega_m = TWO_PI * d.omega_m_hz;
    let g0 = TWO_PI * d.g0_hz;
    let kappa2 = d.kappa2_ratio * TWO_PI * d.kappa_hz;
    let gamma_eff = d.gamma_eff();
    PumpBudget {
        power_w: HBAR * omega_r2 * gamma_eff * omega_m * omega_m / (g0 * g0),
        photons: gamma_eff * kappa2 / (4.0 * g0 * g0),
    }
}

/// Power on the upper sideband of the amplifier mode at the self-oscillation
/// threshold 4 g0^2 n_p / (kappa Gamma_eff) = 1:
///
///   P_in = hbar omega_R Gamma_eff Omega_m^2 / g0^2,
///   n_p = kappa Gamma_eff / (4 g0^2).
///
/// Identical power formula as the cooling tone (same resonance frequency
/// assumed), so P_in = P_in_2 exactly.
pub fn amplifier_pump_power(d: &DeviceParams) -> PumpBudget {
    let omega_r = TWO_PI * d.omega_c_hz;
    let omega_m = TWO_PI * d.omega_m_hz;
    let g0 = TWO_PI * d.g0_hz;
    let kappa = TWO_PI * d.kappa_hz;
    let gamma_eff = d.gamma_eff();
    PumpBudget {
        power_w: HBAR * omega_r * gamma_eff * omega_m * omega_m / (g0 * g0),
        photons: kappa * gamma_eff / (4.0 * g0 * g0),
    }
}

/// Ground-state cooling viability at the device temperature.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroundStateReport {
    /// Thermal phonon occupancy k_B T / (hbar Omega_m).
    pub n_m: f64,
    /// Target effective linewidth [rad/s].
    pub gamma_eff: f64,
    /// Thermal decoherence rate Gamma_m n_m [rad/s].
    pub decoherence_rate: f64,
    /// Gamma_eff > 10 Gamma_m n_m: cooling beats rethermalization with an
    /// order of magnitude to spare, so the amplifier stays quantum limited.
    pub pass: bool,
}

pub fn ground_state_check(d: &DeviceParams) -> Result<GroundStateReport> {
    let t = d.temperature_k.ok_or(Error::MissingTemperature)?;
    let omega_m = TWO_PI * d.omega_m_hz;
    let n_m = K_B * t / (HBAR * omega_m);
    let gamma_eff = d.gamma_eff();
    let decoherence_rate = TWO_PI * d.gamma_m_hz * n_m;
    Ok(GroundStateReport { n_m, gamma_eff, decoherence_rate, pass: gamma_eff > 10.0 * decoherence_rate })
}

/// One evaluated device row.
#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityRow {
    pub device: DeviceParams,
    pub n_p: f64,
    pub n_p2: f64,
    pub p_in_w: f64,
    pub p_in_2_w: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_state: Option<GroundStateReport>,
}

/// Evaluate the pump budgets (and, where a temperature is given, the
/// ground-state check) for each device.
pub fn feasibility_table(devices: &[DeviceParams]) -> Result<Vec<FeasibilityRow>> {
    if devices.is_empty() {
        return Err(Error::InvalidParams("empty device list".into()));
    }
    devices
        .iter()
        .map(|d| {
            d.validate()?;
            let cooling = cooling_pump_power(d);
            let amp = amplifier_pump_power(d);
            let ground_state = match d.temperature_k {
                Some(_) => Some(ground_state_check(d)?),
                None => None,
            };
            Ok(FeasibilityRow {
                device: d.clone(),
                n_p: amp.photons,
                n_p2: cooling.photons,
                p_in_w: amp.power_w,
                p_in_2_w: cooling.power_w,
                ground_state,
            })
        })
        .collect()
}

/// Aluminium drum-mode electromechanics (measured device).
pub fn teufel_device() -> DeviceParams {
    DeviceParams {
        name: "teufel".into(),
        omega_c_hz: 7.5e9,
        kappa_hz: 170e3,
        omega_m_hz: 10e6,
        gamma_m_hz: 30.0,
        g0_hz: 230.0,
        kappa2_ratio: default_kappa2_ratio(),
        gamma_eff_target_ratio: default_gamma_eff_ratio(),
        temperature_k: Some(0.02),
    }
}

/// Projected TiN high-Q coplanar device.
pub fn tin_device() -> DeviceParams {
    DeviceParams {
        name: "tin_proposed".into(),
        omega_c_hz: 7.5e9,
        kappa_hz: 10e3,
        omega_m_hz: 1e6,
        gamma_m_hz: 50.0,
        g0_hz: 100.0,
        kappa2_ratio: default_kappa2_ratio(),
        gamma_eff_target_ratio: default_gamma_eff_ratio(),
        temperature_k: Some(0.02),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn aluminium_row_reproduced() {
        let d = teufel_device();
        let cooling = cooling_pump_power(&d);
        let amp = amplifier_pump_power(&d);
        // published round numbers: 100 nW, n_p = 1.3e6, n_p2 = 2.6e7
        assert_relative_eq!(cooling.power_w, 100e-9, max_relative = 0.15);
        assert_relative_eq!(amp.photons, 1.3e6, max_relative = 0.15);
        assert_relative_eq!(cooling.photons, 2.6e7, max_relative = 0.15);
    }

    #[test]
    fn tin_row_reproduced() {
        let d = tin_device();
        let cooling = cooling_pump_power(&d);
        let amp = amplifier_pump_power(&d);
        assert_relative_eq!(cooling.power_w, 0.3e-9, max_relative = 0.15);
        assert_relative_eq!(amp.photons, 2.5e4, max_relative = 0.15);
        assert_relative_eq!(cooling.photons, 5e5, max_relative = 0.15);
    }

    #[test]
    fn quick_estimate_order_of_magnitude() {
        // g0/2pi ~ 100 Hz, kappa/2pi = 10 kHz, kappa_2/2pi = 200 kHz,
        // Gamma_eff = kappa_2/2: critical photon number of order 1e4
        let d = DeviceParams {
            name: "estimate".into(),
            omega_c_hz: 7.5e9,
            kappa_hz: 10e3,
            omega_m_hz: 1e6,
            gamma_m_hz: 50.0,
            g0_hz: 100.0,
            kappa2_ratio: 20.0,
            gamma_eff_target_ratio: 10.0, // = kappa_2 / (2 kappa)
            temperature_k: None,
        };
        let n_p = amplifier_pump_power(&d).photons;
        assert_relative_eq!(n_p, 2.5e4, max_relative = 1e-12);
    }

    #[test]
    fn powers_equal_when_modes_degenerate() {
        for d in [teufel_device(), tin_device()] {
            assert_eq!(cooling_pump_power(&d).power_w, amplifier_pump_power(&d).power_w);
        }
    }

    #[test]
    fn scaling_laws() {
        let base = teufel_device();
        let bump = |f: &dyn Fn(&mut DeviceParams)| {
            let mut d = base.clone();
            f(&mut d);
            d
        };
        // P ~ g0^-2
        let d = bump(&|d| d.g0_hz *= 2.0);
        assert_relative_eq!(
            cooling_pump_power(&d).power_w,
            cooling_pump_power(&base).power_w / 4.0,
            max_relative = 1e-12
        );
        // P ~ Omega_m^2
        let d = bump(&|d| d.omega_m_hz *= 2.0);
        assert_relative_eq!(
            amplifier_pump_power(&d).power_w,
            4.0 * amplifier_pump_power(&base).power_w,
            max_relative = 1e-12
        );
        // n_p ~ kappa Gamma_eff ~ kappa^2 at fixed target ratio
        let d = bump(&|d| d.kappa_hz *= 2.0);
        assert_relative_eq!(
            amplifier_pump_power(&d).photons,
            4.0 * amplifier_pump_power(&base).photons,
            max_relative = 1e-12
        );
    }

    #[test]
    fn ground_state_check_values() {
        // T = 20 mK, Omega_m/2pi = 10 MHz: n_m ~ 42
        let d = teufel_device();
        let report = ground_state_check(&d).unwrap();
        assert_relative_eq!(report.n_m, 41.7, max_relative = 0.01);
        assert!(report.pass); // 10 kappa = 2pi * 1.7 MHz >> 30 Hz * 42

        let mut cold = d.clone();
        cold.temperature_k = Some(0.0);
        let report = ground_state_check(&cold).unwrap();
        assert_eq!(report.n_m, 0.0);
        assert!(report.pass);

        let mut missing = teufel_device();
        missing.temperature_k = None;
        assert!(matches!(ground_state_check(&missing), Err(Error::MissingTemperature)));
    }

    #[test]
    fn table_rejects_empty_and_invalid() {
        assert!(feasibility_table(&[]).is_err());
        let mut bad = teufel_device();
        bad.g0_hz = 0.0;
        assert!(feasibility_table(&[bad]).is_err());
        let rows = feasibility_table(&[teufel_device(), tin_device()]).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].ground_state.as_ref().unwrap().pass);
    }
}
