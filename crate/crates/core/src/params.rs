//! Parameter model shared by all other modules.
//!
//! All rates and frequencies are stored as dimensionless multiples of a
//! user-chosen reference rate (by convention the cavity linewidth kappa,
//! unless a preset says otherwise). SI units enter only in [`crate::feasibility`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which detuning a [`SystemParams`] holds.
///
/// Linear-response work uses the shifted detuning (bare detuning plus the
/// static mechanical displacement), while the mean-field dynamics works with
/// the bare detuning and resolves the displacement self-consistently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DetuningConvention {
    #[default]
    Shifted,
    Bare,
}

/// One electromagnetic mode parametrically coupled to one mechanical mode.
///
/// `coupling` is the pump-enhanced coupling G = g0*|a_bar|, real and
/// nonnegative by phase gauge (the pump phase is absorbed into the
/// fluctuation operators; every formula downstream depends on G^2 only).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SystemParams {
    /// Cavity energy decay rate kappa.
    pub kappa: f64,
    /// Mechanical energy decay rate Gamma_m.
    pub gamma_m: f64,
    /// Mechanical frequency Omega_m.
    pub omega_m: f64,
    /// Single-photon optomechanical coupling g0.
    pub g0: f64,
    /// Detuning between drive and cavity (see `detuning_convention`).
    pub detuning: f64,
    /// Enhanced coupling G >= 0.
    pub coupling: f64,
    /// Thermal phonon occupancy of the mechanical bath.
    pub n_th: f64,
    #[serde(default)]
    pub detuning_convention: DetuningConvention,
}

impl SystemParams {
    pub fn new(
        kappa: f64,
        gamma_m: f64,
        omega_m: f64,
        g0: f64,
        detuning: f64,
        coupling: f64,
        n_th: f64,
    ) -> Result<Self> {
        let p = Self {
            kappa,
            gamma_m,
            omega_m,
            g0,
            detuning,
            coupling,
            n_th,
            detuning_convention: DetuningConvention::Shifted,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa", self.kappa),
            ("gamma_m", self.gamma_m),
            ("omega_m", self.omega_m),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        for (name, v) in [("g0", self.g0), ("coupling", self.coupling), ("n_th", self.n_th)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be nonnegative and finite, got {v}"
                )));
            }
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidParams("detuning must be finite".into()));
        }
        Ok(())
    }

    /// High mechanical quality factor check, Gamma_m << Omega_m.
    ///
    /// The damping model is only accurate in this limit; callers should warn
    /// (not reject) when it fails.
    pub fn high_q(&self) -> bool {
        self.gamma_m / self.omega_m < 0.2
    }

    pub fn with_detuning(mut self, detuning: f64, convention: DetuningConvention) -> Self {
        self.detuning = detuning;
        self.detuning_convention = convention;
        self
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }
}

/// Two electromagnetic modes coupled to one mechanical mode. `base` is the
/// low-dissipation amplifier mode; mode 2 is the auxiliary cooling mode.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThreeModeParams {
    pub base: SystemParams,
    /// Second-mode energy decay rate kappa_2.
    pub kappa2: f64,
    /// Second-mode enhanced coupling G_2 >= 0.
    pub coupling2: f64,
    /// Second-mode detuning Delta_2.
    pub detuning2: f64,
}

impl ThreeModeParams {
    pub fn new(base: SystemParams, kappa2: f64, coupling2: f64, detuning2: f64) -> Result<Self> {
        let p = Self { base, kappa2, coupling2, detuning2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.kappa2 > 0.0) || !self.kappa2.is_finite() {
            return Err(Error::InvalidParams(format!(
                "kappa2 must be strictly positive and finite, got {}",
                self.kappa2
            )));
        }
        if !(self.coupling2 >= 0.0) || !self.coupling2.is_finite() {
            return Err(Error::InvalidParams(format!(
                "coupling2 must be nonnegative and finite, got {}",
                self.coupling2
            )));
        }
        if !self.detuning2.is_finite() {
            return Err(Error::InvalidParams("detuning2 must be finite".into()));
        }
        Ok(())
    }

    /// Weak-coupling check for the cooling mode, G_2 << kappa_2
    /// (operationalized as G_2 < kappa_2 / 4). Warn, do not reject.
    pub fn cooling_weakly_coupled(&self) -> bool {
        self.coupling2 < 0.25 * self.kappa2
    }
}

/// Dissipation hierarchy of a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeKind {
    /// Normal dissipation regime, kappa >> Gamma_m.
    Ndr,
    /// Reversed dissipation regime, Gamma_m >> kappa.
    Rdr,
    Intermediate,
}

/// Classification outcome together with the ratio Gamma_m/kappa that
/// produced it.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegimeClass {
    pub kind: RegimeKind,
    pub ratio: f64,
}

/// Cooperativity C = 4 G^2 / (Gamma_m kappa).
pub fn cooperativity(p: &SystemParams) -> f64 {
    4.0 * p.coupling * p.coupling / (p.gamma_m * p.kappa)
}

/// Cooperativity of the cooling mode, C_2 = 4 G_2^2 / (kappa_2 Gamma_m).
pub fn cooperativity2(p: &ThreeModeParams) -> f64 {
    4.0 * p.coupling2 * p.coupling2 / (p.kappa2 * p.base.gamma_m)
}

/// Classify the dissipation hierarchy by the ratio Gamma_m/kappa.
///
/// RDR iff the ratio exceeds `threshold_ratio`, NDR iff it is below its
/// reciprocal. The threshold is a convention (the hierarchy is only ever
/// stated as "much larger"); 5 is the project default.
pub fn classify_regime(p: &SystemParams, threshold_ratio: f64) -> RegimeClass {
    assert!(threshold_ratio > 1.0, "threshold_ratio must exceed 1");
    let ratio = p.gamma_m / p.kappa;
    let kind = if ratio > threshold_ratio {
        RegimeKind::Rdr
    } else if ratio < 1.0 / threshold_ratio {
        RegimeKind::Ndr
    } else {
        RegimeKind::Intermediate
    };
    RegimeClass { kind, ratio }
}

pub const DEFAULT_REGIME_THRESHOLD: f64 = 5.0;

/// JSON parameter file. All numbers are in units of the reference rate named
/// by `unit_ref`; the optional mode-2 fields promote the set to
/// [`ThreeModeParams`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsFile {
    #[serde(default = "default_unit_ref")]
    pub unit_ref: String,
    pub kappa: f64,
    pub gamma_m: f64,
    pub omega_m: f64,
    pub g0: f64,
    pub detuning: f64,
    pub coupling: f64,
    pub n_th: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning2: Option<f64>,
}

fn default_unit_ref() -> String {
    "kappa".into()
}

impl ParamsFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParams(format!("parameter JSON: {e}")))
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        SystemParams::new(
            self.kappa,
            self.gamma_m,
            self.omega_m,
            self.g0,
            self.detuning,
            self.coupling,
            self.n_th,
        )
    }

    /// Three-mode parameters; requires kappa2 and coupling2 to be present
    /// (detuning2 defaults to the red sideband -Omega_m).
    pub fn three_mode_params(&self) -> Result<ThreeModeParams> {
        let base = self.system_params()?;
        let kappa2 = self
            .kappa2
            .ok_or_else(|| Error::InvalidParams("kappa2 missing for three-mode setup".into()))?;
        let coupling2 = self
            .coupling2
            .ok_or_else(|| Error::InvalidParams("coupling2 missing for three-mode setup".into()))?;
        let detuning2 = self.detuning2.unwrap_or(-self.omega_m);
        ThreeModeParams::new(base, kappa2, coupling2, detuning2)
    }
}

impl From<&SystemParams> for ParamsFile {
    fn from(p: &SystemParams) -> Self {
        ParamsFile {
            unit_ref: default_unit_ref(),
            kappa: p.kappa,
            gamma_m: p.gamma_m,
            omega_m: p.omega_m,
            g0: p.g0,
            detuning: p.detuning,
            coupling: p.coupling,
            n_th: p.n_th,
            kappa2: None,
            coupling2: None,
            detuning2: None,
        }
    }
}

impl From<&ThreeModeParams> for ParamsFile {
    fn from(p: &ThreeModeParams) -> Self {
        let mut f = ParamsFile::from(&p.base);
        f.kappa2 = Some(p.kappa2);
        f.coupling2 = Some(p.coupling2);
        f.detuning2 = Some(p.detuning2);
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(kappa: f64, gamma_m: f64, coupling: f64) -> SystemParams {
        SystemParams::new(kappa, gamma_m, 50.0 * kappa, 0.0, kappa, coupling, 0.0).unwrap()
    }

    #[test]
    fn rejects_nonpositive_rates() {
        assert!(SystemParams::new(0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, 0.0, 0.0, -0.5, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0, -1.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, f64::NAN, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn high_q_flag() {
        assert!(params(1.0, 1.0, 0.0).high_q()); // Gamma_m/Omega_m = 0.02
        let low_q = SystemParams::new(1.0, 30.0, 50.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(!low_q.high_q());
    }

    #[test]
    fn cooperativity_examples() {
        // zero coupling
        assert_eq!(cooperativity(&params(1.0, 4.0, 0.0)), 0.0);
        // G = kappa, Gamma_m = 4 kappa -> C = 1
        assert_relative_eq!(cooperativity(&params(1.0, 4.0, 1.0)), 1.0);
        // Gamma_m/kappa = 10, G/kappa = sqrt(2) -> C = 4*2/10 = 0.8
        assert_relative_eq!(
            cooperativity(&params(1.0, 10.0, std::f64::consts::SQRT_2)),
            0.8,
            max_relative = 1e-15
        );
    }

    #[test]
    fn cooperativity2_examples() {
        let base = params(1.0, 4.0, 0.0);
        let p = ThreeModeParams::new(base, 16.0, 0.0, -50.0).unwrap();
        assert_eq!(cooperativity2(&p), 0.0);
        // kappa2 = 4 Gamma_m, G2 = Gamma_m -> C2 = 1
        let p = ThreeModeParams::new(base, 16.0, 4.0, -50.0).unwrap();
        assert_relative_eq!(cooperativity2(&p), 1.0);
        // kappa2 = 5 kappa, Gamma_m = 0.1 kappa, G2 = 0.3 kappa -> C2 = 0.72
        let base = params(1.0, 0.1, 0.0);
        let p = ThreeModeParams::new(base, 5.0, 0.3, -50.0).unwrap();
        assert_relative_eq!(cooperativity2(&p), 0.72, max_relative = 1e-12);
    }

    #[test]
    fn regime_classification() {
        assert_eq!(classify_regime(&params(1.0, 10.0, 0.0), 5.0).kind, RegimeKind::Rdr);
        assert_eq!(classify_regime(&params(1.0, 0.1, 0.0), 5.0).kind, RegimeKind::Ndr);
        assert_eq!(
            classify_regime(&params(1.0, 2.0, 0.0), 5.0).kind,
            RegimeKind::Intermediate
        );
    }

    #[test]
    fn params_json_round_trip() {
        let file = ParamsFile::from_json(
            r#"{"unit_ref":"kappa","kappa":1.0,"gamma_m":10.0,"omega_m":50.0,
                "g0":0.0,"detuning":50.0,"coupling":1.4,"n_th":0.5,
                "kappa2":5.0,"coupling2":0.3}"#,
        )
        .unwrap();
        let p3 = file.three_mode_params().unwrap();
        assert_eq!(p3.detuning2, -50.0); // red-sideband default
        let back = ParamsFile::from(&p3);
        let s = serde_json::to_string(&back).unwrap();
        let file2 = ParamsFile::from_json(&s).unwrap();
        assert_eq!(file2.kappa2, Some(5.0));
        assert_eq!(file2.coupling, 1.4);
    }

    proptest! {
        // Cooperativity is scale free: exact under power-of-two rescaling of
        // all rates (floating-point multiplication by 2^k is exact).
        #[test]
        fn cooperativity_scale_invariant(k in -20i32..20, g in 0.0f64..4.0) {
            let lambda = (2.0f64).powi(k);
            let p = params(1.0, 10.0, g);
            let scaled = SystemParams::new(
                p.kappa * lambda, p.gamma_m * lambda, p.omega_m * lambda,
                p.g0 * lambda, p.detuning * lambda, p.coupling * lambda, p.n_th,
            ).unwrap();
            prop_assert_eq!(cooperativity(&p), cooperativity(&scaled));
        }

        #[test]
        fn classification_scale_invariant(k in -20i32..20, ratio in 0.01f64..100.0) {
            let lambda = (2.0f64).powi(k);
            let p = params(1.0, ratio, 0.0);
            let scaled = params(lambda, ratio * lambda, 0.0);
            prop_assert_eq!(
                classify_regime(&p, 5.0).kind,
                classify_regime(&scaled, 5.0).kind
            );
        }
    }
}
