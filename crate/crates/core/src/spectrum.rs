//! Frequency-domain result container and its CSV/JSON serializations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// What a spectrum's values mean. Real-valued kinds serialize as a single
/// `value` column, complex kinds as `re`/`im`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Gain,
    AddedNoise,
    SelfEnergy,
    Coefficient,
    /// Two-mode amplifier gain.
    Gain2,
    /// Two-mode added noise.
    Noise2,
    /// Power spectrum of a time series.
    Emission,
}

impl SpectrumKind {
    pub fn is_real(self) -> bool {
        matches!(
            self,
            SpectrumKind::Gain
                | SpectrumKind::AddedNoise
                | SpectrumKind::Gain2
                | SpectrumKind::Noise2
                | SpectrumKind::Emission
        )
    }
}

/// Values on a strictly increasing frequency grid. Frequencies are signal
/// detunings from the pump for linear-response spectra and rotating-frame
/// frequencies for emission spectra.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<Complex64>,
    pub kind: SpectrumKind,
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    omegas: Vec<f64>,
    values: Vec<[f64; 2]>,
    kind: SpectrumKind,
}

impl ComplexSpectrum {
    pub fn new(omegas: Vec<f64>, values: Vec<Complex64>, kind: SpectrumKind) -> Self {
        assert_eq!(omegas.len(), values.len(), "grid/value length mismatch");
        debug_assert!(omegas.windows(2).all(|w| w[0] < w[1]), "grid must be increasing");
        Self { omegas, values, kind }
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// CSV with header; columns `omega,value` for real kinds and
    /// `omega,re,im` otherwise. `fmt` renders one float (callers pin the
    /// formatting so identical runs are byte identical).
    pub fn to_csv(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::new();
        if self.kind.is_real() {
            out.push_str("omega,value\r\n");
            for (w, v) in self.omegas.iter().zip(&self.values) {
                out.push_str(&format!("{},{}\r\n", fmt(*w), fmt(v.re)));
            }
        } else {
            out.push_str("omega,re,im\r\n");
            for (w, v) in self.omegas.iter().zip(&self.values) {
                out.push_str(&format!("{},{},{}\r\n", fmt(*w), fmt(v.re), fmt(v.im)));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let j = SpectrumJson {
            omegas: self.omegas.clone(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
            kind: self.kind,
        };
        serde_json::to_string_pretty(&j).expect("spectrum serialization")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        let j: SpectrumJson = serde_json::from_str(s)
            .map_err(|e| crate::Error::InvalidParams(format!("spectrum JSON: {e}")))?;
        Ok(Self {
            omegas: j.omegas,
            values: j.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            kind: j.kind,
        })
    }

    /// Index of the maximum real value, skipping the DC bin if requested.
    pub fn peak_index(&self, skip_dc: bool) -> usize {
        let start = usize::from(skip_dc);
        let mut best = start;
        for i in start..self.values.len() {
            if self.values[i].re > self.values[best].re {
                best = i;
            }
        }
        best
    }
}

/// Uniform frequency grid with `n` points spanning `[lo, hi]` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && hi > lo, "need an increasing grid of at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_shape_follows_kind() {
        let s = ComplexSpectrum::new(
            vec![0.0, 1.0],
            vec![Complex64::new(1.0, 2.0), Complex64::new(3.0, 4.0)],
            SpectrumKind::SelfEnergy,
        );
        let csv = s.to_csv(|x| format!("{x}"));
        assert!(csv.starts_with("omega,re,im\r\n"));
        assert!(csv.contains("1,3,4"));

        let g = ComplexSpectrum::new(
            vec![0.0, 1.0],
            vec![Complex64::new(5.0, 0.0), Complex64::new(6.0, 0.0)],
            SpectrumKind::Gain,
        );
        let csv = g.to_csv(|x| format!("{x}"));
        assert!(csv.starts_with("omega,value\r\n"));
    }

    #[test]
    fn json_round_trip() {
        let s = ComplexSpectrum::new(
            vec![-1.0, 0.5],
            vec![Complex64::new(0.1, -0.2), Complex64::new(7.0, 0.0)],
            SpectrumKind::Coefficient,
        );
        let back = ComplexSpectrum::from_json(&s.to_json()).unwrap();
        assert_eq!(back.omegas, s.omegas);
        assert_eq!(back.values, s.values);
        assert_eq!(back.kind, s.kind);
    }
}
