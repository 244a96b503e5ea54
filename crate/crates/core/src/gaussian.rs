//! Gaussian input modes and the time/frequency energy trade-off set by `κ`.
//!
//! All fractions refer to the ideal, untruncated Gaussian. Truncation to the
//! mode bin is handled numerically in [`crate::spectral`].

use std::f64::consts::{LN_2, PI};

use libm::erf;
use serde::{Deserialize, Serialize};

use crate::capacity::TEETH_PER_MODE;
use crate::error::{Checks, Result, Violation};
use crate::model::Validate;

/// Gaussian pulse with intensity `A² exp(−4 ln2 (t − t₀)² / T²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMode {
    pub fwhm_s: f64,
    pub center_s: f64,
    pub amplitude: f64,
}

impl GaussianMode {
    pub fn new(fwhm_s: f64) -> Self {
        Self {
            fwhm_s,
            center_s: 0.0,
            amplitude: 1.0,
        }
    }

    pub fn centered_at(mut self, center_s: f64) -> Self {
        self.center_s = center_s;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Field envelope. Its FWHM is `√2 T`.
    pub fn field(&self, t: f64) -> f64 {
        let x = (t - self.center_s) / self.fwhm_s;
        self.amplitude * (-2.0 * LN_2 * x * x).exp()
    }

    pub fn intensity(&self, t: f64) -> f64 {
        let f = self.field(t);
        f * f
    }

    /// Power spectrum of the untruncated pulse, normalised to 1 at f = 0.
    pub fn power_spectrum(&self, f: f64) -> f64 {
        let x = f * self.fwhm_s * PI;
        (-(x * x) / LN_2).exp()
    }

    pub fn spectral_fwhm_hz(&self) -> f64 {
        spectral_fwhm_unchecked(self.fwhm_s)
    }
}

impl Validate for GaussianMode {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.positive("fwhm_s", self.fwhm_s)
            .non_negative("amplitude", self.amplitude);
        c.into_violations()
    }
}

fn spectral_fwhm_unchecked(fwhm_s: f64) -> f64 {
    2.0 * LN_2 / (PI * fwhm_s)
}

/// FWHM of the power spectrum, `γ = 2 ln2 / (π T)`.
pub fn spectral_fwhm(fwhm_s: f64) -> Result<f64> {
    Checks::new().positive("fwhm_s", fwhm_s).finish()?;
    Ok(spectral_fwhm_unchecked(fwhm_s))
}

/// Fraction of pulse energy inside the mode bin `|t| ≤ κT/2`.
pub fn time_energy_fraction(kappa: f64) -> Result<f64> {
    Checks::new().positive("kappa", kappa).finish()?;
    Ok(erf(kappa * LN_2.sqrt()))
}

/// Ratio of comb bandwidth to spectral FWHM when `Γ = 2.5 / (κT)`.
pub fn bandwidth_ratio(kappa: f64) -> Result<f64> {
    Checks::new().positive("kappa", kappa).finish()?;
    Ok(TEETH_PER_MODE * PI / (2.0 * LN_2 * kappa))
}

/// Fraction of the power spectrum inside `|f| ≤ Γ/2`.
pub fn spectral_energy_fraction(kappa: f64) -> Result<f64> {
    Ok(erf(LN_2.sqrt() * bandwidth_ratio(kappa)?))
}

/// The `κ` at which time and spectral energy fractions coincide,
/// `√(2.5π / (2 ln2))`.
pub fn optimal_kappa() -> f64 {
    (TEETH_PER_MODE * PI / (2.0 * LN_2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    /// Composite Simpson rule on `[a, b]` with `n` (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + h * i as f64);
        }
        s * h / 3.0
    }

    fn quad_time_fraction(kappa: f64) -> f64 {
        let g = GaussianMode::new(1.0);
        let inside = simpson(|t| g.intensity(t), -kappa / 2.0, kappa / 2.0, 20_000);
        let total = simpson(|t| g.intensity(t), -20.0, 20.0, 200_000);
        inside / total
    }

    fn quad_spectral_fraction(kappa: f64) -> f64 {
        let g = GaussianMode::new(1.0);
        let half = 0.5 * TEETH_PER_MODE / kappa;
        let inside = simpson(|f| g.power_spectrum(f), -half, half, 20_000);
        let total = simpson(|f| g.power_spectrum(f), -20.0, 20.0, 200_000);
        inside / total
    }

    #[test]
    fn spectral_fwhm_examples() {
        assert!((spectral_fwhm(1e-6).unwrap() - 441.3e3).abs() < 0.1e3);
        assert!((spectral_fwhm(441.3e-9).unwrap() - 1e6).abs() < 1e3);
        for t in [1e-9, 3.7e-7, 2.0] {
            let p = spectral_fwhm(t).unwrap() * t;
            assert!((p - 2.0 * LN_2 / PI).abs() < 1e-15);
        }
        assert!(spectral_fwhm(0.0).is_err());
    }

    #[test]
    fn spectrum_half_power_at_half_fwhm() {
        let g = GaussianMode::new(410e-9);
        let half = 0.5 * g.spectral_fwhm_hz();
        assert!((g.power_spectrum(half) - 0.5).abs() < 1e-12);
        assert!((g.intensity(0.5 * 410e-9) - 0.5).abs() < 1e-12);
        assert!((g.field(0.5 * SQRT_2 * 410e-9) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn time_fraction_examples() {
        assert!((time_energy_fraction(2.0).unwrap() - 0.981).abs() < 5e-4);
        assert!((time_energy_fraction(2.0 * SQRT_2).unwrap() - 0.999).abs() < 5e-4);
        assert!((time_energy_fraction(2.38).unwrap() - 0.995).abs() < 5e-4);
    }

    #[test]
    fn bandwidth_ratio_examples() {
        assert!((bandwidth_ratio(2.0).unwrap() - 2.83).abs() < 5e-3);
        assert!((bandwidth_ratio(2.0 * SQRT_2).unwrap() - 2.0).abs() < 5e-3);
        let k = optimal_kappa();
        assert!((bandwidth_ratio(k).unwrap() - k).abs() < 1e-12);
    }

    #[test]
    fn spectral_fraction_examples() {
        assert!((spectral_energy_fraction(2.0).unwrap() - 0.999).abs() < 5e-4);
        assert!((spectral_energy_fraction(2.0 * SQRT_2).unwrap() - 0.98165).abs() < 5e-5);
        let k = optimal_kappa();
        let s = spectral_energy_fraction(k).unwrap();
        assert!((s - 0.995).abs() < 5e-4);
        assert!((s - time_energy_fraction(k).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn optimal_kappa_closed_form() {
        assert!((optimal_kappa() - 2.38).abs() < 1e-3);
        // bisection on the difference of the two fractions
        let diff = |k: f64| time_energy_fraction(k).unwrap() - spectral_energy_fraction(k).unwrap();
        let (mut lo, mut hi) = (1.0, 4.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if diff(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((0.5 * (lo + hi) - optimal_kappa()).abs() < 1e-6);
    }

    #[test]
    fn fractions_match_quadrature() {
        for kappa in [1.0, 2.0, 2.38, 2.0 * SQRT_2, 3.5] {
            let t = time_energy_fraction(kappa).unwrap();
            let s = spectral_energy_fraction(kappa).unwrap();
            assert!((t - quad_time_fraction(kappa)).abs() < 1e-9, "time κ={kappa}");
            assert!((s - quad_spectral_fraction(kappa)).abs() < 1e-9, "freq κ={kappa}");
        }
    }

    #[test]
    fn fractions_are_monotone() {
        let ks: Vec<f64> = (1..200).map(|i| 0.05 * i as f64).collect();
        for w in ks.windows(2) {
            assert!(time_energy_fraction(w[1]).unwrap() >= time_energy_fraction(w[0]).unwrap());
            assert!(spectral_energy_fraction(w[1]).unwrap() <= spectral_energy_fraction(w[0]).unwrap());
        }
        assert!(time_energy_fraction(10.0).unwrap() > 1.0 - 1e-15);
    }

    #[test]
    fn mode_validation() {
        assert!(GaussianMode::new(0.0).validate().is_err());
        assert!(GaussianMode::new(1e-6).with_amplitude(-1.0).validate().is_err());
        assert!(GaussianMode::new(1e-6).centered_at(3e-6).validate().is_ok());
    }
}
