//! Closed-form temporal capacity and efficiency formulas.

use std::f64::consts::{LN_2, PI};

use crate::error::{Checks, Error, Result};
use crate::model::{CapacityReport, Warning};

/// Comb teeth consumed per temporal mode, i.e. `T_m = 2.5 / Γ`.
pub const TEETH_PER_MODE: f64 = 2.5;

/// Exponent `π² T_s Ω² / Γ` that guarantees ≥ 98 % adiabatic transfer.
pub const DEFAULT_TRANSFER_EXPONENT: f64 = 4.0;

/// Coefficient of `Γ² / Ω²` in the cut-off duration per unit χ: `4/π²`.
const CONTROL_COEFF: f64 = 4.0 / (PI * PI);

pub fn mode_bin_from_bandwidth(gamma_hz: f64) -> Result<f64> {
    Checks::new().positive("gamma_hz", gamma_hz).finish()?;
    Ok(TEETH_PER_MODE / gamma_hz)
}

/// Temporal capacity of a fixed-delay comb, `Γ · (1/Δ) / 2.5`.
pub fn fixed_delay_capacity(gamma_hz: f64, delay_s: f64) -> Result<CapacityReport> {
    Checks::new()
        .positive("gamma_hz", gamma_hz)
        .positive("delay_s", delay_s)
        .finish()?;
    Ok(CapacityReport::from_count(gamma_hz * delay_s / TEETH_PER_MODE))
}

/// Efficiency left after optical dephasing during the delay, relative to
/// zero delay: `exp(-4 · (1/Δ) / T₂)`.
pub fn t2_relative_efficiency(delay_s: f64, t2_s: f64) -> Result<f64> {
    Checks::new()
        .non_negative("delay_s", delay_s)
        .positive("t2_s", t2_s)
        .finish()?;
    Ok((-4.0 * delay_s / t2_s).exp())
}

/// Delay at which [`t2_relative_efficiency`] equals `eta`.
pub fn delay_for_efficiency(eta: f64, t2_s: f64) -> Result<f64> {
    Checks::new().open_unit("eta", eta).positive("t2_s", t2_s).finish()?;
    Ok(0.25 * t2_s * (1.0 / eta).ln())
}

/// Fixed-delay capacity at a target T₂-limited efficiency:
/// `ln(1/η) · Γ · T₂ / 10`.
pub fn fixed_delay_capacity_at_efficiency(eta: f64, t2_s: f64, gamma_hz: f64) -> Result<CapacityReport> {
    Checks::new()
        .open_unit("eta", eta)
        .positive("t2_s", t2_s)
        .positive("gamma_hz", gamma_hz)
        .finish()?;
    let n = (1.0 / eta).ln() * gamma_hz * t2_s / (4.0 * TEETH_PER_MODE);
    let mut report = CapacityReport::from_count(n);
    report.relative_efficiency = eta;
    Ok(report)
}

/// `Some` when `Γ ≤ Ω`, where the adiabatic transfer model does not apply.
pub fn adiabatic_warning(omega_hz: f64, gamma_hz: f64) -> Option<Warning> {
    (gamma_hz <= omega_hz).then_some(Warning::AdiabaticRegimeViolated { omega_hz, gamma_hz })
}

/// Population transfer of an HSH pulse chirped over `Γ`:
/// `1 − exp(−π² T_s Ω² / Γ)`. Sech edges are not counted.
///
/// Valid for `Γ > Ω`; see [`adiabatic_warning`].
pub fn hsh_transfer_efficiency(ts_s: f64, omega_hz: f64, gamma_hz: f64) -> Result<f64> {
    Checks::new()
        .non_negative("ts_s", ts_s)
        .positive("omega_hz", omega_hz)
        .positive("gamma_hz", gamma_hz)
        .finish()?;
    Ok(-(-PI * PI * ts_s * omega_hz * omega_hz / gamma_hz).exp_m1())
}

/// Square duration that sets the transfer exponent, `T_s = a Γ / (π² Ω²)`.
pub fn hsh_square_duration(omega_hz: f64, gamma_hz: f64, exponent: f64) -> Result<f64> {
    Checks::new()
        .positive("omega_hz", omega_hz)
        .positive("gamma_hz", gamma_hz)
        .non_negative("exponent", exponent)
        .finish()?;
    Ok(exponent * gamma_hz / (PI * PI * omega_hz * omega_hz))
}

fn control_term(gamma_hz: f64, omega_hz: f64, chi: f64) -> f64 {
    chi * CONTROL_COEFF * (gamma_hz / omega_hz).powi(2) / TEETH_PER_MODE
}

fn spin_wave_report(bandwidth_term: f64, gamma_hz: f64, omega_hz: f64, chi: f64) -> CapacityReport {
    let mut report = CapacityReport::from_terms(bandwidth_term, control_term(gamma_hz, omega_hz, chi), 1.0);
    if let Some(w) = adiabatic_warning(omega_hz, gamma_hz) {
        report.warnings.push(w);
    }
    report
}

/// Spin-wave capacity with HSH control pulses sized at exponent 4:
/// `(Γ/Δ − χ (4/π²) Γ²/Ω²) / 2.5`.
pub fn spin_wave_capacity(gamma_hz: f64, delay_s: f64, omega_hz: f64, chi: f64) -> Result<CapacityReport> {
    Checks::new()
        .positive("gamma_hz", gamma_hz)
        .positive("delay_s", delay_s)
        .positive("omega_hz", omega_hz)
        .positive("chi", chi)
        .finish()?;
    Ok(spin_wave_report(
        gamma_hz * delay_s / TEETH_PER_MODE,
        gamma_hz,
        omega_hz,
        chi,
    ))
}

/// Spin-wave capacity from explicit durations, `(1/Δ − T_c) / T_m`.
pub fn spin_wave_capacity_explicit(delay_s: f64, tc_s: f64, tm_s: f64) -> Result<CapacityReport> {
    Checks::new()
        .positive("delay_s", delay_s)
        .non_negative("tc_s", tc_s)
        .positive("tm_s", tm_s)
        .finish()?;
    if tc_s >= delay_s {
        return Err(Error::ControlPulseDominates {
            cutoff_s: tc_s,
            delay_s,
        });
    }
    Ok(CapacityReport::from_terms(delay_s / tm_s, tc_s / tm_s, 1.0))
}

/// Spin-wave capacity at a target T₂-limited efficiency:
/// `(ln(1/η) Γ T₂ / 4 − χ (4/π²) Γ²/Ω²) / 2.5`.
pub fn spin_wave_capacity_at_efficiency(
    eta: f64,
    t2_s: f64,
    gamma_hz: f64,
    omega_hz: f64,
    chi: f64,
) -> Result<CapacityReport> {
    Checks::new()
        .open_unit("eta", eta)
        .positive("t2_s", t2_s)
        .positive("gamma_hz", gamma_hz)
        .positive("omega_hz", omega_hz)
        .positive("chi", chi)
        .finish()?;
    let bandwidth_term = (1.0 / eta).ln() * gamma_hz * t2_s / 4.0 / TEETH_PER_MODE;
    let mut report = spin_wave_report(bandwidth_term, gamma_hz, omega_hz, chi);
    report.relative_efficiency = eta;
    Ok(report)
}

/// Spin-wave efficiency after `T_spin` relative to zero storage, for a
/// Gaussian spin inhomogeneous line of FWHM `γ_spin`.
pub fn spin_dephasing_factor(t_spin_s: f64, gamma_spin_hz: f64) -> Result<f64> {
    Checks::new()
        .non_negative("t_spin_s", t_spin_s)
        .positive("gamma_spin_hz", gamma_spin_hz)
        .finish()?;
    let x = PI * t_spin_s * gamma_spin_hz;
    Ok((-(x * x) / (2.0 * LN_2)).exp())
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Backward-retrieval echo efficiency of a square-tooth comb with peak
/// optical depth `d` and finesse `F`: `(1 − e^{−d/F})² sinc²(π/F)`.
pub fn afc_echo_efficiency(od: f64, finesse: f64) -> Result<f64> {
    Checks::new()
        .non_negative("od", od)
        .at_least("finesse", finesse, 1.0)
        .finish()?;
    let absorbed = -(-od / finesse).exp_m1();
    let s = sinc(PI / finesse);
    Ok(absorbed * absorbed * s * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn mode_bin_examples() {
        assert!(close(mode_bin_from_bandwidth(5e6).unwrap(), 500e-9, 1e-21));
        assert!(close(mode_bin_from_bandwidth(4e6).unwrap(), 625e-9, 1e-21));
        assert_eq!(mode_bin_from_bandwidth(2.5).unwrap(), 1.0);
        assert!(mode_bin_from_bandwidth(0.0).is_err());
    }

    #[test]
    fn fixed_delay_examples() {
        let r = fixed_delay_capacity(4e6, 25e-6).unwrap();
        assert_eq!(r.n_continuous, 40.0);
        assert_eq!(r.n_floor, 40);
        assert_eq!(r.control_term, 0.0);
        assert_eq!(r.bandwidth_term, r.n_continuous);

        let r = fixed_delay_capacity(5e6, 50.7e-6).unwrap();
        assert!(close(r.n_continuous, 101.4, 1e-9));
        assert_eq!(r.n_floor, 101);

        for gamma in [1.0, 3.3e6, 7e9] {
            assert_eq!(fixed_delay_capacity(gamma, 2.5 / gamma).unwrap().n_floor, 1);
        }
        assert!(fixed_delay_capacity(-1.0, 1.0).is_err());
    }

    #[test]
    fn t2_efficiency_examples() {
        assert!(close(t2_relative_efficiency(50e-6, 250e-6).unwrap(), 0.449, 5e-4));
        assert!(close(t2_relative_efficiency(25e-6, 92e-6).unwrap(), 0.337, 5e-4));
        assert_eq!(t2_relative_efficiency(0.0, 1e-3).unwrap(), 1.0);
        assert!(t2_relative_efficiency(1.0, 0.0).is_err());
    }

    #[test]
    fn delay_for_efficiency_examples() {
        let eta = t2_relative_efficiency(50e-6, 250e-6).unwrap();
        assert!(close(delay_for_efficiency(eta, 250e-6).unwrap(), 50e-6, 1e-15));
        let t2 = 123e-6;
        assert!(close(delay_for_efficiency((-4.0f64).exp(), t2).unwrap(), t2, 1e-18));
        assert!(close(delay_for_efficiency(0.9, 250e-6).unwrap(), 6.585e-6, 1e-9));
        assert!(delay_for_efficiency(1.0, 1.0).is_err());
        assert!(delay_for_efficiency(0.0, 1.0).is_err());
    }

    #[test]
    fn eq4_examples() {
        let r = fixed_delay_capacity_at_efficiency(0.9, 250e-6, 5e6).unwrap();
        assert!(close(r.n_continuous, 13.2, 0.05));
        assert_eq!(r.reported(), 13);
        assert_eq!(r.relative_efficiency, 0.9);

        let r = fixed_delay_capacity_at_efficiency(0.8, 250e-6, 5e6).unwrap();
        assert!(close(r.n_continuous, 27.9, 0.05));
        assert_eq!(r.n_floor, 27);
        assert_eq!(r.reported(), 28);

        // fraction of the time-bandwidth product usable at eta = 0.9
        let r = fixed_delay_capacity_at_efficiency(0.9, 1.0, 1.0).unwrap();
        assert!(close(r.n_continuous, 0.0105, 5e-5));
    }

    #[test]
    fn hsh_examples() {
        // exponent pinned to 4 -> 1 - e^-4
        let omega = 230e3;
        let gamma = 1.5e6;
        let ts = hsh_square_duration(omega, gamma, 4.0).unwrap();
        assert!(close(
            hsh_transfer_efficiency(ts, omega, gamma).unwrap(),
            0.981_684,
            1e-6
        ));
        assert_eq!(hsh_transfer_efficiency(0.0, omega, gamma).unwrap(), 0.0);
        assert!(close(
            hsh_transfer_efficiency(11.5e-6, 230e3, 1.5e6).unwrap(),
            0.982,
            1e-3
        ));

        assert!(close(ts, 11.5e-6, 0.05e-6));
        assert!(close(1.36 * ts, 15.6e-6, 0.05e-6));
        assert_eq!(hsh_square_duration(omega, gamma, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn adiabatic_regime_warning() {
        assert!(adiabatic_warning(230e3, 1.5e6).is_none());
        assert!(adiabatic_warning(2e6, 1.5e6).is_some());
        let r = spin_wave_capacity(1e6, 100e-6, 2e6, 1.36).unwrap();
        assert!(r.warnings.iter().any(|w| w.name() == "adiabatic_regime_violated"));
    }

    #[test]
    fn spin_wave_examples() {
        let r = spin_wave_capacity(1.5e6, 25e-6, 230e3, 1.36).unwrap();
        assert!(close(r.n_continuous, 5.62, 0.005));
        assert!(close(r.bandwidth_term, 15.0, 1e-12));
        assert!(close(r.bandwidth_term - r.control_term, r.n_continuous, 1e-12));
        let r = spin_wave_capacity(1.5e6, 25e-6, 250e3, 1.36).unwrap();
        assert!(close(r.n_continuous, 7.06, 0.005));
        let r = spin_wave_capacity(4e6, 25e-6, 410e3, 1.36).unwrap();
        assert!(close(r.n_continuous, 19.0, 0.02));
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn spin_wave_clamps_when_control_dominates() {
        let r = spin_wave_capacity(5e6, 10e-6, 100e3, 1.36).unwrap();
        assert_eq!(r.n_continuous, 0.0);
        assert_eq!(r.warnings[0].name(), "control_pulse_dominates");
    }

    #[test]
    fn explicit_examples() {
        let r = spin_wave_capacity_explicit(41e-6, 14e-6, 0.5e-6).unwrap();
        assert_eq!((r.n_continuous, r.n_floor), (54.0, 54));
        let r = spin_wave_capacity_explicit(25e-6, 5e-6, 0.625e-6).unwrap();
        assert_eq!((r.n_continuous, r.n_floor), (32.0, 32));
        let r = spin_wave_capacity_explicit(25e-6, 0.0, 0.625e-6).unwrap();
        assert_eq!(r.n_continuous, fixed_delay_capacity(4e6, 25e-6).unwrap().n_continuous);
        assert!(matches!(
            spin_wave_capacity_explicit(10e-6, 10e-6, 1e-6),
            Err(Error::ControlPulseDominates { .. })
        ));
    }

    #[test]
    fn spin_wave_at_efficiency_examples() {
        let eta = t2_relative_efficiency(25e-6, 250e-6).unwrap();
        let r = spin_wave_capacity_at_efficiency(eta, 250e-6, 1.5e6, 230e3, 1.36).unwrap();
        assert!(close(r.n_continuous, 5.62, 0.005));
        let r = spin_wave_capacity_at_efficiency(1.0 - 1e-9, 250e-6, 1.5e6, 230e3, 1.36).unwrap();
        assert_eq!(r.n_continuous, 0.0);
        assert_eq!(r.warnings[0].name(), "control_pulse_dominates");
    }

    #[test]
    fn spin_dephasing_examples() {
        assert_eq!(spin_dephasing_factor(0.0, 26.3e3).unwrap(), 1.0);
        let rescale = |t: f64, eta: f64| {
            eta * spin_dephasing_factor(t, 16.1e3).unwrap() / spin_dephasing_factor(t, 26.3e3).unwrap()
        };
        assert!(close(rescale(14.1e-6, 1.88), 3.47, 0.01));
        assert!(close(rescale(20.7e-6, 0.63), 2.36, 0.01));
        assert!(spin_dephasing_factor(1e-6, 0.0).is_err());
    }

    #[test]
    fn echo_efficiency_examples() {
        assert_eq!(afc_echo_efficiency(0.0, 3.0).unwrap(), 0.0);
        assert!(afc_echo_efficiency(5.0, 1.0).unwrap().abs() < 1e-30);
        let big = afc_echo_efficiency(1e7, 1e3).unwrap();
        assert!(big > 0.9999 && big < 1.0);
        assert!(afc_echo_efficiency(1.0, 0.5).is_err());
    }
}
