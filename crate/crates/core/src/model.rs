//! Shared domain types for the comb, the control pulses and the input modes.
//!
//! Frequencies are natural frequencies in Hz throughout, never angular.
//! The comb period is stored as the storage delay `1/Δ` in seconds; the tooth
//! spacing is derived from it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Checks, Result, Violation};

/// Tooth count below which a comb supports less than one temporal mode.
pub const SINGLE_MODE_TEETH: f64 = 2.5;

/// Recommended window for `κ = T_m / T` with Gaussian modes.
pub const KAPPA_WINDOW: (f64, f64) = (2.0, 2.0 * std::f64::consts::SQRT_2);

/// A continuous mode count is flagged when it sits this close below the next
/// integer: one more mode fits with negligible efficiency loss.
pub const NEAR_INTEGER_THRESHOLD: f64 = 0.15;

/// Non-fatal diagnostics attached to validated values and capacity reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Fewer than 2.5 teeth: the comb cannot hold a full temporal mode.
    FewTeeth { teeth: f64 },
    /// κ outside [2, 2√2].
    KappaOutsideWindow { kappa: f64 },
    /// Chirp width does not exceed the Rabi frequency, so the adiabatic
    /// transfer formula is outside its regime.
    AdiabaticRegimeViolated { omega_hz: f64, gamma_hz: f64 },
    /// The control-pulse term exceeds the bandwidth term; capacity clamped to 0.
    ControlPulseDominates { deficit: f64 },
    /// A Gaussian profile's FWHM was used as a square budget window.
    HeuristicWindow { fwhm_hz: f64 },
}

impl Warning {
    pub fn name(&self) -> &'static str {
        match self {
            Warning::FewTeeth { .. } => "few_teeth",
            Warning::KappaOutsideWindow { .. } => "kappa_outside_window",
            Warning::AdiabaticRegimeViolated { .. } => "adiabatic_regime_violated",
            Warning::ControlPulseDominates { .. } => "control_pulse_dominates",
            Warning::HeuristicWindow { .. } => "heuristic_window",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::FewTeeth { teeth } => {
                write!(f, "comb has {teeth} teeth, below the single-mode threshold of 2.5")
            }
            Warning::KappaOutsideWindow { kappa } if *kappa < KAPPA_WINDOW.0 => {
                write!(f, "κ below 2 (κ = {kappa})")
            }
            Warning::KappaOutsideWindow { kappa } => write!(f, "κ above 2√2 (κ = {kappa})"),
            Warning::AdiabaticRegimeViolated { omega_hz, gamma_hz } => write!(
                f,
                "Rabi frequency {omega_hz} Hz is not below the chirp width {gamma_hz} Hz"
            ),
            Warning::ControlPulseDominates { deficit } => write!(
                f,
                "control pulse consumes more than the storage window ({deficit} modes short); clamped to 0"
            ),
            Warning::HeuristicWindow { fwhm_hz } => {
                write!(f, "Gaussian profile budgeted over its FWHM ({fwhm_hz} Hz) as if square")
            }
        }
    }
}

/// A value that passed [`Validate::validate`], with any warnings raised.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

pub trait Validate: Sized {
    fn violations(&self) -> Vec<Violation>;

    fn warnings(&self) -> Vec<Warning> {
        Vec::new()
    }

    /// Fails with every violated invariant, borrowing the value.
    fn check(&self) -> Result<()> {
        let mut checks = Checks::new();
        for v in self.violations() {
            checks.push(v);
        }
        checks.finish()
    }

    /// Returns the value unchanged if every invariant holds, otherwise all
    /// violated invariants.
    fn validate(self) -> Result<Validated<Self>> {
        let mut checks = Checks::new();
        for v in self.violations() {
            checks.push(v);
        }
        checks.finish()?;
        let warnings = self.warnings();
        Ok(Validated { value: self, warnings })
    }
}

/// Relative tolerance for derived fields that must agree with their sources.
const CONSISTENCY_RTOL: f64 = 1e-6;

fn consistent(derived: f64, expected: f64) -> bool {
    (derived - expected).abs() <= CONSISTENCY_RTOL * expected.abs().max(f64::MIN_POSITIVE)
}

/// The comb: bandwidth, storage delay, finesse, peak optical depth and
/// optical coherence time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AfcParams {
    pub bandwidth_gamma_hz: f64,
    /// Storage delay `1/Δ`.
    pub delay_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finesse: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_od: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optical_t2_s: Option<f64>,
}

impl AfcParams {
    pub fn new(bandwidth_gamma_hz: f64, delay_s: f64) -> Self {
        Self {
            bandwidth_gamma_hz,
            delay_s,
            finesse: None,
            peak_od: None,
            optical_t2_s: None,
        }
    }

    /// Builds from bandwidth and tooth spacing `Δ`.
    pub fn from_spacing(bandwidth_gamma_hz: f64, tooth_spacing_hz: f64) -> Self {
        Self::new(bandwidth_gamma_hz, 1.0 / tooth_spacing_hz)
    }

    pub fn with_finesse(mut self, finesse: f64) -> Self {
        self.finesse = Some(finesse);
        self
    }

    pub fn with_peak_od(mut self, od: f64) -> Self {
        self.peak_od = Some(od);
        self
    }

    pub fn with_optical_t2(mut self, t2_s: f64) -> Self {
        self.optical_t2_s = Some(t2_s);
        self
    }

    pub fn tooth_spacing_hz(&self) -> f64 {
        1.0 / self.delay_s
    }

    /// Number of comb teeth inside the bandwidth, `Γ/Δ`.
    pub fn tooth_count(&self) -> f64 {
        self.bandwidth_gamma_hz * self.delay_s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Validate for AfcParams {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.positive("bandwidth_gamma_hz", self.bandwidth_gamma_hz)
            .positive("delay_s", self.delay_s);
        if let Some(f) = self.finesse {
            c.at_least("finesse", f, 1.0);
        }
        if let Some(d) = self.peak_od {
            c.non_negative("peak_od", d);
        }
        if let Some(t2) = self.optical_t2_s {
            c.positive("optical_t2_s", t2);
        }
        let teeth = self.tooth_count();
        if self.bandwidth_gamma_hz > 0.0 && self.delay_s > 0.0 {
            c.require(teeth >= 1.0, "tooth_count", teeth, "comb needs at least one tooth");
        }
        c.into_violations()
    }

    fn warnings(&self) -> Vec<Warning> {
        let teeth = self.tooth_count();
        if teeth < SINGLE_MODE_TEETH {
            vec![Warning::FewTeeth { teeth }]
        } else {
            Vec::new()
        }
    }
}

/// Hyperbolic-square-hyperbolic control pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlPulseParams {
    pub rabi_omega_hz: f64,
    pub square_duration_s: f64,
    pub cutoff_s: f64,
    /// `T_c / T_s`.
    pub chi: f64,
}

impl ControlPulseParams {
    pub fn new(rabi_omega_hz: f64, square_duration_s: f64, chi: f64) -> Self {
        Self {
            rabi_omega_hz,
            square_duration_s,
            cutoff_s: chi * square_duration_s,
            chi,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Validate for ControlPulseParams {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.positive("rabi_omega_hz", self.rabi_omega_hz)
            .positive("square_duration_s", self.square_duration_s)
            .positive("cutoff_s", self.cutoff_s)
            .at_least("chi", self.chi, 1.0);
        if self.square_duration_s > 0.0 && self.chi.is_finite() {
            c.require(
                consistent(self.cutoff_s, self.chi * self.square_duration_s),
                "cutoff_s",
                self.cutoff_s,
                "must equal chi * square_duration_s",
            );
        }
        c.into_violations()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeProfile {
    #[default]
    Gaussian,
}

/// Input mode: intensity FWHM `T`, mode bin `T_m` and their ratio `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeShape {
    pub fwhm_s: f64,
    pub mode_bin_s: f64,
    pub kappa: f64,
    #[serde(default)]
    pub shape: ModeProfile,
}

impl ModeShape {
    pub fn from_kappa(fwhm_s: f64, kappa: f64) -> Self {
        Self {
            fwhm_s,
            mode_bin_s: kappa * fwhm_s,
            kappa,
            shape: ModeProfile::Gaussian,
        }
    }

    pub fn from_bin(fwhm_s: f64, mode_bin_s: f64) -> Self {
        Self {
            fwhm_s,
            mode_bin_s,
            kappa: mode_bin_s / fwhm_s,
            shape: ModeProfile::Gaussian,
        }
    }
}

impl Validate for ModeShape {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.positive("fwhm_s", self.fwhm_s)
            .positive("mode_bin_s", self.mode_bin_s)
            .positive("kappa", self.kappa);
        if self.fwhm_s > 0.0 && self.kappa.is_finite() {
            c.require(
                consistent(self.mode_bin_s, self.kappa * self.fwhm_s),
                "mode_bin_s",
                self.mode_bin_s,
                "must equal kappa * fwhm_s",
            );
        }
        c.into_violations()
    }

    fn warnings(&self) -> Vec<Warning> {
        let (lo, hi) = KAPPA_WINDOW;
        if self.kappa < lo || self.kappa > hi {
            vec![Warning::KappaOutsideWindow { kappa: self.kappa }]
        } else {
            Vec::new()
        }
    }
}

/// Spin transition parameters for spin-wave storage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinParams {
    /// Inhomogeneous FWHM of the spin transition.
    pub spin_linewidth_hz: f64,
    pub spin_storage_time_s: f64,
}

impl Validate for SpinParams {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.positive("spin_linewidth_hz", self.spin_linewidth_hz)
            .positive("spin_storage_time_s", self.spin_storage_time_s);
        c.into_violations()
    }
}

/// A mode count with its continuous value, floor and per-term breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub n_continuous: f64,
    pub n_floor: u64,
    pub near_integer_flag: bool,
    /// Modes the storage window alone would hold.
    pub bandwidth_term: f64,
    /// Modes consumed by control pulses.
    pub control_term: f64,
    pub relative_efficiency: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Warning>,
}

/// Relative distance to an integer below which float noise is snapped away,
/// so that e.g. `(41 - 14) / 0.5` floors to 54 rather than 53.
const SNAP_RTOL: f64 = 1e-12;

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= SNAP_RTOL * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

impl CapacityReport {
    /// Report for `bandwidth_term - control_term`, clamped at zero.
    pub fn from_terms(bandwidth_term: f64, control_term: f64, relative_efficiency: f64) -> Self {
        let raw = snap(bandwidth_term - control_term);
        let mut warnings = Vec::new();
        let n = if raw < 0.0 {
            warnings.push(Warning::ControlPulseDominates { deficit: -raw });
            0.0
        } else {
            raw
        };
        let n_floor = n.floor();
        Self {
            n_continuous: n,
            n_floor: n_floor as u64,
            near_integer_flag: n_floor + 1.0 - n <= NEAR_INTEGER_THRESHOLD,
            bandwidth_term,
            control_term,
            relative_efficiency,
            warnings,
        }
    }

    pub fn from_count(n: f64) -> Self {
        Self::from_terms(n, 0.0, 1.0)
    }

    /// Floor, plus one when the continuous value is within the near-integer
    /// allowance of the next integer.
    pub fn reported(&self) -> u64 {
        self.n_floor + u64::from(self.near_integer_flag)
    }

    pub fn with_warning(mut self, w: Warning) -> Self {
        self.warnings.push(w);
        self
    }
}
