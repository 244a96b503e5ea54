//! Spectral and spatial multiplexing budgets and repeater trial rates.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::afc_echo_efficiency;
use crate::error::{Checks, Result, Violation};
use crate::model::{CapacityReport, Validate, Warning};
use crate::optimizer::{golden_section_max, grid_argmax};

pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// Coarse finesse grid seeding the golden-section search.
const FINESSE_GRID: (f64, f64, usize) = (1.0, 50.0, 1000);
const FINESSE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileShape {
    Square,
    Gaussian,
}

/// Inhomogeneous absorption line. `width_hz` is the full width for a square
/// profile and the FWHM in optical depth for a Gaussian one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InhomogeneousProfile {
    pub shape: ProfileShape,
    pub width_hz: f64,
    pub peak_od: f64,
}

impl InhomogeneousProfile {
    pub fn square(width_hz: f64, peak_od: f64) -> Self {
        Self {
            shape: ProfileShape::Square,
            width_hz,
            peak_od,
        }
    }

    pub fn gaussian(fwhm_hz: f64, peak_od: f64) -> Self {
        Self {
            shape: ProfileShape::Gaussian,
            width_hz: fwhm_hz,
            peak_od,
        }
    }

    pub fn od_at(&self, detuning_hz: f64) -> f64 {
        od_at_detuning(self, detuning_hz)
    }
}

impl Validate for InhomogeneousProfile {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.positive("width_hz", self.width_hz)
            .non_negative("peak_od", self.peak_od);
        c.into_violations()
    }
}

/// Minimum separation of independent combs, `2(Δg + Δe) + Δf`.
pub fn min_spectral_spacing(dg_hz: f64, de_hz: f64, df_hz: f64) -> Result<f64> {
    Checks::new()
        .non_negative("dg_hz", dg_hz)
        .non_negative("de_hz", de_hz)
        .non_negative("df_hz", df_hz)
        .finish()?;
    Ok(2.0 * (dg_hz + de_hz) + df_hz)
}

/// Number of independent combs that fit in the line, `Γ_inhom / spacing`.
/// Gaussian lines use their FWHM as the window and carry a
/// [`Warning::HeuristicWindow`].
pub fn spectral_capacity(profile: &InhomogeneousProfile, spacing_hz: f64) -> Result<CapacityReport> {
    let mut c = Checks::new();
    for v in profile.violations() {
        c.push(v);
    }
    c.positive("spacing_hz", spacing_hz).finish()?;
    let report = CapacityReport::from_count(profile.width_hz / spacing_hz);
    Ok(match profile.shape {
        ProfileShape::Square => report,
        ProfileShape::Gaussian => report.with_warning(Warning::HeuristicWindow {
            fwhm_hz: profile.width_hz,
        }),
    })
}

pub fn od_at_detuning(profile: &InhomogeneousProfile, detuning_hz: f64) -> f64 {
    match profile.shape {
        ProfileShape::Square => {
            if detuning_hz.abs() <= 0.5 * profile.width_hz {
                profile.peak_od
            } else {
                0.0
            }
        }
        ProfileShape::Gaussian => {
            let x = detuning_hz / profile.width_hz;
            profile.peak_od * (-4.0 * LN_2 * x * x).exp()
        }
    }
}

/// Finesse maximising the backward echo efficiency at optical depth `od`.
pub fn optimal_finesse(od: f64) -> Result<f64> {
    Checks::new().positive("od", od).finish()?;
    let eff = |f: f64| afc_echo_efficiency(od, f).unwrap_or(0.0);
    let (lo, mut hi, points) = FINESSE_GRID;
    loop {
        let (i, _, _) = grid_argmax(eff, lo, hi, points);
        if i + 1 < points || hi > 1e9 {
            let step = (hi - lo) / (points - 1) as f64;
            let a = (lo + step * i.saturating_sub(1) as f64).max(lo);
            let b = (lo + step * (i + 1) as f64).min(hi);
            return Ok(golden_section_max(eff, a, b, FINESSE_TOL).0);
        }
        // optimum beyond the grid: widen
        hi *= 2.0;
    }
}

/// Best achievable efficiency at one detuning: `(finesse, efficiency)`.
/// The finesse is `None` where the line has no absorption.
pub fn best_efficiency_at(profile: &InhomogeneousProfile, detuning_hz: f64) -> Result<(Option<f64>, f64)> {
    let mut c = Checks::new();
    for v in profile.violations() {
        c.push(v);
    }
    c.require(detuning_hz.is_finite(), "detuning_hz", detuning_hz, "must be finite")
        .finish()?;
    let od = od_at_detuning(profile, detuning_hz);
    if od <= 0.0 {
        return Ok((None, 0.0));
    }
    let f = optimal_finesse(od)?;
    Ok((Some(f), afc_echo_efficiency(od, f)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBudget {
    pub spacing_hz: f64,
    /// Ascending, symmetric about line centre.
    pub centers_hz: Vec<f64>,
    pub per_mode_od: Vec<f64>,
    pub per_mode_finesse: Vec<Option<f64>>,
    pub per_mode_efficiency: Vec<f64>,
    pub average_efficiency: f64,
    /// Inside the line's FWHM (or full width for a square line).
    pub within_fwhm: Vec<bool>,
}

impl SpectralBudget {
    pub fn n_modes(&self) -> usize {
        self.centers_hz.len()
    }
}

/// Places `n_modes` combs at the minimum spacing, symmetric about line
/// centre and filling outward, each at its optimal finesse.
pub fn spectral_efficiency_budget(
    profile: &InhomogeneousProfile,
    dg_hz: f64,
    de_hz: f64,
    df_hz: f64,
    n_modes: usize,
) -> Result<SpectralBudget> {
    let spacing_hz = min_spectral_spacing(dg_hz, de_hz, df_hz)?;
    let mut c = Checks::new();
    for v in profile.violations() {
        c.push(v);
    }
    c.require(n_modes >= 1, "n_modes", n_modes as f64, "must be >= 1")
        .positive("spacing_hz", spacing_hz)
        .finish()?;

    let mid = 0.5 * (n_modes as f64 - 1.0);
    let centers_hz: Vec<f64> = (0..n_modes).map(|i| (i as f64 - mid) * spacing_hz).collect();
    let per_mode: Vec<(f64, Option<f64>, f64)> = centers_hz
        .par_iter()
        .map(|&f| {
            let od = od_at_detuning(profile, f);
            let (finesse, eff) = best_efficiency_at(profile, f)?;
            Ok((od, finesse, eff))
        })
        .collect::<Result<_>>()?;

    let half = 0.5 * profile.width_hz;
    let per_mode_efficiency: Vec<f64> = per_mode.iter().map(|m| m.2).collect();
    let average_efficiency = per_mode_efficiency.iter().sum::<f64>() / n_modes as f64;
    Ok(SpectralBudget {
        spacing_hz,
        within_fwhm: centers_hz.iter().map(|f| f.abs() <= half).collect(),
        per_mode_od: per_mode.iter().map(|m| m.0).collect(),
        per_mode_finesse: per_mode.iter().map(|m| m.1).collect(),
        per_mode_efficiency,
        average_efficiency,
        centers_hz,
    })
}

/// Square grid of parallel memories across the crystal face.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialGrid {
    pub pitch_m: f64,
    pub area_m2: f64,
}

impl Validate for SpatialGrid {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.positive("pitch_m", self.pitch_m).positive("area_m2", self.area_m2);
        c.into_violations()
    }
}

pub fn spatial_capacity(grid: &SpatialGrid) -> Result<CapacityReport> {
    let mut c = Checks::new();
    for v in grid.violations() {
        c.push(v);
    }
    c.finish()?;
    Ok(CapacityReport::from_count(grid.area_m2 / (grid.pitch_m * grid.pitch_m)))
}

/// Product of the floored temporal, spectral and spatial counts.
pub fn total_budget(temporal: &CapacityReport, spectral: &CapacityReport, spatial: &CapacityReport) -> CapacityReport {
    let n = temporal.n_floor as f64 * spectral.n_floor as f64 * spatial.n_floor as f64;
    CapacityReport::from_count(n)
}

/// Heralding round-trip time of one link, `n L / c`.
pub fn communication_time(link_length_m: f64, refractive_index: f64) -> Result<f64> {
    Checks::new()
        .positive("link_length_m", link_length_m)
        .positive("refractive_index", refractive_index)
        .finish()?;
    Ok(refractive_index * link_length_m / SPEED_OF_LIGHT_M_PER_S)
}

/// Entanglement trials per second with `n_modes` stored modes.
pub fn repeater_trial_rate(link_length_m: f64, refractive_index: f64, n_modes: u64) -> Result<f64> {
    let mut c = Checks::new();
    c.positive("link_length_m", link_length_m)
        .positive("refractive_index", refractive_index)
        .require(n_modes >= 1, "n_modes", n_modes as f64, "must be >= 1")
        .finish()?;
    Ok(n_modes as f64 / communication_time(link_length_m, refractive_index)?)
}
