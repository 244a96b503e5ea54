//! Bandwidth optimisation and parameter sweeps.

mod golden;
mod sweep;

use std::f64::consts::PI;

pub use golden::{golden_section_max, grid_argmax};
pub use sweep::{Axis, SweepRow, SweepSpec, SweepTable, Target};

use crate::error::{Checks, Result};

/// Bandwidth maximising the spin-wave capacity for given Rabi frequency,
/// delay and χ, clipped to `gamma_max_hz` (pass `f64::INFINITY` for none).
///
/// The capacity is a downward parabola in `Γ`, so the optimum is the
/// stationary point `Γ* = π² Ω² (1/Δ) / (8χ)`.
pub fn optimal_bandwidth_sw(omega_hz: f64, delay_s: f64, chi: f64, gamma_max_hz: f64) -> Result<f64> {
    Checks::new()
        .positive("omega_hz", omega_hz)
        .positive("delay_s", delay_s)
        .positive("chi", chi)
        .require(gamma_max_hz > 0.0, "gamma_max_hz", gamma_max_hz, "must be > 0")
        .finish()?;
    let stationary = PI * PI * omega_hz * omega_hz * delay_s / (8.0 * chi);
    Ok(stationary.min(gamma_max_hz))
}
