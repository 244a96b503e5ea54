//! Subcommand bodies. Each returns the text for stdout.

use std::fs;
use std::path::Path;

use afc_core::capacity;
use afc_core::materials::{self, MaterialRegistry, T2Kind};
use afc_core::multiplex::{self, InhomogeneousProfile, ProfileShape, SpatialGrid};
use afc_core::optimizer::SweepSpec;
use afc_core::spectral;
use afc_core::{AfcParams, CapacityReport, ModeShape, Validate, Warning};
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::input::{assemble, num, read_text, required, text, uint};
use crate::output::{format_number, to_rounded_json, Table};
use crate::CliError;

/// Environment variable naming a default user materials file.
pub const MATERIALS_PATH_ENV: &str = "AFC_MATERIALS_PATH";

/// Samples per mode bin when no sample rate is given.
const DEFAULT_SAMPLES_PER_BIN: f64 = 40.0;
/// Band edge of the spectrum summary, in units of `1/T_m`.
const BAND_HALF_WIDTH_BINS: f64 = 1.25;

pub enum Output {
    Json(serde_json::Value),
    Csv(Vec<u8>),
}

fn json<T: Serialize>(value: &T) -> Result<Output, CliError> {
    Ok(Output::Json(to_rounded_json(value).map_err(afc_core::Error::from)?))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Capacity report as emitted: the core report plus the near-integer value.
#[derive(Serialize)]
struct ReportOut {
    n_continuous: f64,
    n_floor: u64,
    reported: u64,
    near_integer_flag: bool,
    bandwidth_term: f64,
    control_term: f64,
    relative_efficiency: f64,
}

impl From<&CapacityReport> for ReportOut {
    fn from(r: &CapacityReport) -> Self {
        Self {
            n_continuous: r.n_continuous,
            n_floor: r.n_floor,
            reported: r.reported(),
            near_integer_flag: r.near_integer_flag,
            bandwidth_term: r.bandwidth_term,
            control_term: r.control_term,
            relative_efficiency: r.relative_efficiency,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CapacityInput {
    bandwidth_gamma_hz: Option<f64>,
    delay_s: Option<f64>,
    finesse: Option<f64>,
    peak_od: Option<f64>,
    optical_t2_s: Option<f64>,
    target_efficiency: Option<f64>,
}

#[derive(Serialize)]
struct CapacityOut {
    #[serde(flatten)]
    report: ReportOut,
    delay_s: f64,
    mode_bin_s: f64,
    tooth_count: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    echo_efficiency: Option<f64>,
    warnings: Vec<Warning>,
}

pub fn capacity(a: &CapacityArgs) -> Result<Output, CliError> {
    let input: CapacityInput = assemble(
        a.config.config.as_deref(),
        &a.config.overrides,
        &[
            ("bandwidth_gamma_hz", num(a.gamma_hz)),
            ("delay_s", num(a.delay_s)),
            ("optical_t2_s", num(a.t2_s)),
            ("target_efficiency", num(a.eta)),
            ("finesse", num(a.finesse)),
            ("peak_od", num(a.peak_od)),
        ],
    )?;
    let gamma = required(input.bandwidth_gamma_hz, "capacity", "bandwidth_gamma_hz")?;
    let (delay, mut report) = match input.target_efficiency {
        Some(eta) => {
            if let Some(d) = input.delay_s {
                return Err(afc_core::Error::invalid("delay_s", d, "cannot be combined with target_efficiency").into());
            }
            let t2 = required(input.optical_t2_s, "capacity", "optical_t2_s")?;
            let report = capacity::fixed_delay_capacity_at_efficiency(eta, t2, gamma)?;
            (capacity::delay_for_efficiency(eta, t2)?, report)
        }
        None => {
            let delay = required(input.delay_s, "capacity", "delay_s")?;
            // field names in violations match the config keys
            AfcParams {
                bandwidth_gamma_hz: gamma,
                delay_s: delay,
                finesse: input.finesse,
                peak_od: input.peak_od,
                optical_t2_s: input.optical_t2_s,
            }
            .check()?;
            let mut report = capacity::fixed_delay_capacity(gamma, delay)?;
            if let Some(t2) = input.optical_t2_s {
                report.relative_efficiency = capacity::t2_relative_efficiency(delay, t2)?;
            }
            (delay, report)
        }
    };
    let params = AfcParams {
        bandwidth_gamma_hz: gamma,
        delay_s: delay,
        finesse: input.finesse,
        peak_od: input.peak_od,
        optical_t2_s: input.optical_t2_s,
    }
    .validate()?;
    report.warnings.extend(params.warnings);
    let echo_efficiency = match (input.peak_od, input.finesse) {
        (Some(od), Some(f)) => Some(capacity::afc_echo_efficiency(od, f)?),
        _ => None,
    };
    json(&CapacityOut {
        report: ReportOut::from(&report),
        delay_s: delay,
        mode_bin_s: capacity::mode_bin_from_bandwidth(gamma)?,
        tooth_count: params.value.tooth_count(),
        echo_efficiency,
        warnings: report.warnings,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SwInput {
    bandwidth_gamma_hz: Option<f64>,
    delay_s: Option<f64>,
    rabi_omega_hz: Option<f64>,
    chi: Option<f64>,
    target_efficiency: Option<f64>,
    optical_t2_s: Option<f64>,
    cutoff_s: Option<f64>,
    mode_bin_s: Option<f64>,
    spin_linewidth_hz: Option<f64>,
    spin_storage_time_s: Option<f64>,
}

#[derive(Serialize)]
struct SwOut {
    #[serde(flatten)]
    report: ReportOut,
    n_sw: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    square_duration_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cutoff_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transfer_efficiency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spin_dephasing_factor: Option<f64>,
    warnings: Vec<Warning>,
}

pub fn sw_capacity(a: &SwCapacityArgs) -> Result<Output, CliError> {
    let input: SwInput = assemble(
        a.config.config.as_deref(),
        &a.config.overrides,
        &[
            ("bandwidth_gamma_hz", num(a.gamma_hz)),
            ("delay_s", num(a.delay_s)),
            ("rabi_omega_hz", num(a.omega_hz)),
            ("chi", num(a.chi)),
            ("target_efficiency", num(a.eta)),
            ("optical_t2_s", num(a.t2_s)),
            ("cutoff_s", num(a.tc_s)),
            ("mode_bin_s", num(a.tm_s)),
            ("spin_linewidth_hz", num(a.gamma_spin_hz)),
            ("spin_storage_time_s", num(a.t_spin_s)),
        ],
    )?;
    const CMD: &str = "sw-capacity";
    let explicit = input.cutoff_s.is_some() || input.mode_bin_s.is_some();
    let (report, pulse) = if explicit {
        let delay = required(input.delay_s, CMD, "delay_s")?;
        let tc = required(input.cutoff_s, CMD, "cutoff_s")?;
        let tm = required(input.mode_bin_s, CMD, "mode_bin_s")?;
        (capacity::spin_wave_capacity_explicit(delay, tc, tm)?, None)
    } else {
        let gamma = required(input.bandwidth_gamma_hz, CMD, "bandwidth_gamma_hz")?;
        let omega = required(input.rabi_omega_hz, CMD, "rabi_omega_hz")?;
        let chi = required(input.chi, CMD, "chi")?;
        let report = match input.target_efficiency {
            Some(eta) => {
                let t2 = required(input.optical_t2_s, CMD, "optical_t2_s")?;
                capacity::spin_wave_capacity_at_efficiency(eta, t2, gamma, omega, chi)?
            }
            None => {
                let delay = required(input.delay_s, CMD, "delay_s")?;
                capacity::spin_wave_capacity(gamma, delay, omega, chi)?
            }
        };
        let ts = capacity::hsh_square_duration(omega, gamma, capacity::DEFAULT_TRANSFER_EXPONENT)?;
        let transfer = capacity::hsh_transfer_efficiency(ts, omega, gamma)?;
        (report, Some((ts, chi * ts, transfer)))
    };
    let spin_dephasing_factor = match (input.spin_storage_time_s, input.spin_linewidth_hz) {
        (Some(t), Some(g)) => Some(capacity::spin_dephasing_factor(t, g)?),
        (None, None) => None,
        (None, Some(_)) => return Err(required(None, CMD, "spin_storage_time_s").unwrap_err().into()),
        (Some(_), None) => return Err(required(None, CMD, "spin_linewidth_hz").unwrap_err().into()),
    };
    json(&SwOut {
        report: ReportOut::from(&report),
        n_sw: report.n_continuous,
        square_duration_s: pulse.map(|p| p.0),
        cutoff_s: pulse.map(|p| p.1),
        transfer_efficiency: pulse.map(|p| p.2),
        spin_dephasing_factor,
        warnings: report.warnings,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumInput {
    amplitudes: Option<Vec<f64>>,
    mode_bin_s: Option<f64>,
    fwhm_s: Option<f64>,
    kappa: Option<f64>,
    sample_rate_hz: Option<f64>,
    pad_factor: Option<u64>,
}

#[derive(Serialize)]
struct SpectrumSummary {
    out: String,
    samples: usize,
    resolution_hz: f64,
    total_energy: f64,
    band_half_width_hz: f64,
    band_energy_fraction: f64,
    sidebands_hz: Vec<f64>,
    warnings: Vec<Warning>,
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Output, CliError> {
    let input: SpectrumInput = assemble(
        a.config.config.as_deref(),
        &a.config.overrides,
        &[
            ("amplitudes", a.amplitudes.as_ref().map(|v| serde_json::json!(v))),
            ("mode_bin_s", num(a.mode_bin_s)),
            ("fwhm_s", num(a.fwhm_s)),
            ("kappa", num(a.kappa)),
            ("sample_rate_hz", num(a.sample_rate_hz)),
            ("pad_factor", uint(a.pad_factor)),
        ],
    )?;
    const CMD: &str = "spectrum";
    let amplitudes = input.amplitudes.ok_or_else(|| afc_core::Error::MissingParameter {
        target: CMD.into(),
        name: "amplitudes".into(),
    })?;
    let bin = required(input.mode_bin_s, CMD, "mode_bin_s")?;
    let shape = match (input.fwhm_s, input.kappa) {
        (Some(t), Some(k)) => ModeShape {
            fwhm_s: t,
            mode_bin_s: bin,
            kappa: k,
            shape: Default::default(),
        },
        (Some(t), None) => ModeShape::from_bin(t, bin),
        (None, Some(k)) => ModeShape::from_bin(bin / k, bin),
        (None, None) => return Err(required(None, CMD, "fwhm_s").unwrap_err().into()),
    }
    .validate()?;
    let fs = input.sample_rate_hz.unwrap_or(DEFAULT_SAMPLES_PER_BIN / bin);
    let pad = input.pad_factor.unwrap_or(spectral::DEFAULT_PAD_FACTOR as u64) as usize;
    let train = spectral::synthesize_train(&amplitudes, shape.value.fwhm_s, bin, fs)?;
    let spectrum = spectral::power_spectrum_padded(&train, pad)?;

    let mut table = Table::new(["frequency_hz", "power_density"]);
    for (f, p) in spectrum.frequencies_hz.iter().zip(&spectrum.power_density) {
        table.push_numbers([*f, *p]);
    }
    let csv = table.to_csv();
    let Some(out) = &a.out else {
        return Ok(Output::Csv(csv));
    };
    write_file(out, &csv)?;
    let band = (BAND_HALF_WIDTH_BINS / bin).min(spectrum.grid_limit_hz());
    json(&SpectrumSummary {
        out: out.display().to_string(),
        samples: train.samples.len(),
        resolution_hz: spectrum.resolution_hz,
        total_energy: spectrum.total_energy(),
        band_half_width_hz: band,
        band_energy_fraction: spectrum.band_energy_fraction(band)?,
        sidebands_hz: spectrum.sidebands(spectral::DEFAULT_PEAK_FLOOR),
        warnings: shape.warnings,
    })
}

#[derive(Serialize)]
struct SweepSummary {
    out: String,
    target: String,
    rows: usize,
    ok: usize,
    warned: usize,
    errors: usize,
}

pub fn sweep(a: &SweepArgs) -> Result<Output, CliError> {
    let spec: SweepSpec = assemble(a.config.config.as_deref(), &a.config.overrides, &[])?;
    let table = spec.run()?;
    let mut csv = Table::new(table.header());
    let width = table.output_names.len();
    let (mut ok, mut warned, mut errors) = (0, 0, 0);
    for row in &table.rows {
        let mut cells: Vec<String> = row.axis_values.iter().map(|&x| format_number(x)).collect();
        match &row.outputs {
            Some(values) => cells.extend(values.iter().map(|&x| format_number(x))),
            None => cells.extend(std::iter::repeat_n(String::new(), width)),
        }
        match row.status.as_str() {
            "ok" => ok += 1,
            s if s.starts_with("error:") => errors += 1,
            _ => warned += 1,
        }
        cells.push(row.status.clone());
        csv.rows.push(cells);
    }
    let bytes = csv.to_csv();
    let Some(out) = &a.out else {
        return Ok(Output::Csv(bytes));
    };
    write_file(out, &bytes)?;
    json(&SweepSummary {
        out: out.display().to_string(),
        target: table.target,
        rows: table.rows.len(),
        ok,
        warned,
        errors,
    })
}

/// Built-ins, then the file named by [`MATERIALS_PATH_ENV`], then `extra`.
pub fn registry(extra: Option<&Path>) -> Result<MaterialRegistry, CliError> {
    let mut reg = MaterialRegistry::builtins();
    let env_path = std::env::var_os(MATERIALS_PATH_ENV).filter(|p| !p.is_empty());
    for path in env_path.as_deref().map(Path::new).into_iter().chain(extra) {
        reg.merge_json(&read_text(path)?)?;
    }
    Ok(reg)
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ProfileInput {
    shape: Option<ProfileShape>,
    width_hz: Option<f64>,
    peak_od: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiplexInput {
    material: Option<String>,
    hyperfine_span_hz: Option<f64>,
    feature_width_hz: Option<f64>,
    #[serde(default)]
    inhomogeneous: ProfileInput,
    pitch_m: Option<f64>,
    area_m2: Option<f64>,
    temporal_modes: Option<f64>,
    n_modes: Option<u64>,
}

#[derive(Serialize)]
struct BudgetSummary {
    n_modes: usize,
    average_efficiency: f64,
    central_efficiency: f64,
    edge_efficiency: f64,
    modes_within_fwhm: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
}

#[derive(Serialize)]
struct MultiplexOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    material: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spacing_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectral: Option<ReportOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spatial: Option<ReportOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total: Option<ReportOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    efficiency_budget: Option<BudgetSummary>,
    warnings: Vec<Warning>,
}

pub fn multiplex(a: &MultiplexArgs) -> Result<Output, CliError> {
    let shape = a.profile.map(|p| match p {
        ProfileArg::Square => "square",
        ProfileArg::Gaussian => "gaussian",
    });
    let input: MultiplexInput = assemble(
        a.config.config.as_deref(),
        &a.config.overrides,
        &[
            ("material", text(a.material.as_deref())),
            ("hyperfine_span_hz", num(a.span_hz)),
            ("feature_width_hz", num(a.df_hz)),
            ("inhomogeneous.shape", text(shape)),
            ("inhomogeneous.width_hz", num(a.width_hz)),
            ("inhomogeneous.peak_od", num(a.peak_od)),
            ("pitch_m", num(a.pitch_m)),
            ("area_m2", num(a.area_m2)),
            ("temporal_modes", num(a.temporal_modes)),
            ("n_modes", uint(a.n_modes)),
        ],
    )?;
    const CMD: &str = "multiplex";

    let record = match &input.material {
        Some(name) => Some(registry(a.materials_file.as_deref())?.get(name)?.clone()),
        None => None,
    };
    let base = record.as_ref().and_then(|r| r.inhomogeneous);
    let span = input
        .hyperfine_span_hz
        .or(record.as_ref().and_then(|r| r.hyperfine_span_total()));
    let df = input
        .feature_width_hz
        .or(record.as_ref().and_then(|r| r.feature_width_hz));
    let p = &input.inhomogeneous;
    let profile = match (
        p.shape.or(base.map(|b| b.shape)),
        p.width_hz.or(base.map(|b| b.width_hz)),
    ) {
        (Some(shape), Some(width_hz)) => Some(InhomogeneousProfile {
            shape,
            width_hz,
            peak_od: p.peak_od.or(base.map(|b| b.peak_od)).unwrap_or(0.0),
        }),
        (None, None) if p.peak_od.is_none() => None,
        (None, _) => return Err(required(None, CMD, "inhomogeneous.shape").unwrap_err().into()),
        (_, None) => return Err(required(None, CMD, "inhomogeneous.width_hz").unwrap_err().into()),
    };

    let mut warnings = Vec::new();
    let spacing = match (span, df) {
        (Some(s), Some(f)) => Some(multiplex::min_spectral_spacing(s, 0.0, f)?),
        (None, None) => None,
        (None, _) => return Err(required(None, CMD, "hyperfine_span_hz").unwrap_err().into()),
        (_, None) => return Err(required(None, CMD, "feature_width_hz").unwrap_err().into()),
    };
    let spectral = match (&profile, spacing) {
        (Some(p), Some(s)) => Some(multiplex::spectral_capacity(p, s)?),
        _ => None,
    };
    if let Some(r) = &spectral {
        warnings.extend(r.warnings.iter().cloned());
    }
    let spatial = match (input.pitch_m, input.area_m2) {
        (Some(pitch_m), Some(area_m2)) => Some(multiplex::spatial_capacity(&SpatialGrid { pitch_m, area_m2 })?),
        (None, None) => None,
        (None, _) => return Err(required(None, CMD, "pitch_m").unwrap_err().into()),
        (_, None) => return Err(required(None, CMD, "area_m2").unwrap_err().into()),
    };
    let total = match (input.temporal_modes, &spectral, &spatial) {
        (Some(t), Some(s), Some(p)) => {
            let temporal = CapacityReport::from_count(t);
            if t < 0.0 || !t.is_finite() {
                return Err(afc_core::Error::invalid("temporal_modes", t, "must be finite and >= 0").into());
            }
            Some(multiplex::total_budget(&temporal, s, p))
        }
        (Some(_), None, _) => return Err(required(None, CMD, "inhomogeneous.shape").unwrap_err().into()),
        (Some(_), _, None) => return Err(required(None, CMD, "pitch_m").unwrap_err().into()),
        (None, ..) => None,
    };

    let efficiency_budget = match input.n_modes {
        None => None,
        Some(n) => {
            let profile = profile.ok_or_else(|| required(None, CMD, "inhomogeneous.shape").unwrap_err())?;
            let span = required(span, CMD, "hyperfine_span_hz")?;
            let df = required(df, CMD, "feature_width_hz")?;
            let b = multiplex::spectral_efficiency_budget(&profile, span, 0.0, df, n as usize)?;
            if let Some(out) = &a.out {
                let mut t = Table::new(["mode", "center_hz", "od", "finesse", "efficiency", "within_fwhm"]);
                for i in 0..b.n_modes() {
                    t.rows.push(vec![
                        i.to_string(),
                        format_number(b.centers_hz[i]),
                        format_number(b.per_mode_od[i]),
                        b.per_mode_finesse[i].map(format_number).unwrap_or_default(),
                        format_number(b.per_mode_efficiency[i]),
                        b.within_fwhm[i].to_string(),
                    ]);
                }
                write_file(out, &t.to_csv())?;
            }
            let eff = &b.per_mode_efficiency;
            Some(BudgetSummary {
                n_modes: b.n_modes(),
                average_efficiency: b.average_efficiency,
                central_efficiency: eff[(eff.len() - 1) / 2],
                edge_efficiency: eff[0],
                modes_within_fwhm: b.within_fwhm.iter().filter(|&&w| w).count(),
                out: a.out.as_ref().map(|p| p.display().to_string()),
            })
        }
    };

    json(&MultiplexOut {
        material: input.material,
        spacing_hz: spacing,
        spectral: spectral.as_ref().map(ReportOut::from),
        spatial: spatial.as_ref().map(ReportOut::from),
        total: total.as_ref().map(ReportOut::from),
        efficiency_budget,
        warnings,
    })
}

#[derive(Serialize)]
struct T2Out<'a> {
    material: &'a str,
    kind: &'static str,
    temperature_k: f64,
    value_s: f64,
    error_s: f64,
    interpolated: bool,
}

#[derive(Serialize)]
struct IsdOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    excitation_density: Option<f64>,
    corrected_t2_s: f64,
}

pub fn materials(a: &MaterialsArgs) -> Result<Output, CliError> {
    let reg = registry(a.file.as_deref())?;
    match &a.action {
        MaterialsAction::List => json(&reg.names().collect::<Vec<_>>()),
        MaterialsAction::Show { name } => json(reg.get(name)?),
        MaterialsAction::T2 {
            name,
            temperature_k,
            kind,
        } => {
            let kind = match kind {
                KindArg::Pe => T2Kind::Pe,
                KindArg::Afc => T2Kind::Afc,
            };
            let r = materials::t2_lookup(reg.get(name)?, *temperature_k, kind)?;
            json(&T2Out {
                material: name,
                kind: kind.name(),
                temperature_k: r.temperature_k,
                value_s: r.value_s,
                error_s: r.error_s,
                interpolated: r.interpolated,
            })
        }
        MaterialsAction::Isd {
            gamma_h_hz,
            gamma_isd_hz,
            intensity_w_cm2,
            duration_us,
            alpha_per_cm,
        } => {
            let excitation_density = match (intensity_w_cm2, duration_us, alpha_per_cm) {
                (Some(i), Some(t), Some(al)) => Some(materials::excitation_density(*i, *t, *al)?),
                _ => None,
            };
            json(&IsdOut {
                excitation_density,
                corrected_t2_s: materials::isd_corrected_t2(*gamma_h_hz, *gamma_isd_hz)?,
            })
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RateInput {
    link_length_m: Option<f64>,
    refractive_index: Option<f64>,
    n_modes: Option<u64>,
}

#[derive(Serialize)]
struct RateOut {
    communication_time_s: f64,
    n_modes: u64,
    trial_rate_hz: f64,
}

pub fn rate(a: &RateArgs) -> Result<Output, CliError> {
    let input: RateInput = assemble(
        a.config.config.as_deref(),
        &a.config.overrides,
        &[
            ("link_length_m", num(a.length_m)),
            ("refractive_index", num(a.index)),
            ("n_modes", uint(a.modes)),
        ],
    )?;
    let length = required(input.link_length_m, "rate", "link_length_m")?;
    let index = required(input.refractive_index, "rate", "refractive_index")?;
    let n_modes = input.n_modes.unwrap_or(1);
    json(&RateOut {
        communication_time_s: multiplex::communication_time(length, index)?,
        n_modes,
        trial_rate_hz: multiplex::repeater_trial_rate(length, index, n_modes)?,
    })
}
