//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "afc",
    version,
    about = "Multimode capacity calculator for atomic-frequency-comb quantum memories"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed-delay temporal mode capacity.
    #[command(allow_negative_numbers = true)]
    Capacity(CapacityArgs),
    /// Spin-wave temporal mode capacity with HSH control pulses.
    #[command(allow_negative_numbers = true)]
    SwCapacity(SwCapacityArgs),
    /// Power spectrum of a truncated Gaussian pulse train (CSV).
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Dense parameter sweep from a JSON spec (CSV).
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Spectral, spatial and total multiplexing budgets.
    #[command(allow_negative_numbers = true)]
    Multiplex(MultiplexArgs),
    /// Built-in and user material records.
    Materials(MaterialsArgs),
    /// Entanglement-trial rate of one repeater link.
    #[command(allow_negative_numbers = true)]
    Rate(RateArgs),
    /// Re-evaluate the reference values and report agreement.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// JSON file with the subcommand's parameters.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override a parameter, `key=value`; dotted keys reach nested fields.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// AFC bandwidth Γ [Hz] (`bandwidth_gamma_hz`).
    #[arg(long)]
    pub gamma_hz: Option<f64>,
    /// Storage delay 1/Δ [s] (`delay_s`).
    #[arg(long)]
    pub delay_s: Option<f64>,
    /// Optical coherence time [s] (`optical_t2_s`).
    #[arg(long)]
    pub t2_s: Option<f64>,
    /// Target T₂-limited efficiency; the delay follows from it (`target_efficiency`).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Comb finesse (`finesse`).
    #[arg(long)]
    pub finesse: Option<f64>,
    /// Peak optical depth (`peak_od`).
    #[arg(long)]
    pub peak_od: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SwCapacityArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// AFC bandwidth Γ [Hz] (`bandwidth_gamma_hz`).
    #[arg(long)]
    pub gamma_hz: Option<f64>,
    /// Storage delay 1/Δ [s] (`delay_s`).
    #[arg(long)]
    pub delay_s: Option<f64>,
    /// Control-pulse Rabi frequency Ω [Hz] (`rabi_omega_hz`).
    #[arg(long)]
    pub omega_hz: Option<f64>,
    /// Cut-off to square-duration ratio χ (`chi`).
    #[arg(long)]
    pub chi: Option<f64>,
    /// Target T₂-limited efficiency (`target_efficiency`).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Optical coherence time [s] (`optical_t2_s`).
    #[arg(long)]
    pub t2_s: Option<f64>,
    /// Explicit control-pulse cut-off T_c [s] (`cutoff_s`).
    #[arg(long)]
    pub tc_s: Option<f64>,
    /// Explicit mode bin T_m [s] (`mode_bin_s`).
    #[arg(long)]
    pub tm_s: Option<f64>,
    /// Spin inhomogeneous FWHM [Hz] (`spin_linewidth_hz`).
    #[arg(long)]
    pub gamma_spin_hz: Option<f64>,
    /// Spin storage time [s] (`spin_storage_time_s`).
    #[arg(long)]
    pub t_spin_s: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Pulse amplitudes, comma separated (`amplitudes`).
    #[arg(long, value_delimiter = ',')]
    pub amplitudes: Option<Vec<f64>>,
    /// Mode bin T_m [s] (`mode_bin_s`).
    #[arg(long)]
    pub mode_bin_s: Option<f64>,
    /// Intensity FWHM T [s] (`fwhm_s`).
    #[arg(long)]
    pub fwhm_s: Option<f64>,
    /// T_m / T, alternative to --fwhm-s (`kappa`).
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Sample rate [Hz]; default 40 samples per bin (`sample_rate_hz`).
    #[arg(long)]
    pub sample_rate_hz: Option<f64>,
    /// Zero-padding factor; default 8 (`pad_factor`).
    #[arg(long)]
    pub pad_factor: Option<u64>,
    /// Write the CSV here and print a JSON summary instead.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Write the CSV here and print a JSON summary instead.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileArg {
    Square,
    Gaussian,
}

#[derive(Debug, Args)]
pub struct MultiplexArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Take spans and line profile from this material (`material`).
    #[arg(long)]
    pub material: Option<String>,
    /// Extra material records (JSON) merged over the built-ins.
    #[arg(long, value_name = "PATH")]
    pub materials_file: Option<PathBuf>,
    /// Combined hyperfine span Δg + Δe [Hz] (`hyperfine_span_hz`).
    #[arg(long)]
    pub span_hz: Option<f64>,
    /// Spectral feature width Δf [Hz] (`feature_width_hz`).
    #[arg(long)]
    pub df_hz: Option<f64>,
    /// Inhomogeneous line shape (`inhomogeneous.shape`).
    #[arg(long, value_enum)]
    pub profile: Option<ProfileArg>,
    /// Inhomogeneous width or FWHM [Hz] (`inhomogeneous.width_hz`).
    #[arg(long)]
    pub width_hz: Option<f64>,
    /// Peak optical depth of the line (`inhomogeneous.peak_od`).
    #[arg(long)]
    pub peak_od: Option<f64>,
    /// Spatial mode pitch [m] (`pitch_m`).
    #[arg(long)]
    pub pitch_m: Option<f64>,
    /// Crystal face area [m²] (`area_m2`).
    #[arg(long)]
    pub area_m2: Option<f64>,
    /// Temporal mode count for the total budget (`temporal_modes`).
    #[arg(long)]
    pub temporal_modes: Option<f64>,
    /// Spectral modes to place for the efficiency budget (`n_modes`).
    #[arg(long)]
    pub n_modes: Option<u64>,
    /// Write the per-mode efficiency budget CSV here.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MaterialsArgs {
    /// Extra material records (JSON) merged over the built-ins.
    #[arg(long, value_name = "PATH", global = true)]
    pub file: Option<PathBuf>,
    #[command(subcommand)]
    pub action: MaterialsAction,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Pe,
    Afc,
}

#[derive(Debug, Subcommand)]
pub enum MaterialsAction {
    /// Names of all known materials.
    List,
    /// Full record of one material.
    Show { name: String },
    /// Coherence time from the material's T₂ table.
    T2 {
        name: String,
        #[arg(long)]
        temperature_k: f64,
        #[arg(long, value_enum, default_value = "pe")]
        kind: KindArg,
    },
    /// Coherence time with instantaneous spectral diffusion removed.
    #[command(allow_negative_numbers = true)]
    Isd {
        #[arg(long)]
        gamma_h_hz: f64,
        #[arg(long)]
        gamma_isd_hz: f64,
        /// Excitation intensity [W/cm²].
        #[arg(long, requires_all = ["duration_us", "alpha_per_cm"])]
        intensity_w_cm2: Option<f64>,
        /// Excitation pulse duration [μs].
        #[arg(long)]
        duration_us: Option<f64>,
        /// Absorption coefficient [1/cm].
        #[arg(long)]
        alpha_per_cm: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Link length L [m] (`link_length_m`).
    #[arg(long)]
    pub length_m: Option<f64>,
    /// Fibre refractive index n (`refractive_index`).
    #[arg(long)]
    pub index: Option<f64>,
    /// Stored modes per memory; default 1 (`n_modes`).
    #[arg(long)]
    pub modes: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Case name, or `all`.
    #[arg(long, default_value = "all")]
    pub case: String,
    /// List case names and exit.
    #[arg(long)]
    pub list: bool,
    /// Also write figure tables (CSV) into this directory.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}
