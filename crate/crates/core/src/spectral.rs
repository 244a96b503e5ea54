//! Discrete power spectra of truncated Gaussian pulse trains.
//!
//! Each pulse sits centred in its own mode bin of width `T_m` and is hard
//! truncated at the bin edges. Spectra are two-sided, centred at 0 Hz and
//! normalised so that `Σ P(f) df = Σ |x(t)|² dt`.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Checks, Error, Result};

/// Minimum samples per mode bin.
pub const MIN_SAMPLES_PER_BIN: f64 = 20.0;

pub const DEFAULT_PAD_FACTOR: usize = 8;

/// Sidebands weaker than this fraction of the spectral maximum are not
/// counted as modulation peaks.
pub const DEFAULT_PEAK_FLOOR: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseTrain {
    pub amplitudes: Vec<f64>,
    pub mode_bin_s: f64,
    pub fwhm_s: f64,
    pub sample_rate_hz: f64,
    pub samples: Vec<f64>,
}

impl PulseTrain {
    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    pub fn duration_s(&self) -> f64 {
        self.amplitudes.len() as f64 * self.mode_bin_s
    }

    /// Time of sample `i` (samples sit at the centre of their interval).
    pub fn time(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dt()
    }

    /// `Σ |x|² dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|x| x * x).sum::<f64>() * self.dt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.amplitudes.iter_mut().for_each(|a| *a *= factor);
        out.samples.iter_mut().for_each(|x| *x *= factor);
        out
    }
}

/// Synthesises consecutive Gaussian field pulses (intensity FWHM `fwhm_s`,
/// field FWHM `√2 · fwhm_s`), one per amplitude, each truncated to its bin.
pub fn synthesize_train(amplitudes: &[f64], fwhm_s: f64, mode_bin_s: f64, sample_rate_hz: f64) -> Result<PulseTrain> {
    let mut c = Checks::new();
    c.require(!amplitudes.is_empty(), "amplitudes", 0.0, "need at least one amplitude")
        .positive("fwhm_s", fwhm_s)
        .positive("mode_bin_s", mode_bin_s)
        .positive("sample_rate_hz", sample_rate_hz);
    for (i, a) in amplitudes.iter().enumerate() {
        c.require(a.is_finite(), &format!("amplitudes[{i}]"), *a, "must be finite");
    }
    c.finish()?;

    let required_hz = MIN_SAMPLES_PER_BIN / mode_bin_s;
    if sample_rate_hz < required_hz * (1.0 - 1e-12) {
        return Err(Error::UndersampledTrain {
            sample_rate_hz,
            required_hz,
        });
    }

    let bins = amplitudes.len();
    let n = (bins as f64 * mode_bin_s * sample_rate_hz).round() as usize;
    let dt = 1.0 / sample_rate_hz;
    let width = fwhm_s * fwhm_s;
    let samples = (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) * dt;
            let k = ((t / mode_bin_s).floor() as usize).min(bins - 1);
            let x = t - (k as f64 + 0.5) * mode_bin_s;
            amplitudes[k] * (-2.0 * LN_2 * x * x / width).exp()
        })
        .collect();

    Ok(PulseTrain {
        amplitudes: amplitudes.to_vec(),
        mode_bin_s,
        fwhm_s,
        sample_rate_hz,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpectrum {
    /// Two-sided, ascending.
    pub frequencies_hz: Vec<f64>,
    pub power_density: Vec<f64>,
    pub resolution_hz: f64,
}

/// Spectrum with the default zero-pad factor.
pub fn power_spectrum(train: &PulseTrain) -> PowerSpectrum {
    power_spectrum_padded(train, DEFAULT_PAD_FACTOR).expect("default pad factor is valid")
}

pub fn power_spectrum_padded(train: &PulseTrain, pad_factor: usize) -> Result<PowerSpectrum> {
    Checks::new().at_least("pad_factor", pad_factor as f64, 1.0).finish()?;
    let n = train.samples.len() * pad_factor;
    let dt = train.dt();

    let mut buf: Vec<Complex64> = train
        .samples
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(n)
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    // fftshift: bin k maps to frequency (k - n/2) df after rotation
    let half = n / 2;
    buf.rotate_right(half);
    let df = 1.0 / (n as f64 * dt);
    let frequencies_hz = (0..n).map(|i| (i as f64 - half as f64) * df).collect();
    let power_density = buf.iter().map(|z| z.norm_sqr() * dt * dt).collect();

    Ok(PowerSpectrum {
        frequencies_hz,
        power_density,
        resolution_hz: df,
    })
}

impl PowerSpectrum {
    pub fn len(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies_hz.is_empty()
    }

    /// `Σ P df` over the periodic grid; equals the train energy.
    pub fn total_energy(&self) -> f64 {
        self.power_density.iter().sum::<f64>() * self.resolution_hz
    }

    /// Largest `|f|` the grid covers.
    pub fn grid_limit_hz(&self) -> f64 {
        self.frequencies_hz.iter().fold(0.0f64, |m, f| m.max(f.abs()))
    }

    fn trapezoid(&self, lo: f64, hi: f64) -> f64 {
        let f = &self.frequencies_hz;
        let p = &self.power_density;
        let mut sum = 0.0;
        for i in 0..f.len().saturating_sub(1) {
            let (a, b) = (f[i].max(lo), f[i + 1].min(hi));
            if b <= a {
                continue;
            }
            let slope = (p[i + 1] - p[i]) / (f[i + 1] - f[i]);
            let pa = p[i] + slope * (a - f[i]);
            let pb = p[i] + slope * (b - f[i]);
            sum += 0.5 * (pa + pb) * (b - a);
        }
        sum
    }

    /// Fraction of spectral energy in `|f| ≤ half_width_hz`, by trapezoidal
    /// integration with linear interpolation at the band edges.
    pub fn band_energy_fraction(&self, half_width_hz: f64) -> Result<f64> {
        Checks::new().positive("half_width_hz", half_width_hz).finish()?;
        let grid_limit_hz = self.grid_limit_hz();
        if half_width_hz > grid_limit_hz {
            return Err(Error::BandExceedsGrid {
                half_width_hz,
                grid_limit_hz,
            });
        }
        let total = self.trapezoid(f64::NEG_INFINITY, f64::INFINITY);
        Ok(self.trapezoid(-half_width_hz, half_width_hz) / total)
    }

    /// Indices of local maxima away from DC and above `floor · max(P)`.
    fn sideband_indices(&self, floor: f64) -> Vec<usize> {
        let p = &self.power_density;
        let peak = p.iter().cloned().fold(0.0f64, f64::max);
        (1..p.len().saturating_sub(1))
            .filter(|&i| p[i] > p[i - 1] && p[i] >= p[i + 1])
            .filter(|&i| self.frequencies_hz[i].abs() > self.resolution_hz)
            .filter(|&i| p[i] >= floor * peak)
            .collect()
    }

    /// The `count` strongest modulation sidebands, in ascending frequency.
    pub fn modulation_peaks(&self, count: usize) -> Result<Vec<f64>> {
        self.modulation_peaks_with_floor(count, DEFAULT_PEAK_FLOOR)
    }

    pub fn modulation_peaks_with_floor(&self, count: usize, floor: f64) -> Result<Vec<f64>> {
        Checks::new()
            .at_least("count", count as f64, 1.0)
            .non_negative("floor", floor)
            .finish()?;
        let mut idx = self.sideband_indices(floor);
        if idx.len() < count {
            return Err(Error::TooFewPeaks {
                requested: count,
                found: idx.len(),
            });
        }
        let p = &self.power_density;
        let f = &self.frequencies_hz;
        idx.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(f[a].total_cmp(&f[b])));
        let mut out: Vec<f64> = idx[..count].iter().map(|&i| f[i]).collect();
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// All sidebands above `floor`, ascending.
    pub fn sidebands(&self, floor: f64) -> Vec<f64> {
        self.sideband_indices(floor)
            .into_iter()
            .map(|i| self.frequencies_hz[i])
            .collect()
    }

    fn nearest_index(&self, f: f64) -> usize {
        let i = ((f - self.frequencies_hz[0]) / self.resolution_hz).round();
        (i.max(0.0) as usize).min(self.len() - 1)
    }

    /// Full width at half maximum of the peak nearest `f`, with linear
    /// interpolation of the half-power crossings. `None` if a crossing falls
    /// off the grid.
    pub fn peak_fwhm(&self, f: f64) -> Option<f64> {
        let p = &self.power_density;
        let freqs = &self.frequencies_hz;
        let mut i = self.nearest_index(f);
        // climb to the local maximum
        loop {
            if i + 1 < p.len() && p[i + 1] > p[i] {
                i += 1;
            } else if i > 0 && p[i - 1] > p[i] {
                i -= 1;
            } else {
                break;
            }
        }
        let half = 0.5 * p[i];
        let cross = |j: usize, k: usize| freqs[j] + (half - p[j]) * (freqs[k] - freqs[j]) / (p[k] - p[j]);

        let mut hi = i;
        while hi + 1 < p.len() && p[hi + 1] > half {
            hi += 1;
        }
        if hi + 1 >= p.len() {
            return None;
        }
        let mut lo = i;
        while lo > 0 && p[lo - 1] > half {
            lo -= 1;
        }
        if lo == 0 {
            return None;
        }
        Some(cross(hi, hi + 1) - cross(lo - 1, lo))
    }
}
