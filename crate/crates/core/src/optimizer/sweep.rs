//! Dense one- and two-axis sweeps over the closed-form operations.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity;
use crate::error::{Checks, Error, Result};
use crate::gaussian;
use crate::model::{CapacityReport, Warning};
use crate::multiplex::{self, InhomogeneousProfile};

const CAPACITY_OUTPUTS: &[&str] = &[
    "n_continuous",
    "n_floor",
    "bandwidth_term",
    "control_term",
    "relative_efficiency",
];
const VALUE_OUTPUT: &[&str] = &["value"];

/// Upper bound on cells per sweep.
pub const MAX_CELLS: usize = 10_000_000;

/// Operations a sweep can drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    FixedDelayCapacity,
    FixedDelayCapacityAtEfficiency,
    SpinWaveCapacity,
    SpinWaveCapacityAtEfficiency,
    SpinWaveCapacityExplicit,
    T2RelativeEfficiency,
    HshTransferEfficiency,
    AfcEchoEfficiency,
    SpinDephasingFactor,
    TimeEnergyFraction,
    SpectralEnergyFraction,
    OptimalBandwidthSw,
    OptimalFinesse,
    GaussianLineEfficiency,
}

impl Target {
    pub const ALL: [Target; 14] = [
        Target::FixedDelayCapacity,
        Target::FixedDelayCapacityAtEfficiency,
        Target::SpinWaveCapacity,
        Target::SpinWaveCapacityAtEfficiency,
        Target::SpinWaveCapacityExplicit,
        Target::T2RelativeEfficiency,
        Target::HshTransferEfficiency,
        Target::AfcEchoEfficiency,
        Target::SpinDephasingFactor,
        Target::TimeEnergyFraction,
        Target::SpectralEnergyFraction,
        Target::OptimalBandwidthSw,
        Target::OptimalFinesse,
        Target::GaussianLineEfficiency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::FixedDelayCapacity => "fixed_delay_capacity",
            Target::FixedDelayCapacityAtEfficiency => "fixed_delay_capacity_at_efficiency",
            Target::SpinWaveCapacity => "spin_wave_capacity",
            Target::SpinWaveCapacityAtEfficiency => "spin_wave_capacity_at_efficiency",
            Target::SpinWaveCapacityExplicit => "spin_wave_capacity_explicit",
            Target::T2RelativeEfficiency => "t2_relative_efficiency",
            Target::HshTransferEfficiency => "hsh_transfer_efficiency",
            Target::AfcEchoEfficiency => "afc_echo_efficiency",
            Target::SpinDephasingFactor => "spin_dephasing_factor",
            Target::TimeEnergyFraction => "time_energy_fraction",
            Target::SpectralEnergyFraction => "spectral_energy_fraction",
            Target::OptimalBandwidthSw => "optimal_bandwidth_sw",
            Target::OptimalFinesse => "optimal_finesse",
            Target::GaussianLineEfficiency => "gaussian_line_efficiency",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == name)
            .ok_or_else(|| Error::UnknownTarget(name.to_owned()))
    }

    pub fn params(self) -> &'static [&'static str] {
        match self {
            Target::FixedDelayCapacity => &["gamma_hz", "delay_s"],
            Target::FixedDelayCapacityAtEfficiency => &["eta", "t2_s", "gamma_hz"],
            Target::SpinWaveCapacity => &["gamma_hz", "delay_s", "omega_hz", "chi"],
            Target::SpinWaveCapacityAtEfficiency => &["eta", "t2_s", "gamma_hz", "omega_hz", "chi"],
            Target::SpinWaveCapacityExplicit => &["delay_s", "tc_s", "tm_s"],
            Target::T2RelativeEfficiency => &["delay_s", "t2_s"],
            Target::HshTransferEfficiency => &["ts_s", "omega_hz", "gamma_hz"],
            Target::AfcEchoEfficiency => &["od", "finesse"],
            Target::SpinDephasingFactor => &["t_spin_s", "gamma_spin_hz"],
            Target::TimeEnergyFraction | Target::SpectralEnergyFraction => &["kappa"],
            Target::OptimalBandwidthSw => &["omega_hz", "delay_s", "chi", "gamma_max_hz"],
            Target::OptimalFinesse => &["od"],
            Target::GaussianLineEfficiency => &["peak_od", "width_hz", "detuning_hz"],
        }
    }

    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Target::FixedDelayCapacity
            | Target::FixedDelayCapacityAtEfficiency
            | Target::SpinWaveCapacity
            | Target::SpinWaveCapacityAtEfficiency
            | Target::SpinWaveCapacityExplicit => CAPACITY_OUTPUTS,
            Target::OptimalFinesse | Target::GaussianLineEfficiency => &["finesse", "efficiency"],
            _ => VALUE_OUTPUT,
        }
    }

    /// Evaluates the target; `args` follow [`Target::params`] order.
    pub fn evaluate(self, args: &[f64]) -> Result<Evaluation> {
        assert_eq!(args.len(), self.params().len(), "argument count for {}", self.name());
        let a = args;
        let value = |v: f64| Evaluation {
            values: vec![v],
            warnings: Vec::new(),
        };
        Ok(match self {
            Target::FixedDelayCapacity => capacity::fixed_delay_capacity(a[0], a[1])?.into(),
            Target::FixedDelayCapacityAtEfficiency => {
                capacity::fixed_delay_capacity_at_efficiency(a[0], a[1], a[2])?.into()
            }
            Target::SpinWaveCapacity => capacity::spin_wave_capacity(a[0], a[1], a[2], a[3])?.into(),
            Target::SpinWaveCapacityAtEfficiency => {
                capacity::spin_wave_capacity_at_efficiency(a[0], a[1], a[2], a[3], a[4])?.into()
            }
            Target::SpinWaveCapacityExplicit => capacity::spin_wave_capacity_explicit(a[0], a[1], a[2])?.into(),
            Target::T2RelativeEfficiency => value(capacity::t2_relative_efficiency(a[0], a[1])?),
            Target::HshTransferEfficiency => {
                let mut e = value(capacity::hsh_transfer_efficiency(a[0], a[1], a[2])?);
                e.warnings.extend(capacity::adiabatic_warning(a[1], a[2]));
                e
            }
            Target::AfcEchoEfficiency => value(capacity::afc_echo_efficiency(a[0], a[1])?),
            Target::SpinDephasingFactor => value(capacity::spin_dephasing_factor(a[0], a[1])?),
            Target::TimeEnergyFraction => value(gaussian::time_energy_fraction(a[0])?),
            Target::SpectralEnergyFraction => value(gaussian::spectral_energy_fraction(a[0])?),
            Target::OptimalBandwidthSw => value(super::optimal_bandwidth_sw(a[0], a[1], a[2], a[3])?),
            Target::OptimalFinesse => {
                let f = multiplex::optimal_finesse(a[0])?;
                Evaluation {
                    values: vec![f, capacity::afc_echo_efficiency(a[0], f)?],
                    warnings: Vec::new(),
                }
            }
            Target::GaussianLineEfficiency => {
                let profile = InhomogeneousProfile::gaussian(a[1], a[0]);
                let (finesse, eff) = multiplex::best_efficiency_at(&profile, a[2])?;
                Evaluation {
                    values: vec![finesse.unwrap_or(f64::NAN), eff],
                    warnings: Vec::new(),
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub values: Vec<f64>,
    pub warnings: Vec<Warning>,
}

impl From<CapacityReport> for Evaluation {
    fn from(r: CapacityReport) -> Self {
        Evaluation {
            values: vec![
                r.n_continuous,
                r.n_floor as f64,
                r.bandwidth_term,
                r.control_term,
                r.relative_efficiency,
            ],
            warnings: r.warnings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    /// Uniform grid including both endpoints exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub target: String,
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    /// `None` when the target rejected the cell's inputs.
    pub outputs: Option<Vec<f64>>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub target: String,
    pub axis_names: Vec<String>,
    pub output_names: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Axis names, output names and `status`.
    pub fn header(&self) -> Vec<String> {
        self.axis_names
            .iter()
            .chain(&self.output_names)
            .cloned()
            .chain(std::iter::once("status".to_owned()))
            .collect()
    }
}

/// Where each target parameter comes from.
#[derive(Debug, Clone, Copy)]
enum Source {
    Axis(usize),
    Fixed(f64),
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn check_shape(&self) -> Result<()> {
        let mut c = Checks::new();
        c.require(
            (1..=2).contains(&self.axes.len()),
            "axes",
            self.axes.len() as f64,
            "need one or two axes",
        );
        let mut cells = 1usize;
        for (i, ax) in self.axes.iter().enumerate() {
            let name = format!("axes[{i}]");
            c.require(
                ax.points >= 2,
                &format!("{name}.points"),
                ax.points as f64,
                "must be >= 2",
            )
            .require(ax.min.is_finite(), &format!("{name}.min"), ax.min, "must be finite")
            .require(ax.max.is_finite(), &format!("{name}.max"), ax.max, "must be finite");
            cells = cells.saturating_mul(ax.points);
        }
        c.require(
            cells <= MAX_CELLS,
            "cells",
            cells as f64,
            &format!("sweep must have at most {MAX_CELLS} cells"),
        );
        for (k, v) in &self.fixed {
            c.require(v.is_finite() || *v == f64::INFINITY, k, *v, "must be a number");
        }
        c.finish()
    }

    fn bind(&self, target: Target) -> Result<Vec<Source>> {
        let params = target.params();
        let unknown = self
            .axes
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.fixed.keys().map(String::as_str))
            .find(|n| !params.contains(n));
        if let Some(name) = unknown {
            return Err(Error::UnknownParameter {
                target: target.name().to_owned(),
                name: name.to_owned(),
            });
        }
        params
            .iter()
            .map(|&p| {
                let on_axis = self.axes.iter().position(|a| a.name == p);
                match (on_axis, self.fixed.get(p)) {
                    (Some(_), Some(v)) => Err(Error::invalid(p, *v, "given both as an axis and as a fixed value")),
                    (Some(i), None) => Ok(Source::Axis(i)),
                    (None, Some(v)) => Ok(Source::Fixed(*v)),
                    (None, None) => Err(Error::MissingParameter {
                        target: target.name().to_owned(),
                        name: p.to_owned(),
                    }),
                }
            })
            .collect()
    }

    /// Evaluates every grid cell, first axis outermost.
    pub fn run(&self) -> Result<SweepTable> {
        let target = Target::from_name(&self.target)?;
        self.check_shape()?;
        let sources = self.bind(target)?;
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::invalid(self.axes[1].name.clone(), f64::NAN, "duplicate axis"));
        }

        let grids: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let inner = grids.get(1).map_or(1, Vec::len);
        let cells = grids[0].len() * inner;

        let rows = (0..cells)
            .into_par_iter()
            .map(|cell| {
                let coords = if grids.len() == 2 {
                    vec![grids[0][cell / inner], grids[1][cell % inner]]
                } else {
                    vec![grids[0][cell]]
                };
                let args: Vec<f64> = sources
                    .iter()
                    .map(|s| match *s {
                        Source::Axis(i) => coords[i],
                        Source::Fixed(v) => v,
                    })
                    .collect();
                match target.evaluate(&args) {
                    Ok(ev) => {
                        let status = if ev.warnings.is_empty() {
                            "ok".to_owned()
                        } else {
                            ev.warnings.iter().map(Warning::name).collect::<Vec<_>>().join(";")
                        };
                        SweepRow {
                            axis_values: coords,
                            outputs: Some(ev.values),
                            status,
                        }
                    }
                    Err(e) => SweepRow {
                        axis_values: coords,
                        outputs: None,
                        status: format!("error:{}", e.kind()),
                    },
                }
            })
            .collect();

        Ok(SweepTable {
            target: target.name().to_owned(),
            axis_names: self.axes.iter().map(|a| a.name.clone()).collect(),
            output_names: target.outputs().iter().map(|s| (*s).to_owned()).collect(),
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn capacity_map() -> SweepSpec {
        SweepSpec::from_json(
            r#"{
                "target": "fixed_delay_capacity_at_efficiency",
                "axes": [
                    {"name": "eta", "min": 0.5, "max": 0.95, "points": 10},
                    {"name": "t2_s", "min": 50e-6, "max": 1e-3, "points": 20}
                ],
                "fixed": {"gamma_hz": 5e6}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn capacity_map_cell_matches_direct_value() {
        let mut spec = capacity_map();
        spec.axes[0] = Axis {
            name: "eta".into(),
            min: 0.5,
            max: 0.9,
            points: 9,
        };
        spec.axes[1] = Axis {
            name: "t2_s".into(),
            min: 50e-6,
            max: 250e-6,
            points: 5,
        };
        let table = spec.run().unwrap();
        assert_eq!(table.rows.len(), 45);
        let row = table.rows.iter().find(|r| r.axis_values == [0.9, 250e-6]).unwrap();
        let n = row.outputs.as_ref().unwrap()[0];
        assert!((n - 13.2).abs() < 0.05);
    }

    #[test]
    fn rows_are_row_major() {
        let t = capacity_map().run().unwrap();
        assert_eq!(t.rows.len(), 200);
        assert_eq!(t.rows[0].axis_values, [0.5, 50e-6]);
        assert_eq!(t.rows[1].axis_values[0], 0.5);
        assert_eq!(t.rows[20].axis_values[0], 0.55);
        assert_eq!(t.rows[199].axis_values, [0.95, 1e-3]);
        assert_eq!(
            t.header(),
            [
                "eta",
                "t2_s",
                "n_continuous",
                "n_floor",
                "bandwidth_term",
                "control_term",
                "relative_efficiency",
                "status"
            ]
        );
    }

    #[test]
    fn two_point_axis_has_exact_endpoints() {
        let spec = SweepSpec {
            target: "fixed_delay_capacity".into(),
            axes: vec![Axis {
                name: "gamma_hz".into(),
                min: 0.1,
                max: 0.3,
                points: 2,
            }],
            fixed: [("delay_s".to_owned(), 25.0)].into(),
        };
        let t = spec.run().unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].axis_values, [0.1]);
        assert_eq!(t.rows[1].axis_values, [0.3]);
    }

    #[test]
    fn unknown_target_and_missing_parameter() {
        let mut spec = capacity_map();
        spec.target = "warp_drive".into();
        assert!(matches!(spec.run(), Err(Error::UnknownTarget(_))));

        let mut spec = capacity_map();
        spec.fixed.clear();
        match spec.run() {
            Err(Error::MissingParameter { name, .. }) => assert_eq!(name, "gamma_hz"),
            other => panic!("{other:?}"),
        }

        let mut spec = capacity_map();
        spec.fixed.insert("omega_hz".into(), 1.0);
        assert!(matches!(spec.run(), Err(Error::UnknownParameter { .. })));
    }

    #[test]
    fn bad_shape_is_rejected() {
        let mut spec = capacity_map();
        spec.axes[0].points = 1;
        assert!(spec.run().is_err());
        let mut spec = capacity_map();
        spec.axes[1].points = MAX_CELLS;
        assert!(spec.run().is_err());
        let mut spec = capacity_map();
        spec.axes.clear();
        assert!(spec.run().is_err());
    }

    #[test]
    fn invalid_cells_carry_status() {
        let spec = SweepSpec {
            target: "fixed_delay_capacity_at_efficiency".into(),
            axes: vec![Axis {
                name: "eta".into(),
                min: 0.5,
                max: 1.0,
                points: 3,
            }],
            fixed: [("gamma_hz".to_owned(), 5e6), ("t2_s".to_owned(), 1e-4)].into(),
        };
        let t = spec.run().unwrap();
        assert_eq!(t.rows[2].status, "error:InvalidParameter");
        assert!(t.rows[2].outputs.is_none());
        assert_eq!(t.rows[0].status, "ok");
    }

    #[test]
    fn clamped_cells_report_warning() {
        let spec = SweepSpec {
            target: "spin_wave_capacity".into(),
            axes: vec![Axis {
                name: "gamma_hz".into(),
                min: 0.5e6,
                max: 60e6,
                points: 5,
            }],
            fixed: [
                ("delay_s".to_owned(), 10e-6),
                ("omega_hz".to_owned(), 620e3),
                ("chi".to_owned(), 1.36),
            ]
            .into(),
        };
        let t = spec.run().unwrap();
        assert_eq!(t.rows[4].status, "control_pulse_dominates");
    }

    #[test]
    fn every_target_evaluates_at_a_sane_point() {
        let sample = |p: &str| match p {
            "eta" => 0.9,
            "t2_s" => 250e-6,
            "gamma_hz" => 5e6,
            "delay_s" => 50e-6,
            "omega_hz" => 620e3,
            "chi" => 1.36,
            "tc_s" => 10e-6,
            "tm_s" => 0.5e-6,
            "ts_s" => 10e-6,
            "od" => 5.8,
            "finesse" => 3.0,
            "t_spin_s" => 1e-5,
            "gamma_spin_hz" => 2e4,
            "kappa" => 2.38,
            "gamma_max_hz" => f64::INFINITY,
            "peak_od" => 10.0,
            "width_hz" => 10e9,
            "detuning_hz" => 1e9,
            other => panic!("no sample for {other}"),
        };
        for t in Target::ALL {
            let args: Vec<f64> = t.params().iter().map(|p| sample(p)).collect();
            let ev = t.evaluate(&args).unwrap();
            assert_eq!(ev.values.len(), t.outputs().len(), "{}", t.name());
            assert_eq!(Target::from_name(t.name()).unwrap(), t);
        }
    }
}
