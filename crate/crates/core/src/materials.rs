//! Material constants, the Eu:YSO coherence-time table and instantaneous
//! spectral diffusion arithmetic.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Checks, Error, Result, Violation};
use crate::model::Validate;
use crate::multiplex::InhomogeneousProfile;

pub const BUILTIN_NAMES: [&str; 4] = ["Eu151_YSO", "Eu153_YSO", "Pr_YSO", "Yb171_YSO"];

/// Relative tolerance between a stored peak OD and `α L`.
const OD_CONSISTENCY: f64 = 0.01;
/// Temperatures closer than this are treated as the same table row.
const TEMPERATURE_MATCH_K: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Measured {
    pub value_s: f64,
    pub error_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct T2Row {
    pub temperature_k: f64,
    pub pe_t2: Measured,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub afc_t2: Option<Measured>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperfine_span_ground_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperfine_span_excited_hz: Option<f64>,
    /// Combined `Δg + Δe` when only the sum is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperfine_span_total_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_width_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_afc_bandwidth_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inhomogeneous: Option<InhomogeneousProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absorption_coefficient_per_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crystal_length_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub t2_table: Vec<T2Row>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl MaterialRecord {
    /// `Δg + Δe`, from the stored sum or the individual spans.
    pub fn hyperfine_span_total(&self) -> Option<f64> {
        self.hyperfine_span_total_hz
            .or(match (self.hyperfine_span_ground_hz, self.hyperfine_span_excited_hz) {
                (Some(g), Some(e)) => Some(g + e),
                _ => None,
            })
    }

    /// `α L`, when both are known.
    pub fn optical_depth(&self) -> Option<f64> {
        Some(self.absorption_coefficient_per_m? * self.crystal_length_m?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: Self = serde_json::from_str(text)?;
        record.check()?;
        Ok(record)
    }
}

impl Validate for MaterialRecord {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.require(!self.name.is_empty(), "name", f64::NAN, "must be non-empty");
        let optional = [
            ("hyperfine_span_ground_hz", self.hyperfine_span_ground_hz),
            ("hyperfine_span_excited_hz", self.hyperfine_span_excited_hz),
            ("hyperfine_span_total_hz", self.hyperfine_span_total_hz),
            ("feature_width_hz", self.feature_width_hz),
        ];
        for (name, v) in optional {
            if let Some(v) = v {
                c.non_negative(name, v);
            }
        }
        if let Some(v) = self.max_afc_bandwidth_hz {
            c.positive("max_afc_bandwidth_hz", v);
        }
        if let Some(v) = self.absorption_coefficient_per_m {
            c.non_negative("absorption_coefficient_per_m", v);
        }
        if let Some(v) = self.crystal_length_m {
            c.positive("crystal_length_m", v);
        }
        if let Some(p) = &self.inhomogeneous {
            for v in p.violations() {
                c.push(v);
            }
            if let Some(od) = self.optical_depth() {
                let ok = (p.peak_od - od).abs() <= OD_CONSISTENCY * od.abs().max(p.peak_od.abs());
                c.require(
                    ok,
                    "inhomogeneous.peak_od",
                    p.peak_od,
                    "must equal absorption_coefficient_per_m * crystal_length_m within 1%",
                );
            }
        }
        for (i, row) in self.t2_table.iter().enumerate() {
            c.positive("t2_table.temperature_k", row.temperature_k)
                .positive("t2_table.pe_t2.value_s", row.pe_t2.value_s)
                .non_negative("t2_table.pe_t2.error_s", row.pe_t2.error_s);
            if let Some(afc) = row.afc_t2 {
                c.positive("t2_table.afc_t2.value_s", afc.value_s)
                    .non_negative("t2_table.afc_t2.error_s", afc.error_s);
            }
            if i > 0 {
                let prev = self.t2_table[i - 1].temperature_k;
                c.require(
                    row.temperature_k > prev,
                    "t2_table.temperature_k",
                    row.temperature_k,
                    "rows must be strictly increasing in temperature",
                );
            }
        }
        c.into_violations()
    }
}

fn row(temperature_k: f64, pe: (f64, f64), afc: Option<(f64, f64)>) -> T2Row {
    let us = |(value_s, error_s): (f64, f64)| Measured { value_s, error_s };
    T2Row {
        temperature_k,
        pe_t2: us(pe),
        afc_t2: afc.map(us),
    }
}

/// Optical coherence times of ¹⁵¹Eu:YSO, photon echo and AFC.
fn eu151_t2_table() -> Vec<T2Row> {
    vec![
        row(3.7, (707e-6, 204e-6), Some((300e-6, 30e-6))),
        row(4.7, (651e-6, 172e-6), Some((290e-6, 20e-6))),
        row(5.7, (423e-6, 75e-6), Some((222e-6, 13e-6))),
        row(6.1, (256e-6, 29e-6), None),
        row(6.6, (140e-6, 9e-6), Some((140e-6, 3e-6))),
        row(7.6, (38e-6, 2e-6), Some((50.1e-6, 1.1e-6))),
        row(8.1, (23e-6, 1e-6), Some((29e-6, 0.4e-6))),
        row(9.1, (8e-6, 1e-6), Some((9.7e-6, 1.2e-6))),
    ]
}

/// Built-in record by name.
pub fn builtin(name: &str) -> Result<MaterialRecord> {
    let base = MaterialRecord {
        name: name.to_string(),
        ..Default::default()
    };
    Ok(match name {
        "Eu151_YSO" => MaterialRecord {
            hyperfine_span_total_hz: Some(258e6),
            feature_width_hz: Some(5e6),
            max_afc_bandwidth_hz: Some(5e6),
            inhomogeneous: Some(InhomogeneousProfile::square(1.6e9, 5.8)),
            t2_table: eu151_t2_table(),
            notes: Some("AFC bandwidth is bounded above by 5.7 MHz; 5 MHz is the operating value".into()),
            ..base
        },
        "Eu153_YSO" => MaterialRecord {
            hyperfine_span_total_hz: Some(663e6),
            feature_width_hz: Some(15e6),
            max_afc_bandwidth_hz: Some(15e6),
            ..base
        },
        "Pr_YSO" => MaterialRecord {
            hyperfine_span_total_hz: Some(36.9e6),
            feature_width_hz: Some(18e6),
            max_afc_bandwidth_hz: Some(5e6),
            inhomogeneous: Some(InhomogeneousProfile::gaussian(10e9, 10.0)),
            absorption_coefficient_per_m: Some(2000.0),
            crystal_length_m: Some(5e-3),
            notes: Some("AFC bandwidth of 4 MHz used in practice, 5 MHz attainable".into()),
            ..base
        },
        "Yb171_YSO" => MaterialRecord {
            max_afc_bandwidth_hz: Some(100e6),
            ..base
        },
        _ => return Err(Error::UnknownMaterial(name.to_string())),
    })
}

/// Name-keyed set of records. User records shadow built-ins.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRegistry {
    records: BTreeMap<String, MaterialRecord>,
}

impl Default for MaterialRegistry {
    fn default() -> Self {
        Self::builtins()
    }
}

impl MaterialRegistry {
    pub fn empty() -> Self {
        Self {
            records: BTreeMap::new(),
        }
    }

    pub fn builtins() -> Self {
        let records = BUILTIN_NAMES
            .iter()
            .map(|n| (n.to_string(), builtin(n).expect("builtin record")))
            .collect();
        Self { records }
    }

    pub fn get(&self, name: &str) -> Result<&MaterialRecord> {
        self.records
            .get(name)
            .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    pub fn records(&self) -> impl Iterator<Item = &MaterialRecord> {
        self.records.values()
    }

    pub fn insert(&mut self, record: MaterialRecord) -> Result<()> {
        record.check()?;
        self.records.insert(record.name.clone(), record);
        Ok(())
    }

    /// Merges a JSON array of records, or a single record. All records are
    /// validated before any is inserted. Returns the merged names.
    pub fn merge_json(&mut self, text: &str) -> Result<Vec<String>> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let records: Vec<MaterialRecord> = match value {
            serde_json::Value::Array(_) => serde_json::from_value(value)?,
            other => vec![serde_json::from_value(other)?],
        };
        for r in &records {
            r.check()?;
        }
        let names = records.iter().map(|r| r.name.clone()).collect();
        for r in records {
            self.records.insert(r.name.clone(), r);
        }
        Ok(names)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T2Kind {
    Pe,
    Afc,
}

impl T2Kind {
    pub fn name(self) -> &'static str {
        match self {
            T2Kind::Pe => "PE",
            T2Kind::Afc => "AFC",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct T2Lookup {
    pub temperature_k: f64,
    pub value_s: f64,
    pub error_s: f64,
    /// False when the value is a tabulated row.
    pub interpolated: bool,
}

/// Coherence time at `temperature_k`, exact on table rows and linearly
/// interpolated (value and error) in between. AFC interpolation skips rows
/// without an AFC entry.
pub fn t2_lookup(record: &MaterialRecord, temperature_k: f64, kind: T2Kind) -> Result<T2Lookup> {
    let table = &record.t2_table;
    let (Some(first), Some(last)) = (table.first(), table.last()) else {
        return Err(Error::NoData {
            temperature_k,
            kind: kind.name().into(),
        });
    };
    if !(temperature_k >= first.temperature_k - TEMPERATURE_MATCH_K
        && temperature_k <= last.temperature_k + TEMPERATURE_MATCH_K)
    {
        return Err(Error::OutOfRange {
            temperature_k,
            min_k: first.temperature_k,
            max_k: last.temperature_k,
        });
    }
    let pick = |r: &T2Row| match kind {
        T2Kind::Pe => Some(r.pe_t2),
        T2Kind::Afc => r.afc_t2,
    };
    let no_data = || Error::NoData {
        temperature_k,
        kind: kind.name().into(),
    };

    if let Some(r) = table
        .iter()
        .find(|r| (r.temperature_k - temperature_k).abs() <= TEMPERATURE_MATCH_K)
    {
        let m = pick(r).ok_or_else(no_data)?;
        return Ok(T2Lookup {
            temperature_k,
            value_s: m.value_s,
            error_s: m.error_s,
            interpolated: false,
        });
    }

    let points: Vec<(f64, Measured)> = table
        .iter()
        .filter_map(|r| pick(r).map(|m| (r.temperature_k, m)))
        .collect();
    let upper = points
        .iter()
        .position(|(t, _)| *t > temperature_k)
        .filter(|&i| i > 0)
        .ok_or_else(no_data)?;
    let (t0, m0) = points[upper - 1];
    let (t1, m1) = points[upper];
    let w = (temperature_k - t0) / (t1 - t0);
    let lerp = |a: f64, b: f64| a + w * (b - a);
    Ok(T2Lookup {
        temperature_k,
        value_s: lerp(m0.value_s, m1.value_s),
        error_s: lerp(m0.error_s, m1.error_s),
        interpolated: true,
    })
}

/// Instantaneous spectral diffusion measurement. Units follow the usual
/// laboratory convention rather than SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsdMeasurement {
    pub intensity_w_per_cm2: f64,
    pub pulse_duration_us: f64,
    pub absorption_coefficient_per_cm: f64,
    pub homogeneous_linewidth_hz: f64,
    pub isd_linewidth_hz: f64,
}

impl Validate for IsdMeasurement {
    fn violations(&self) -> Vec<Violation> {
        let mut c = Checks::new();
        c.non_negative("intensity_w_per_cm2", self.intensity_w_per_cm2)
            .non_negative("pulse_duration_us", self.pulse_duration_us)
            .non_negative("absorption_coefficient_per_cm", self.absorption_coefficient_per_cm)
            .non_negative("homogeneous_linewidth_hz", self.homogeneous_linewidth_hz)
            .non_negative("isd_linewidth_hz", self.isd_linewidth_hz)
            .require(
                self.isd_linewidth_hz <= self.homogeneous_linewidth_hz,
                "isd_linewidth_hz",
                self.isd_linewidth_hz,
                "must not exceed homogeneous_linewidth_hz",
            );
        c.into_violations()
    }
}

impl IsdMeasurement {
    pub fn excitation_density(&self) -> Result<f64> {
        excitation_density(
            self.intensity_w_per_cm2,
            self.pulse_duration_us,
            self.absorption_coefficient_per_cm,
        )
    }

    pub fn corrected_t2(&self) -> Result<f64> {
        isd_corrected_t2(self.homogeneous_linewidth_hz, self.isd_linewidth_hz)
    }
}

/// `ρ_ex = 3·10¹² I τ α` with `I` in W/cm², `τ` in μs and `α` in cm⁻¹.
pub fn excitation_density(intensity_w_per_cm2: f64, duration_us: f64, alpha_per_cm: f64) -> Result<f64> {
    Checks::new()
        .non_negative("intensity_w_per_cm2", intensity_w_per_cm2)
        .non_negative("duration_us", duration_us)
        .non_negative("alpha_per_cm", alpha_per_cm)
        .finish()?;
    Ok(3e12 * intensity_w_per_cm2 * duration_us * alpha_per_cm)
}

/// Coherence time with the diffusion contribution removed,
/// `1 / (π (Γ_h − Γ_ISD))`.
pub fn isd_corrected_t2(gamma_h_hz: f64, gamma_isd_hz: f64) -> Result<f64> {
    Checks::new()
        .non_negative("gamma_isd_hz", gamma_isd_hz)
        .require(gamma_h_hz.is_finite(), "gamma_h_hz", gamma_h_hz, "must be finite")
        .finish()?;
    if gamma_h_hz <= gamma_isd_hz {
        return Err(Error::NonPositiveLinewidth {
            gamma_h_hz,
            gamma_isd_hz,
        });
    }
    Ok(1.0 / (PI * (gamma_h_hz - gamma_isd_hz)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eu() -> MaterialRecord {
        builtin("Eu151_YSO").unwrap()
    }

    #[test]
    fn builtins_validate() {
        for n in BUILTIN_NAMES {
            builtin(n).unwrap().check().unwrap();
        }
        assert!(matches!(builtin("Nd_YVO"), Err(Error::UnknownMaterial(_))));
    }

    #[test]
    fn builtin_examples() {
        let pr = builtin("Pr_YSO").unwrap();
        assert!((pr.optical_depth().unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(pr.hyperfine_span_total(), Some(36.9e6));
        assert_eq!(builtin("Eu153_YSO").unwrap().max_afc_bandwidth_hz, Some(15e6));
        let yb = builtin("Yb171_YSO").unwrap();
        assert_eq!(yb.max_afc_bandwidth_hz, Some(100e6));
        assert_eq!(yb.hyperfine_span_total(), None);
        assert!(yb.t2_table.is_empty());
    }

    #[test]
    fn span_from_components() {
        let r = MaterialRecord {
            name: "x".into(),
            hyperfine_span_ground_hz: Some(10e6),
            hyperfine_span_excited_hz: Some(2e6),
            ..Default::default()
        };
        assert_eq!(r.hyperfine_span_total(), Some(12e6));
    }

    #[test]
    fn exact_rows() {
        let r = t2_lookup(&eu(), 3.7, T2Kind::Pe).unwrap();
        assert_eq!((r.value_s, r.error_s, r.interpolated), (707e-6, 204e-6, false));
        let r = t2_lookup(&eu(), 6.6, T2Kind::Afc).unwrap();
        assert_eq!((r.value_s, r.error_s), (140e-6, 3e-6));
    }

    #[test]
    fn interpolated_row() {
        let r = t2_lookup(&eu(), 4.2, T2Kind::Pe).unwrap();
        assert!((r.value_s - 679e-6).abs() < 1e-12);
        assert!(r.interpolated);
    }

    #[test]
    fn afc_gap() {
        assert!(matches!(t2_lookup(&eu(), 6.1, T2Kind::Afc), Err(Error::NoData { .. })));
        // interpolation bridges the missing row
        let r = t2_lookup(&eu(), 6.0, T2Kind::Afc).unwrap();
        let expected = 222e-6 + (6.0 - 5.7) / (6.6 - 5.7) * (140e-6 - 222e-6);
        assert!((r.value_s - expected).abs() < 1e-15);
        assert!(t2_lookup(&eu(), 6.1, T2Kind::Pe).is_ok());
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            t2_lookup(&eu(), 3.0, T2Kind::Pe),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            t2_lookup(&eu(), 9.5, T2Kind::Afc),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            t2_lookup(&eu(), f64::NAN, T2Kind::Afc),
            Err(Error::OutOfRange { .. })
        ));
        let pr = builtin("Pr_YSO").unwrap();
        assert!(matches!(t2_lookup(&pr, 4.0, T2Kind::Pe), Err(Error::NoData { .. })));
    }

    #[test]
    fn od_consistency_enforced() {
        let mut pr = builtin("Pr_YSO").unwrap();
        pr.crystal_length_m = Some(6e-3);
        let err = pr.check().unwrap_err();
        let names = err.violations().unwrap().names();
        assert!(names.contains(&"inhomogeneous.peak_od"));
        pr.crystal_length_m = Some(5.04e-3);
        pr.check().unwrap();
    }

    #[test]
    fn unsorted_table_rejected() {
        let mut r = eu();
        r.t2_table.swap(0, 1);
        assert!(r.check().is_err());
    }

    #[test]
    fn registry_merge_shadows() {
        let mut reg = MaterialRegistry::builtins();
        let merged = reg
            .merge_json(r#"[{"name":"Eu153_YSO","max_afc_bandwidth_hz":2e7},{"name":"Er_YSO"}]"#)
            .unwrap();
        assert_eq!(merged, ["Eu153_YSO", "Er_YSO"]);
        assert_eq!(reg.get("Eu153_YSO").unwrap().max_afc_bandwidth_hz, Some(2e7));
        assert!(reg.get("Er_YSO").is_ok());
        reg.merge_json(r#"{"name":"Tm_YAG"}"#).unwrap();
        assert_eq!(reg.names().count(), 6);
    }

    #[test]
    fn registry_merge_is_atomic() {
        let mut reg = MaterialRegistry::builtins();
        let err = reg.merge_json(r#"[{"name":"A"},{"name":"B","crystal_length_m":-1}]"#);
        assert!(err.is_err());
        assert!(reg.get("A").is_err());
        assert!(reg.merge_json(r#"{"name":"C","colour":"red"}"#).is_err());
    }

    #[test]
    fn record_json_roundtrip() {
        let eu = eu();
        let text = serde_json::to_string(&eu).unwrap();
        assert_eq!(MaterialRecord::from_json(&text).unwrap(), eu);
    }

    #[test]
    fn excitation_density_examples() {
        assert_eq!(excitation_density(0.0, 3.0, 4.0).unwrap(), 0.0);
        assert_eq!(excitation_density(1.0, 1.0, 1.0).unwrap(), 3e12);
        assert_eq!(
            excitation_density(2.0, 1.5, 0.7).unwrap(),
            2.0 * excitation_density(1.0, 1.5, 0.7).unwrap()
        );
        assert!(excitation_density(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn isd_examples() {
        assert_eq!(isd_corrected_t2(1e3, 0.0).unwrap(), 1.0 / (PI * 1e3));
        let t2 = isd_corrected_t2(450.0 + 200.0, 200.0).unwrap();
        assert!((t2 - 707e-6).abs() < 0.5e-6);
        let half = isd_corrected_t2(225.0 + 200.0, 200.0).unwrap();
        assert!((half / t2 - 2.0).abs() < 1e-12);
        assert!(matches!(
            isd_corrected_t2(100.0, 100.0),
            Err(Error::NonPositiveLinewidth { .. })
        ));
    }

    #[test]
    fn isd_measurement_validates() {
        let m = IsdMeasurement {
            intensity_w_per_cm2: 1.0,
            pulse_duration_us: 1.0,
            absorption_coefficient_per_cm: 1.0,
            homogeneous_linewidth_hz: 100.0,
            isd_linewidth_hz: 200.0,
        };
        assert!(m.check().is_err());
    }
}
