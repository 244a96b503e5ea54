use std::fmt;

use serde::{Deserialize, Serialize};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One violated parameter constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub name: String,
    pub value: f64,
    pub constraint: String,
}

impl Violation {
    pub fn new(name: impl Into<String>, value: f64, constraint: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value,
            constraint: constraint.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} ({})", self.name, self.value, self.constraint)
    }
}

/// Every violation found while checking a value, never just the first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Violations(pub Vec<Violation>);

impl Violations {
    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.0.iter().map(|v| v.name.as_str()).collect()
    }
}

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(Violations),

    #[error("control pulse cut-off {cutoff_s} s does not fit inside the storage delay {delay_s} s")]
    ControlPulseDominates { cutoff_s: f64, delay_s: f64 },

    #[error("sample rate {sample_rate_hz} Hz is below the required {required_hz} Hz")]
    UndersampledTrain { sample_rate_hz: f64, required_hz: f64 },

    #[error("band half-width {half_width_hz} Hz exceeds the spectrum grid limit {grid_limit_hz} Hz")]
    BandExceedsGrid { half_width_hz: f64, grid_limit_hz: f64 },

    #[error("requested {requested} modulation peaks but the spectrum has {found}")]
    TooFewPeaks { requested: usize, found: usize },

    #[error("unknown sweep target `{0}`")]
    UnknownTarget(String),

    #[error("sweep target `{target}` needs parameter `{name}`")]
    MissingParameter { target: String, name: String },

    #[error("sweep target `{target}` has no parameter `{name}`")]
    UnknownParameter { target: String, name: String },

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("temperature {temperature_k} K outside tabulated range [{min_k}, {max_k}] K")]
    OutOfRange { temperature_k: f64, min_k: f64, max_k: f64 },

    #[error("no {kind} coherence time tabulated at {temperature_k} K")]
    NoData { temperature_k: f64, kind: String },

    #[error("homogeneous linewidth {gamma_h_hz} Hz does not exceed the ISD component {gamma_isd_hz} Hz")]
    NonPositiveLinewidth { gamma_h_hz: f64, gamma_isd_hz: f64 },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(name: impl Into<String>, value: f64, constraint: impl Into<String>) -> Self {
        Error::InvalidParameter(Violations(vec![Violation::new(name, value, constraint)]))
    }

    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::ControlPulseDominates { .. } => "ControlPulseDominates",
            Error::UndersampledTrain { .. } => "UndersampledTrain",
            Error::BandExceedsGrid { .. } => "BandExceedsGrid",
            Error::TooFewPeaks { .. } => "TooFewPeaks",
            Error::UnknownTarget(_) => "UnknownTarget",
            Error::MissingParameter { .. } => "MissingParameter",
            Error::UnknownParameter { .. } => "UnknownParameter",
            Error::UnknownMaterial(_) => "UnknownMaterial",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::NoData { .. } => "NoData",
            Error::NonPositiveLinewidth { .. } => "NonPositiveLinewidth",
            Error::Json(_) => "MalformedJson",
        }
    }

    pub fn violations(&self) -> Option<&Violations> {
        match self {
            Error::InvalidParameter(v) => Some(v),
            _ => None,
        }
    }
}

/// Accumulates constraint checks so callers see every violation at once.
#[derive(Debug, Default)]
pub(crate) struct Checks {
    found: Vec<Violation>,
}

impl Checks {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn require(&mut self, ok: bool, name: &str, value: f64, constraint: &str) -> &mut Self {
        if !ok {
            self.found.push(Violation::new(name, value, constraint));
        }
        self
    }

    pub(crate) fn positive(&mut self, name: &str, value: f64) -> &mut Self {
        self.require(value.is_finite() && value > 0.0, name, value, "must be finite and > 0")
    }

    pub(crate) fn non_negative(&mut self, name: &str, value: f64) -> &mut Self {
        self.require(
            value.is_finite() && value >= 0.0,
            name,
            value,
            "must be finite and >= 0",
        )
    }

    pub(crate) fn at_least(&mut self, name: &str, value: f64, min: f64) -> &mut Self {
        self.require(
            value.is_finite() && value >= min,
            name,
            value,
            &format!("must be finite and >= {min}"),
        )
    }

    pub(crate) fn open_unit(&mut self, name: &str, value: f64) -> &mut Self {
        self.require(value > 0.0 && value < 1.0, name, value, "must lie in (0, 1)")
    }

    pub(crate) fn push(&mut self, v: Violation) -> &mut Self {
        self.found.push(v);
        self
    }

    pub(crate) fn into_violations(self) -> Vec<Violation> {
        self.found
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if self.found.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(Violations(std::mem::take(&mut self.found))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_collect_every_violation() {
        let err = Checks::new()
            .positive("a", -1.0)
            .positive("b", 2.0)
            .non_negative("c", f64::NAN)
            .finish()
            .unwrap_err();
        let v = err.violations().unwrap();
        assert_eq!(v.names(), ["a", "c"]);
        assert_eq!(err.kind(), "InvalidParameter");
    }

    #[test]
    fn open_unit_rejects_endpoints() {
        assert!(Checks::new().open_unit("eta", 1.0).finish().is_err());
        assert!(Checks::new().open_unit("eta", 0.0).finish().is_err());
        assert!(Checks::new().open_unit("eta", 0.5).finish().is_ok());
    }
}
