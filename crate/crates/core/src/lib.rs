//! Capacity, spectral and multiplexing models for atomic-frequency-comb
//! quantum memories.

pub mod capacity;
pub mod error;
pub mod gaussian;
pub mod materials;
pub mod model;
pub mod multiplex;
pub mod optimizer;
pub mod spectral;

pub use error::{Error, Result, Violation, Violations};
pub use model::{
    AfcParams, CapacityReport, ControlPulseParams, ModeProfile, ModeShape, SpinParams, Validate, Validated, Warning,
};
