#![no_main]

use afc_core::capacity::fixed_delay_capacity;
use afc_core::{AfcParams, ControlPulseParams, Validate};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = AfcParams::from_json(text) {
        if p.check().is_ok() {
            let report = fixed_delay_capacity(p.bandwidth_gamma_hz, p.delay_s).unwrap();
            assert!(report.n_continuous >= 0.0);
        }
    }
    if let Ok(c) = ControlPulseParams::from_json(text) {
        let _ = c.check();
    }
});
