#![no_main]

use afc_cli::input::{assemble, parse_override};
use libfuzzer_sys::fuzz_target;
use serde_json::Value;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sets: Vec<String> = text.lines().map(str::to_owned).collect();
    for s in &sets {
        let _ = parse_override(s);
    }
    let _ = assemble::<Value>(None, &sets, &[]);
});
