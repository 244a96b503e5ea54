#![no_main]

use afc_core::materials::{t2_lookup, MaterialRegistry, T2Kind};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let mut registry = MaterialRegistry::builtins();
    let before: Vec<String> = registry.names().map(str::to_owned).collect();
    match registry.merge_json(text) {
        Ok(added) => {
            for name in added {
                let record = registry.get(&name).unwrap();
                let _ = record.optical_depth();
                for t in [0.0, 4.2, 6.1, 100.0] {
                    let _ = t2_lookup(record, t, T2Kind::Pe);
                    let _ = t2_lookup(record, t, T2Kind::Afc);
                }
            }
        }
        // a rejected file must leave the registry untouched
        Err(_) => assert!(registry.names().eq(before.iter().map(String::as_str))),
    }
});
