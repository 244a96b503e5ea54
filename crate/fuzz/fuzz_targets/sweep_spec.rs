#![no_main]

use afc_core::optimizer::SweepSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = SweepSpec::from_json(text) else { return };
    // keep each input cheap; the cell limit itself is exercised by validation
    let cells = spec.axes.iter().fold(1usize, |n, a| n.saturating_mul(a.points));
    if cells > 4096 {
        return;
    }
    if let Ok(table) = spec.run() {
        assert_eq!(table.rows.len(), cells);
        for row in &table.rows {
            assert_eq!(row.outputs.is_none(), row.status.starts_with("error:"));
        }
    }
});
