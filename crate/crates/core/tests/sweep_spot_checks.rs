use afc_core::capacity;
use afc_core::optimizer::{optimal_bandwidth_sw, SweepSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(json: &str) -> SweepSpec {
    SweepSpec::from_json(json).unwrap()
}

#[test]
fn spin_wave_cells_equal_direct_calls() {
    let table = spec(
        r#"{"target": "spin_wave_capacity",
            "axes": [{"name": "gamma_hz", "min": 1e5, "max": 2e7, "points": 60},
                     {"name": "omega_hz", "min": 5e4, "max": 1e6, "points": 50}],
            "fixed": {"delay_s": 25e-6, "chi": 1.36}}"#,
    )
    .run()
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let row = &table.rows[rng.gen_range(0..table.rows.len())];
        let [g, o] = row.axis_values[..] else { panic!() };
        let direct = capacity::spin_wave_capacity(g, 25e-6, o, 1.36).unwrap();
        let out = row.outputs.as_ref().unwrap();
        assert_eq!(out[0], direct.n_continuous);
        assert_eq!(out[1], direct.n_floor as f64);
        assert_eq!(out[2], direct.bandwidth_term);
        assert_eq!(out[3], direct.control_term);
    }
}

#[test]
fn efficiency_cells_equal_direct_calls() {
    let table = spec(
        r#"{"target": "fixed_delay_capacity_at_efficiency",
            "axes": [{"name": "eta", "min": 0.05, "max": 0.95, "points": 91},
                     {"name": "t2_s", "min": 1e-5, "max": 1e-3, "points": 100}],
            "fixed": {"gamma_hz": 5e6}}"#,
    )
    .run()
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let row = &table.rows[rng.gen_range(0..table.rows.len())];
        let [eta, t2] = row.axis_values[..] else { panic!() };
        let direct = capacity::fixed_delay_capacity_at_efficiency(eta, t2, 5e6).unwrap();
        assert_eq!(row.outputs.as_ref().unwrap()[0], direct.n_continuous);
    }
}

#[test]
fn echo_cells_equal_direct_calls() {
    let table = spec(
        r#"{"target": "afc_echo_efficiency",
            "axes": [{"name": "od", "min": 0.1, "max": 30, "points": 200},
                     {"name": "finesse", "min": 1, "max": 40, "points": 200}]}"#,
    )
    .run()
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let row = &table.rows[rng.gen_range(0..table.rows.len())];
        let direct = capacity::afc_echo_efficiency(row.axis_values[0], row.axis_values[1]).unwrap();
        assert_eq!(row.outputs.as_ref().unwrap()[0], direct);
    }
}

proptest! {
    #[test]
    fn optimal_bandwidth_beats_neighbours(
        omega in 1e4..2e6f64,
        delay in 1e-6..1e-3f64,
        chi in 1.0..3.0f64,
    ) {
        let g = optimal_bandwidth_sw(omega, delay, chi, f64::INFINITY).unwrap();
        let n = |gamma: f64| capacity::spin_wave_capacity(gamma, delay, omega, chi).unwrap().n_continuous;
        let best = n(g);
        prop_assert!(best >= n(g * 1.01));
        prop_assert!(best >= n(g * 0.99));
    }
}
