use std::f64::consts::PI;

use afc_core::capacity::*;
use afc_core::AfcParams;
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #[test]
    fn params_round_trip(gamma in 1e3..1e9f64, delay in 1e-7..1e-2f64) {
        let p = AfcParams::new(gamma, delay);
        prop_assert_eq!(p.bandwidth_gamma_hz, gamma);
        prop_assert_eq!(p.delay_s, delay);
        prop_assert_eq!(p.tooth_count(), gamma * delay);
    }

    #[test]
    fn capacity_is_tooth_count_over_two_and_a_half(gamma in 1e3..1e9f64, delay in 1e-7..1e-2f64) {
        let r = fixed_delay_capacity(gamma, delay).unwrap();
        let teeth = AfcParams::new(gamma, delay).tooth_count();
        prop_assert!(rel_close(r.n_continuous, teeth / 2.5, 1e-12));
    }

    #[test]
    fn capacity_strictly_increasing(gamma in 1e3..1e9f64, delay in 1e-7..1e-2f64, step in 1.001..3.0f64) {
        let base = fixed_delay_capacity(gamma, delay).unwrap().n_continuous;
        prop_assert!(fixed_delay_capacity(gamma * step, delay).unwrap().n_continuous > base);
        prop_assert!(fixed_delay_capacity(gamma, delay * step).unwrap().n_continuous > base);
    }

    #[test]
    fn t2_efficiency_monotone(delay in 1e-7..1e-3f64, t2 in 1e-5..1e-2f64, step in 1.001..3.0f64) {
        let e = t2_relative_efficiency(delay, t2).unwrap();
        prop_assert!(t2_relative_efficiency(delay * step, t2).unwrap() < e);
        prop_assert!(t2_relative_efficiency(delay, t2 * step).unwrap() > e);
    }

    #[test]
    fn efficiency_form_matches_composition(eta in 0.01..0.99f64, t2 in 1e-5..1e-2f64, gamma in 1e5..1e8f64) {
        let direct = fixed_delay_capacity_at_efficiency(eta, t2, gamma).unwrap();
        let composed = fixed_delay_capacity(gamma, delay_for_efficiency(eta, t2).unwrap()).unwrap();
        prop_assert!(rel_close(direct.n_continuous, composed.n_continuous, 1e-12));
    }

    #[test]
    fn spin_wave_efficiency_form_matches_composition(
        eta in 0.01..0.99f64,
        t2 in 1e-5..1e-2f64,
        gamma in 1e5..1e8f64,
        omega in 1e4..1e7f64,
        chi in 1.0..3.0f64,
    ) {
        let direct = spin_wave_capacity_at_efficiency(eta, t2, gamma, omega, chi).unwrap();
        let delay = delay_for_efficiency(eta, t2).unwrap();
        let composed = spin_wave_capacity(gamma, delay, omega, chi).unwrap();
        prop_assert!(rel_close(direct.bandwidth_term, composed.bandwidth_term, 1e-12));
        prop_assert!(rel_close(direct.control_term, composed.control_term, 1e-12));
        prop_assert_eq!(direct.n_floor == 0, composed.n_floor == 0);
        if direct.n_continuous > 1e-6 * direct.bandwidth_term {
            prop_assert!(rel_close(direct.n_continuous, composed.n_continuous, 1e-9));
        }
    }

    #[test]
    fn spin_wave_never_exceeds_fixed_delay(
        gamma in 1e5..1e8f64,
        delay in 1e-6..1e-3f64,
        omega in 1e4..1e7f64,
        chi in 1.0..3.0f64,
    ) {
        let sw = spin_wave_capacity(gamma, delay, omega, chi).unwrap();
        let fixed = fixed_delay_capacity(gamma, delay).unwrap();
        prop_assert!(sw.n_continuous < fixed.n_continuous);
    }

    #[test]
    fn hsh_efficiency_bounded_and_monotone(
        exponent in 1e-3..30.0f64,
        omega in 1e4..1e7f64,
        gamma in 1e5..1e8f64,
        step in 1.001..1.5f64,
    ) {
        // choose T_s so the exponent stays below float saturation
        let ts = exponent * gamma / (PI * PI * omega * omega);
        let e = hsh_transfer_efficiency(ts, omega, gamma).unwrap();
        prop_assert!((0.0..1.0).contains(&e));
        prop_assert!(hsh_transfer_efficiency(ts * step, omega, gamma).unwrap() > e);
        prop_assert!(hsh_transfer_efficiency(ts, omega * step, gamma).unwrap() > e);
        prop_assert!(hsh_transfer_efficiency(ts, omega, gamma * step).unwrap() < e);
    }

    #[test]
    fn echo_efficiency_bounded(od in 0.0..200.0f64, finesse in 1.0..500.0f64) {
        let e = afc_echo_efficiency(od, finesse).unwrap();
        prop_assert!((0.0..1.0).contains(&e));
    }

    #[test]
    fn echo_efficiency_has_one_interior_maximum(od in 0.1..60.0f64) {
        let n = 4000;
        let values: Vec<f64> = (0..n)
            .map(|i| afc_echo_efficiency(od, 1.0 + 99.0 * i as f64 / (n - 1) as f64).unwrap())
            .collect();
        let imax = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        prop_assert!(imax > 0 && imax < n - 1);
        prop_assert!(values[..=imax].windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(values[imax..].windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn large_counts_are_not_snapped() {
    let (gamma, delay) = (376581129.32792985, 0.0032454427618076897);
    let r = fixed_delay_capacity(gamma, delay).unwrap();
    assert_eq!(r.n_continuous, gamma * delay / 2.5);
}
