//! Randomized property checks for the model identities and monotonicities.

use kvamp_core::model::{
    self, amplification_factor, cost_ratio_basic, cost_ratio_from_bytes, cost_ratio_log,
    cost_ratio_tiering, cost_ratio_tiering_log, space_amplification, ModelParams, SizeLayout,
};
use kvamp_core::optimize::minimize_cost_ratio;
use kvamp_core::rational::Rational;
use kvamp_core::DesignKind;
use proptest::prelude::*;

fn params_strategy() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (
        0.0f64..=1.0,       // a
        0.05f64..=1.0,      // r
        1.1f64..=64.0,      // f
        1.0f64..=12.0,      // l
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduction_identity_leveling_at_zero_a((_, r, f, l) in params_strategy()) {
        let params = ModelParams::from_growth_levels(0.0, r, f, l).unwrap();
        let leveling = cost_ratio_basic(&params).unwrap();
        let tiering = cost_ratio_tiering(r, l).unwrap();
        prop_assert!((leveling - tiering).abs() <= 1e-9 * tiering.abs());
    }

    #[test]
    fn reduction_identity_log_at_zero_a((_, r, f, l) in params_strategy(), p in 0.001f64..=1.0) {
        let params = ModelParams::from_growth_levels(0.0, r, f, l)
            .unwrap()
            .with_key_value_ratio(p)
            .unwrap();
        let log = cost_ratio_log(&params).unwrap();
        let tier_log = cost_ratio_tiering_log(&params).unwrap();
        prop_assert!((log - tier_log).abs() <= 1e-9 * tier_log.abs());
    }

    #[test]
    fn byte_identity_closed_form_vs_ratio(
        a_hundredths in 0u32..=100,
        r in 0.05f64..=1.0,
        f in 2u64..=16,
        l in 1u32..=6,
        s0 in 1u128..=4096,
    ) {
        let a = Rational::new(a_hundredths as i128, 100).unwrap();
        let layout = SizeLayout::uniform(s0, f, l).unwrap();
        let sl = layout.sl_bytes();
        let d = model::traffic_basic_closed(sl, &a, f, l).unwrap();
        let via_bytes = cost_ratio_from_bytes(d.to_f64(), sl as f64, r).unwrap();
        let params = ModelParams::from_growth_levels(a.to_f64(), r, f as f64, l as f64).unwrap();
        let direct = cost_ratio_basic(&params).unwrap();
        prop_assert!((via_bytes - direct).abs() <= 1e-9 * direct.abs());
        // Traffic floor: at least the dataset is written.
        prop_assert!(d.checked_cmp(&Rational::from_int(sl as i128)).unwrap() != std::cmp::Ordering::Less);
    }

    #[test]
    fn monotone_in_amplification_growth_and_throughput((a, r, f, l) in params_strategy()) {
        let base = amplification_factor(a, f, l) / r;
        if a + 0.05 <= 1.0 && f > 1.0 {
            let up_a = amplification_factor(a + 0.05, f, l) / r;
            prop_assert!(up_a >= base - 1e-12);
            if l >= 1.0 {
                prop_assert!(up_a > base - 1e-12);
            }
        }
        if a > 0.0 {
            let up_f = amplification_factor(a, f + 0.5, l) / r;
            prop_assert!(up_f > base);
        }
        let down_r = amplification_factor(a, f, l) / (r * 0.5);
        prop_assert!(down_r > base);
    }

    #[test]
    fn log_beats_in_place_iff_threshold((a, r, f, l) in params_strategy(), p in 0.001f64..=2.0) {
        let params = ModelParams::from_growth_levels(a, r, f, l)
            .unwrap()
            .with_key_value_ratio(p)
            .unwrap();
        let basic = cost_ratio_basic(&params).unwrap();
        let log = cost_ratio_log(&params).unwrap();
        let x = amplification_factor(a, f, l);
        // Guard the razor's edge where float noise flips the comparison.
        if (x - (p + 1.0)).abs() > 1e-9 {
            prop_assert_eq!(log < basic, x > p + 1.0);
        }
    }

    #[test]
    fn cost_ratios_never_beat_the_write_once_floor((a, r, f, l) in params_strategy(), p in 0.001f64..=2.0) {
        let params = ModelParams::from_growth_levels(a, r, f, l)
            .unwrap()
            .with_key_value_ratio(p)
            .unwrap();
        let floor = 1.0 / r - 1e-12;
        prop_assert!(cost_ratio_basic(&params).unwrap() >= floor);
        prop_assert!(cost_ratio_log(&params).unwrap() >= floor);
        prop_assert!(cost_ratio_tiering(r, l).unwrap() >= floor);
        prop_assert!(cost_ratio_tiering_log(&params).unwrap() >= floor);
    }

    #[test]
    fn space_amplification_shape(f in 1.5f64..=32.0, l in 1u32..=10) {
        let v = space_amplification(f, l).unwrap();
        prop_assert!(v < 1.0 / (f - 1.0) + 1e-12);
        prop_assert!(space_amplification(f + 0.5, l).unwrap() < v);
        prop_assert!(space_amplification(f, l + 1).unwrap() > v);
    }

    #[test]
    fn scan_minimum_is_locally_minimal(a in 0.05f64..=1.0, c in 10.0f64..=100000.0) {
        let res = minimize_cost_ratio(DesignKind::Leveling, a, 1.0, None, c, 1..=40).unwrap();
        let at = |l: u32| res.curve.iter().find(|p| p.levels == l).map(|p| p.objective);
        if res.levels > 1 {
            prop_assert!(at(res.levels - 1).unwrap() >= res.objective);
        }
        if let Some(next) = at(res.levels + 1) {
            prop_assert!(next >= res.objective);
        }
    }
}
