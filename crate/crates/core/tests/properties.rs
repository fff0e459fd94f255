use nalgebra::Point3;
use num_complex::Complex64;
use proptest::prelude::*;

use mmtrace_core::antenna::system_preset;
use mmtrace_core::channel::{
    mean_excess_delay, power_delay_profile, received_power, rms_delay_spread, CarrierConfig, ChannelTap, SweepResult,
    SweepSample,
};
use mmtrace_core::export::{inspect_csv, sweep_csv};
use mmtrace_core::scenario::{parse_scenario, EnvironmentKind, ScenarioConfig, SystemConfig};
use mmtrace_core::scene::build_straight_tunnel;
use mmtrace_core::tracer::{enumerate_paths, fresnel_reflection, Polarization, TraceSettings};

fn taps() -> impl Strategy<Value = Vec<ChannelTap>> {
    prop::collection::vec((0.0..500e-9f64, 1e-12..1.0f64), 1..40).prop_map(|v| {
        v.into_iter()
            .map(|(delay, power)| ChannelTap {
                delay,
                amplitude: Complex64::new(power.sqrt(), 0.0),
                power,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn pdp_peak_is_one(taps in taps(), bin in prop_oneof![Just(0.0), 0.1e-9..5e-9f64]) {
        let pdp = power_delay_profile(&taps, bin).unwrap();
        let peak = pdp.taps.iter().map(|t| t.power).fold(0.0, f64::max);
        prop_assert_eq!(peak, 1.0);
        prop_assert!(pdp.taps.windows(2).all(|w| w[0].delay <= w[1].delay));
    }

    #[test]
    fn delay_statistics_are_shift_invariant(taps in taps(), shift in 0.0..1e-6f64) {
        let a = power_delay_profile(&taps, 0.0).unwrap();
        let moved: Vec<ChannelTap> = taps.iter().map(|t| ChannelTap { delay: t.delay + shift, ..*t }).collect();
        let b = power_delay_profile(&moved, 0.0).unwrap();
        let (ta, tb) = (rms_delay_spread(&a), rms_delay_spread(&b));
        prop_assert!((ta - tb).abs() <= 1e-6 * ta.max(1e-12), "{} vs {}", ta, tb);
        let (ma, mb) = (mean_excess_delay(&a), mean_excess_delay(&b));
        prop_assert!((ma - mb).abs() <= 1e-6 * ma.max(1e-12));
        prop_assert!(ma >= 0.0 && ta >= 0.0);
    }

    #[test]
    fn rms_spread_is_bounded_by_the_span(taps in taps()) {
        let pdp = power_delay_profile(&taps, 0.0).unwrap();
        let lo = taps.iter().map(|t| t.delay).fold(f64::INFINITY, f64::min);
        let hi = taps.iter().map(|t| t.delay).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(rms_delay_spread(&pdp) <= 0.5 * (hi - lo) * (1.0 + 1e-12));
    }

    #[test]
    fn single_tap_has_no_spread(delay in 0.0..1e-6f64, power in 1e-15..1.0f64) {
        let tap = ChannelTap { delay, amplitude: Complex64::new(power.sqrt(), 0.0), power };
        let pdp = power_delay_profile(&[tap], 0.0).unwrap();
        prop_assert_eq!(rms_delay_spread(&pdp), 0.0);
        prop_assert_eq!(mean_excess_delay(&pdp), 0.0);
    }

    #[test]
    fn fresnel_is_bounded(eps in 1.0..20.0f64, theta in 0.0..1.57f64, tm in any::<bool>()) {
        let pol = if tm { Polarization::Tm } else { Polarization::Te };
        let r = fresnel_reflection(eps, theta, pol).unwrap();
        prop_assert!(r.abs() <= 1.0);
        if !tm {
            prop_assert!(r <= 0.0);
        }
    }

    #[test]
    fn power_scales_with_transmit_power(x in 0.5..43.5f64, y in -1.1..1.1f64, z in 0.1..2.4f64, extra in -20.0..20.0f64) {
        let env = build_straight_tunnel();
        let tx = Point3::new(0.0, 0.0, 2.0);
        let paths = enumerate_paths(&env, &tx, &Point3::new(x, y, z), &TraceSettings::default()).unwrap();
        let base = system_preset("system3").unwrap();
        let louder = mmtrace_core::antenna::AntennaSystem { tx_power_dbm: base.tx_power_dbm + extra, ..base.clone() };
        let carrier = CarrierConfig::new(80e9);
        let p0 = received_power(&paths, &base, &base, &carrier);
        let p1 = received_power(&paths, &louder, &base, &carrier);
        prop_assert!((p1 - p0 - extra).abs() <= 1e-9);
    }

    #[test]
    fn sweep_csv_round_trips(rows in prop::collection::vec((0.0..44.0f64, prop::collection::vec(prop_oneof![Just(f64::NEG_INFINITY), -150.0..0.0f64], 3)), 1..50)) {
        let sweep = SweepResult {
            environment: "x".into(),
            frequency: 60e9,
            system_names: vec!["system1".into(), "system2".into(), "system3".into()],
            samples: rows.iter().map(|(d, p)| SweepSample { distance: *d, powers_dbm: p.clone() }).collect(),
        };
        let csv = inspect_csv(&sweep_csv(&sweep)).unwrap();
        prop_assert_eq!(csv.rows.len(), rows.len());
        for (row, (d, p)) in csv.rows.iter().zip(&rows) {
            prop_assert!((row[0].unwrap() - d).abs() <= 5e-7);
            for (cell, v) in row[1..].iter().zip(p) {
                match cell {
                    None => prop_assert!(v.is_infinite()),
                    Some(c) => prop_assert!((c - v).abs() <= 5e-5),
                }
            }
        }
    }

    #[test]
    fn csv_inspection_never_panics(text in "\\PC{0,200}") {
        let _ = inspect_csv(&text);
    }

    #[test]
    fn scenario_parse_never_panics(text in "\\PC{0,200}") {
        let _ = parse_scenario(&text);
    }
}

fn scenario() -> impl Strategy<Value = ScenarioConfig> {
    (
        prop::sample::select(EnvironmentKind::ALL.to_vec()),
        prop::collection::vec(1e9..100e9f64, 1..4),
        prop::option::of(1.0..12.0f64),
        prop::option::of(1.0..89.0f64),
        prop::sample::subsequence(vec!["system1", "system2", "system3"], 1..=3),
        prop::option::of(-10.0..30.0f64),
        2usize..4096,
        (0.0..5.0f64, 0.5..2.5f64, any::<bool>(), 0usize..=2),
        prop::collection::vec(1.0..44.0f64, 0..4),
    )
        .prop_map(|(kind, freqs, eps, bend, systems, power, n, (rx_start, rx_height, tm, order), pdp)| {
            let mut c = ScenarioConfig::default();
            c.environment.kind = kind;
            c.frequencies_hz = freqs;
            if let Some(e) = eps {
                c.environment.materials.walls = Some(mmtrace_core::scenario::MaterialConfig {
                    eps_r: Some(e),
                    ..Default::default()
                });
            }
            c.environment.bend_angle_deg = bend;
            c.systems = systems
                .into_iter()
                .map(|p| SystemConfig {
                    preset: p.to_string(),
                    tx_power_dbm: power,
                    peak_gain_dbi: None,
                })
                .collect();
            c.sweep.n_samples = n;
            c.sweep.rx_start = rx_start;
            c.sweep.rx_height = rx_height;
            c.physics.polarization = if tm { Polarization::Tm } else { Polarization::Te };
            c.physics.max_order = order;
            c.output.pdp_positions = pdp;
            c
        })
}

proptest! {
    #[test]
    fn scenario_round_trips(config in scenario()) {
        let text = config.to_toml();
        let parsed = parse_scenario(&text).unwrap();
        prop_assert_eq!(&parsed, &config);
        prop_assert_eq!(parse_scenario(&parsed.to_toml()).unwrap(), parsed);
    }
}
