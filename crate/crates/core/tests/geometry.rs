use nalgebra::Point3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmtrace_core::antenna::system_preset;
use mmtrace_core::channel::{received_power, sweep_receiver, CarrierConfig, SweepSettings};
use mmtrace_core::scene::{
    build_bent_tunnel, build_plain_corridor, build_straight_tunnel, BentTunnelParams, Environment,
};
use mmtrace_core::tracer::{enumerate_paths, mirror_point, TraceSettings, SURFACE_SLACK};

fn iso() -> mmtrace_core::antenna::AntennaSystem {
    system_preset("system1").unwrap()
}

/// Does the open segment `a`-`b` cross any surface rectangle?
fn segment_blocked(env: &Environment, a: &Point3<f64>, b: &Point3<f64>) -> bool {
    env.surfaces.iter().any(|s| {
        let (da, db) = (s.signed_distance(a), s.signed_distance(b));
        if da * db >= 0.0 {
            return false;
        }
        let t = da / (da - db);
        s.contains(&(a + (b - a) * t), 0.0)
    })
}

#[test]
fn bent_tunnel_blocks_line_of_sight_past_the_elbow() {
    let env = build_bent_tunnel(45.0).unwrap();
    let tx = env.station(1.0).point + nalgebra::Vector3::new(0.0, 0.0, 2.0);
    let rx = env.station(40.0).point + nalgebra::Vector3::new(0.0, 0.0, 1.5);
    assert!(segment_blocked(&env, &tx, &rx));
    let paths = enumerate_paths(&env, &tx, &rx, &TraceSettings::default()).unwrap();
    assert!(paths.iter().all(|p| p.order > 0));
}

#[test]
fn bent_tunnel_direct_path_agrees_with_visibility() {
    let env = build_bent_tunnel(45.0).unwrap();
    let tx = Point3::new(0.0, 0.0, 2.0);
    for i in 0..=80 {
        let s = 2.0 + i as f64 * 0.5;
        let rx = env.station(s).point + nalgebra::Vector3::new(0.0, 0.0, 1.5);
        let paths = enumerate_paths(&env, &tx, &rx, &TraceSettings::default()).unwrap();
        let has_direct = paths.iter().any(|p| p.order == 0);
        assert_eq!(has_direct, !segment_blocked(&env, &tx, &rx), "station {s}");
    }
}

#[test]
fn tiny_bend_matches_straight_tunnel() {
    let straight = build_straight_tunnel();
    let bent = BentTunnelParams {
        bend_angle_deg: 1e-4,
        ..Default::default()
    }
    .build()
    .unwrap();
    let systems = [iso()];
    let settings = SweepSettings::default();
    let carrier = CarrierConfig::new(60e9);
    let a = sweep_receiver(&straight, &systems, &carrier, &settings).unwrap();
    let b = sweep_receiver(&bent, &systems, &carrier, &settings).unwrap();
    for (x, y) in a.samples.iter().zip(&b.samples) {
        let d = (x.powers_dbm[0] - y.powers_dbm[0]).abs();
        assert!(d <= 0.1, "at {} m: {} vs {} dBm", x.distance, x.powers_dbm[0], y.powers_dbm[0]);
    }
}

#[test]
fn free_space_sweep_is_friis() {
    let env = Environment::free_space(44.0);
    let settings = SweepSettings {
        rx_height: 2.0,
        ..SweepSettings::default()
    };
    let sweep = sweep_receiver(&env, &[iso()], &CarrierConfig::new(60e9), &settings).unwrap();
    let lambda = 299_792_458.0 / 60e9;
    for s in &sweep.samples {
        let friis = 20.0 - 20.0 * (4.0 * std::f64::consts::PI * s.distance / lambda).log10();
        assert!((s.powers_dbm[0] - friis).abs() <= 0.01, "{} m", s.distance);
    }
}

#[test]
fn sweep_medians_rank_the_systems() {
    let env = build_plain_corridor();
    let systems: Vec<_> = ["system1", "system2", "system3"].iter().map(|n| system_preset(n).unwrap()).collect();
    let sweep = sweep_receiver(&env, &systems, &CarrierConfig::new(60e9), &SweepSettings::default()).unwrap();
    assert_eq!(sweep.sample_count(), 1024);
    assert!(sweep.samples.windows(2).all(|w| w[0].distance < w[1].distance));
    let (i, o, h) = (sweep.sweep_median(0).unwrap(), sweep.sweep_median(1).unwrap(), sweep.sweep_median(2).unwrap());
    assert!(h > o && o > i, "horn {h:.2}, omni {o:.2}, isotropic {i:.2}");
}

fn random_inside(env: &Environment, rng: &mut ChaCha8Rng) -> Point3<f64> {
    let cs = env.cross_section.unwrap();
    let s = rng.random_range(0.5..env.axis_length() - 0.5);
    let st = env.station(s);
    let y = rng.random_range(-0.45..0.45) * cs.width;
    let z = rng.random_range(0.05..0.95) * cs.height;
    st.point + st.lateral.into_inner() * y + nalgebra::Vector3::new(0.0, 0.0, z)
}

#[test]
fn reciprocity_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for env in [build_straight_tunnel(), build_plain_corridor(), build_bent_tunnel(45.0).unwrap()] {
        for _ in 0..20 {
            let (a, b) = (random_inside(&env, &mut rng), random_inside(&env, &mut rng));
            let fwd = enumerate_paths(&env, &a, &b, &TraceSettings::default()).unwrap();
            let back = enumerate_paths(&env, &b, &a, &TraceSettings::default()).unwrap();
            let key = |paths: &[mmtrace_core::tracer::PathContribution]| {
                let mut k: Vec<_> = paths
                    .iter()
                    .map(|p| {
                        let mut s = p.surface_indices();
                        s.sort();
                        (p.order, s, p.length)
                    })
                    .collect();
                k.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)).then(x.2.total_cmp(&y.2)));
                k
            };
            let (kf, kb) = (key(&fwd), key(&back));
            assert_eq!(kf.len(), kb.len(), "{}", env.name);
            for (x, y) in kf.iter().zip(&kb) {
                assert_eq!((x.0, &x.1), (y.0, &y.1));
                assert!((x.2 - y.2).abs() <= 1e-9);
            }
            let carrier = CarrierConfig::new(70e9);
            let (pf, pb) = (received_power(&fwd, &iso(), &iso(), &carrier), received_power(&back, &iso(), &iso(), &carrier));
            assert!(pf == pb || (pf - pb).abs() <= 1e-9, "{pf} vs {pb}");
        }
    }
}

#[test]
fn reflection_points_lie_on_their_surfaces() {
    let env = build_straight_tunnel();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let (a, b) = (random_inside(&env, &mut rng), random_inside(&env, &mut rng));
        let paths = enumerate_paths(&env, &a, &b, &TraceSettings::default()).unwrap();
        assert!(paths.len() <= 1 + 4 + 12);
        for p in &paths {
            assert_eq!(p.vertices.len(), p.order + 2);
            for bounce in &p.bounces {
                let s = &env.surfaces[bounce.surface];
                assert!(s.contains(&bounce.point, SURFACE_SLACK));
                assert!(s.signed_distance(&bounce.point).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn mirroring_is_an_involution() {
    let env = build_bent_tunnel(30.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for s in &env.surfaces {
        for _ in 0..20 {
            let p = Point3::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
            let back = mirror_point(&mirror_point(&p, s), s);
            assert!((back - p).norm() < 1e-12);
        }
    }
}

#[test]
fn zero_reflection_coefficient_adds_nothing() {
    // The plain corridor ceiling has eps_r = 1 and never reflects.
    let env = build_plain_corridor();
    let tx = Point3::new(0.0, 0.0, 2.0);
    let rx = Point3::new(12.0, 0.3, 1.5);
    let settings = TraceSettings {
        max_order: 1,
        ..TraceSettings::default()
    };
    let paths = enumerate_paths(&env, &tx, &rx, &settings).unwrap();
    let direct: Vec<_> = paths.iter().filter(|p| p.order == 0).cloned().collect();
    let ceiling: Vec<_> = paths
        .iter()
        .filter(|p| p.order == 0 || env.surfaces[p.bounces[0].surface].name == "ceiling")
        .cloned()
        .collect();
    assert_eq!(ceiling.len(), 2);
    let carrier = CarrierConfig::new(60e9);
    assert_eq!(
        received_power(&direct, &iso(), &iso(), &carrier),
        received_power(&ceiling, &iso(), &iso(), &carrier)
    );
}
