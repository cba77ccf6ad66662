use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turret_evasion::geometry2d::{self, Fate, Strategy2D, Vec2};
use turret_evasion::numeric::wrap_angle;
use turret_evasion::sim3d::{
    max_start_distance, run_engagement, simulate, AttackConfig, AttackStrategy, DroneBody, FormationKind, Outcome,
    SearchOptions, SimParams, Steering,
};
use turret_evasion::sphere3d::Vec3;

/// A drone orbiting behind the gun at height `z` with the goal offset `k1`
/// settles at horizontal radius `sqrt(k1² − z²)`, inside the cylinder for
/// the defaults. It needs more agility than the formation default to hold the
/// orbit, and a negligible descent keeps it there for the whole run.
#[test]
fn drone_orbiting_inside_the_cylinder_is_never_hit() {
    let params = SimParams {
        max_time: 100_000.0 * (1.0 / 240.0),
        terminal_altitude: 0.0,
        trace_every: 1,
        ..SimParams::default()
    };
    let z = 3.5;
    let r = (16.0f64 - z * z).sqrt();
    assert!(r < params.safety_cylinder_radius());
    let mut drone = DroneBody::at_rest(Vec3::new(-r, 0.0, z), params.max_speed, 40.0);
    drone.vel = Vec3::new(0.0, -params.max_speed, 0.0);
    let result = simulate(vec![drone], &Steering::Indirect { k1: 4.0, k2: 1e-6 }, 0.0, &params).unwrap();
    assert_eq!(result.outcome, Outcome::TimeLimit);
    assert!(result.kill_log.is_empty());
    assert!(result.trace.len() >= 100_000);
    // The first second is spent swinging round behind the gun.
    let cylinder = params.safety_cylinder_radius();
    for f in &result.trace[240..] {
        let p = f.drones[0].unwrap();
        assert!(p[0].hypot(p[1]) < cylinder, "left the cylinder at t = {}", f.time);
    }
}

#[test]
fn drone_in_front_of_the_gun_dies_at_once() {
    let params = SimParams::default();
    let d = DroneBody::at_rest(Vec3::new(60.0, 0.0, 0.0), 5.0, 10.0);
    let r = simulate(vec![d], &Steering::Direct, 0.0, &params).unwrap();
    assert_eq!(r.outcome, Outcome::AllDronesDown);
    assert!(r.time <= 2.0 * params.dt);
}

/// Planar engagements with a kinematic drone reproduce the 2D intercepts:
/// unit pan rate, drone speed `v`, and reaching the safety circle counts as
/// reaching the turret.
#[test]
fn planar_embedding_matches_geometry2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 100 {
        let v = rng.random_range(0.5..2.0);
        let r = v * rng.random_range(1.1..6.0);
        let alpha = rng.random_range(0.1..(PI - 0.1)) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let strategy = if rng.random_bool(0.5) { Strategy2D::Radial } else { Strategy2D::Tangent };
        let boundary = match strategy {
            Strategy2D::Radial => geometry2d::radial_region_boundary(alpha, v),
            Strategy2D::Tangent => geometry2d::tangent_region_radius(alpha, v).unwrap(),
        };
        if (r - boundary).abs() < 0.02 * v {
            continue;
        }
        checked += 1;
        let p0 = r * Vec2::new(alpha.cos(), alpha.sin());
        let expected = geometry2d::intercept(p0, alpha, v, strategy).unwrap();
        let waypoint = match strategy {
            Strategy2D::Radial => Vec2::zeros(),
            Strategy2D::Tangent => geometry2d::tangent_point(p0, alpha, v).unwrap() * (1.0 - 1e-9),
        };
        let params = SimParams {
            dt: 1e-4,
            pan_rate: 1.0,
            tilt_rate: 1.0,
            kill_cone_half_angle: 1e-9,
            hit_radius: v,
            max_speed: v,
            max_accel: 1e12,
            separation_gain: 0.0,
            max_time: 20.0,
            ..SimParams::default()
        };
        let drone = DroneBody::at_rest(Vec3::new(p0.x, p0.y, 0.0), v, params.max_accel);
        let steering = Steering::Waypoints(vec![Vec3::new(waypoint.x, waypoint.y, 0.0)]);
        let got = simulate(vec![drone], &steering, 0.0, &params).unwrap();
        match expected.fate() {
            Fate::ReachesSafety => assert_eq!(got.outcome, Outcome::TurretDestroyed, "r {r} alpha {alpha} {strategy:?}"),
            Fate::Destroyed => {
                assert_eq!(got.outcome, Outcome::AllDronesDown, "r {r} alpha {alpha} {strategy:?}");
                let k = got.kill_log[0].position;
                let err = (Vec2::new(k[0], k[1]) - expected.death_position().unwrap()).norm();
                assert!(err < 1e-2 * v, "death position off by {err}");
            }
        }
    }
}

#[test]
fn traced_engagement_respects_rate_and_speed_caps() {
    let params = SimParams {
        trace_every: 1,
        ..SimParams::default()
    };
    for (formation, strategy, xi) in [
        (FormationKind::Cylinder, AttackStrategy::Indirect, 0.5),
        (FormationKind::Plane, AttackStrategy::Direct, 1.0),
    ] {
        let cfg = AttackConfig::new(formation, 9, 12.0, strategy, xi);
        let r = run_engagement(&cfg, &params).unwrap();
        for w in r.trace.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            assert!(wrap_angle(b.pan - a.pan).abs() <= params.pan_rate * params.dt + 1e-12);
            assert!((b.tilt - a.tilt).abs() <= params.tilt_rate * params.dt + 1e-12);
            for (pa, pb) in a.drones.iter().zip(&b.drones) {
                if let (Some(pa), Some(pb)) = (pa, pb) {
                    let step = Vec3::from(*pb) - Vec3::from(*pa);
                    assert!(step.norm() <= params.max_speed * params.dt + 1e-9);
                }
            }
        }
        for k in &r.kill_log {
            assert!(k.aim_error <= params.kill_cone_half_angle);
        }
        assert!(r.kill_log.windows(2).all(|w| w[0].time <= w[1].time));
    }
}

#[test]
fn jittered_engagement_is_reproducible() {
    let params = SimParams {
        jitter: 0.3,
        seed: 99,
        trace_every: 10,
        ..SimParams::default()
    };
    let cfg = AttackConfig::new(FormationKind::HalfCylinder, 12, 14.0, AttackStrategy::Indirect, 0.25);
    let a = serde_json::to_string(&run_engagement(&cfg, &params).unwrap()).unwrap();
    let b = serde_json::to_string(&run_engagement(&cfg, &params).unwrap()).unwrap();
    assert_eq!(a, b);
    let other = SimParams { seed: 100, ..params };
    let c = serde_json::to_string(&run_engagement(&cfg, &other).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn search_result_wins_and_a_step_further_loses() {
    let params = SimParams::default();
    let opts = SearchOptions::default();
    let cfg = AttackConfig::new(FormationKind::Cylinder, 8, 10.0, AttackStrategy::Direct, 0.0);
    let m = max_start_distance(&cfg, &params, &opts).unwrap();
    assert!(!m.unbounded);
    let wins = |d: f64| run_engagement(&AttackConfig { distance: d, ..cfg }, &params).unwrap().drones_win();
    assert!(wins(m.distance));
    if !m.scanned {
        assert!(!wins(m.distance + opts.resolution));
    }
}
