//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use turret_evasion::geometry2d::{tangent_point, Fate, Strategy2D, Vec2};
use turret_evasion::numeric::wrap_angle;
use turret_evasion::tsp::OpenPath;

/// Outcome of the stepped 2D engagement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stepped {
    pub fate: Fate,
    pub time: Option<f64>,
    pub position: Option<Vec2>,
}

/// Steps a drone and a unit-rate turret with a fixed `dt`. The turret starts
/// at heading 0 and turns toward the drone's side (the sign of `alpha`); the
/// drone starts at bearing `alpha`. The drone is destroyed when the heading
/// catches its bearing and is safe once inside radius `v`.
pub fn stepped_intercept(p0: Vec2, alpha: f64, v: f64, strategy: Strategy2D, dt: f64) -> Stepped {
    let s = if alpha < 0.0 { -1.0 } else { 1.0 };
    let target = match strategy {
        Strategy2D::Radial => Vec2::zeros(),
        Strategy2D::Tangent => tangent_point(p0, alpha, v).expect("outside the safety circle"),
    };
    // The bearing is unwrapped so the gap can grow past π without aliasing.
    let bearing = |p: Vec2| p.y.atan2(p.x);
    let mut theta = alpha;
    let mut p = p0;
    let mut t = 0.0;
    let mut g = s * alpha;
    if g <= 0.0 {
        return Stepped {
            fate: Fate::Destroyed,
            time: Some(0.0),
            position: Some(p0),
        };
    }
    loop {
        let to = target - p;
        let dist = to.norm();
        let step = v * dt;
        let reached = dist <= step;
        let next = if reached { target } else { p + to * (step / dist) };
        let t_next = t + if reached { dist / v } else { dt };
        let theta_next = theta + wrap_angle(bearing(next) - bearing(p));
        let g_next = s * (theta_next - s * t_next);
        if g_next <= 0.0 {
            // Linear interpolation of the crossing inside the step.
            let f = g / (g - g_next);
            return Stepped {
                fate: Fate::Destroyed,
                time: Some(t + f * (t_next - t)),
                position: Some(p + f * (next - p)),
            };
        }
        if next.norm() <= v * (1.0 + 1e-12) {
            return Stepped {
                fate: Fate::ReachesSafety,
                time: None,
                position: None,
            };
        }
        p = next;
        t = t_next;
        theta = theta_next;
        g = g_next;
    }
}

/// Shortest open path by trying every visiting order; `(order, length)`.
/// The length is summed leg by leg in visiting order.
pub fn brute_force_path(path: &OpenPath) -> (Vec<usize>, f64) {
    let n = path.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = (order.clone(), path.length(&order));
    permute(&mut order, 0, path, &mut best);
    best
}

fn permute(order: &mut Vec<usize>, k: usize, path: &OpenPath, best: &mut (Vec<usize>, f64)) {
    if k == order.len() {
        let len = path.length(order);
        if len < best.1 {
            *best = (order.clone(), len);
        }
        return;
    }
    for i in k..order.len() {
        order.swap(k, i);
        permute(order, k + 1, path, best);
        order.swap(k, i);
    }
}
