//! Point-mass drone dynamics and the steering forces that drive them.

use std::f64::consts::FRAC_PI_8;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere3d::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DroneBody {
    pub p: Vec3,
    pub vel: Vec3,
    pub max_speed: f64,
    pub max_accel: f64,
    pub alive: bool,
}

impl DroneBody {
    pub fn at_rest(p: Vec3, max_speed: f64, max_accel: f64) -> Self {
        Self {
            p,
            vel: Vec3::zeros(),
            max_speed,
            max_accel,
            alive: true,
        }
    }
}

/// Accelerates along `force_dir` at full thrust, saturates speed at
/// `max_speed` (drag balances thrust there), then integrates position with
/// the new velocity.
pub fn step_drone(body: &DroneBody, force_dir: &Vec3, dt: f64) -> DroneBody {
    let mut vel = body.vel + force_dir * (body.max_accel * dt);
    let speed = vel.norm();
    if speed > body.max_speed {
        vel *= body.max_speed / speed;
    }
    DroneBody {
        p: body.p + vel * dt,
        vel,
        ..*body
    }
}

/// Push off the firing line: direction `(ĝ × p̂) × p̂`, magnitude
/// `1 − ψ/cone` inside the repulsion cone of half-angle `cone`, zero outside.
/// A drone exactly on the line is pushed along `up × p̂`.
pub fn gun_repulsion_with_cone(gun_dir: &Vec3, drone_pos: &Vec3, cone: f64) -> Result<Vec3> {
    let norm = drone_pos.norm();
    if norm == 0.0 {
        return Err(Error::DegenerateAtOrigin);
    }
    let p_hat = drone_pos / norm;
    let psi = gun_dir.dot(&p_hat).clamp(-1.0, 1.0).acos();
    if psi >= cone {
        return Ok(Vec3::zeros());
    }
    let magnitude = 1.0 - psi / cone;
    let mut dir = gun_dir.cross(&p_hat).cross(&p_hat);
    if dir.norm() < 1e-12 {
        dir = Vec3::z().cross(&p_hat);
        if dir.norm() < 1e-12 {
            dir = Vec3::x().cross(&p_hat);
        }
    }
    Ok(dir.normalize() * magnitude)
}

/// [`gun_repulsion_with_cone`] with the default cone of π/8.
pub fn gun_repulsion(gun_dir: &Vec3, drone_pos: &Vec3) -> Result<Vec3> {
    gun_repulsion_with_cone(gun_dir, drone_pos, FRAC_PI_8)
}

/// `normalize((1 − ξ)·F_g + ξ·F_r)`, falling back to the goal direction when
/// the blend cancels out.
pub fn blended_direction(goal_force: &Vec3, repulse_force: &Vec3, xi: f64) -> Result<Vec3> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::OutOfParameterRange {
            name: "xi",
            value: xi,
            min: 0.0,
            max: 1.0,
        });
    }
    let blend = goal_force * (1.0 - xi) + repulse_force * xi;
    let n = blend.norm();
    if n > 1e-12 {
        return Ok(blend / n);
    }
    let g = goal_force.norm();
    if g > 1e-12 {
        return Ok(goal_force / g);
    }
    let r = repulse_force.norm();
    if r > 1e-12 {
        return Ok(repulse_force / r);
    }
    Err(Error::NoPreferredDirection)
}

/// Goal behind the gun and below the drone: `[−k₁ĝx, −k₁ĝy, p_z − k₂]`.
pub fn indirect_goal(gun_dir: &Vec3, drone_pos: &Vec3, k1: f64, k2: f64) -> Vec3 {
    Vec3::new(-k1 * gun_dir.x, -k1 * gun_dir.y, drone_pos.z - k2)
}

/// Inverse-square push away from neighbours closer than `radius`.
pub fn separation(i: usize, bodies: &[DroneBody], radius: f64, gain: f64) -> Vec3 {
    let me = bodies[i].p;
    let mut f = Vec3::zeros();
    for (j, other) in bodies.iter().enumerate() {
        if j == i || !other.alive {
            continue;
        }
        let d = me - other.p;
        let dist = d.norm();
        if dist < radius && dist > 1e-9 {
            f += d * (gain / (dist * dist * dist));
        }
    }
    f
}
