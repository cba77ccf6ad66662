//! One drone against a rate-limited planar turret.
//!
//! All closed-form quantities are expressed in normalized units where the
//! turret traverses at 1 rad/s, so elapsed time equals turret path length and
//! the drone speed `v` is the physical speed divided by the traverse rate
//! (a length: the radius of the safety circle). [`Turret2D::engage`] takes
//! physical units and rescales.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect, wrap_angle};

pub type Vec2 = Vector2<f64>;

/// Convergence tolerance for the intercept-time root, in radians.
pub const INTERCEPT_TOLERANCE: f64 = 1e-10;
const MAX_BISECTION_STEPS: usize = 200;

/// Planar turret: heading and maximum traverse rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Turret2D {
    phi: f64,
    omega_max: f64,
}

impl Turret2D {
    pub fn new(phi: f64, omega_max: f64) -> Result<Self> {
        if !(omega_max > 0.0) {
            return Err(Error::InvalidInput(format!(
                "turret traverse rate must be positive, got {omega_max}"
            )));
        }
        Ok(Self {
            phi: wrap_angle(phi),
            omega_max,
        })
    }

    /// Turret with unit traverse rate, the normalization used throughout.
    pub fn normalized(phi: f64) -> Self {
        Self {
            phi: wrap_angle(phi),
            omega_max: 1.0,
        }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    /// Resolves an engagement with a drone given in physical units.
    ///
    /// The drone speed is divided by the traverse rate before the analysis
    /// and the returned death time is converted back to seconds.
    pub fn engage(&self, drone: &Drone2D, strategy: Strategy2D) -> Result<InterceptResult> {
        let v = drone.normalized_speed(self);
        let rel = relative_geometry(self, drone.position)?;
        let result = intercept(drone.position, rel.alpha, v, strategy)?;
        Ok(match result {
            InterceptResult::Destroyed { time, position } => InterceptResult::Destroyed {
                time: time / self.omega_max,
                position,
            },
            other => other,
        })
    }
}

/// Drone with a position in the plane and a maximum speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drone2D {
    pub position: Vec2,
    speed: f64,
}

impl Drone2D {
    pub fn new(position: Vec2, speed: f64) -> Result<Self> {
        if !(speed > 0.0) {
            return Err(Error::InvalidInput(format!(
                "drone speed must be positive, got {speed}"
            )));
        }
        Ok(Self { position, speed })
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Speed divided by the turret's traverse rate.
    pub fn normalized_speed(&self, turret: &Turret2D) -> f64 {
        self.speed / turret.omega_max
    }
}

/// Drone position relative to the turret.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarRelative {
    /// Distance from the turret.
    pub r: f64,
    /// World bearing of the drone.
    pub theta: f64,
    /// Signed minimum angle from the turret heading to the drone, in `[-π, π]`.
    pub alpha: f64,
}

/// How a lone drone approaches the safety circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy2D {
    /// Fly straight at the turret.
    Radial,
    /// Fly to the tangent point of the safety circle, away from the turret.
    Tangent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fate {
    ReachesSafety,
    Destroyed,
}

/// Outcome of a single-drone engagement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InterceptResult {
    ReachesSafety,
    /// The turret's firing line reaches the drone at `time`.
    Destroyed { time: f64, position: Vec2 },
}

impl InterceptResult {
    pub fn fate(&self) -> Fate {
        match self {
            InterceptResult::ReachesSafety => Fate::ReachesSafety,
            InterceptResult::Destroyed { .. } => Fate::Destroyed,
        }
    }

    pub fn death_time(&self) -> Option<f64> {
        match self {
            InterceptResult::Destroyed { time, .. } => Some(*time),
            InterceptResult::ReachesSafety => None,
        }
    }

    pub fn death_position(&self) -> Option<Vec2> {
        match self {
            InterceptResult::Destroyed { position, .. } => Some(*position),
            InterceptResult::ReachesSafety => None,
        }
    }
}

pub fn relative_geometry(turret: &Turret2D, p: Vec2) -> Result<PolarRelative> {
    let r = p.norm();
    if r == 0.0 {
        return Err(Error::DegenerateAtOrigin);
    }
    let theta = p.y.atan2(p.x);
    Ok(PolarRelative {
        r,
        theta,
        alpha: wrap_angle(theta - turret.phi),
    })
}

/// Radius of the region a radially inbound drone survives from, at angle
/// `alpha` off the turret heading: `v (1 + |α|)`.
pub fn radial_region_boundary(alpha: f64, v: f64) -> f64 {
    v * (1.0 + alpha.abs())
}

/// Sign used to pick the tangent side; zero counts as counter-clockwise.
fn side(alpha: f64) -> f64 {
    if alpha < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Angle `β` between the drone's bearing and its tangent point on the safety
/// circle, signed to match `alpha` (positive when `alpha == 0`).
pub fn tangent_angle(r: f64, alpha: f64, v: f64) -> Result<f64> {
    if r < v {
        return Err(Error::AlreadySafe { norm: r, speed: v });
    }
    Ok(side(alpha) * (v / r).clamp(-1.0, 1.0).acos())
}

/// Tangent point of the safety circle (radius `v`) seen from `p0`, on the side
/// away from the turret's approach.
pub fn tangent_point(p0: Vec2, alpha: f64, v: f64) -> Result<Vec2> {
    let r = p0.norm();
    if r == 0.0 {
        return Err(Error::DegenerateAtOrigin);
    }
    let beta = tangent_angle(r, alpha, v)?;
    let theta = p0.y.atan2(p0.x);
    Ok(v * Vec2::new((theta + beta).cos(), (theta + beta).sin()))
}

/// Resolves a single drone flying from `p0` against a turret that is `alpha`
/// radians away from the drone's bearing.
pub fn intercept(p0: Vec2, alpha: f64, v: f64, strategy: Strategy2D) -> Result<InterceptResult> {
    if !(v > 0.0) {
        return Err(Error::InvalidInput(format!("speed must be positive, got {v}")));
    }
    let r = p0.norm();
    if r < v {
        return Err(Error::AlreadySafe { norm: r, speed: v });
    }
    let a = alpha.abs();
    match strategy {
        Strategy2D::Radial => {
            if r <= radial_region_boundary(alpha, v) {
                return Ok(InterceptResult::ReachesSafety);
            }
            let dir = p0 / r;
            Ok(InterceptResult::Destroyed {
                time: a,
                position: dir * (r - v * a),
            })
        }
        Strategy2D::Tangent => {
            let beta = tangent_angle(r, alpha, v)?.abs();
            let p_perp = tangent_point(p0, alpha, v)?;
            let leg = (p0 - p_perp).norm();
            let budget = a + beta;
            if leg / v <= budget {
                return Ok(InterceptResult::ReachesSafety);
            }
            // The firing line meets the drone where the turret angle equals
            // the drone's bearing along the tangent leg.
            let residual = |t: f64| t - budget + ((leg - t * v) / v).atan();
            let t_d = bisect(residual, 0.0, budget, INTERCEPT_TOLERANCE, MAX_BISECTION_STEPS)?;
            let position = p0 - t_d * v * (p0 - p_perp) / leg;
            Ok(InterceptResult::Destroyed { time: t_d, position })
        }
    }
}

/// Largest boundary parameter: the root of `tan γ = γ` in `(π, 3π/2)`,
/// approximately 4.4934. At this parameter the boundary point sits directly
/// behind the turret.
pub fn gamma_max() -> f64 {
    static GAMMA_MAX: OnceLock<f64> = OnceLock::new();
    *GAMMA_MAX.get_or_init(|| {
        // tan γ − γ runs from −∞ to +∞ across (π, 3π/2); sin γ − γ cos γ has
        // the same roots there without the pole.
        bisect(
            |g| g.sin() - g * g.cos(),
            PI + 1e-9,
            1.5 * PI - 1e-9,
            1e-15,
            MAX_BISECTION_STEPS,
        )
        .expect("tan γ = γ is bracketed on (π, 3π/2)")
    })
}

/// Starting position on the outer edge of the tangent-strategy survivable
/// region, parameterized by `gamma` (the bearing of its tangent point relative
/// to the turret heading).
pub fn survivable_boundary(gamma: f64, phi: f64, v: f64) -> Result<Vec2> {
    let g_max = gamma_max();
    if gamma.abs() > g_max {
        return Err(Error::OutOfParameterRange {
            name: "gamma",
            value: gamma,
            min: -g_max,
            max: g_max,
        });
    }
    let s = gamma + phi;
    Ok(v * Vec2::new(s.cos() + gamma * s.sin(), s.sin() - gamma * s.cos()))
}

/// Bearing offset `α(γ) = γ − atan γ` of the boundary point with parameter `γ`.
pub fn boundary_alpha(gamma: f64) -> f64 {
    gamma - gamma.atan()
}

/// Inverts [`boundary_alpha`] for `|alpha| ≤ π`.
pub fn gamma_for_alpha(alpha: f64) -> Result<f64> {
    let a = alpha.abs();
    if a > PI {
        return Err(Error::OutOfParameterRange {
            name: "alpha",
            value: alpha,
            min: -PI,
            max: PI,
        });
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let g = bisect(
        |g| boundary_alpha(g) - a,
        0.0,
        gamma_max() + 1e-12,
        1e-14,
        MAX_BISECTION_STEPS,
    )?;
    Ok(g.copysign(alpha))
}

/// Radius of the tangent-strategy survivable region at angle `alpha` off the
/// turret heading.
pub fn tangent_region_radius(alpha: f64, v: f64) -> Result<f64> {
    let g = gamma_for_alpha(alpha)?;
    Ok(v * (1.0 + g * g).sqrt())
}
