//! Pan-tilt turret kinematics and the regions where a drone outruns it.

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use super::Vec3;

/// Axis rates and optional tilt limits of a pan-tilt turret.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurretLimits {
    pub pan_rate: f64,
    pub tilt_rate: f64,
    /// `(min, max)` elevation in radians; `None` means no joint limits.
    pub tilt_limits: Option<(f64, f64)>,
}

impl TurretLimits {
    pub fn symmetric(rate: f64) -> Self {
        Self {
            pan_rate: rate,
            tilt_rate: rate,
            tilt_limits: None,
        }
    }

    /// Slowest rotation rate about an arbitrary axis.
    pub fn geodesic_rate(&self) -> f64 {
        self.pan_rate.min(self.tilt_rate)
    }

    pub fn sphere_radius(&self, speed: f64) -> f64 {
        speed / self.geodesic_rate()
    }

    pub fn cylinder_radius(&self, speed: f64) -> f64 {
        speed / self.pan_rate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SafetyRegion {
    SafeSphere,
    SafeCylinder,
    SafeCone,
    Unsafe,
}

/// Strongest safety region containing `p`, checked sphere, then cylinder
/// about the pan axis, then the cones beyond the tilt limits.
pub fn safety_region_membership(p: &Vec3, speed: f64, turret: &TurretLimits) -> SafetyRegion {
    if p.norm() <= turret.sphere_radius(speed) {
        return SafetyRegion::SafeSphere;
    }
    if p.xy().norm() <= turret.cylinder_radius(speed) {
        return SafetyRegion::SafeCylinder;
    }
    if let Some((lo, hi)) = turret.tilt_limits {
        let tilt = p.z.atan2(p.xy().norm());
        if tilt < lo || tilt > hi {
            return SafetyRegion::SafeCone;
        }
    }
    SafetyRegion::Unsafe
}

/// End point of the pan-tilt chain `R_z(θ) R_y(φ)` followed by a prismatic
/// extension `d` along the rotated z axis. `φ` is measured from the pan axis.
pub fn forward_kinematics(theta: f64, phi: f64, d: f64) -> Vec3 {
    let r = Rotation3::from_axis_angle(&Vector3::z_axis(), theta)
        * Rotation3::from_axis_angle(&Vector3::y_axis(), phi);
    r * Vec3::new(0.0, 0.0, d)
}

/// Manipulator Jacobian `∂p/∂(θ, φ, d)`.
pub fn pan_tilt_jacobian(theta: f64, phi: f64, d: f64) -> Matrix3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Matrix3::new(
        -d * st * sp, d * ct * cp, ct * sp,
        d * ct * sp, d * st * cp, st * sp,
        0.0, -d * sp, cp,
    )
}
