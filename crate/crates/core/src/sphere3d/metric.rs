//! Angular distances between aiming directions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::error::{Error, Result};
use crate::numeric::wrap_angle;

/// Inputs further than this from unit norm are rejected.
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    /// Great-circle angle, for a turret that can rotate about any axis.
    FreeRotation,
    /// Time for independent pan and tilt axes moving simultaneously, scaled
    /// back to an angle by the faster axis rate.
    PanTiltRate { pan_rate: f64, tilt_rate: f64 },
}

impl Metric {
    pub fn pan_tilt(pan_rate: f64, tilt_rate: f64) -> Result<Self> {
        if !(pan_rate > 0.0 && tilt_rate > 0.0) {
            return Err(Error::InvalidInput(format!(
                "axis rates must be positive, got pan {pan_rate}, tilt {tilt_rate}"
            )));
        }
        Ok(Self::PanTiltRate {
            pan_rate,
            tilt_rate,
        })
    }

    /// Largest distance the metric can produce between unit vectors.
    pub fn diameter(&self) -> f64 {
        match *self {
            Metric::FreeRotation => PI,
            Metric::PanTiltRate {
                pan_rate,
                tilt_rate,
            } => {
                let fast = pan_rate.max(tilt_rate);
                (PI / pan_rate).max(PI / tilt_rate) * fast
            }
        }
    }
}

pub(crate) fn check_unit(u: &Vec3) -> Result<()> {
    let n = u.norm();
    if (n - 1.0).abs() > UNIT_TOLERANCE || !n.is_finite() {
        return Err(Error::NonUnitVector(n));
    }
    Ok(())
}

/// Pan (azimuth) and tilt (elevation) of a unit vector.
pub fn pan_tilt_of(u: &Vec3) -> (f64, f64) {
    (u.y.atan2(u.x), u.z.clamp(-1.0, 1.0).asin())
}

pub fn angular_distance(u: &Vec3, v: &Vec3, metric: Metric) -> Result<f64> {
    check_unit(u)?;
    check_unit(v)?;
    Ok(distance_unchecked(u, v, metric))
}

pub(crate) fn distance_unchecked(u: &Vec3, v: &Vec3, metric: Metric) -> f64 {
    match metric {
        Metric::FreeRotation => u.dot(v).clamp(-1.0, 1.0).acos(),
        Metric::PanTiltRate {
            pan_rate,
            tilt_rate,
        } => {
            if u == v {
                return 0.0;
            }
            let (pu, tu) = pan_tilt_of(u);
            let (pv, tv) = pan_tilt_of(v);
            let t_pan = wrap_angle(pv - pu).abs() / pan_rate;
            let t_tilt = (tv - tu).abs() / tilt_rate;
            t_pan.max(t_tilt) * pan_rate.max(tilt_rate)
        }
    }
}
