//! Starting formations around the turret.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere3d::Vec3;

/// Vertical spacing between rows, and height of the lowest row.
pub const ROW_SPACING: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormationKind {
    /// Flat rectangle at `x = d`, spanning ±45° of pan.
    Plane,
    /// Vertical half-cylinder of radius `d` over ±90° of pan.
    HalfCylinder,
    /// Full vertical cylinder of radius `d`.
    Cylinder,
}

impl FormationKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Plane => "plane",
            Self::HalfCylinder => "half_cylinder",
            Self::Cylinder => "cylinder",
        }
    }
}

/// Staggered rows of drones. Rows hold `per_row` drones (default `⌈√n⌉`), the
/// last row holds the remainder; row `k` flies at height `2(k + 1)` m.
/// Drones sit at cell centres of their row; with two or more rows, alternate
/// rows shift by a quarter cell either way on bounded spans and by half a
/// cell on the full cylinder.
pub fn formation(kind: FormationKind, n: usize, d: f64, per_row: Option<usize>) -> Result<Vec<Vec3>> {
    if n == 0 {
        return Err(Error::InvalidInput("formation needs at least one drone".into()));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidInput(format!("distance must be positive, got {d}")));
    }
    let per_row = per_row.unwrap_or_else(|| (n as f64).sqrt().ceil() as usize).clamp(1, n);
    let rows = n.div_ceil(per_row);
    let mut out = Vec::with_capacity(n);
    for k in 0..rows {
        let count = per_row.min(n - k * per_row);
        let z = ROW_SPACING * (k + 1) as f64;
        let parity = if k % 2 == 0 { -1.0 } else { 1.0 };
        let staggered = rows > 1;
        for j in 0..count {
            let cell = j as f64 + 0.5;
            let p = match kind {
                FormationKind::Plane => {
                    let w = 2.0 * d / count as f64;
                    let shift = if staggered { parity * w / 4.0 } else { 0.0 };
                    Vec3::new(d, -d + cell * w + shift, z)
                }
                FormationKind::HalfCylinder => {
                    let w = 2.0 * FRAC_PI_2 / count as f64;
                    let shift = if staggered { parity * w / 4.0 } else { 0.0 };
                    let az = -FRAC_PI_2 + cell * w + shift;
                    Vec3::new(d * az.cos(), d * az.sin(), z)
                }
                FormationKind::Cylinder => {
                    let w = TAU / count as f64;
                    let shift = if staggered && k % 2 == 1 { w / 2.0 } else { 0.0 };
                    let az = j as f64 * w + shift;
                    Vec3::new(d * az.cos(), d * az.sin(), z)
                }
            };
            out.push(p);
        }
    }
    Ok(out)
}

/// Pan half-width of a formation, for reference.
pub fn pan_half_span(kind: FormationKind) -> f64 {
    match kind {
        FormationKind::Plane => FRAC_PI_4,
        FormationKind::HalfCylinder => FRAC_PI_2,
        FormationKind::Cylinder => TAU / 2.0,
    }
}
