//! Pursuit-evasion analysis of drones attacking a rate-limited turret.
//!
//! * [`geometry2d`]: survivable regions for a single drone in the plane.
//! * [`placement2d`]: placements of radially attacking drones and turret sweeps.
//! * [`duo2d`]: cooperative two-drone strategies.
//! * [`sphere3d`]: point sets, aiming metrics and shortest paths on the sphere.
//! * [`sim3d`]: a fixed-step 3D engagement simulator.
//! * [`experiment`]: declarative experiment runner behind the `turret-lab` binary.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod duo2d;
pub mod error;
pub mod experiment;
pub mod geometry2d;
pub mod numeric;
pub mod placement2d;
pub mod sim3d;
pub mod sphere3d;
pub mod tsp;

pub use error::{Error, Result};
