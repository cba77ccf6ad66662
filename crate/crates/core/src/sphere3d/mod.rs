//! Targets on the sphere of directions around a turret: point sets, aiming
//! metrics, shortest Hamiltonian paths, TSPLIB interchange and pan-tilt
//! kinematics.

mod hull;
pub mod kinematics;
pub mod metric;
pub mod paths;
pub mod points;
pub mod tsplib;

pub use kinematics::{
    forward_kinematics, pan_tilt_jacobian, safety_region_membership, SafetyRegion, TurretLimits,
};
pub use metric::{angular_distance, Metric};
pub use paths::{
    exact_shp, improved_path, nn_path, phantom_transform, shp_from_tour, sqrt_fit, PathResult,
    PhantomMatrix, Solver, SqrtFit,
};
pub use points::{fibonacci_sphere, lloyd_relax, random_sphere, PointOrigin, SpherePointSet};

use nalgebra::Vector3;

pub type Vec3 = Vector3<f64>;
