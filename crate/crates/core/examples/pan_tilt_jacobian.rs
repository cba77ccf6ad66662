//! Pan-tilt kinematics: the Jacobian and its singular configurations, and
//! the safety regions around a 115 deg/s turret for a 5 m/s drone.

use turret_evasion::sphere3d::{self, SafetyRegion, TurretLimits, Vec3};

fn main() {
    for (theta, phi, d) in [(0.3, 1.0, 2.0), (0.3, 0.0, 2.0), (0.3, std::f64::consts::PI, 2.0), (0.3, 1.0, 0.0)] {
        let j = sphere3d::pan_tilt_jacobian(theta, phi, d);
        println!("theta {theta:.2} phi {phi:.2} d {d:.1}: det J = {:+.3e}", j.determinant());
    }

    let turret = TurretLimits {
        tilt_limits: Some((-0.2, 1.3)),
        ..TurretLimits::symmetric(115f64.to_radians())
    };
    println!("\nsafety sphere {:.3} m, cylinder {:.3} m", turret.sphere_radius(5.0), turret.cylinder_radius(5.0));
    for p in [Vec3::new(1.0, 1.0, 1.0), Vec3::new(1.0, 0.5, 30.0), Vec3::new(20.0, 0.0, 60.0), Vec3::new(20.0, 0.0, 2.0)] {
        let region = sphere3d::safety_region_membership(&p, 5.0, &turret);
        let note = if region == SafetyRegion::Unsafe { "  <- trackable" } else { "" };
        println!("{:?}: {region:?}{note}", p.as_slice());
    }
}
