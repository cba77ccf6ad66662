//! Survivable regions of a single drone in the plane, and a few intercepts
//! against a turret that starts facing away.

use std::f64::consts::PI;

use turret_evasion::geometry2d::{self, InterceptResult, Strategy2D, Vec2};

fn main() -> turret_evasion::Result<()> {
    let g = geometry2d::gamma_max();
    println!("gamma_max = {g:.6}, tangent region radius behind the turret = {:.4}", (1.0 + g * g).sqrt());
    println!("alpha      radial   tangent");
    for k in 0..=8 {
        let alpha = PI * k as f64 / 8.0;
        println!(
            "{alpha:6.3}  {:8.4}  {:8.4}",
            geometry2d::radial_region_boundary(alpha, 1.0),
            geometry2d::tangent_region_radius(alpha, 1.0)?
        );
    }

    // Drone at bearing 2 rad, 4 units out; turret heading 0.
    let p0 = Vec2::new(4.0 * 2f64.cos(), 4.0 * 2f64.sin());
    for strategy in [Strategy2D::Radial, Strategy2D::Tangent] {
        match geometry2d::intercept(p0, 2.0, 1.0, strategy)? {
            InterceptResult::ReachesSafety => println!("{strategy:?}: reaches the safety circle"),
            InterceptResult::Destroyed { time, position } => {
                println!("{strategy:?}: destroyed at t = {time:.4}, |p| = {:.4}", position.norm())
            }
        }
    }
    Ok(())
}
