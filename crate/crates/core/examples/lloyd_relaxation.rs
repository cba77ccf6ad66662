//! Uniformity of three point sets on the sphere, measured by the spread of
//! nearest-neighbour angles.

use turret_evasion::sphere3d::{self, points};

fn main() -> turret_evasion::Result<()> {
    for n in [20, 50, 100] {
        let fib = sphere3d::fibonacci_sphere(n)?;
        let lloyd = sphere3d::lloyd_relax(n, 1, 60)?;
        let random = sphere3d::random_sphere(n, 1)?;
        let cv = |s: &sphere3d::SpherePointSet| points::coefficient_of_variation(&points::nearest_neighbor_angles(&s.points));
        println!(
            "n = {n:3}: cv fibonacci {:.4}, lloyd {:.4}, random {:.4}; min separation lloyd {:.4} rad",
            cv(&fib),
            cv(&lloyd),
            cv(&random),
            lloyd.min_separation()
        );
    }
    Ok(())
}
