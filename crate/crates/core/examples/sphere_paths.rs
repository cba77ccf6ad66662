//! Aiming paths over Fibonacci points: nearest neighbour against the improved
//! and exact shortest paths, the square-root fit, and a TSPLIB round trip.

use turret_evasion::sphere3d::{self, tsplib, Metric, Vec3};
use turret_evasion::tsp::{held_karp_tour, SquareMatrix};

fn main() -> turret_evasion::Result<()> {
    let start = Vec3::x();
    let pan_tilt = Metric::pan_tilt(2.0, 1.0)?;
    for metric in [Metric::FreeRotation, pan_tilt] {
        println!("{metric:?}");
        let sizes = [25, 50, 100, 200, 400];
        let mut totals = Vec::new();
        for n in sizes {
            let pts = sphere3d::fibonacci_sphere(n)?;
            let nn = sphere3d::nn_path(&pts, &start, metric)?;
            let better = sphere3d::improved_path(&pts, &start, metric)?;
            println!("  n = {n:3}: nn {:8.4}  improved {:8.4}", nn.total, better.total);
            totals.push(better.total);
        }
        let fit = sphere3d::sqrt_fit(&sizes, &totals)?;
        println!("  total ~ {:.4} sqrt(n), relative residual {:.4}", fit.coefficient, fit.relative_residual);
    }

    // A small instance through the phantom-node tour pipeline.
    let pts = sphere3d::random_sphere(9, 3)?;
    let exact = sphere3d::exact_shp(&pts, &start, Metric::FreeRotation)?;
    let phantom = sphere3d::phantom_transform(&pts, &start, Metric::FreeRotation)?;
    let text = tsplib::write_problem("demo", &phantom);
    let parsed = tsplib::parse_problem(&text)?;
    let weights = SquareMatrix::from_fn(parsed.weights.len(), |i, j| parsed.weights.get(i, j));
    let (tour, _) = held_karp_tour(&weights)?;
    let tour_file = tsplib::write_tour("demo", &tour);
    let tour = tsplib::parse_tour(&tour_file)?;
    let via_tour = sphere3d::shp_from_tour(&tour, &phantom, &pts, &start, Metric::FreeRotation)?;
    println!("\nexact {:.6} via TSPLIB tour {:.6}", exact.total, via_tour.total);
    Ok(())
}
