//! Point sets on the unit sphere.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hull::sphere_hull;
use super::metric::check_unit;
use super::Vec3;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointOrigin {
    Fibonacci,
    LloydRelaxed,
    Random,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePointSet {
    pub points: Vec<Vec3>,
    pub origin: PointOrigin,
    pub seed: Option<u64>,
}

impl SpherePointSet {
    /// Wraps caller-supplied directions; each must be unit length.
    pub fn explicit(points: Vec<Vec3>) -> Result<Self> {
        for p in &points {
            check_unit(p)?;
        }
        Ok(Self {
            points,
            origin: PointOrigin::Explicit,
            seed: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest great-circle angle between any two points.
    pub fn min_separation(&self) -> f64 {
        nearest_neighbor_angles(&self.points)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Great-circle angle from each point to its nearest other point.
pub fn nearest_neighbor_angles(points: &[Vec3]) -> Vec<f64> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let best = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| p.dot(q))
                .fold(-1.0f64, f64::max);
            best.clamp(-1.0, 1.0).acos()
        })
        .collect()
}

/// Coefficient of variation (std / mean) of a sample.
pub fn coefficient_of_variation(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean
}

/// Golden-angle spiral: `z_i = 1 − (2i + 1)/n`, azimuth `i · 2π/φ²`.
pub fn fibonacci_sphere(n: usize) -> Result<SpherePointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one point".into()));
    }
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let increment = TAU / (golden * golden);
    let points = (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let az = i as f64 * increment;
            Vec3::new(rho * az.cos(), rho * az.sin(), z).normalize()
        })
        .collect();
    Ok(SpherePointSet {
        points,
        origin: PointOrigin::Fibonacci,
        seed: None,
    })
}

fn random_direction(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let az: f64 = rng.random_range(-PI..PI);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(rho * az.cos(), rho * az.sin(), z).normalize()
}

/// Uniformly random directions, deterministic per seed.
pub fn random_sphere(n: usize, seed: u64) -> Result<SpherePointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(SpherePointSet {
        points: (0..n).map(|_| random_direction(&mut rng)).collect(),
        origin: PointOrigin::Random,
        seed: Some(seed),
    })
}

/// Lloyd relaxation on the sphere: seeded random start, then each iteration
/// moves every point to the normalized centroid of its spherical Voronoi cell.
/// Points that own no cell (numerical duplicates) are redrawn at random.
pub fn lloyd_relax(n: usize, seed: u64, iterations: usize) -> Result<SpherePointSet> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("Lloyd relaxation needs n >= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec3> = (0..n).map(|_| random_direction(&mut rng)).collect();
    for _ in 0..iterations {
        points = lloyd_step(&points, &mut rng)?;
    }
    Ok(SpherePointSet {
        points,
        origin: PointOrigin::LloydRelaxed,
        seed: Some(seed),
    })
}

fn lloyd_step(points: &[Vec3], rng: &mut ChaCha8Rng) -> Result<Vec<Vec3>> {
    let faces = sphere_hull(points)
        .ok_or_else(|| Error::NumericalFailure("point set spans no volume".into()))?;
    // Voronoi vertices are the outward face normals (circumcenter directions).
    let centers: Vec<Vec3> = faces
        .iter()
        .map(|f| {
            (points[f[1]] - points[f[0]])
                .cross(&(points[f[2]] - points[f[0]]))
                .normalize()
        })
        .collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for (k, f) in faces.iter().enumerate() {
        for &i in f {
            incident[i].push(k);
        }
    }
    let mut out = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if incident[i].len() < 3 {
            out.push(random_direction(rng));
            continue;
        }
        let cell = sorted_cell(p, incident[i].iter().map(|&k| centers[k]).collect());
        match cell_centroid(p, &cell) {
            Some(c) => out.push(c),
            None => out.push(random_direction(rng)),
        }
    }
    Ok(out)
}

/// Orders Voronoi vertices counter-clockwise around `p`.
fn sorted_cell(p: &Vec3, mut verts: Vec<Vec3>) -> Vec<Vec3> {
    let helper = if p.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = p.cross(&helper).normalize();
    let e2 = p.cross(&e1);
    verts.sort_by(|a, b| {
        let ta = a.dot(&e2).atan2(a.dot(&e1));
        let tb = b.dot(&e2).atan2(b.dot(&e1));
        ta.total_cmp(&tb)
    });
    verts
}

/// Area-weighted mean of the fan triangles' centroids, projected back to the
/// sphere.
fn cell_centroid(p: &Vec3, cell: &[Vec3]) -> Option<Vec3> {
    let mut acc = Vec3::zeros();
    for k in 0..cell.len() {
        let a = cell[k];
        let b = cell[(k + 1) % cell.len()];
        let area = spherical_triangle_area(p, &a, &b);
        acc += area * (p + a + b) / 3.0;
    }
    let norm = acc.norm();
    (norm > 1e-15).then(|| acc / norm)
}

/// Solid angle of the spherical triangle with unit-vector corners.
pub fn spherical_triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let num = a.dot(&b.cross(c)).abs();
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fibonacci_basics() {
        let one = fibonacci_sphere(1).unwrap();
        assert_abs_diff_eq!(one.points[0].norm(), 1.0, epsilon = 1e-12);
        let two = fibonacci_sphere(2).unwrap();
        assert!(two.points[0].z * two.points[1].z < 0.0);
        let s = fibonacci_sphere(200).unwrap();
        assert!(s.min_separation() > 0.8 * (4.0 * PI / 200.0f64).sqrt());
        for p in &s.points {
            assert_abs_diff_eq!(p.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangle_area_octant() {
        let a = spherical_triangle_area(&Vec3::x(), &Vec3::y(), &Vec3::z());
        assert_abs_diff_eq!(a, PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn lloyd_zero_iterations_is_random_set() {
        let a = lloyd_relax(10, 5, 0).unwrap();
        let b = random_sphere(10, 5).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn lloyd_four_points_tetrahedron() {
        let s = lloyd_relax(4, 11, 200).unwrap();
        let target = (-1.0f64 / 3.0).acos();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let ang = s.points[i].dot(&s.points[j]).clamp(-1.0, 1.0).acos();
                assert_abs_diff_eq!(ang, target, epsilon = 0.05);
            }
        }
    }

    #[test]
    fn lloyd_evens_out_spacing() {
        let before = coefficient_of_variation(&nearest_neighbor_angles(&lloyd_relax(200, 3, 0).unwrap().points));
        let after_set = lloyd_relax(200, 3, 50).unwrap();
        let after = coefficient_of_variation(&nearest_neighbor_angles(&after_set.points));
        assert!(after < before, "{after} !< {before}");
        for p in &after_set.points {
            assert_abs_diff_eq!(p.norm(), 1.0, epsilon = 1e-12);
        }
        assert!(after_set.min_separation() > 1e-9);
    }
}
