//! Incremental convex hull of points on the unit sphere. Its faces are the
//! spherical Delaunay triangulation of the points.

use super::Vec3;

const VISIBLE_EPS: f64 = 1e-12;

/// Outward-oriented triangles of the hull. Points that end up strictly inside
/// (duplicates) belong to no face.
pub(crate) fn sphere_hull(points: &[Vec3]) -> Option<Vec<[usize; 3]>> {
    let n = points.len();
    if n < 4 {
        return None;
    }
    let seed = initial_tetrahedron(points)?;
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let centroid = seed.iter().map(|&i| points[i]).sum::<Vec3>() / 4.0;
    for (a, b, c) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        let mut f = [seed[a], seed[b], seed[c]];
        if normal(points, &f).dot(&(points[f[0]] - centroid)) < 0.0 {
            f.swap(1, 2);
        }
        faces.push(f);
    }
    let mut visible = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for p in 0..n {
        if seed.contains(&p) {
            continue;
        }
        let q = points[p];
        visible.clear();
        visible.extend(
            (0..faces.len())
                .filter(|&k| normal(points, &faces[k]).dot(&(q - points[faces[k][0]])) > VISIBLE_EPS),
        );
        if visible.is_empty() {
            continue;
        }
        edges.clear();
        for &k in &visible {
            let f = faces[k];
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                edges.push(e);
            }
        }
        // Horizon edges are those whose reverse is not among visible edges.
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| !edges.contains(&(b, a)))
            .collect();
        let mut keep = vec![true; faces.len()];
        for &k in &visible {
            keep[k] = false;
        }
        let mut next: Vec<[usize; 3]> = faces
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(f, _)| *f)
            .collect();
        next.extend(horizon.into_iter().map(|(a, b)| [a, b, p]));
        faces = next;
    }
    Some(faces)
}

fn normal(points: &[Vec3], f: &[usize; 3]) -> Vec3 {
    (points[f[1]] - points[f[0]]).cross(&(points[f[2]] - points[f[0]]))
}

fn initial_tetrahedron(points: &[Vec3]) -> Option<[usize; 4]> {
    let a = 0;
    let b = (1..points.len()).find(|&i| (points[i] - points[a]).norm() > 1e-9)?;
    let c = (1..points.len())
        .find(|&i| (points[b] - points[a]).cross(&(points[i] - points[a])).norm() > 1e-9)?;
    let nrm = normal(points, &[a, b, c]);
    let d = (1..points.len()).find(|&i| nrm.dot(&(points[i] - points[a])).abs() > 1e-9)?;
    Some([a, b, c, d])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron_has_eight_faces() {
        let pts = vec![
            Vec3::x(),
            -Vec3::x(),
            Vec3::y(),
            -Vec3::y(),
            Vec3::z(),
            -Vec3::z(),
        ];
        let faces = sphere_hull(&pts).unwrap();
        assert_eq!(faces.len(), 8);
        for f in &faces {
            let nrm = normal(&pts, f);
            let c = (pts[f[0]] + pts[f[1]] + pts[f[2]]) / 3.0;
            assert!(nrm.dot(&c) > 0.0);
        }
    }

    #[test]
    fn euler_characteristic() {
        let pts: Vec<Vec3> = crate::sphere3d::fibonacci_sphere(50).unwrap().points;
        let faces = sphere_hull(&pts).unwrap();
        // V - E + F = 2 with E = 3F/2 for a closed triangulation.
        assert_eq!(faces.len(), 2 * 50 - 4);
    }
}
