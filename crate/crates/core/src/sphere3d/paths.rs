//! Shortest Hamiltonian paths through sphere targets from a fixed starting
//! aim, and the phantom-node reduction to a closed tour.

use serde::{Deserialize, Serialize};

use super::metric::{check_unit, distance_unchecked, Metric};
use super::points::SpherePointSet;
use super::Vec3;
use crate::error::{Error, Result};
use crate::tsp::{OpenPath, SquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    NearestNeighbor,
    /// Nearest neighbor followed by 2-opt and Or-opt to a local optimum.
    LocalSearch,
    ExactDp,
    /// Read back from an external tour through [`shp_from_tour`].
    Tour,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    /// Target indices in visiting order.
    pub order: Vec<usize>,
    /// First leg leaves the starting aim.
    pub leg_lengths: Vec<f64>,
    pub total: f64,
    pub solver: Solver,
}

/// Open-path instance over the targets with the starting aim as the fixed
/// origin.
pub fn path_instance(points: &SpherePointSet, start: &Vec3, metric: Metric) -> Result<OpenPath> {
    check_unit(start)?;
    for p in &points.points {
        check_unit(p)?;
    }
    let pts = &points.points;
    let start_cost = pts.iter().map(|p| distance_unchecked(start, p, metric)).collect();
    let m = SquareMatrix::from_fn(pts.len(), |i, j| {
        if i == j {
            0.0
        } else {
            distance_unchecked(&pts[i], &pts[j], metric)
        }
    });
    OpenPath::new(start_cost, m)
}

fn result(path: &OpenPath, order: Vec<usize>, solver: Solver) -> PathResult {
    let leg_lengths = path.legs(&order);
    PathResult {
        total: leg_lengths.iter().sum(),
        leg_lengths,
        order,
        solver,
    }
}

/// Greedy chain from the starting aim, lowest index on ties.
pub fn nn_path(points: &SpherePointSet, start: &Vec3, metric: Metric) -> Result<PathResult> {
    let path = path_instance(points, start, metric)?;
    let order = path.nearest_neighbor();
    Ok(result(&path, order, Solver::NearestNeighbor))
}

/// Near-optimal baseline for instances beyond the exact solver.
pub fn improved_path(points: &SpherePointSet, start: &Vec3, metric: Metric) -> Result<PathResult> {
    let path = path_instance(points, start, metric)?;
    let order = path.local_search(path.nearest_neighbor());
    Ok(result(&path, order, Solver::LocalSearch))
}

/// Exact shortest Hamiltonian path by Held–Karp.
pub fn exact_shp(points: &SpherePointSet, start: &Vec3, metric: Metric) -> Result<PathResult> {
    let path = path_instance(points, start, metric)?;
    let (order, _) = path.held_karp()?;
    Ok(result(&path, order, Solver::ExactDp))
}

/// Symmetric tour instance over `{start, p₁..pₙ, phantom}`. The phantom is
/// free to reach from the start and costs `big_m` from every target, so an
/// optimal tour enters the phantom from the start and leaves it exactly once.
#[derive(Debug, Clone)]
pub struct PhantomMatrix {
    pub matrix: SquareMatrix,
    pub start_index: usize,
    pub phantom_index: usize,
    pub big_m: f64,
}

pub fn phantom_transform(points: &SpherePointSet, start: &Vec3, metric: Metric) -> Result<PhantomMatrix> {
    let path = path_instance(points, start, metric)?;
    let n = points.len();
    let size = n + 2;
    let phantom = n + 1;
    let largest = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| path.cost(i, j))
        .chain((0..n).map(|j| path.start_cost(j)))
        .fold(0.0f64, f64::max);
    // Any path uses at most n + 1 legs, each bounded by `largest`.
    let big_m = size as f64 * metric.diameter().max(largest);
    let matrix = SquareMatrix::from_fn(size, |i, j| {
        if i == j {
            return 0.0;
        }
        match (i, j) {
            (0, p) | (p, 0) if p == phantom => 0.0,
            (0, t) | (t, 0) => path.start_cost(t - 1),
            (p, _) | (_, p) if p == phantom => big_m,
            (a, b) => path.cost(a - 1, b - 1),
        }
    });
    Ok(PhantomMatrix {
        matrix,
        start_index: 0,
        phantom_index: phantom,
        big_m,
    })
}

/// Recovers the open path from a closed tour over a [`PhantomMatrix`]: drop
/// the phantom and walk from the start in the direction that ends at the
/// phantom. If the phantom is not next to the start, the direction with the
/// shorter first move is used.
pub fn shp_from_tour(
    tour: &[usize],
    phantom: &PhantomMatrix,
    points: &SpherePointSet,
    start: &Vec3,
    metric: Metric,
) -> Result<PathResult> {
    let size = phantom.matrix.len();
    if tour.len() != size {
        return Err(Error::InvalidInput(format!(
            "tour visits {} nodes, expected {size}",
            tour.len()
        )));
    }
    let mut seen = vec![false; size];
    for &v in tour {
        if v >= size || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidInput("tour is not a permutation".into()));
        }
    }
    let at = tour.iter().position(|&v| v == phantom.start_index).expect("permutation");
    let forward: Vec<usize> = (1..size).map(|k| tour[(at + k) % size]).collect();
    let backward: Vec<usize> = forward.iter().rev().copied().collect();
    let m = &phantom.matrix;
    let pick = if forward.last() == Some(&phantom.phantom_index) {
        forward
    } else if backward.last() == Some(&phantom.phantom_index) {
        backward
    } else {
        let first = |seq: &[usize]| {
            seq.iter()
                .find(|&&v| v != phantom.phantom_index)
                .map(|&v| m.get(phantom.start_index, v))
                .unwrap_or(0.0)
        };
        if first(&backward) < first(&forward) {
            backward
        } else {
            forward
        }
    };
    let order: Vec<usize> = pick
        .into_iter()
        .filter(|&v| v != phantom.phantom_index)
        .map(|v| v - 1)
        .collect();
    let path = path_instance(points, start, metric)?;
    Ok(result(&path, order, Solver::Tour))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqrtFit {
    pub coefficient: f64,
    pub rms_residual: f64,
    /// RMS residual divided by the mean total.
    pub relative_residual: f64,
}

/// Least-squares fit `total ≈ c·√n`.
pub fn sqrt_fit(ns: &[usize], totals: &[f64]) -> Result<SqrtFit> {
    if ns.len() != totals.len() {
        return Err(Error::InvalidInput("ns and totals differ in length".into()));
    }
    if ns.len() < 3 {
        return Err(Error::InvalidInput("need at least three samples".into()));
    }
    let sum_n: f64 = ns.iter().map(|&n| n as f64).sum();
    let sum_ty: f64 = ns.iter().zip(totals).map(|(&n, &t)| t * (n as f64).sqrt()).sum();
    let c = sum_ty / sum_n;
    let k = ns.len() as f64;
    let rms = (ns
        .iter()
        .zip(totals)
        .map(|(&n, &t)| (t - c * (n as f64).sqrt()).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    let mean = totals.iter().sum::<f64>() / k;
    Ok(SqrtFit {
        coefficient: c,
        rms_residual: rms,
        relative_residual: rms / mean.abs(),
    })
}
