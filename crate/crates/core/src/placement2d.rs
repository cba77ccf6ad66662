//! Initial placements of radially attacking drones on a circle and the
//! turret sweeps that clear them.
//!
//! Radially moving drones keep their bearing, so a sweep is a path through
//! fixed angles starting from the turret heading (angle 0). Distances are
//! shortest arcs.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::wrap_angle;
use crate::tsp::{OpenPath, SquareMatrix};

/// Two candidate moves whose lengths differ by less than this count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Signed drone bearings relative to the turret heading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularConfiguration {
    pub angles: Vec<f64>,
    /// Offset used by the construction, zero when not applicable.
    pub epsilon: f64,
}

impl AngularConfiguration {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidInput("configuration needs at least one drone".into()));
        }
        Ok(Self {
            angles: angles.into_iter().map(wrap_angle).collect(),
            epsilon: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Turret sweep through a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub visit_order: Vec<usize>,
    pub per_leg: Vec<f64>,
    pub total_length: f64,
}

/// Shortest arc between two bearings, in `[0, π]`.
pub fn arc_distance(a: f64, b: f64) -> f64 {
    wrap_angle(b - a).abs()
}

/// Placement that maximizes the path of a greedy turret: the `j`th drone sits
/// at `π Σ_{i<j} 2^{-(n-1-i)} - ε`, so each successive counter-clockwise drone
/// doubles the distance travelled while staying closer than the clockwise one.
pub fn greedy_spacing(n: usize, epsilon: f64) -> Result<AngularConfiguration> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let max = max_epsilon(n);
    if !(epsilon > 0.0 && epsilon < max) {
        return Err(Error::InvalidEpsilon { epsilon, max, n });
    }
    let mut angles = Vec::with_capacity(n);
    let mut partial = 0.0;
    for i in 0..n {
        partial += PI * 0.5f64.powi((n - 1 - i) as i32);
        angles.push(wrap_angle(partial - epsilon));
    }
    Ok(AngularConfiguration { angles, epsilon })
}

/// Largest admissible offset for [`greedy_spacing`] (exclusive).
pub fn max_epsilon(n: usize) -> f64 {
    PI * 0.5f64.powi(n as i32 - 1)
}

/// Base spacing of the doubling placement:
/// `2π / (2^⌈n/2⌉ + 2^(⌊n/2⌋+1) − 2)`.
pub fn doubling_alpha(n: usize) -> f64 {
    let ceil = n.div_ceil(2) as i32;
    let floor = (n / 2) as i32;
    TAU / (2f64.powi(ceil) + 2f64.powi(floor + 1) - 2.0)
}

/// Symmetric placement at `±α, ±3α, ±7α, …` (doubling gaps), with a final
/// drone directly behind the turret when `n` is odd. Forces both greedy and
/// optimal turrets to travel `2π − α`.
pub fn doubling_spacing(n: usize) -> Result<AngularConfiguration> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let alpha = doubling_alpha(n);
    let mut angles = Vec::with_capacity(n);
    for k in 1..=(n / 2) {
        let a = ((1u64 << k) - 1) as f64 * alpha;
        angles.push(a);
        angles.push(-a);
    }
    if n % 2 == 1 {
        angles.push(PI);
    }
    Ok(AngularConfiguration {
        angles,
        epsilon: 0.0,
    })
}

/// Greedy turret: repeatedly turns to the drone with the smallest traversal,
/// preferring the counter-clockwise move on ties.
pub fn greedy_sweep(config: &AngularConfiguration) -> SweepResult {
    let n = config.len();
    let mut alive = vec![true; n];
    let mut heading = 0.0;
    let mut visit_order = Vec::with_capacity(n);
    let mut per_leg = Vec::with_capacity(n);
    for _ in 0..n {
        // (index, distance, counter-clockwise?)
        let mut best: Option<(usize, f64, bool)> = None;
        for (j, &a) in config.angles.iter().enumerate() {
            if !alive[j] {
                continue;
            }
            let delta = wrap_angle(a - heading);
            let dist = delta.abs();
            let ccw = delta > 0.0 || (delta == PI);
            let better = match best {
                None => true,
                Some((_, d, best_ccw)) => {
                    dist < d - TIE_TOLERANCE || ((dist - d).abs() <= TIE_TOLERANCE && ccw && !best_ccw)
                }
            };
            if better {
                best = Some((j, dist, ccw));
            }
        }
        let (j, dist, _) = best.expect("a drone remains");
        alive[j] = false;
        heading = config.angles[j];
        visit_order.push(j);
        per_leg.push(dist);
    }
    SweepResult {
        total_length: per_leg.iter().sum(),
        visit_order,
        per_leg,
    }
}

/// Optimal turret: exact shortest Hamiltonian path through the bearings
/// starting from heading 0.
pub fn optimal_sweep(config: &AngularConfiguration) -> Result<SweepResult> {
    let path = sweep_instance(config)?;
    let (visit_order, total_length) = path.held_karp()?;
    Ok(SweepResult {
        per_leg: path.legs(&visit_order),
        total_length,
        visit_order,
    })
}

fn sweep_instance(config: &AngularConfiguration) -> Result<OpenPath> {
    let a = &config.angles;
    let start = a.iter().map(|&x| arc_distance(0.0, x)).collect();
    let m = SquareMatrix::from_fn(a.len(), |i, j| arc_distance(a[i], a[j]));
    OpenPath::new(start, m)
}

/// One random trial: `n` bearings drawn uniformly on the circle, swept by
/// both turret policies. Deterministic per seed.
pub fn random_trial(n: usize, seed: u64) -> Result<TrialResult> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = (0..n).map(|_| wrap_angle(rng.random_range(-PI..PI))).collect();
    let config = AngularConfiguration::new(angles)?;
    Ok(TrialResult {
        n,
        seed,
        greedy_len: greedy_sweep(&config).total_length,
        optimal_len: optimal_sweep(&config)?.total_length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub n: usize,
    pub seed: u64,
    pub greedy_len: f64,
    pub optimal_len: f64,
}

/// Closed-form greedy path length through [`greedy_spacing`]:
/// `2π (1 − 2⁻ⁿ) − ε`.
pub fn greedy_spacing_greedy_length(n: usize, epsilon: f64) -> f64 {
    TAU * (1.0 - 0.5f64.powi(n as i32)) - epsilon
}

/// Closed-form optimal path length through [`greedy_spacing`]: the shorter
/// of the two turn-once sweeps. Turning CW to the last drone first costs
/// `π (1 + 2^{1−n}) + ε`; sweeping CCW first and then back costs
/// `2π − π 2^{1−n} − ε`. The first is shorter from `n = 3` on; the often
/// quoted `π (1 + 2^{1−n}) − ε` is exact only for `n = 2`.
pub fn greedy_spacing_optimal_length(n: usize, epsilon: f64) -> f64 {
    let edge = PI * 0.5f64.powi(n as i32 - 1);
    (PI + edge + epsilon).min(TAU - edge - epsilon)
}

/// `π (1 + 2^{1−n}) − ε`, the textbook form of the optimal length through
/// [`greedy_spacing`]. Kept for comparison with
/// [`greedy_spacing_optimal_length`], which it matches only at `n = 2`.
pub fn greedy_spacing_optimal_length_textbook(n: usize, epsilon: f64) -> f64 {
    PI * (1.0 + 0.5f64.powi(n as i32 - 1)) - epsilon
}
