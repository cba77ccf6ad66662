//! Two drones against one turret in the plane.
//!
//! Everything is normalized: turret rate 1, drone speed 1, so radii are in
//! multiples of `v` and the safety circle has radius 1. The turret starts at
//! heading 0 and always engages drone 1 first. Feasibility (at least one drone
//! reaches the safety circle) is decided by a fixed-step simulation; the
//! closed-form pieces only choose the drones' paths.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::OnceLock;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry2d::{gamma_max, tangent_point};
use crate::numeric::{bisect, bisect_predicate, golden_section_max, wrap_angle, Maximum};

type Vec2 = Vector2<f64>;

/// Default simulation step in normalized time.
pub const DEFAULT_DT: f64 = 1e-4;
/// Resolution of the starting-radius search.
pub const R_RESOLUTION: f64 = 1e-4;
/// Distances within this of the safety circle count as inside it.
const SAFETY_SLACK: f64 = 1e-9;
const R_SEARCH_MAX: f64 = 12.0;
const MAX_TIME: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DuoStrategy {
    Radial,
    Tangent,
    Hybrid,
    Transition,
}

impl DuoStrategy {
    pub const ALL: [DuoStrategy; 4] = [Self::Radial, Self::Tangent, Self::Hybrid, Self::Transition];

    pub fn name(self) -> &'static str {
        match self {
            Self::Radial => "radial",
            Self::Tangent => "tangent",
            Self::Hybrid => "hybrid",
            Self::Transition => "transition",
        }
    }
}

/// How the turret picks its rotation sense once drone 1 is down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurnCommit {
    /// Shorter arc to drone 2; counter-clockwise on an exact tie.
    #[default]
    ShorterArc,
    Ccw,
    Cw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuoScenario {
    pub alpha1: f64,
    pub strategy: DuoStrategy,
    /// Common starting radius of both drones.
    pub r: f64,
    /// Absolute heading of drone 1 for the transition strategy. `None` uses
    /// [`transition_angle`].
    pub heading: Option<f64>,
    pub commit: TurnCommit,
    pub dt: f64,
}

impl DuoScenario {
    pub fn new(alpha1: f64, strategy: DuoStrategy, r: f64) -> Self {
        Self {
            alpha1,
            strategy,
            r,
            heading: None,
            commit: TurnCommit::default(),
            dt: DEFAULT_DT,
        }
    }

    pub fn with_heading(mut self, heading: f64) -> Self {
        self.heading = Some(heading);
        self
    }

    pub fn with_commit(mut self, commit: TurnCommit) -> Self {
        self.commit = commit;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DroneId {
    One,
    Two,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DuoOutcome {
    pub survivor: Option<DroneId>,
    /// Turret heading when drone 1 was hit.
    pub drone1_death_bearing: Option<f64>,
    pub drone1_death_time: Option<f64>,
    pub r_feasible: bool,
}

/// Sampled positions of one run, for plotting.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DuoTrace {
    pub time: Vec<f64>,
    pub turret: Vec<f64>,
    pub drone1: Vec<[f64; 2]>,
    pub drone2: Vec<[f64; 2]>,
}

/// Radius behind the turret from which a lone tangent-fleeing drone just
/// survives a half turn: `√(1 + γ_max²) ≈ 4.6033`.
pub fn stay_alive_radius() -> f64 {
    let g = gamma_max();
    (1.0 + g * g).sqrt()
}

/// Largest starting radius for two tangent-fleeing drones at `α₁ = π/2`:
/// the root of `√(r² − 1) − acos(1/r) = 3π/2`, about 6.202.
pub fn tangent_pair_radius() -> f64 {
    static R: OnceLock<f64> = OnceLock::new();
    *R.get_or_init(|| {
        bisect(
            |r| (r * r - 1.0).sqrt() - (1.0 / r).acos() - 1.5 * PI,
            1.0,
            20.0,
            1e-14,
            200,
        )
        .expect("bracketed")
    })
}

/// Drone 1's death bearing under the stay-alive strategy, solving
/// `α₁ = β − asin(1 / (r⊥/β + 1))` for `β ∈ [α₁, α₁ + π/2]`.
///
/// `r_perp` is the radius of drone 2 behind the turret at drone 1's death;
/// [`stay_alive_radius`] reproduces the optimal hybrid curve.
pub fn stay_alive_beta(alpha1: f64, r_perp: f64) -> Result<f64> {
    if !(r_perp > 1.0) {
        return Err(Error::OutOfParameterRange {
            name: "r_perp",
            value: r_perp,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    if !(0.0..=PI).contains(&alpha1) {
        return Err(Error::OutOfParameterRange {
            name: "alpha1",
            value: alpha1,
            min: 0.0,
            max: PI,
        });
    }
    bisect(
        |b| {
            if b == 0.0 {
                -alpha1
            } else {
                b - (1.0 / (r_perp / b + 1.0)).asin() - alpha1
            }
        },
        alpha1,
        alpha1 + FRAC_PI_2,
        1e-13,
        200,
    )
}

/// Death bearing of drone 1 flying the stay-alive line from radius `r`: the
/// first `β > α₁` where its reachable disc `|p − p₀| ≤ β` touches the firing
/// line at bearing `β` from the far side, `r sin(β − α₁) = β`.
pub fn stay_alive_death_angle(alpha1: f64, r: f64) -> Result<f64> {
    let g = |b: f64| r * (b - alpha1).sin() - b;
    let peak = alpha1 + (1.0 / r).clamp(-1.0, 1.0).acos();
    if g(peak) < 0.0 {
        return Err(Error::NumericalFailure(format!(
            "drone 1 at radius {r} cannot stay ahead of the firing line"
        )));
    }
    bisect(g, alpha1, peak, 1e-13, 200)
}

/// Largest `α₁` for which the hybrid strategy applies: drone 2's start
/// `π + β` meets `2π − α₁`, with `β` from [`stay_alive_beta`].
pub fn hybrid_limit() -> f64 {
    static LIMIT: OnceLock<f64> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        let rho = stay_alive_radius();
        bisect(
            |a| stay_alive_beta(a, rho).expect("in range") + a - PI,
            0.5,
            FRAC_PI_2,
            1e-13,
            200,
        )
        .expect("bracketed")
    })
}

fn unit(angle: f64) -> Vec2 {
    Vec2::new(angle.cos(), angle.sin())
}

fn bearing(p: &Vec2) -> f64 {
    p.y.atan2(p.x)
}

#[derive(Debug, Clone, Copy)]
enum Motion {
    /// Fly straight at the point and stop there.
    Toward(Vec2),
    /// Fly along a fixed heading indefinitely.
    Heading(Vec2),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Active,
    Safe,
    Dead,
}

#[derive(Debug, Clone, Copy)]
struct Agent {
    p: Vec2,
    motion: Motion,
    status: Status,
    /// Wrapped bearing relative to the turret at the end of the last step.
    rel: f64,
}

impl Agent {
    fn new(p: Vec2, motion: Motion) -> Self {
        Self {
            p,
            motion,
            status: Status::Active,
            rel: wrap_angle(bearing(&p)),
        }
    }

    fn advance(&mut self, dt: f64) {
        match self.motion {
            Motion::Toward(target) => {
                let d = target - self.p;
                let dist = d.norm();
                if dist <= dt {
                    self.p = target;
                } else {
                    self.p += d * (dt / dist);
                }
            }
            Motion::Heading(u) => self.p += u * dt,
        }
    }
}

/// Straight-line flight from `p0` along `heading` against a turret starting at
/// heading 0 and rotating counter-clockwise at unit rate. Returns the time the
/// firing line catches the drone, or `None` if it reaches the safety circle.
pub fn straight_line_death_time(p0: Vec2, heading: f64) -> Option<f64> {
    let u = unit(heading);
    let b0 = bearing(&p0);
    if b0 <= 0.0 {
        return Some(0.0);
    }
    let step = 1e-3;
    let mut t = 0.0;
    let mut unwrapped = b0;
    while t < MAX_TIME {
        let p = p0 + u * t;
        // Closest approach to the origin inside this step.
        let s = (-p.dot(&u)).clamp(0.0, step);
        if (p + u * s).norm() <= 1.0 + SAFETY_SLACK {
            return None;
        }
        let b = bearing(&p);
        let next = unwrapped + wrap_angle(bearing(&(p + u * step)) - b);
        if next - (t + step) <= 0.0 {
            let h = |tau: f64| unwrapped + wrap_angle(bearing(&(p0 + u * tau)) - b) - tau;
            return bisect(h, t, t + step, 1e-13, 200).ok();
        }
        unwrapped = next;
        t += step;
    }
    None
}

/// Drone 1's absolute heading that leads to the tangent point of the safety
/// circle on its counter-clockwise side.
pub fn tangent_heading(alpha1: f64, r: f64) -> f64 {
    let p0 = r * unit(alpha1);
    let t = tangent_point(p0, 1.0, 1.0).expect("outside the safety circle");
    bearing(&(t - p0))
}

struct Setup {
    d1: Agent,
    d2: Agent,
    /// Drone 2's escape depends on the turret's committed sense; radial
    /// drones never switch.
    d2_flees_tangent: bool,
}

fn setup(s: &DuoScenario) -> Result<Setup> {
    let a = s.alpha1;
    let r = s.r;
    let p1 = r * unit(a);
    let opposite_start = if a < FRAC_PI_2 { PI + a } else { -a };
    let setup = match s.strategy {
        DuoStrategy::Radial => Setup {
            d1: Agent::new(p1, Motion::Toward(Vec2::zeros())),
            d2: Agent::new(r * unit(opposite_start), Motion::Toward(Vec2::zeros())),
            d2_flees_tangent: false,
        },
        DuoStrategy::Tangent => {
            let p2 = r * unit(opposite_start);
            Setup {
                d1: Agent::new(p1, Motion::Toward(tangent_point(p1, 1.0, 1.0)?)),
                d2: Agent::new(p2, Motion::Toward(tangent_point(p2, 1.0, 1.0)?)),
                d2_flees_tangent: true,
            }
        }
        DuoStrategy::Hybrid => {
            if a > hybrid_limit() + 1e-12 {
                return Err(Error::UnsupportedRegime(format!(
                    "hybrid strategy needs alpha1 <= {:.4}, got {a}",
                    hybrid_limit()
                )));
            }
            match stay_alive_death_angle(a, r) {
                Ok(beta) => {
                    let p2 = r * unit(PI + beta);
                    Setup {
                        d1: Agent::new(p1, Motion::Heading(unit(beta + FRAC_PI_2))),
                        d2: Agent::new(p2, Motion::Toward(Vec2::zeros())),
                        d2_flees_tangent: true,
                    }
                }
                // Too close to stay ahead of the firing line; both dive.
                Err(_) => Setup {
                    d1: Agent::new(p1, Motion::Toward(Vec2::zeros())),
                    d2: Agent::new(r * unit(PI + a), Motion::Toward(Vec2::zeros())),
                    d2_flees_tangent: true,
                },
            }
        }
        DuoStrategy::Transition => {
            if a < hybrid_limit() - 1e-12 || a > FRAC_PI_2 + 1e-12 {
                return Err(Error::UnsupportedRegime(format!(
                    "transition strategy needs alpha1 in [{:.4}, π/2], got {a}",
                    hybrid_limit()
                )));
            }
            let heading = match s.heading {
                Some(h) => h,
                None => transition_angle(a)?,
            };
            let p2 = r * unit(-a);
            let rendezvous = match straight_line_death_time(p1, heading) {
                Some(t_d) => rendezvous_point(p2, t_d + PI, t_d),
                None => Vec2::zeros(),
            };
            Setup {
                d1: Agent::new(p1, Motion::Heading(unit(heading))),
                d2: Agent::new(p2, Motion::Toward(rendezvous)),
                d2_flees_tangent: true,
            }
        }
    };
    Ok(setup)
}

/// Closest point to the origin on the ray at bearing `ray` that a drone at
/// `p` can reach within `time`. Falls back to the foot of the perpendicular
/// when the ray is out of reach.
fn rendezvous_point(p: Vec2, ray: f64, time: f64) -> Vec2 {
    let u = unit(ray);
    let along = p.dot(&u);
    let off = (p - along * u).norm();
    if off >= time {
        return along.max(0.0) * u;
    }
    let rho = (along - (time * time - off * off).sqrt()).max(0.0);
    rho * u
}

/// Runs one duo engagement and reports who survives.
pub fn evaluate_duo(scenario: &DuoScenario) -> Result<DuoOutcome> {
    run(scenario, None)
}

/// Like [`evaluate_duo`] but also samples positions every `every` steps.
pub fn trace_duo(scenario: &DuoScenario, every: usize) -> Result<(DuoOutcome, DuoTrace)> {
    let mut trace = DuoTrace::default();
    let out = run(scenario, Some((&mut trace, every.max(1))))?;
    Ok((out, trace))
}

fn run(s: &DuoScenario, mut trace: Option<(&mut DuoTrace, usize)>) -> Result<DuoOutcome> {
    if !(s.r.is_finite() && s.r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {}", s.r)));
    }
    if !(0.0..=PI).contains(&s.alpha1) {
        return Err(Error::OutOfParameterRange {
            name: "alpha1",
            value: s.alpha1,
            min: 0.0,
            max: PI,
        });
    }
    if !(s.dt > 0.0) {
        return Err(Error::InvalidInput(format!("dt must be positive, got {}", s.dt)));
    }
    let Setup {
        mut d1,
        mut d2,
        d2_flees_tangent,
    } = setup(s)?;
    let dt = s.dt;
    let mut heading = 0.0f64;
    let mut commit: Option<f64> = None;
    let mut death: Option<(f64, f64)> = None;
    let mut t = 0.0;
    let mut step = 0usize;

    // A drone already on the firing line at t = 0 is hit immediately.
    for d in [&mut d1, &mut d2] {
        if d.p.norm() <= 1.0 + SAFETY_SLACK {
            d.status = Status::Safe;
        } else if d.rel == 0.0 {
            d.status = Status::Dead;
        }
    }
    if d1.status == Status::Dead {
        death = Some((0.0, 0.0));
    }

    loop {
        if let Some((tr, every)) = trace.as_mut() {
            if step.is_multiple_of(*every) {
                tr.time.push(t);
                tr.turret.push(heading);
                tr.drone1.push([d1.p.x, d1.p.y]);
                tr.drone2.push([d2.p.x, d2.p.y]);
            }
        }
        if d1.status == Status::Safe || d2.status == Status::Safe {
            break;
        }
        if d1.status == Status::Dead && d2.status == Status::Dead {
            break;
        }
        if t > MAX_TIME {
            return Err(Error::NumericalFailure(format!(
                "duo engagement unresolved after t = {MAX_TIME}"
            )));
        }

        // Drones move, then the safety check, then the turret.
        for d in [&mut d1, &mut d2] {
            if d.status == Status::Active {
                d.advance(dt);
                if d.p.norm() <= 1.0 + SAFETY_SLACK {
                    d.status = Status::Safe;
                }
            }
        }
        if d1.status == Status::Safe || d2.status == Status::Safe {
            t += dt;
            step += 1;
            continue;
        }

        match commit {
            None => {
                let target = if d1.status == Status::Active { &d1 } else { &d2 };
                let delta = wrap_angle(bearing(&target.p) - heading);
                heading += delta.clamp(-dt, dt);
            }
            Some(sense) => heading += sense * dt,
        }
        t += dt;
        step += 1;

        for (idx, d) in [&mut d1, &mut d2].into_iter().enumerate() {
            if d.status != Status::Active {
                continue;
            }
            let rel = wrap_angle(bearing(&d.p) - heading);
            let crossed = rel == 0.0 || (rel.signum() != d.rel.signum() && d.rel.abs() < FRAC_PI_2);
            d.rel = rel;
            if crossed {
                d.status = Status::Dead;
                if idx == 0 {
                    death = Some((t, heading));
                }
            }
        }

        if d1.status == Status::Dead && commit.is_none() && d2.status == Status::Active {
            let sense = match s.commit {
                TurnCommit::Ccw => 1.0,
                TurnCommit::Cw => -1.0,
                TurnCommit::ShorterArc => {
                    if wrap_angle(bearing(&d2.p) - heading) < 0.0 {
                        -1.0
                    } else {
                        1.0
                    }
                }
            };
            commit = Some(sense);
            if d2_flees_tangent {
                d2.motion = Motion::Toward(tangent_point(d2.p, sense, 1.0)?);
            }
        }
    }

    let survivor = if d1.status == Status::Safe {
        Some(DroneId::One)
    } else if d2.status == Status::Safe {
        Some(DroneId::Two)
    } else {
        None
    };
    Ok(DuoOutcome {
        survivor,
        drone1_death_bearing: death.map(|(_, b)| b),
        drone1_death_time: death.map(|(t, _)| t),
        r_feasible: survivor.is_some(),
    })
}

/// Largest common starting radius at which one of the two drones reaches the
/// safety circle, to [`R_RESOLUTION`]. Transition uses the optimal heading.
pub fn r_max(alpha1: f64, strategy: DuoStrategy) -> Result<f64> {
    match strategy {
        DuoStrategy::Transition => Ok(transition_optimum(alpha1)?.value),
        _ => r_max_for(&DuoScenario::new(alpha1, strategy, 1.0)),
    }
}

/// [`r_max`] for a fully specified scenario template; its `r` is ignored.
pub fn r_max_for(template: &DuoScenario) -> Result<f64> {
    // Validate the regime once so bisection only sees feasibility.
    setup(&DuoScenario { r: 2.0, ..*template })?;
    let mut failure = None;
    let mut feasible = |r: f64| match evaluate_duo(&DuoScenario { r, ..*template }) {
        Ok(o) => o.r_feasible,
        Err(e) => {
            failure.get_or_insert(e);
            false
        }
    };
    let r = bisect_predicate(&mut feasible, 1.0, R_SEARCH_MAX, R_RESOLUTION);
    match failure {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

/// Search interval for the transition heading: from the stay-alive heading
/// `β + π/2` to the tangent heading, both taken at the hybrid optimum radius.
pub fn transition_heading_bracket(alpha1: f64) -> Result<(f64, f64)> {
    let rho = stay_alive_radius();
    let beta = stay_alive_beta(alpha1, rho)?;
    let r = rho + beta;
    let tangent = tangent_heading(alpha1, r);
    let mut stay = wrap_angle(beta + FRAC_PI_2);
    if stay > tangent {
        stay -= TAU;
    }
    Ok((stay - 0.2, tangent + 0.2))
}

/// Drone 1 heading maximizing `r_max` under the transition strategy, with the
/// maximizing radius.
pub fn transition_optimum(alpha1: f64) -> Result<Maximum> {
    let (lo, hi) = transition_heading_bracket(alpha1)?;
    let mut failure = None;
    let best = golden_section_max(
        |h| {
            let s = DuoScenario::new(alpha1, DuoStrategy::Transition, 1.0).with_heading(h);
            match r_max_for(&s) {
                Ok(r) => r,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            }
        },
        lo,
        hi,
        1e-3,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

/// Optimal transition heading for drone 1 (absolute, relative to the turret's
/// initial orientation).
pub fn transition_angle(alpha1: f64) -> Result<f64> {
    Ok(transition_optimum(alpha1)?.argmax)
}

/// Strategies that apply at `alpha1`.
pub fn applicable_strategies(alpha1: f64) -> Vec<DuoStrategy> {
    let limit = hybrid_limit();
    let mut out = vec![DuoStrategy::Radial, DuoStrategy::Tangent];
    if alpha1 <= limit {
        out.push(DuoStrategy::Hybrid);
    }
    if alpha1 >= limit && alpha1 <= FRAC_PI_2 {
        out.push(DuoStrategy::Transition);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RMaxSample {
    pub alpha1: f64,
    pub strategy: DuoStrategy,
    pub r_max: f64,
}

/// `r_max` for every applicable strategy at each `alpha1`.
pub fn r_max_curve(alphas: &[f64]) -> Result<Vec<RMaxSample>> {
    use rayon::prelude::*;
    let jobs: Vec<(f64, DuoStrategy)> = alphas
        .iter()
        .flat_map(|&a| applicable_strategies(a).into_iter().map(move |s| (a, s)))
        .collect();
    jobs.par_iter()
        .map(|&(alpha1, strategy)| {
            Ok(RMaxSample {
                alpha1,
                strategy,
                r_max: r_max(alpha1, strategy)?,
            })
        })
        .collect()
}
