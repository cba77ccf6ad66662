//! Fixed-step 3D engagement: a rate-limited pan-tilt turret against a swarm
//! of point-mass drones.
//!
//! Each step the drones steer and move, any drone within `hit_radius` of the
//! turret ends the run, then the turret slews both axes toward its current
//! target and destroys every drone inside its kill cone.

mod dynamics;
mod formation;
mod search;

use std::f64::consts::FRAC_PI_8;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use dynamics::{
    blended_direction, gun_repulsion, gun_repulsion_with_cone, indirect_goal, separation, step_drone,
    DroneBody,
};
pub use formation::{formation, pan_half_span, FormationKind, ROW_SPACING};
pub use search::{max_start_distance, MaxDistance, SearchOptions};

use crate::error::{Error, Result};
use crate::numeric::wrap_angle;
use crate::sphere3d::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackStrategy {
    /// Steer at the turret.
    Direct,
    /// Level flight into the safety cylinder above the turret, spiral down
    /// behind the gun, then dive.
    Indirect,
}

impl AttackStrategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Indirect => "indirect",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackConfig {
    pub formation: FormationKind,
    pub n: usize,
    /// Nominal starting distance, m.
    pub distance: f64,
    pub strategy: AttackStrategy,
    /// Repulsion weight in `[0, 1]`.
    pub xi: f64,
    #[serde(default = "default_k1")]
    pub k1: f64,
    #[serde(default = "default_k2")]
    pub k2: f64,
    /// Drones per formation row; `⌈√n⌉` when absent.
    #[serde(default)]
    pub per_row: Option<usize>,
}

fn default_k1() -> f64 {
    4.0
}

fn default_k2() -> f64 {
    5.0
}

impl AttackConfig {
    pub fn new(formation: FormationKind, n: usize, distance: f64, strategy: AttackStrategy, xi: f64) -> Self {
        Self {
            formation,
            n,
            distance,
            strategy,
            xi,
            k1: default_k1(),
            k2: default_k2(),
            per_row: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if !(self.distance > 0.0 && self.distance.is_finite()) {
            return Err(Error::InvalidInput(format!("distance must be positive, got {}", self.distance)));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(Error::OutOfParameterRange {
                name: "xi",
                value: self.xi,
                min: 0.0,
                max: 1.0,
            });
        }
        if !(self.k1 > 0.0 && self.k2 > 0.0) {
            return Err(Error::InvalidInput("k1 and k2 must be positive".into()));
        }
        Ok(())
    }
}

/// Physical and numerical parameters shared by every engagement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimParams {
    pub dt: f64,
    pub pan_rate: f64,
    pub tilt_rate: f64,
    pub kill_cone_half_angle: f64,
    pub hit_radius: f64,
    pub max_speed: f64,
    pub max_accel: f64,
    /// Half-angle of the cone around the gun inside which drones are repelled.
    pub repulsion_cone: f64,
    pub separation_radius: f64,
    pub separation_gain: f64,
    /// Indirect attackers below this height dive straight at the turret.
    pub terminal_altitude: f64,
    pub max_time: f64,
    /// Uniform random offset (m) added to each starting coordinate.
    pub jitter: f64,
    pub seed: u64,
    /// Record a trace frame every this many steps; 0 disables tracing.
    pub trace_every: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        let rate = 115f64.to_radians();
        Self {
            dt: 1.0 / 240.0,
            pan_rate: rate,
            tilt_rate: rate,
            kill_cone_half_angle: 0.5f64.to_radians(),
            hit_radius: 0.5,
            max_speed: 5.0,
            max_accel: 10.0,
            repulsion_cone: FRAC_PI_8,
            separation_radius: 2.0,
            separation_gain: 1.0,
            terminal_altitude: 5.0,
            max_time: 300.0,
            jitter: 0.0,
            seed: 0,
            trace_every: 0,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("pan_rate", self.pan_rate),
            ("tilt_rate", self.tilt_rate),
            ("kill_cone_half_angle", self.kill_cone_half_angle),
            ("hit_radius", self.hit_radius),
            ("max_speed", self.max_speed),
            ("max_accel", self.max_accel),
            ("repulsion_cone", self.repulsion_cone),
            ("max_time", self.max_time),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.jitter < 0.0 || self.separation_gain < 0.0 || self.separation_radius < 0.0 {
            return Err(Error::InvalidInput("jitter and separation must be non-negative".into()));
        }
        Ok(())
    }

    /// Radius of the cylinder about the pan axis that the turret cannot
    /// track at full drone speed.
    pub fn safety_cylinder_radius(&self) -> f64 {
        self.max_speed / self.pan_rate
    }
}

/// Pan-tilt turret state; tilt is elevation above the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Turret3D {
    pub pan: f64,
    pub tilt: f64,
    pub pan_rate_max: f64,
    pub tilt_rate_max: f64,
    pub kill_cone_half_angle: f64,
}

impl Turret3D {
    pub fn from_params(params: &SimParams) -> Self {
        Self {
            pan: 0.0,
            tilt: 0.0,
            pan_rate_max: params.pan_rate,
            tilt_rate_max: params.tilt_rate,
            kill_cone_half_angle: params.kill_cone_half_angle,
        }
    }

    pub fn gun_dir(&self) -> Vec3 {
        let (sp, cp) = self.pan.sin_cos();
        let (st, ct) = self.tilt.sin_cos();
        Vec3::new(ct * cp, ct * sp, st)
    }

    /// Time to bring the gun onto `p` with both axes moving at once.
    pub fn time_to_aim(&self, p: &Vec3) -> f64 {
        let (pan, tilt) = aim_angles(p);
        let t_pan = wrap_angle(pan - self.pan).abs() / self.pan_rate_max;
        let t_tilt = (tilt - self.tilt).abs() / self.tilt_rate_max;
        t_pan.max(t_tilt)
    }

    /// Slews each axis toward `p`, limited by its rate over `dt`.
    pub fn slew_toward(&mut self, p: &Vec3, dt: f64) {
        let (pan, tilt) = aim_angles(p);
        let dp = wrap_angle(pan - self.pan);
        let step = self.pan_rate_max * dt;
        self.pan = wrap_angle(self.pan + dp.clamp(-step, step));
        let dt_ = tilt - self.tilt;
        let step = self.tilt_rate_max * dt;
        self.tilt += dt_.clamp(-step, step);
    }

    /// Angle between the gun axis and the direction to `p`.
    pub fn aim_error(&self, p: &Vec3) -> f64 {
        let n = p.norm();
        if n == 0.0 {
            return 0.0;
        }
        self.gun_dir().dot(&(p / n)).clamp(-1.0, 1.0).acos()
    }
}

/// Pan (azimuth) and tilt (elevation) pointing at `p`. Directly overhead the
/// pan is taken as 0.
pub fn aim_angles(p: &Vec3) -> (f64, f64) {
    let h = p.xy().norm();
    let pan = if h == 0.0 { 0.0 } else { p.y.atan2(p.x) };
    (pan, p.z.atan2(h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    TurretDestroyed,
    AllDronesDown,
    /// Neither side won before `max_time`; counts as a failed attack.
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kill {
    pub drone: usize,
    pub time: f64,
    pub position: [f64; 3],
    pub aim_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFrame {
    pub time: f64,
    pub pan: f64,
    pub tilt: f64,
    /// `None` for drones already destroyed.
    pub drones: Vec<Option<[f64; 3]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngagementResult {
    pub outcome: Outcome,
    pub time: f64,
    pub kill_log: Vec<Kill>,
    /// Drone that reached the turret, if any.
    pub attacker: Option<usize>,
    pub trace: Vec<TraceFrame>,
}

impl EngagementResult {
    pub fn drones_win(&self) -> bool {
        self.outcome == Outcome::TurretDestroyed
    }
}

/// Per-drone steering law.
#[derive(Debug, Clone, PartialEq)]
pub enum Steering {
    Direct,
    Indirect { k1: f64, k2: f64 },
    /// Fly straight at a fixed point per drone, ignoring the gun.
    Waypoints(Vec<Vec3>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Approach,
    Spiral,
    Dive,
}

/// Starting positions for `config`, including the seeded jitter.
pub fn initial_positions(config: &AttackConfig, params: &SimParams) -> Result<Vec<Vec3>> {
    let mut pts = formation(config.formation, config.n, config.distance, config.per_row)?;
    if params.jitter > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        for p in &mut pts {
            for k in 0..3 {
                p[k] += rng.random_range(-params.jitter..=params.jitter);
            }
            p.z = p.z.max(0.0);
        }
    }
    Ok(pts)
}

/// Runs the engagement for a formation attack.
pub fn run_engagement(config: &AttackConfig, params: &SimParams) -> Result<EngagementResult> {
    config.validate()?;
    let start = initial_positions(config, params)?;
    let steering = match config.strategy {
        AttackStrategy::Direct => Steering::Direct,
        AttackStrategy::Indirect => Steering::Indirect {
            k1: config.k1,
            k2: config.k2,
        },
    };
    let bodies = start
        .into_iter()
        .map(|p| DroneBody::at_rest(p, params.max_speed, params.max_accel))
        .collect();
    simulate(bodies, &steering, config.xi, params)
}

/// Core loop over explicit initial drone states.
pub fn simulate(mut bodies: Vec<DroneBody>, steering: &Steering, xi: f64, params: &SimParams) -> Result<EngagementResult> {
    params.validate()?;
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::OutOfParameterRange {
            name: "xi",
            value: xi,
            min: 0.0,
            max: 1.0,
        });
    }
    if let Steering::Waypoints(w) = steering {
        if w.len() != bodies.len() {
            return Err(Error::InvalidInput("one waypoint per drone is required".into()));
        }
    }
    let n = bodies.len();
    let dt = params.dt;
    let mut turret = Turret3D::from_params(params);
    let mut phases = vec![Phase::Approach; n];
    let mut kill_log = Vec::new();
    let mut trace = Vec::new();
    let cylinder = params.safety_cylinder_radius();
    let mut dirs = vec![Vec3::zeros(); n];
    let max_steps = (params.max_time / dt).ceil() as u64;

    for step in 0..=max_steps {
        let t = step as f64 * dt;
        if params.trace_every > 0 && step % params.trace_every as u64 == 0 {
            trace.push(TraceFrame {
                time: t,
                pan: turret.pan,
                tilt: turret.tilt,
                drones: bodies.iter().map(|b| b.alive.then(|| [b.p.x, b.p.y, b.p.z])).collect(),
            });
        }
        if bodies.iter().all(|b| !b.alive) {
            return Ok(EngagementResult {
                outcome: Outcome::AllDronesDown,
                time: t,
                kill_log,
                attacker: None,
                trace,
            });
        }
        if step == max_steps {
            break;
        }
        let gun = turret.gun_dir();

        // Steering uses the state at the start of the step for every drone.
        for i in 0..n {
            if !bodies[i].alive {
                continue;
            }
            let p = bodies[i].p;
            let goal = match steering {
                Steering::Direct => Vec3::zeros(),
                Steering::Waypoints(w) => w[i],
                Steering::Indirect { k1, k2 } => {
                    let h = p.xy().norm();
                    if phases[i] == Phase::Approach && h <= cylinder {
                        phases[i] = Phase::Spiral;
                    }
                    if phases[i] != Phase::Approach && p.z <= params.terminal_altitude {
                        phases[i] = Phase::Dive;
                    }
                    match phases[i] {
                        Phase::Approach => Vec3::new(0.0, 0.0, p.z),
                        Phase::Spiral => indirect_goal(&gun, &p, *k1, *k2),
                        Phase::Dive => Vec3::zeros(),
                    }
                }
            };
            let to_goal = goal - p;
            let dist = to_goal.norm();
            let f_goal = if dist > 1e-12 { to_goal / dist } else { Vec3::zeros() };
            dirs[i] = match steering {
                Steering::Waypoints(_) => f_goal,
                _ => {
                    let f_rep = if p.norm() > 0.0 {
                        gun_repulsion_with_cone(&gun, &p, params.repulsion_cone)?
                    } else {
                        Vec3::zeros()
                    };
                    let mut d = blended_direction(&f_goal, &f_rep, xi).unwrap_or_else(|_| Vec3::zeros());
                    if params.separation_gain > 0.0 {
                        d += separation(i, &bodies, params.separation_radius, params.separation_gain);
                        let m = d.norm();
                        if m > 1e-12 {
                            d /= m;
                        }
                    }
                    d
                }
            };
        }
        for i in 0..n {
            if !bodies[i].alive {
                continue;
            }
            let next = step_drone(&bodies[i], &dirs[i], dt);
            bodies[i] = match steering {
                // Waypoint drones stop on their point instead of overshooting.
                Steering::Waypoints(w) if (w[i] - bodies[i].p).norm() <= next.vel.norm() * dt => DroneBody {
                    p: w[i],
                    vel: Vec3::zeros(),
                    ..next
                },
                _ => next,
            };
        }

        let t_next = t + dt;
        if let Some(i) = (0..n).find(|&i| bodies[i].alive && bodies[i].p.norm() <= params.hit_radius) {
            return Ok(EngagementResult {
                outcome: Outcome::TurretDestroyed,
                time: t_next,
                kill_log,
                attacker: Some(i),
                trace,
            });
        }

        // Nearest target by time to aim, lowest index on ties.
        let target = (0..n)
            .filter(|&i| bodies[i].alive)
            .map(|i| (i, turret.time_to_aim(&bodies[i].p)))
            .fold(None::<(usize, f64)>, |best, (i, c)| match best {
                Some((_, b)) if b <= c => best,
                _ => Some((i, c)),
            });
        if let Some((i, _)) = target {
            turret.slew_toward(&bodies[i].p, dt);
        }
        for (i, b) in bodies.iter_mut().enumerate() {
            if !b.alive {
                continue;
            }
            let err = turret.aim_error(&b.p);
            if err <= turret.kill_cone_half_angle {
                b.alive = false;
                kill_log.push(Kill {
                    drone: i,
                    time: t_next,
                    position: [b.p.x, b.p.y, b.p.z],
                    aim_error: err,
                });
            }
        }
    }
    Ok(EngagementResult {
        outcome: Outcome::TimeLimit,
        time: params.max_time,
        kill_log,
        attacker: None,
        trace,
    })
}

/// Angle helper for callers building planar scenarios.
pub fn planar(angle: f64, r: f64) -> Vec3 {
    Vec3::new(r * angle.cos(), r * angle.sin(), 0.0)
}

