//! Batch experiment driver: reads a TOML or JSON experiment file, runs one
//! study and writes CSV (plus optional SVG and TSPLIB) files next to a
//! manifest.
//!
//! Outputs are staged in a hidden directory and only moved into place once the
//! whole run succeeds, so a failed run leaves nothing half-written behind.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::duo2d::{self, DuoStrategy};
use crate::error::{Error, Result};
use crate::geometry2d::{self, Vec2};
use crate::placement2d;
use crate::sim3d::{
    max_start_distance, run_engagement, AttackConfig, AttackStrategy, FormationKind, SearchOptions, SimParams,
};
use crate::sphere3d::{self, Metric, Vec3};

pub const EXIT_OK: i32 = 0;
/// Failures that are neither a bad experiment file nor a numerical problem,
/// such as an unwritable output directory.
pub const EXIT_IO: i32 = 1;
pub const EXIT_BAD_SPEC: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subcommand {
    Region2d,
    Sweep2d,
    Duo2d,
    SpherePaths,
    Engagement3d,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Region2d => "region2d",
            Subcommand::Sweep2d => "sweep2d",
            Subcommand::Duo2d => "duo2d",
            Subcommand::SpherePaths => "sphere_paths",
            Subcommand::Engagement3d => "engagement3d",
        }
    }
}

/// One experiment as read from disk. `params` is checked against the
/// subcommand's own parameter set when the experiment runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub subcommand: Subcommand,
    #[serde(default)]
    pub params: Map<String, Value>,
    /// Sub-directory of the output directory; defaults to the subcommand name.
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| Error::InvalidSpec(e.message().to_string()))
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fails with the offending key if `params` does not fit the subcommand.
    pub fn validate(&self) -> Result<()> {
        match self.subcommand {
            Subcommand::Region2d => self.typed::<Region2dParams>()?.validate(),
            Subcommand::Sweep2d => self.typed::<Sweep2dParams>()?.validate(),
            Subcommand::Duo2d => self.typed::<Duo2dParams>()?.validate(),
            Subcommand::SpherePaths => self.typed::<SpherePathsParams>()?.validate(),
            Subcommand::Engagement3d => self.typed::<Engagement3dParams>()?.validate(),
        }
    }

    fn typed<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| Error::InvalidSpec(format!("[params] for {}: {e}", self.subcommand.name())))
    }

    fn output_dir(&self, out: &Path) -> Result<PathBuf> {
        let rel = self
            .output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(self.subcommand.name()));
        if rel.is_absolute() || rel.components().any(|c| matches!(c, std::path::Component::ParentDir)) {
            return Err(Error::InvalidSpec(format!(
                "output_path must be relative and stay below the output directory, got {}",
                rel.display()
            )));
        }
        Ok(out.join(rel))
    }
}

/// Exit status for an error raised by [`run`].
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NumericalFailure(_) | Error::NoPreferredDirection => EXIT_NUMERICAL,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => EXIT_IO,
        _ => EXIT_BAD_SPEC,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub subcommand: Subcommand,
    pub seed: u64,
    pub crate_version: &'static str,
    pub spec: ExperimentSpec,
    pub outputs: Vec<String>,
}

/// Names of the files an experiment wrote, relative to its output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub dir: PathBuf,
    pub outputs: Vec<String>,
}

/// Runs `spec` and writes its files below `out`.
pub fn run(spec: &ExperimentSpec, out: &Path) -> Result<RunReport> {
    spec.validate()?;
    let dir = spec.output_dir(out)?;
    fs::create_dir_all(&dir)?;
    let staging = dir.join(format!(".staging-{}", std::process::id()));
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    fs::create_dir_all(&staging)?;

    let mut sink = Sink {
        root: staging.clone(),
        files: Vec::new(),
    };
    let outcome = run_into(spec, &mut sink).and_then(|()| {
        let manifest = Manifest {
            subcommand: spec.subcommand,
            seed: spec.seed,
            crate_version: env!("CARGO_PKG_VERSION"),
            spec: spec.clone(),
            outputs: sink.files.clone(),
        };
        sink.write("manifest.json", serde_json::to_string_pretty(&manifest)? + "\n")?;
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        sink.write("manifest.timestamp", format!("{stamp}\n"))?;
        let mut moved = Vec::new();
        for f in &sink.files {
            let to = dir.join(f);
            let step = to
                .parent()
                .map_or(Ok(()), fs::create_dir_all)
                .and_then(|()| fs::rename(staging.join(f), &to));
            if let Err(e) = step {
                for m in &moved {
                    let _ = fs::remove_file(m);
                }
                return Err(e.into());
            }
            moved.push(to);
        }
        Ok(())
    });
    let _ = fs::remove_dir_all(&staging);
    outcome?;
    Ok(RunReport { dir, outputs: sink.files })
}

struct Sink {
    root: PathBuf,
    files: Vec<String>,
}

impl Sink {
    fn write(&mut self, name: &str, body: impl AsRef<[u8]>) -> Result<()> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, body)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn csv<R: Serialize>(&mut self, name: &str, rows: &[R]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        self.write(name, bytes)
    }
}

fn run_into(spec: &ExperimentSpec, sink: &mut Sink) -> Result<()> {
    match spec.subcommand {
        Subcommand::Region2d => region2d(&spec.typed()?, sink),
        Subcommand::Sweep2d => sweep2d(&spec.typed()?, spec.seed, sink),
        Subcommand::Duo2d => duo(&spec.typed()?, sink),
        Subcommand::SpherePaths => sphere_paths(&spec.typed()?, spec.seed, sink),
        Subcommand::Engagement3d => engagement3d(&spec.typed()?, spec.seed, sink),
    }
}

fn bad(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidSpec(format!("{key}: {msg}"))
}

// ---------------------------------------------------------------- region2d

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Region2dParams {
    pub v: f64,
    pub samples: usize,
    pub svg: bool,
}

impl Default for Region2dParams {
    fn default() -> Self {
        Self {
            v: 1.0,
            samples: 721,
            svg: false,
        }
    }
}

impl Region2dParams {
    fn validate(&self) -> Result<()> {
        if !(self.v > 0.0 && self.v.is_finite()) {
            return Err(bad("v", "must be positive"));
        }
        if self.samples < 3 {
            return Err(bad("samples", "need at least 3"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
struct RegionRow {
    alpha: f64,
    radial_r: f64,
    tangent_r: f64,
    radial_x: f64,
    radial_y: f64,
    tangent_x: f64,
    tangent_y: f64,
}

fn region2d(p: &Region2dParams, sink: &mut Sink) -> Result<()> {
    // The turret faces +x; a drone at bearing α sits α off its heading.
    let rows = (0..p.samples)
        .map(|k| {
            let alpha = -PI + 2.0 * PI * k as f64 / (p.samples - 1) as f64;
            let radial_r = geometry2d::radial_region_boundary(alpha, p.v);
            let tangent_r = geometry2d::tangent_region_radius(alpha, p.v)?;
            Ok(RegionRow {
                alpha,
                radial_r,
                tangent_r,
                radial_x: radial_r * alpha.cos(),
                radial_y: radial_r * alpha.sin(),
                tangent_x: tangent_r * alpha.cos(),
                tangent_y: tangent_r * alpha.sin(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sink.csv("region2d.csv", &rows)?;
    if p.svg {
        let radial: Vec<Vec2> = rows.iter().map(|r| Vec2::new(r.radial_x, r.radial_y)).collect();
        let tangent: Vec<Vec2> = rows.iter().map(|r| Vec2::new(r.tangent_x, r.tangent_y)).collect();
        let circle: Vec<Vec2> = (0..=180)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 180.0;
                p.v * Vec2::new(a.cos(), a.sin())
            })
            .collect();
        sink.write(
            "region2d.svg",
            polyline_svg(&[(&circle, "#888888"), (&radial, "#1f77b4"), (&tangent, "#d62728")]),
        )?;
    }
    Ok(())
}

/// Flat SVG with one polyline per curve, y pointing up.
pub fn polyline_svg(curves: &[(&[Vec2], &str)]) -> String {
    let extent = curves
        .iter()
        .flat_map(|(c, _)| c.iter())
        .fold(1e-9f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
        * 1.05;
    let size = 600.0;
    let scale = size / (2.0 * extent);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    for (curve, color) in curves {
        let pts: Vec<String> = curve
            .iter()
            .map(|p| format!("{:.2},{:.2}", (p.x + extent) * scale, (extent - p.y) * scale))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

// ---------------------------------------------------------------- sweep2d

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sweep2dParams {
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    /// Offset used for the greedy-spacing rows; capped per `n` at a third of
    /// the largest valid value.
    pub epsilon: f64,
}

impl Default for Sweep2dParams {
    fn default() -> Self {
        Self {
            n_min: 1,
            n_max: 10,
            trials: 500,
            epsilon: 1e-3,
        }
    }
}

impl Sweep2dParams {
    fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(bad("n_min", "need 1 ≤ n_min ≤ n_max"));
        }
        if self.n_max > crate::tsp::MAX_EXACT_TARGETS {
            return Err(bad("n_max", format!("exact sweeps stop at {}", crate::tsp::MAX_EXACT_TARGETS)));
        }
        if !(self.epsilon > 0.0) {
            return Err(bad("epsilon", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
struct ClosedFormRow {
    n: usize,
    placement: &'static str,
    epsilon: f64,
    greedy_length: f64,
    optimal_length: f64,
}

/// Seed of trial `k` at size `n`, independent of evaluation order.
pub fn trial_seed(base: u64, n: usize, k: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(((n as u64) << 32) | k as u64)
}

fn sweep2d(p: &Sweep2dParams, seed: u64, sink: &mut Sink) -> Result<()> {
    let jobs: Vec<(usize, usize)> = (p.n_min..=p.n_max)
        .flat_map(|n| (0..p.trials).map(move |k| (n, k)))
        .collect();
    let trials = jobs
        .par_iter()
        .map(|&(n, k)| placement2d::random_trial(n, trial_seed(seed, n, k)))
        .collect::<Result<Vec<_>>>()?;
    sink.csv("sweep2d_trials.csv", &trials)?;

    let mut rows = Vec::new();
    for n in p.n_min..=p.n_max {
        let eps = p.epsilon.min(placement2d::max_epsilon(n) / 3.0);
        let cfg = placement2d::greedy_spacing(n, eps)?;
        rows.push(ClosedFormRow {
            n,
            placement: "greedy_spacing",
            epsilon: eps,
            greedy_length: placement2d::greedy_sweep(&cfg).total_length,
            optimal_length: placement2d::optimal_sweep(&cfg)?.total_length,
        });
        let cfg = placement2d::doubling_spacing(n)?;
        rows.push(ClosedFormRow {
            n,
            placement: "doubling",
            epsilon: 0.0,
            greedy_length: placement2d::greedy_sweep(&cfg).total_length,
            optimal_length: placement2d::optimal_sweep(&cfg)?.total_length,
        });
    }
    sink.csv("sweep2d_closed_form.csv", &rows)
}

// ---------------------------------------------------------------- duo2d

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Duo2dParams {
    pub samples: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub svg: bool,
}

impl Default for Duo2dParams {
    fn default() -> Self {
        Self {
            samples: 32,
            alpha_min: 0.05,
            alpha_max: PI,
            svg: false,
        }
    }
}

impl Duo2dParams {
    fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(bad("samples", "need at least 2"));
        }
        if !(0.0 < self.alpha_min && self.alpha_min < self.alpha_max && self.alpha_max <= PI) {
            return Err(bad("alpha_min", "need 0 < alpha_min < alpha_max ≤ π"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
struct DuoRow {
    alpha1: f64,
    strategy: DuoStrategy,
    r_max: f64,
}

fn duo(p: &Duo2dParams, sink: &mut Sink) -> Result<()> {
    let alphas: Vec<f64> = (0..p.samples)
        .map(|k| p.alpha_min + (p.alpha_max - p.alpha_min) * k as f64 / (p.samples - 1) as f64)
        .collect();
    let samples = duo2d::r_max_curve(&alphas)?;
    let rows: Vec<DuoRow> = samples
        .iter()
        .map(|s| DuoRow {
            alpha1: s.alpha1,
            strategy: s.strategy,
            r_max: s.r_max,
        })
        .collect();
    sink.csv("duo2d.csv", &rows)?;
    if p.svg {
        // r_max against α₁, one curve per strategy, in the plane's own units.
        let colors = ["#1f77b4", "#2ca02c", "#ff7f0e", "#d62728"];
        let curves: Vec<(Vec<Vec2>, &str)> = DuoStrategy::ALL
            .iter()
            .zip(colors)
            .map(|(s, c)| {
                let pts = rows
                    .iter()
                    .filter(|r| r.strategy == *s)
                    .map(|r| Vec2::new(r.alpha1, r.r_max))
                    .collect();
                (pts, c)
            })
            .filter(|(pts, _): &(Vec<Vec2>, &str)| !pts.is_empty())
            .collect();
        let refs: Vec<(&[Vec2], &str)> = curves.iter().map(|(p, c)| (p.as_slice(), *c)).collect();
        sink.write("duo2d.svg", polyline_svg(&refs))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- sphere paths

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Fibonacci,
    Lloyd,
    Random,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpherePathsParams {
    pub sizes: Vec<usize>,
    pub generator: Generator,
    pub metric: Metric,
    pub lloyd_iterations: usize,
    /// Sizes up to this also get an exact shortest path.
    pub exact_max: usize,
    pub tsplib: bool,
}

impl Default for SpherePathsParams {
    fn default() -> Self {
        Self {
            sizes: vec![25, 50, 100, 200, 400],
            generator: Generator::Fibonacci,
            metric: Metric::FreeRotation,
            lloyd_iterations: 50,
            exact_max: 12,
            tsplib: true,
        }
    }
}

impl SpherePathsParams {
    fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(bad("sizes", "need at least one positive size"));
        }
        if self.generator == Generator::Lloyd && self.sizes.iter().any(|&n| n < 4) {
            return Err(bad("sizes", "Lloyd relaxation needs at least 4 points"));
        }
        if self.exact_max > crate::tsp::MAX_EXACT_TARGETS {
            return Err(bad("exact_max", format!("at most {}", crate::tsp::MAX_EXACT_TARGETS)));
        }
        if let Metric::PanTiltRate { pan_rate, tilt_rate } = self.metric {
            Metric::pan_tilt(pan_rate, tilt_rate).map_err(|e| bad("metric", e))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
struct PathRow {
    n: usize,
    nn_total: f64,
    improved_total: f64,
    exact_total: Option<f64>,
    nn_gap_percent: f64,
}

#[derive(Debug, Clone, Serialize)]
struct FitRow {
    solver: &'static str,
    coefficient: f64,
    rms_residual: f64,
    relative_residual: f64,
}

fn sphere_paths(p: &SpherePathsParams, seed: u64, sink: &mut Sink) -> Result<()> {
    let start = Vec3::x();
    let sets = p
        .sizes
        .iter()
        .map(|&n| match p.generator {
            Generator::Fibonacci => sphere3d::fibonacci_sphere(n),
            Generator::Lloyd => sphere3d::lloyd_relax(n, seed, p.lloyd_iterations),
            Generator::Random => sphere3d::random_sphere(n, seed),
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = sets
        .par_iter()
        .map(|set| {
            let nn = sphere3d::nn_path(set, &start, p.metric)?;
            let improved = sphere3d::improved_path(set, &start, p.metric)?;
            let exact = if set.len() <= p.exact_max {
                Some(sphere3d::exact_shp(set, &start, p.metric)?.total)
            } else {
                None
            };
            let base = exact.unwrap_or(improved.total);
            Ok(PathRow {
                n: set.len(),
                nn_total: nn.total,
                improved_total: improved.total,
                exact_total: exact,
                nn_gap_percent: 100.0 * (nn.total / base - 1.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sink.csv("sphere_paths.csv", &rows)?;

    if p.sizes.len() >= 2 {
        let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
        let mut fits = Vec::new();
        for (solver, totals) in [
            ("nearest_neighbor", rows.iter().map(|r| r.nn_total).collect::<Vec<_>>()),
            ("local_search", rows.iter().map(|r| r.improved_total).collect()),
        ] {
            let f = sphere3d::sqrt_fit(&ns, &totals)?;
            fits.push(FitRow {
                solver,
                coefficient: f.coefficient,
                rms_residual: f.rms_residual,
                relative_residual: f.relative_residual,
            });
        }
        sink.csv("sphere_paths_fit.csv", &fits)?;
    }

    let points: Vec<Vec<[f64; 3]>> = sets
        .iter()
        .map(|s| s.points.iter().map(|q| [q.x, q.y, q.z]).collect())
        .collect();
    sink.write("points.json", serde_json::to_string(&points)? + "\n")?;

    if p.tsplib {
        for set in &sets {
            let name = format!("shp_{}", set.len());
            let phantom = sphere3d::phantom_transform(set, &start, p.metric)?;
            sink.write(&format!("tsplib/{name}.tsp"), sphere3d::tsplib::write_problem(&name, &phantom))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- engagement3d

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Engagement3dParams {
    pub formations: Vec<FormationKind>,
    pub strategies: Vec<AttackStrategy>,
    pub xi: Vec<f64>,
    pub n: usize,
    /// Starting guess for the distance search (m).
    pub distance: f64,
    pub k1: f64,
    pub k2: f64,
    pub per_row: Option<usize>,
    pub physics: SimParams,
    pub search: SearchOptions,
    /// Also write a JSON trace of one engagement per row at its maximum
    /// winning distance, sampled every this many steps (0 disables).
    pub trace_every: usize,
}

impl Default for Engagement3dParams {
    fn default() -> Self {
        Self {
            formations: vec![FormationKind::Cylinder],
            strategies: vec![AttackStrategy::Direct],
            xi: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
            n: 16,
            distance: 20.0,
            k1: 4.0,
            k2: 5.0,
            per_row: None,
            physics: SimParams::default(),
            search: SearchOptions::default(),
            trace_every: 0,
        }
    }
}

impl Engagement3dParams {
    fn templates(&self) -> Vec<AttackConfig> {
        let mut out = Vec::new();
        for &formation in &self.formations {
            for &strategy in &self.strategies {
                for &xi in &self.xi {
                    out.push(AttackConfig {
                        k1: self.k1,
                        k2: self.k2,
                        per_row: self.per_row,
                        ..AttackConfig::new(formation, self.n, self.distance, strategy, xi)
                    });
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        if self.formations.is_empty() || self.strategies.is_empty() || self.xi.is_empty() {
            return Err(bad("formations", "formations, strategies and xi must be non-empty"));
        }
        self.physics.validate().map_err(|e| bad("physics", e))?;
        for t in self.templates() {
            t.validate().map_err(|e| bad("xi", e))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
struct EngagementRow {
    formation: FormationKind,
    strategy: AttackStrategy,
    xi: f64,
    max_distance_m: f64,
    unbounded: bool,
    never_succeeds: bool,
    scanned: bool,
    evaluations: usize,
}

fn engagement3d(p: &Engagement3dParams, seed: u64, sink: &mut Sink) -> Result<()> {
    let params = SimParams {
        seed,
        trace_every: 0,
        ..p.physics
    };
    let templates = p.templates();
    let rows = templates
        .par_iter()
        .map(|t| {
            let row = match max_start_distance(t, &params, &p.search) {
                Ok(m) => EngagementRow {
                    formation: t.formation,
                    strategy: t.strategy,
                    xi: t.xi,
                    max_distance_m: m.distance,
                    unbounded: m.unbounded,
                    never_succeeds: false,
                    scanned: m.scanned,
                    evaluations: m.evaluations,
                },
                Err(Error::AttackNeverSucceeds { .. }) => EngagementRow {
                    formation: t.formation,
                    strategy: t.strategy,
                    xi: t.xi,
                    max_distance_m: 0.0,
                    unbounded: false,
                    never_succeeds: true,
                    scanned: false,
                    evaluations: 0,
                },
                Err(e) => return Err(e),
            };
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    sink.csv("engagement3d.csv", &rows)?;

    if p.trace_every > 0 {
        let traced = SimParams {
            trace_every: p.trace_every,
            ..params
        };
        for (t, row) in templates.iter().zip(&rows) {
            if row.never_succeeds {
                continue;
            }
            let cfg = AttackConfig {
                distance: row.max_distance_m,
                ..*t
            };
            let result = run_engagement(&cfg, &traced)?;
            let name = format!(
                "traces/{}_{}_xi{:.2}.json",
                t.formation.name(),
                t.strategy.name(),
                t.xi
            );
            sink.write(&name, serde_json::to_string(&result)? + "\n")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_top_level_key_is_rejected() {
        let err = ExperimentSpec::parse("subcommand = \"region2d\"\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn unknown_param_is_named() {
        let spec = ExperimentSpec::parse("subcommand = \"region2d\"\n[params]\nspeed = 2.0\n").unwrap();
        let err = spec.validate().unwrap_err();
        assert!(err.to_string().contains("speed"), "{err}");
        assert_eq!(exit_code(&err), EXIT_BAD_SPEC);
    }

    #[test]
    fn json_and_toml_agree() {
        let a = ExperimentSpec::parse(r#"{"subcommand": "sweep2d", "seed": 3, "params": {"n_max": 4}}"#).unwrap();
        let b = ExperimentSpec::parse("subcommand = \"sweep2d\"\nseed = 3\n[params]\nn_max = 4\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn escaping_output_path_is_rejected() {
        let spec = ExperimentSpec::parse("subcommand = \"region2d\"\noutput_path = \"../x\"\n").unwrap();
        assert!(spec.output_dir(Path::new("/tmp/o")).is_err());
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for n in 1..=10 {
            for k in 0..500 {
                assert!(seen.insert(trial_seed(7, n, k)));
            }
        }
    }

    #[test]
    fn svg_has_one_polyline_per_curve() {
        let c = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)];
        let s = polyline_svg(&[(&c, "#000"), (&c, "#111")]);
        assert_eq!(s.matches("<polyline").count(), 2);
    }
}
