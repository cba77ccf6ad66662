use thiserror::Error;

/// Errors raised by the analysis routines and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("drone is at the turret origin; bearing is undefined")]
    DegenerateAtOrigin,
    #[error("drone is already inside the safety circle (|p| = {norm}, v = {speed})")]
    AlreadySafe { norm: f64, speed: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    OutOfParameterRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("epsilon {epsilon} must lie in (0, {max}) for n = {n}")]
    InvalidEpsilon { epsilon: f64, max: f64, n: usize },
    #[error("instance of {n} targets exceeds the exact solver limit of {max}")]
    InstanceTooLarge { n: usize, max: usize },
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("vector is not unit length (norm {0})")]
    NonUnitVector(f64),
    #[error("goal and repulsion forces are both zero")]
    NoPreferredDirection,
    #[error("attack never succeeds, even at {distance} m")]
    AttackNeverSucceeds { distance: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error("TSPLIB parse error: {0}")]
    Tsplib(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
