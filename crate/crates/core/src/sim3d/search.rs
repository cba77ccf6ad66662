//! Largest starting distance from which an attack still destroys the turret.

use log::warn;
use serde::{Deserialize, Serialize};

use super::{run_engagement, AttackConfig, SimParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchOptions {
    pub resolution: f64,
    /// Give up doubling past this distance and report it as unbounded.
    pub d_cap: f64,
    /// Give up halving below this distance.
    pub d_min: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            resolution: 0.5,
            d_cap: 400.0,
            d_min: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxDistance {
    pub distance: f64,
    /// The attack still won at `d_cap`.
    pub unbounded: bool,
    /// Success was not monotone near the bisection result, so the bracket
    /// was scanned instead.
    pub scanned: bool,
    pub evaluations: usize,
}

/// Doubles or halves from `template.distance` to bracket the win/loss
/// transition, bisects to `resolution`, then probes either side of the
/// answer. A failed probe means success is not monotone there, and the
/// whole bracket is scanned at `resolution` for the largest winning distance.
pub fn max_start_distance(template: &AttackConfig, params: &SimParams, opts: &SearchOptions) -> Result<MaxDistance> {
    template.validate()?;
    if !(opts.resolution > 0.0 && opts.d_min > 0.0 && opts.d_cap > opts.d_min) {
        return Err(Error::InvalidInput("search options must satisfy 0 < d_min < d_cap, resolution > 0".into()));
    }
    let mut evaluations = 0usize;
    let mut wins = |d: f64| -> Result<bool> {
        evaluations += 1;
        let cfg = AttackConfig { distance: d, ..*template };
        Ok(run_engagement(&cfg, params)?.drones_win())
    };

    let d0 = template.distance.clamp(opts.d_min, opts.d_cap);
    let (mut lo, mut hi);
    if wins(d0)? {
        lo = d0;
        hi = d0;
        loop {
            if hi >= opts.d_cap {
                return Ok(MaxDistance {
                    distance: opts.d_cap,
                    unbounded: true,
                    scanned: false,
                    evaluations,
                });
            }
            hi = (hi * 2.0).min(opts.d_cap);
            if !wins(hi)? {
                break;
            }
            lo = hi;
        }
    } else {
        hi = d0;
        lo = d0;
        loop {
            if lo <= opts.d_min {
                return Err(Error::AttackNeverSucceeds { distance: opts.d_min });
            }
            lo = (lo / 2.0).max(opts.d_min);
            if wins(lo)? {
                break;
            }
            hi = lo;
        }
    }
    let (bracket_lo, bracket_hi) = (lo, hi);
    while hi - lo > opts.resolution {
        let mid = 0.5 * (lo + hi);
        if wins(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let below = lo - opts.resolution;
    let above = hi + opts.resolution;
    let monotone = (below < bracket_lo || wins(below)?) && (above > bracket_hi || !wins(above)?);
    if monotone {
        return Ok(MaxDistance {
            distance: lo,
            unbounded: false,
            scanned: false,
            evaluations,
        });
    }
    warn!(
        "success is not monotone in distance near {lo:.2} m ({:?}, {:?}, xi = {}); scanning [{bracket_lo:.2}, {bracket_hi:.2}]",
        template.formation, template.strategy, template.xi
    );
    let mut best = bracket_lo;
    let mut d = bracket_lo;
    while d <= bracket_hi + 1e-9 {
        if wins(d)? {
            best = d;
        }
        d += opts.resolution;
    }
    Ok(MaxDistance {
        distance: best,
        unbounded: false,
        scanned: true,
        evaluations,
    })
}
