//! One engagement with a recorded trace, printed as JSON lines of turret aim
//! and live drone count, followed by the kill log.

use turret_evasion::sim3d::{run_engagement, AttackConfig, AttackStrategy, FormationKind, SimParams};

fn main() -> turret_evasion::Result<()> {
    let params = SimParams {
        trace_every: 24,
        ..SimParams::default()
    };
    let cfg = AttackConfig::new(FormationKind::HalfCylinder, 9, 15.0, AttackStrategy::Indirect, 0.5);
    let result = run_engagement(&cfg, &params)?;
    for f in &result.trace {
        let alive = f.drones.iter().filter(|d| d.is_some()).count();
        println!(
            "{}",
            serde_json::json!({"t": f.time, "pan": f.pan, "tilt": f.tilt, "alive": alive})
        );
    }
    for k in &result.kill_log {
        println!("drone {} down at t = {:.3}, aim error {:.2e} rad", k.drone, k.time, k.aim_error);
    }
    println!("{:?} after {:.2} s", result.outcome, result.time);
    Ok(())
}
