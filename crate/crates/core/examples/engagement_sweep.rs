//! Maximum starting distance of a 16-drone attack for each formation,
//! strategy and repulsion weight.

use turret_evasion::sim3d::{
    max_start_distance, AttackConfig, AttackStrategy, FormationKind, SearchOptions, SimParams,
};

fn main() -> turret_evasion::Result<()> {
    let params = SimParams::default();
    let opts = SearchOptions::default();
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    println!("formation,strategy,xi,max_distance_m,scanned");
    for formation in [FormationKind::Plane, FormationKind::HalfCylinder, FormationKind::Cylinder] {
        for strategy in [AttackStrategy::Direct, AttackStrategy::Indirect] {
            for xi in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let cfg = AttackConfig::new(formation, n, 20.0, strategy, xi);
                match max_start_distance(&cfg, &params, &opts) {
                    Ok(r) => println!("{},{},{xi},{:.1},{}", formation.name(), strategy.name(), r.distance, r.scanned),
                    Err(e) => println!("{},{},{xi},0,{e}", formation.name(), strategy.name()),
                }
            }
        }
    }
    Ok(())
}
