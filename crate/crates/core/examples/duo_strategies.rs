//! Maximum starting radius of a two-drone attack for each coordination
//! strategy, plus the best transition heading near the global optimum.

use turret_evasion::duo2d::{self, DuoScenario, DuoStrategy, TurnCommit};

fn main() -> turret_evasion::Result<()> {
    println!("hybrid applies up to alpha1 = {:.4}", duo2d::hybrid_limit());
    for alpha1 in [0.5, 1.0, 1.3, 1.449, 1.5, std::f64::consts::FRAC_PI_2, 2.0, 2.5] {
        for strategy in duo2d::applicable_strategies(alpha1) {
            let r = duo2d::r_max(alpha1, strategy)?;
            println!("alpha1 = {alpha1:.3}  {:<10}  r_max = {r:.4}", strategy.name());
        }
    }
    let best = duo2d::transition_optimum(1.449)?;
    println!("transition at 1.449: heading {:.3}, r_max {:.4}", best.argmax, best.value);

    let hybrid = DuoScenario::new(1.0, DuoStrategy::Hybrid, 1.0);
    let ccw = duo2d::r_max_for(&hybrid.with_commit(TurnCommit::Ccw))?;
    let cw = duo2d::r_max_for(&hybrid.with_commit(TurnCommit::Cw))?;
    println!("hybrid at 1.0 with the turret turning ccw {ccw:.4} / cw {cw:.4}");
    Ok(())
}
