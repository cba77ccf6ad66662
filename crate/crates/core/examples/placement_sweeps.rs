//! Turret sweep lengths over drones placed on the safety circle: the
//! adversarial greedy spacing, the doubling spacing and random placements.

use turret_evasion::placement2d::{self, doubling_alpha};

fn main() -> turret_evasion::Result<()> {
    println!(" n   greedy(greedy)  optimal(greedy)  doubling  2pi-alpha");
    for n in 1..=12 {
        let eps = 1e-3f64.min(placement2d::max_epsilon(n) / 3.0);
        let cfg = placement2d::greedy_spacing(n, eps)?;
        let g = placement2d::greedy_sweep(&cfg).total_length;
        let o = placement2d::optimal_sweep(&cfg)?.total_length;
        let d = placement2d::greedy_sweep(&placement2d::doubling_spacing(n)?).total_length;
        println!("{n:2}  {g:14.6}  {o:15.6}  {d:8.5}  {:9.5}", std::f64::consts::TAU - doubling_alpha(n));
    }

    println!("\nrandom placements, 200 trials each");
    for n in [2, 4, 6, 8, 10] {
        let (mut g, mut o) = (0.0, 0.0);
        for seed in 0..200 {
            let t = placement2d::random_trial(n, seed)?;
            g += t.greedy_len;
            o += t.optimal_len;
        }
        println!("n = {n:2}: mean greedy {:.4}, mean optimal {:.4}", g / 200.0, o / 200.0);
    }
    Ok(())
}
