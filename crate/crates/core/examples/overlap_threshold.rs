//! Two overlapping Wulff hexagons: when does a split into two grains beat every single crystal?

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use stickydiscs::harness::{run_overlap_experiment, tau_ray, OverlapSpec};

fn main() -> stickydiscs::Result<()> {
    let spec = OverlapSpec {
        theta1: FRAC_PI_2,
        theta2: 2.0 * FRAC_PI_3,
        taus: tau_ray(0.0, 0.9, 1.3, 17),
        epsilon: Some(1.0 / 32.0),
        gap: None,
        theta_grid: 60,
    };
    let r = run_overlap_experiment(&spec)?;
    println!("{:>6} {:>8} {:>12} {:>9} {:>9} {:>8}  surplus", "|tau|", "m", "candidate", "bound", "bench", "margin");
    for row in &r.rows {
        println!(
            "{:>6.3} {:>8.5} {:>12} {:>9.4} {:>9.4} {:>7.2}%  {:.4}",
            row.tau.norm(),
            row.m,
            row.candidate,
            row.polycrystal_bound,
            row.single_crystal_benchmark,
            100.0 * row.relative_margin,
            row.surplus.unwrap_or(f64::NAN)
        );
    }
    match r.observed_crossover_m {
        Some(m) => println!("two grains win up to m = {m:.4}"),
        None => println!("no crossover observed"),
    }
    Ok(())
}
