//! Surplus of lattice fills of the unit square converging to its Finsler perimeter.

use std::f64::consts::FRAC_PI_2;

use stickydiscs::harness::{dyadic, run_single_crystal_sweep, ShapeSpec, SweepSpec};
use stickydiscs::Polygon;

fn main() -> stickydiscs::Result<()> {
    let shape = ShapeSpec::Polygon {
        vertices: Polygon::rectangle(0.0, 0.0, 1.0, 1.0)?.vertices().to_vec(),
    };
    let spec = SweepSpec {
        random_offsets: 3,
        seed: 1,
        ..SweepSpec::new(shape, Some(FRAC_PI_2), dyadic(3, 7))
    };
    let r = run_single_crystal_sweep(&spec)?;
    println!("target Per_phi = {:.6}", r.target);
    for row in &r.rows {
        println!(
            "eps {:<9} offset ({:.3}, {:.3})  N {:>6}  surplus {:.5}  rel.err {:.4}  mass {:.4}",
            row.epsilon, row.offset.x, row.offset.y, row.n, row.surplus, row.relative_error, row.mass
        );
    }
    println!("mass constant {:.3}, trend ok: {}", r.mass_constant, r.error_trend_ok);
    Ok(())
}
