//! Lower and upper perimeter bounds for a two-grain polycrystal.

use std::f64::consts::{FRAC_PI_2, PI};

use stickydiscs::harness::{dyadic, run_polycrystal_bounds, ShapeSpec, SweepSpec};
use stickydiscs::synth::GrainSpec;
use stickydiscs::{Point2, Polygon};

fn main() -> stickydiscs::Result<()> {
    let grain = |x0: f64, theta: f64| -> stickydiscs::Result<GrainSpec> {
        Ok(GrainSpec {
            region: Polygon::rectangle(x0, 0.0, x0 + 1.0, 1.0)?,
            theta,
            offset: Point2::ORIGIN,
        })
    };
    let shape = ShapeSpec::Grains {
        grains: vec![grain(0.0, FRAC_PI_2)?, grain(1.0, 7.0 * PI / 12.0)?],
    };
    let r = run_polycrystal_bounds(&SweepSpec::new(shape, None, dyadic(3, 7)))?;
    for row in &r.rows {
        println!(
            "eps {:<9} lower {:.4}  surplus {:.4}  upper {:.4}  slack {:.4}  ok {}",
            row.epsilon,
            row.lower_bound.unwrap_or(f64::NAN),
            row.surplus,
            row.upper_bound.unwrap_or(f64::NAN),
            row.slack.unwrap_or(f64::NAN),
            row.bounds_hold == Some(true)
        );
    }
    Ok(())
}
