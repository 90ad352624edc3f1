//! Perimeters of tile unions filling a shape, against the family's anisotropic perimeter.

use std::f64::consts::FRAC_PI_2;

use stickydiscs::harness::{run_tessellation_sweep, ShapeSpec, TessellationSpec};
use stickydiscs::synth::TileFamily;
use stickydiscs::{Point2, Polygon};

fn main() -> stickydiscs::Result<()> {
    let square = ShapeSpec::Polygon {
        vertices: Polygon::rectangle(0.0, 0.0, 1.0, 1.0)?.vertices().to_vec(),
    };
    let wulff = ShapeSpec::Wulff {
        theta: FRAC_PI_2,
        area: 1.0,
        center: Point2::ORIGIN,
    };
    for (name, shape, family) in [
        ("square / squares", square.clone(), TileFamily::Square),
        ("square / triangles", square, TileFamily::Triangle),
        ("wulff / triangles", wulff.clone(), TileFamily::Triangle),
        ("wulff / hexagons", wulff, TileFamily::Hexagon),
    ] {
        let spec = TessellationSpec {
            shape,
            family,
            thetas: vec![FRAC_PI_2],
            epsilons: vec![1.0 / 8.0, 1.0 / 32.0, 1.0 / 128.0],
            offset: Point2::ORIGIN,
            theta_grid: 60,
            candidates: vec![],
        };
        let r = run_tessellation_sweep(&spec)?;
        for row in &r.rows {
            println!(
                "{name:<20} eps {:<9} tiles {:>6}  Per_eps {:.4}  Per_phi {:.4}",
                row.epsilon, row.tiles, row.per_eps, row.per_phi
            );
        }
    }
    Ok(())
}
