//! Two touching grains on different lattices, segmented by orientation.

use std::f64::consts::{FRAC_PI_2, PI};

use stickydiscs::graph::Analysis;
use stickydiscs::orient::{orientation_field, segment_grains, DEFAULT_TOL_THETA};
use stickydiscs::synth::{polycrystal_fill, GrainSpec};
use stickydiscs::{Point2, Polygon};

fn main() -> stickydiscs::Result<()> {
    let grain = |x0: f64, theta: f64| -> stickydiscs::Result<GrainSpec> {
        Ok(GrainSpec {
            region: Polygon::rectangle(x0, 0.0, x0 + 1.0, 1.0)?,
            theta,
            offset: Point2::ORIGIN,
        })
    };
    let eps = 1.0 / 16.0;
    let c = polycrystal_fill(&[grain(0.0, FRAC_PI_2)?, grain(1.0, 7.0 * PI / 12.0)?], eps, eps)?;
    let a = Analysis::new(&c)?;
    let field = orientation_field(&a.graph, &a.faces);
    let gp = segment_grains(&field, &a.graph, &a.faces, DEFAULT_TOL_THETA);
    println!("{} particles, {} triangular faces", c.len(), a.faces.triangular.len());
    for (k, g) in gp.grains.iter().enumerate() {
        println!("grain {k}: theta {:.6}, {} faces, area {:.4}", g.theta, g.faces.len(), g.area);
    }
    println!("exterior boundary {:.4}, interior boundary {:.4}", gp.exterior_boundary, gp.interior_boundary);
    Ok(())
}
