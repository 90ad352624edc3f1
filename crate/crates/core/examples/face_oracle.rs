//! Cross-check face enumeration against a raster flood fill.

use std::f64::consts::PI;

use stickydiscs::graph::Configuration;
use stickydiscs::harness::{oracle_face_check, DEFAULT_RESOLUTION};
use stickydiscs::synth::hexagon_minimizer;
use stickydiscs::Point2;

fn heptagon(extra: Option<Point2>) -> stickydiscs::Result<Configuration> {
    let r = 1.0 / (2.0 * (PI / 7.0).sin());
    let mut pts: Vec<Point2> = (0..7).map(|k| Point2::polar(2.0 * PI * k as f64 / 7.0) * r).collect();
    pts.extend(extra);
    Configuration::new(pts, 1.0)
}

fn main() -> stickydiscs::Result<()> {
    let r = 1.0 / (2.0 * (PI / 7.0).sin());
    let cases = [
        ("hexagon", hexagon_minimizer(1, 1.0)?),
        ("heptagon", heptagon(None)?),
        ("heptagon with slit", heptagon(Some(Point2::new(r - 1.0, 0.0)))?),
        ("heptagon around a particle", heptagon(Some(Point2::ORIGIN))?),
    ];
    for (name, c) in &cases {
        let rep = oracle_face_check(c, DEFAULT_RESOLUTION)?;
        println!(
            "{name:<28} faces {}  enclosures {}  worst area error {:.3}%",
            rep.raster_faces,
            rep.raster_enclosures,
            100.0 * rep.max_area_error
        );
    }
    Ok(())
}
