//! Render a two-hexagon polycrystal coloured by orientation.
//!
//! `cargo run --example render_svg -- out.svg`

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use stickydiscs::cli::render::{render_svg, ColorBy};
use stickydiscs::graph::Analysis;
use stickydiscs::orient::{orientation_field, segment_grains, DEFAULT_TOL_THETA};
use stickydiscs::synth::two_hexagon_config;
use stickydiscs::Point2;

fn main() -> stickydiscs::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "two_hexagons.svg".into());
    let eps = 1.0 / 24.0;
    let t = two_hexagon_config(FRAC_PI_2, 2.0 * FRAC_PI_3, Point2::new(1.0, 0.2), eps, eps)?;
    let a = Analysis::new(&t.config)?;
    let field = orientation_field(&a.graph, &a.faces);
    let gp = segment_grains(&field, &a.graph, &a.faces, DEFAULT_TOL_THETA);
    std::fs::write(&out, render_svg(&a, &field, &gp, ColorBy::Orientation))?;
    println!("overlap m = {:.4}, {} grains, wrote {out}", t.m, gp.grains.len());
    Ok(())
}
