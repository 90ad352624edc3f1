//! The hexagonal Finsler norm, its Wulff shape and a few anisotropic perimeters.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use stickydiscs::finsler::{aniso_perimeter, phi, wulff};
use stickydiscs::geom::Polygon;
use stickydiscs::Point2;

fn main() -> stickydiscs::Result<()> {
    let theta = FRAC_PI_2;
    for k in 0..=6 {
        let a = k as f64 * FRAC_PI_3 / 6.0;
        println!("phi(pi/2, e^(i {a:.4})) = {:.6}", phi(theta, Point2::polar(a)));
    }
    let w = wulff(theta);
    println!("W area {:.6}, Per {:.6}, Per_phi {:.6}", w.polygon.area(), w.polygon.perimeter(), aniso_perimeter(&w.polygon, theta)?);
    let square = Polygon::rectangle(0.0, 0.0, 1.0, 1.0)?;
    for t in [1.2, FRAC_PI_2, 1.9] {
        println!("unit square at theta {t:.2}: Per_phi = {:.6}", aniso_perimeter(&square, t)?);
    }
    Ok(())
}
