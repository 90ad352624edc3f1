//! Hexagonal Finsler norms, anisotropic perimeters and Wulff hexagons.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{polygon_metrics, Point2, Polygon};

/// Apothem of the unit-area Wulff hexagon, `2^{-1/2} 3^{-1/4}`.
pub fn wulff_apothem() -> f64 {
    1.0 / (2f64.sqrt() * 3f64.powf(0.25))
}

/// `Per_phi(W) = 2 sqrt(2) 3^{1/4}`.
pub fn wulff_perimeter() -> f64 {
    2.0 * 2f64.sqrt() * 3f64.powf(0.25)
}

/// A surface tension evaluated on outward unit normals.
pub trait Anisotropy {
    fn eval(&self, nu: Point2) -> f64;

    /// Sum over edges of `eval(normal) * length`.
    fn perimeter(&self, p: &Polygon) -> f64 {
        p.outward_normals().map(|(n, l)| self.eval(n) * l).sum()
    }
}

/// The norm with unit ball the hexagon spanned by `±v_{j,theta}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinslerHex {
    pub theta: f64,
}

impl FinslerHex {
    pub fn new(theta: f64) -> Self {
        FinslerHex { theta }
    }

    /// `v_{j,theta} = e^{i(theta - pi/2)} v_j` with `v_j` at `pi/6, pi/2, 5pi/6`.
    pub fn generators(&self) -> [Point2; 3] {
        let r = self.theta - FRAC_PI_2;
        [
            Point2::polar(r + FRAC_PI_6),
            Point2::polar(r + FRAC_PI_2),
            Point2::polar(r + 5.0 * FRAC_PI_6),
        ]
    }

    /// Minimum of `|l_1| + |l_2|` over the three two-generator decompositions.
    ///
    /// A basic optimal solution of the three-variable problem has at most two
    /// nonzero coefficients, so this is the exact minimum.
    pub fn norm(&self, eta: Point2) -> f64 {
        let v = self.generators();
        let mut best = f64::INFINITY;
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let det = v[i].cross(v[j]);
            let li = eta.cross(v[j]) / det;
            let lj = v[i].cross(eta) / det;
            best = best.min(li.abs() + lj.abs());
        }
        best
    }
}

impl Anisotropy for FinslerHex {
    fn eval(&self, nu: Point2) -> f64 {
        self.norm(nu)
    }
}

/// The `l^1` norm in the frame `e^{i(theta - pi/2)}{e_1, e_2}`; square tiles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareNorm {
    pub theta: f64,
}

impl Anisotropy for SquareNorm {
    fn eval(&self, nu: Point2) -> f64 {
        let r = nu.rotate(-(self.theta - FRAC_PI_2));
        r.x.abs() + r.y.abs()
    }
}

/// `phi_theta(eta)`.
pub fn phi(theta: f64, eta: Point2) -> f64 {
    FinslerHex::new(theta).norm(eta)
}

/// Brute-force `phi_theta(eta)`.
///
/// Scans the third coefficient over `[-2|eta|, 2|eta|]`, solving for the other
/// two exactly, then zooms in on the best sample. The objective is convex in
/// the scanned coefficient, so the zoom converges to the global minimum.
pub fn phi_oracle(theta: f64, eta: Point2) -> f64 {
    let v = FinslerHex::new(theta).generators();
    let det = v[0].cross(v[1]);
    let cost = |l3: f64| {
        let r = eta - v[2] * l3;
        let l1 = r.cross(v[1]) / det;
        let l2 = v[0].cross(r) / det;
        l1.abs() + l2.abs() + l3.abs()
    };
    let radius = 2.0 * eta.norm();
    if radius == 0.0 {
        return 0.0;
    }
    const SAMPLES: usize = 200;
    let (mut lo, mut hi) = (-radius, radius);
    let mut best = (f64::INFINITY, 0.0);
    while hi - lo > 1e-15 * radius {
        let step = (hi - lo) / SAMPLES as f64;
        for k in 0..=SAMPLES {
            let t = lo + step * k as f64;
            let c = cost(t);
            if c < best.0 {
                best = (c, t);
            }
        }
        lo = best.1 - step;
        hi = best.1 + step;
    }
    best.0
}

/// `Per_{phi_theta}(p)`.
pub fn aniso_perimeter(p: &Polygon, theta: f64) -> Result<f64> {
    polygon_metrics(p)?;
    Ok(FinslerHex::new(theta).perimeter(p))
}

/// `sum_j Per_{phi_{theta_j}}(omega_j)`: interfaces are paid once by each neighbour.
pub fn partition_perimeter(parts: &[(Polygon, f64)]) -> Result<f64> {
    parts.iter().map(|(p, t)| aniso_perimeter(p, *t)).sum()
}

/// The unit-area Wulff hexagon for `phi_theta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WulffHexagon {
    pub theta: f64,
    pub polygon: Polygon,
}

/// `W_theta`: vertices at `(theta - pi/2) + k pi/3`, edge normals `±v_{j,theta}`.
pub fn wulff(theta: f64) -> WulffHexagon {
    let circumradius = 2.0 * wulff_apothem() / 3f64.sqrt();
    let v = (0..6)
        .map(|k| Point2::polar(theta - FRAC_PI_2 + k as f64 * FRAC_PI_3) * circumradius)
        .collect();
    WulffHexagon {
        theta,
        polygon: Polygon::from_ccw_unchecked(v),
    }
}

/// `sqrt(area) W_theta + center`.
pub fn wulff_scaled(theta: f64, area: f64, center: Point2) -> Result<Polygon> {
    if !(area > 0.0 && area.is_finite()) {
        return Err(Error::invalid("Wulff area must be positive"));
    }
    Ok(wulff(theta).polygon.scale(area.sqrt()).translate(center))
}

/// Maximum of `phi_theta` on the unit circle, `2/sqrt(3)`.
pub fn phi_max() -> f64 {
    2.0 / 3f64.sqrt()
}

/// Directions on the unit circle, `n` evenly spaced samples starting at angle 0.
pub fn circle_samples(n: usize) -> impl Iterator<Item = Point2> {
    (0..n).map(move |k| Point2::polar(2.0 * PI * k as f64 / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::convex_hull;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn norm_examples() {
        let e1 = Point2::new(1.0, 0.0);
        assert_relative_eq!(phi(FRAC_PI_2, e1), 2.0 / 3f64.sqrt(), epsilon = 1e-15);
        for theta in [1.1, FRAC_PI_2, 2.0] {
            let f = FinslerHex::new(theta);
            for v in f.generators() {
                assert_relative_eq!(f.norm(v), 1.0, epsilon = 1e-15);
                assert_relative_eq!(f.norm(-v), 1.0, epsilon = 1e-15);
            }
        }
        assert_relative_eq!(phi_oracle(FRAC_PI_2, Point2::new(0.0, 1.0)), 1.0, epsilon = 1e-12);
        assert_relative_eq!(phi_oracle(FRAC_PI_2, e1), 2.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_eq!(phi(1.3, Point2::ORIGIN), 0.0);
    }

    #[test]
    fn oracle_agrees_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let theta = rng.gen_range(FRAC_PI_3..2.0 * FRAC_PI_3);
            let eta = Point2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            assert!((phi(theta, eta) - phi_oracle(theta, eta)).abs() <= 1e-9);
            let back = eta.rotate(-(theta - FRAC_PI_2));
            assert!((phi_oracle(theta, eta) - phi_oracle(FRAC_PI_2, back)).abs() <= 1e-9);
        }
    }

    #[test]
    fn maximum_on_circle() {
        let m = circle_samples(100_000).map(|v| phi(FRAC_PI_2, v)).fold(0.0, f64::max);
        assert!((m - phi_max()).abs() <= 1e-6);
        let mn = circle_samples(100_000).map(|v| phi(FRAC_PI_2, v)).fold(f64::INFINITY, f64::min);
        assert!((mn - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn wulff_geometry() {
        for theta in [FRAC_PI_3 + 0.01, 1.3, FRAC_PI_2, 2.0 * FRAC_PI_3] {
            let w = wulff(theta).polygon;
            assert_eq!(w.len(), 6);
            assert_relative_eq!(w.area(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(aniso_perimeter(&w, theta).unwrap(), wulff_perimeter(), epsilon = 1e-12);
            let shifted = wulff(theta + FRAC_PI_3).polygon;
            for p in shifted.vertices() {
                assert!(w.vertices().iter().any(|q| q.dist(*p) < 1e-12));
            }
        }
        let w = wulff(FRAC_PI_2).polygon;
        let a = wulff_apothem();
        assert_relative_eq!(a, 0.53729, epsilon = 1e-5);
        for v in FinslerHex::new(FRAC_PI_2).generators() {
            let support = w.vertices().iter().map(|p| p.dot(v)).fold(f64::MIN, f64::max);
            assert_relative_eq!(support, a, epsilon = 1e-12);
        }
        assert_relative_eq!(wulff_perimeter(), 3.72242, epsilon = 1e-5);
    }

    #[test]
    fn unit_square_perimeter() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(aniso_perimeter(&sq, FRAC_PI_2).unwrap(), 2.0 + 4.0 / 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(aniso_perimeter(&sq, FRAC_PI_2).unwrap(), 4.30940, epsilon = 1e-5);
        let q = SquareNorm { theta: FRAC_PI_2 };
        assert_relative_eq!(q.perimeter(&sq), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn wulff_is_isoperimetric_on_random_hulls() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let pts: Vec<Point2> = (0..rng.gen_range(3..12))
                .map(|_| Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let Some(h) = convex_hull(&pts) else { continue };
            let h = h.scale(1.0 / h.area().sqrt());
            let theta = rng.gen_range(FRAC_PI_3..2.0 * FRAC_PI_3);
            assert!(aniso_perimeter(&h, theta).unwrap() >= wulff_perimeter() - 1e-9);
        }
    }

    proptest! {
        #[test]
        fn norm_axioms(theta in 1.0f64..2.1, x in -5.0f64..5.0, y in -5.0f64..5.0,
                       u in -5.0f64..5.0, w in -5.0f64..5.0, s in 0.0f64..10.0) {
            let f = FinslerHex::new(theta);
            let (a, b) = (Point2::new(x, y), Point2::new(u, w));
            prop_assert!(f.norm(a + b) <= f.norm(a) + f.norm(b) + 1e-12);
            prop_assert!((f.norm(a * s) - s * f.norm(a)).abs() <= 1e-12 * (1.0 + s * f.norm(a)));
            prop_assert!((f.norm(-a) - f.norm(a)).abs() <= 1e-12);
            let rot = phi(FRAC_PI_2, a.rotate(-(theta - FRAC_PI_2)));
            prop_assert!((f.norm(a) - rot).abs() <= 1e-12);
            prop_assert!(f.norm(a) >= 0.999_999 * a.norm() - 1e-12);
        }
    }
}
