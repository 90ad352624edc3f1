//! Planar geometry primitives: points, triangular-lattice frames, simple polygons.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Unit vector `e^{i angle}`.
    pub fn polar(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2 { x: c, y: s }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counterclockwise rotation by `angle`.
    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2 {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Self {
        Point2 {
            x: -self.y,
            y: self.x,
        }
    }

    pub fn lerp(self, o: Point2, t: f64) -> Self {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Point2::new(a[0], a[1])
    }
}

/// A triangular lattice `origin + spacing * (a u + b w)` with generators
/// `u = e^{i(angle - pi/2)}` and `w = e^{i(angle - pi/6)}`.
///
/// `angle` is the lattice orientation in the same convention as face
/// orientations: a frame with `angle = pi/2` has horizontal bonds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeFrame {
    pub origin: Point2,
    pub angle: f64,
    pub spacing: f64,
}

impl LatticeFrame {
    pub fn new(origin: Point2, angle: f64, spacing: f64) -> Self {
        LatticeFrame {
            origin,
            angle,
            spacing,
        }
    }

    pub fn generators(&self) -> (Point2, Point2) {
        (
            Point2::polar(self.angle - FRAC_PI_2),
            Point2::polar(self.angle - FRAC_PI_6),
        )
    }

    pub fn embed(&self, a: i64, b: i64) -> Point2 {
        let (u, w) = self.generators();
        self.origin + (u * a as f64 + w * b as f64) * self.spacing
    }

    /// Real lattice coordinates `(a, b)` of an arbitrary point.
    pub fn locate(&self, p: Point2) -> (f64, f64) {
        let (u, w) = self.generators();
        let d = (p - self.origin) * (1.0 / self.spacing);
        let det = u.cross(w);
        (d.cross(w) / det, u.cross(d) / det)
    }
}

/// Integer lattice coordinates tied to a frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
    pub frame: LatticeFrame,
}

impl LatticePoint {
    pub fn embed(&self) -> Point2 {
        self.frame.embed(self.a, self.b)
    }
}

/// Squared distance between `(a1, b1)` and `(a2, b2)` in lattice units.
pub fn lattice_dist2(da: i64, db: i64) -> i64 {
    da * da + da * db + db * db
}

/// Half-open angular interval `(lo, lo + len]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleInterval {
    pub lo: f64,
    pub len: f64,
}

impl AngleInterval {
    /// `(-pi/6, pi/6]`, the range of the reduced edge angle.
    pub const REDUCED_EDGE: AngleInterval = AngleInterval {
        lo: -FRAC_PI_6,
        len: FRAC_PI_3,
    };
    /// `(pi/3, 2pi/3]`, the range of face orientations.
    pub const ORIENTATION: AngleInterval = AngleInterval {
        lo: FRAC_PI_3,
        len: FRAC_PI_3,
    };

    pub fn contains(&self, alpha: f64) -> bool {
        alpha > self.lo && alpha <= self.lo + self.len
    }
}

/// Shift `alpha` by a multiple of the interval length into the interval.
pub fn normalize_angle(alpha: f64, interval: AngleInterval) -> f64 {
    let k = ((alpha - interval.lo) / interval.len).ceil() - 1.0;
    let mut r = alpha - k * interval.len;
    // Guard the half-open ends against rounding in the subtraction.
    if r <= interval.lo {
        r += interval.len;
    } else if r > interval.lo + interval.len {
        r -= interval.len;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Signed shoelace area of a closed ring.
pub fn signed_area(ring: &[Point2]) -> f64 {
    let n = ring.len();
    let mut s = 0.0;
    for i in 0..n {
        s += ring[i].cross(ring[(i + 1) % n]);
    }
    0.5 * s
}

pub fn ring_perimeter(ring: &[Point2]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| ring[i].dist(ring[(i + 1) % n])).sum()
}

pub fn point_segment_distance(q: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return q.dist(a);
    }
    let t = ((q - a).dot(d) / l2).clamp(0.0, 1.0);
    q.dist(a + d * t)
}

/// Crossing-number classification against a closed ring (may be non-simple).
pub fn point_in_ring(q: Point2, ring: &[Point2], tol: f64) -> Containment {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if point_segment_distance(q, a, b) <= tol {
            return Containment::Boundary;
        }
        if (a.y > q.y) != (b.y > q.y) {
            let x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if x > q.x {
                inside = !inside;
            }
        }
    }
    if inside {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

/// Proper or touching intersection of closed segments `[a, b]` and `[c, d]`.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Interiors of `[a, b]` and `[c, d]` cross at a single point.
///
/// Endpoints within a relative `1e-12` of the other segment's line count as
/// touching, so rounding on shared or collinear edges never reports a crossing.
pub fn segments_cross_properly(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (l1, l2) = ((b - a).norm(), (d - c).norm());
    let t1 = 1e-12 * l1 * (l1 + l2);
    let t2 = 1e-12 * l2 * (l1 + l2);
    let side = |o: f64, t: f64| if o > t { 1 } else if o < -t { -1 } else { 0 };
    let s1 = side(orient(a, b, c), t1);
    let s2 = side(orient(a, b, d), t1);
    let s3 = side(orient(c, d, a), t2);
    let s4 = side(orient(c, d, b), t2);
    s1 * s2 < 0 && s3 * s4 < 0
}

/// Intersection point of two segments when they cross at a single point.
pub fn segment_intersection(a: Point2, b: Point2, c: Point2, d: Point2) -> Option<Point2> {
    let r = b - a;
    let s = d - c;
    let den = r.cross(s);
    if den.abs() < 1e-300 {
        return None;
    }
    let t = (c - a).cross(s) / den;
    let u = (c - a).cross(r) / den;
    let eps = 1e-12;
    if (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u) {
        Some(a + r * t)
    } else {
        None
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, q: Point2) -> bool {
    q.x >= a.x.min(b.x) && q.x <= a.x.max(b.x) && q.y >= a.y.min(b.y) && q.y <= a.y.max(b.y)
}

/// Simple polygon with counterclockwise vertex order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl TryFrom<Vec<Point2>> for Polygon {
    type Error = Error;
    fn try_from(v: Vec<Point2>) -> Result<Self> {
        Polygon::new(v)
    }
}

impl From<Polygon> for Vec<Point2> {
    fn from(p: Polygon) -> Self {
        p.vertices
    }
}

impl Polygon {
    /// Validates and orients the ring. Clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("polygon has non-finite coordinates"));
        }
        vertices.dedup();
        while vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::invalid("polygon needs at least 3 distinct vertices"));
        }
        let area = signed_area(&vertices);
        let scale = bbox_diameter(&vertices);
        if area.abs() <= 1e-12 * scale * scale {
            return Err(Error::invalid("degenerate polygon (zero area)"));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    return Err(Error::invalid("polygon is self-intersecting"));
                }
            }
        }
        Ok(Polygon { vertices })
    }

    /// Construction without the O(n^2) simplicity check, for trusted rings.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        debug_assert!(signed_area(&vertices) > 0.0);
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        ring_perimeter(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let c = p.cross(q);
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        let a6 = 6.0 * self.area();
        Point2::new(cx / a6, cy / a6)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                d = d.max(p.dist(*q));
            }
        }
        d
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            orient(a, b, c) >= 0.0
        })
    }

    pub fn translate(&self, t: Point2) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&p| p + t).collect(),
        }
    }

    /// Rotation about the origin.
    pub fn rotate(&self, angle: f64) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|p| p.rotate(angle)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Polygon {
        assert!(s > 0.0);
        Polygon {
            vertices: self.vertices.iter().map(|&p| p * s).collect(),
        }
    }

    pub fn contains(&self, q: Point2, tol: f64) -> Containment {
        point_in_ring(q, &self.vertices, tol)
    }

    /// Euclidean distance from `q` to the closed region (0 inside).
    pub fn distance_to(&self, q: Point2) -> f64 {
        if self.contains(q, 0.0) != Containment::Outside {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(q, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Outward unit normal and length of each edge.
    pub fn outward_normals(&self) -> impl Iterator<Item = (Point2, f64)> + '_ {
        self.edges().map(|(a, b)| {
            let d = b - a;
            let l = d.norm();
            (Point2::new(d.y / l, -d.x / l), l)
        })
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Polygon> {
        Polygon::new(vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
    }

    /// Regular polygon with `n` vertices on a circle of radius `r`, first vertex at `phase`.
    pub fn regular(n: usize, r: f64, phase: f64, center: Point2) -> Result<Polygon> {
        let v = (0..n)
            .map(|k| center + Point2::polar(phase + 2.0 * PI * k as f64 / n as f64) * r)
            .collect();
        Polygon::new(v)
    }

    /// Intersection with the half-plane `{x : n . x <= c}`; `None` when empty.
    pub fn clip_halfplane(&self, n: Point2, c: f64) -> Option<Polygon> {
        let out = clip_ring_halfplane(&self.vertices, n, c);
        Polygon::new(out).ok()
    }

    /// Intersection of two convex polygons (Sutherland-Hodgman).
    pub fn clip_convex(&self, clip: &Polygon) -> Option<Polygon> {
        debug_assert!(clip.is_convex());
        let mut ring = self.vertices.clone();
        for (a, b) in clip.edges() {
            if ring.is_empty() {
                return None;
            }
            let d = b - a;
            let n = Point2::new(d.y, -d.x);
            ring = clip_ring_halfplane(&ring, n, n.dot(a));
        }
        Polygon::new(ring).ok()
    }
}

fn clip_ring_halfplane(ring: &[Point2], n: Point2, c: f64) -> Vec<Point2> {
    let mut out = Vec::with_capacity(ring.len() + 2);
    let m = ring.len();
    for i in 0..m {
        let p = ring[i];
        let q = ring[(i + 1) % m];
        let fp = n.dot(p) - c;
        let fq = n.dot(q) - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            out.push(p.lerp(q, fp / (fp - fq)));
        }
    }
    out.dedup_by(|a, b| a.dist(*b) < 1e-14);
    out
}

/// Parameter interval of segment `[a, b]` lying inside a convex polygon.
pub fn segment_inside_convex(a: Point2, b: Point2, poly: &Polygon) -> Option<(f64, f64)> {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let d = b - a;
    for (p, q) in poly.edges() {
        let e = q - p;
        let n = Point2::new(e.y, -e.x);
        let num = n.dot(p - a);
        let den = n.dot(d);
        if den.abs() < 1e-300 {
            if num < 0.0 {
                return None;
            }
            continue;
        }
        let t = num / den;
        if den > 0.0 {
            t1 = t1.min(t);
        } else {
            t0 = t0.max(t);
        }
        if t0 >= t1 {
            return None;
        }
    }
    Some((t0, t1))
}

/// Length of `[a, b]` outside (`inside = false`) or inside a convex polygon.
pub fn segment_length_vs_convex(a: Point2, b: Point2, poly: &Polygon, inside: bool) -> f64 {
    let len = a.dist(b);
    let within = segment_inside_convex(a, b, poly).map_or(0.0, |(t0, t1)| (t1 - t0) * len);
    if inside {
        within
    } else {
        (len - within).max(0.0)
    }
}

pub fn bbox(points: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

fn bbox_diameter(points: &[Point2]) -> f64 {
    let (lo, hi) = bbox(points);
    lo.dist(hi)
}

/// Area and perimeter of a polygon.
pub fn polygon_metrics(p: &Polygon) -> Result<(f64, f64)> {
    let area = p.area();
    let scale = p.diameter();
    if area <= 1e-12 * scale * scale {
        return Err(Error::invalid("degenerate polygon"));
    }
    Ok((area, p.perimeter()))
}

/// Classification of `q` against `p`; points within `tol` of the boundary report `Boundary`.
pub fn point_in_polygon(q: Point2, p: &Polygon, tol: f64) -> Containment {
    p.contains(q, tol)
}

/// Length of the common boundary of two polygons with disjoint interiors.
pub fn shared_boundary_length(p: &Polygon, q: &Polygon, tol: f64) -> f64 {
    let mut total = 0.0;
    for (a, b) in p.edges() {
        let d = b - a;
        let l = d.norm();
        let u = d * (1.0 / l);
        for (c, e) in q.edges() {
            if point_line_distance(c, a, u) > tol || point_line_distance(e, a, u) > tol {
                continue;
            }
            let (s0, s1) = {
                let s = (c - a).dot(u);
                let t = (e - a).dot(u);
                (s.min(t), s.max(t))
            };
            let lo = s0.max(0.0);
            let hi = s1.min(l);
            if hi > lo {
                total += hi - lo;
            }
        }
    }
    total
}

fn point_line_distance(q: Point2, a: Point2, u: Point2) -> f64 {
    (q - a).cross(u).abs()
}

/// Two polygons share interior points.
///
/// Besides proper edge crossings, probes points just inside each polygon
/// next to every vertex and edge midpoint, which catches collinear overlaps.
pub fn polygons_overlap(p: &Polygon, q: &Polygon, tol: f64) -> bool {
    for (a, b) in p.edges() {
        for (c, d) in q.edges() {
            if segments_cross_properly(a, b, c, d) {
                return true;
            }
        }
    }
    let probe = |x: &Polygon, y: &Polygon| {
        let step = 1e-6 * x.diameter();
        let inside = |v: Point2| y.contains(v, tol) == Containment::Inside;
        x.edges().any(|(a, b)| {
            let d = b - a;
            // Interior lies to the left of counterclockwise edges.
            let n = d.perp() * (1.0 / d.norm());
            inside(a.lerp(b, 0.5) + n * step) || inside(a.lerp(b, 0.01) + n * step)
        }) || inside(x.centroid())
    };
    probe(p, q) || probe(q, p)
}

/// Convex hull (Andrew's monotone chain), counterclockwise; `None` if degenerate.
pub fn convex_hull(points: &[Point2]) -> Option<Polygon> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return None;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && (hull[hull.len() - 1] - hull[hull.len() - 2]).cross(p - hull[hull.len() - 2]) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    Polygon::new(hull).ok()
}

/// Total length of the boundary of a union of edge-to-edge polygons.
///
/// Segments shared by two rings cancel; coordinates are matched after
/// rounding to multiples of `quantum`.
pub fn union_boundary_length<'a>(rings: impl IntoIterator<Item = &'a [Point2]>, quantum: f64) -> f64 {
    use std::collections::BTreeMap;
    type Key = ((i64, i64), (i64, i64));
    let key = |p: Point2| ((p.x / quantum).round() as i64, (p.y / quantum).round() as i64);
    // Ordered keys give a fixed summation order, so the result is reproducible.
    let mut seen: BTreeMap<Key, (usize, f64)> = BTreeMap::new();
    for r in rings {
        for i in 0..r.len() {
            let (p, s) = (r[i], r[(i + 1) % r.len()]);
            let (kp, ks) = (key(p), key(s));
            let k = if kp < ks { (kp, ks) } else { (ks, kp) };
            seen.entry(k).or_insert((0, p.dist(s))).0 += 1;
        }
    }
    seen.values().filter(|(c, _)| *c == 1).map(|(_, l)| l).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn unit_square_metrics() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(polygon_metrics(&sq).unwrap(), (1.0, 4.0));
    }

    #[test]
    fn equilateral_triangle_metrics() {
        let t = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap();
        let (a, p) = polygon_metrics(&t).unwrap();
        assert_relative_eq!(a, 3f64.sqrt() / 4.0, epsilon = 1e-15);
        assert_relative_eq!(p, 3.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_polygons_are_rejected() {
        let line = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
        ];
        assert!(Polygon::new(line).is_err());
        let bowtie = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ];
        assert!(Polygon::new(bowtie).is_err());
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let cw = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(cw.area() > 0.0);
    }

    #[test]
    fn normalize_angle_examples() {
        let i = AngleInterval::REDUCED_EDGE;
        assert_eq!(normalize_angle(0.0, i), 0.0);
        assert!(normalize_angle(FRAC_PI_3, i).abs() <= 1e-15);
        assert_relative_eq!(normalize_angle(0.6, i), 0.6 - FRAC_PI_3, epsilon = 1e-15);
        assert_relative_eq!(normalize_angle(0.6, i), -0.44720, epsilon = 1e-5);
        // closed upper end
        assert_eq!(normalize_angle(FRAC_PI_6, i), FRAC_PI_6);
        assert!(i.contains(normalize_angle(-FRAC_PI_6, i)));
    }

    #[test]
    fn point_in_unit_square() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let tol = 1e-9;
        assert_eq!(point_in_polygon(Point2::new(0.5, 0.5), &sq, tol), Containment::Inside);
        assert_eq!(point_in_polygon(Point2::new(1.0, 1.0), &sq, tol), Containment::Boundary);
        assert_eq!(point_in_polygon(Point2::new(2.0, 2.0), &sq, tol), Containment::Outside);
    }

    #[test]
    fn lattice_neighbors_at_unit_spacing() {
        let f = LatticeFrame::new(Point2::new(0.3, -1.2), 1.234, 0.01);
        let p0 = f.embed(5, -7);
        for (da, db) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)] {
            assert_eq!(lattice_dist2(da, db), 1);
            let d = p0.dist(f.embed(5 + da, -7 + db));
            assert_relative_eq!(d, 0.01, max_relative = 1e-12);
        }
        let (a, b) = f.locate(p0);
        assert_relative_eq!(a, 5.0, epsilon = 1e-9);
        assert_relative_eq!(b, -7.0, epsilon = 1e-9);
    }

    #[test]
    fn convex_clipping_of_squares() {
        let a = Polygon::rectangle(0.0, 0.0, 2.0, 2.0).unwrap();
        let b = Polygon::rectangle(1.0, 1.0, 3.0, 3.0).unwrap();
        let c = a.clip_convex(&b).unwrap();
        assert_relative_eq!(c.area(), 1.0, epsilon = 1e-14);
        let far = Polygon::rectangle(5.0, 5.0, 6.0, 6.0).unwrap();
        assert!(a.clip_convex(&far).is_none());
    }

    #[test]
    fn segment_vs_convex_lengths() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let (a, b) = (Point2::new(-1.0, 0.5), Point2::new(2.0, 0.5));
        assert_relative_eq!(segment_length_vs_convex(a, b, &sq, true), 1.0, epsilon = 1e-14);
        assert_relative_eq!(segment_length_vs_convex(a, b, &sq, false), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn shared_edge_of_adjacent_squares() {
        let a = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let b = Polygon::rectangle(1.0, 0.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(shared_boundary_length(&a, &b, 1e-12), 1.0);
        assert!(!polygons_overlap(&a, &b, 1e-12));
        let c = Polygon::rectangle(0.5, 0.0, 1.5, 1.0).unwrap();
        assert!(polygons_overlap(&a, &c, 1e-12));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn metrics_invariant_under_rigid_motion(
                angle in -PI..PI, tx in -10.0..10.0f64, ty in -10.0..10.0f64,
            ) {
                let p = Polygon::new(vec![
                    Point2::new(0.0, 0.0), Point2::new(2.0, 0.1),
                    Point2::new(1.5, 1.7), Point2::new(0.2, 1.1),
                ]).unwrap();
                let (a0, p0) = polygon_metrics(&p).unwrap();
                let q = p.rotate(angle).translate(Point2::new(tx, ty));
                let (a1, p1) = polygon_metrics(&q).unwrap();
                prop_assert!(((a1 - a0) / a0).abs() < 1e-12);
                prop_assert!(((p1 - p0) / p0).abs() < 1e-12);
            }

            #[test]
            fn normalize_angle_period(alpha in -20.0..20.0f64, k in -50i32..50) {
                let i = AngleInterval::REDUCED_EDGE;
                let r0 = normalize_angle(alpha, i);
                let r1 = normalize_angle(alpha + k as f64 * FRAC_PI_3, i);
                prop_assert!(i.contains(r0));
                // Shifted inputs carry the rounding of `alpha + k pi/3` itself.
                prop_assert!((r0 - r1).abs() < 1e-12 || (r0 - r1).abs() > FRAC_PI_3 - 1e-12);
            }
        }
    }
}
