//! Configuration generators: hexagonal minimizers, lattice fills of polygons,
//! polycrystals, the two-hexagon family and periodic tile packings.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finsler::{wulff, Anisotropy, FinslerHex, SquareNorm};
use crate::geom::{
    polygons_overlap, segment_intersection, segments_intersect, AngleInterval, Containment, LatticeFrame, Point2,
    Polygon,
};
use crate::graph::{Configuration, LatticeIndex, DEFAULT_RELATIVE_TOLERANCE};

pub mod random;

/// All lattice points with `max(|a|, |b|, |a + b|) <= s`, horizontal bonds.
pub fn hexagon_minimizer(s: u32, eps: f64) -> Result<Configuration> {
    if s == 0 {
        return Err(Error::invalid("hexagon side must be at least 1"));
    }
    let s = s as i64;
    let mut indices = Vec::with_capacity((3 * s * s + 3 * s + 1) as usize);
    for a in -s..=s {
        for b in -s..=s {
            if (a + b).abs() <= s {
                indices.push(LatticeIndex { frame: 0, a, b });
            }
        }
    }
    Configuration::from_lattice(vec![LatticeFrame::new(Point2::ORIGIN, FRAC_PI_2, eps)], indices, eps)
}

/// Vertex indices of a lattice triangle.
pub type LatticeTriangle = [(i64, i64); 3];

/// The two lattice triangles with lowest corner `(a, b)`.
fn cell_triangles(a: i64, b: i64) -> [LatticeTriangle; 2] {
    [[(a, b), (a + 1, b), (a, b + 1)], [(a + 1, b), (a + 1, b + 1), (a, b + 1)]]
}

/// Coefficient ranges `(i, j)` of `origin + i g1 + j g2` covering the bounding box of `omega`.
fn basis_range(origin: Point2, g1: Point2, g2: Point2, omega: &Polygon, pad: i64) -> ((i64, i64), (i64, i64)) {
    let (lo, hi) = omega.bbox();
    let det = g1.cross(g2);
    let mut r = [(i64::MAX, i64::MIN); 2];
    for c in [lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)] {
        let d = c - origin;
        let (i, j) = (d.cross(g2) / det, g1.cross(d) / det);
        r[0] = (r[0].0.min(i.floor() as i64 - pad), r[0].1.max(i.ceil() as i64 + pad));
        r[1] = (r[1].0.min(j.floor() as i64 - pad), r[1].1.max(j.ceil() as i64 + pad));
    }
    (r[0], r[1])
}

fn index_range(frame: &LatticeFrame, omega: &Polygon) -> ((i64, i64), (i64, i64)) {
    let (u, w) = frame.generators();
    basis_range(frame.origin, u * frame.spacing, w * frame.spacing, omega, 2)
}

/// `shape` lies in `omega`. `strict` requires vertices and edge midpoints at
/// distance more than `tol` inside; otherwise boundary contact is allowed and
/// the centroid must be interior.
fn shape_inside(shape: &[Point2], omega: &Polygon, convex: bool, tol: f64, strict: bool) -> bool {
    let n = shape.len();
    let ok = |c: Containment| if strict { c == Containment::Inside } else { c != Containment::Outside };
    for i in 0..n {
        let (p, q) = (shape[i], shape[(i + 1) % n]);
        if !ok(omega.contains(p, tol)) || !ok(omega.contains(p.lerp(q, 0.5), tol)) {
            return false;
        }
    }
    if !strict {
        let c = shape.iter().fold(Point2::ORIGIN, |s, &p| s + p) * (1.0 / n as f64);
        if omega.contains(c, tol) != Containment::Inside {
            return false;
        }
    }
    if !convex {
        // A reflex corner of omega can still poke into the shape.
        for (a, b) in omega.edges() {
            for i in 0..n {
                let (p, q) = (shape[i], shape[(i + 1) % n]);
                if strict && segments_intersect(a, b, p, q) {
                    return false;
                }
                if !strict && crate::geom::segments_cross_properly(a, b, p, q) {
                    return false;
                }
            }
        }
        let ring = Polygon::from_ccw_unchecked(shape.to_vec());
        if omega.vertices().iter().any(|&v| ring.contains(v, tol) == Containment::Inside) {
            return false;
        }
    }
    true
}

/// Lattice triangles of `frame` strictly inside `omega`, in lexicographic order.
pub fn lattice_triangles(omega: &Polygon, frame: &LatticeFrame) -> Vec<LatticeTriangle> {
    let tol = 1e-12 * omega.diameter();
    let convex = omega.is_convex();
    let ((a0, a1), (b0, b1)) = index_range(frame, omega);
    let mut out = Vec::new();
    for a in a0..=a1 {
        for b in b0..=b1 {
            for t in cell_triangles(a, b) {
                let verts = t.map(|(x, y)| frame.embed(x, y));
                if shape_inside(&verts, omega, convex, tol, true) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn check_orientation(theta: f64) -> Result<()> {
    if !AngleInterval::ORIENTATION.contains(theta) {
        return Err(Error::invalid(format!("orientation {theta} is outside (pi/3, 2pi/3]")));
    }
    Ok(())
}

/// Vertices of every lattice triangle contained in `omega`, for the lattice
/// with orientation `theta`, spacing `eps` and a site at `offset`.
pub fn lattice_fill(omega: &Polygon, theta: f64, eps: f64, offset: Point2) -> Result<Configuration> {
    polycrystal_fill(
        &[GrainSpec {
            region: omega.clone(),
            theta,
            offset,
        }],
        eps,
        eps,
    )
}

/// One grain of a polycrystal: a region filled with a single lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrainSpec {
    pub region: Polygon,
    pub theta: f64,
    #[serde(default)]
    pub offset: Point2,
}

/// Union of per-grain lattice fills.
///
/// Triangles with a vertex within `gap` of another grain's region are dropped,
/// so with `gap >= eps` distinct grains never bond. Grains that share
/// orientation and offset are pieces of one lattice and are not separated.
/// A `gap` below `eps` is experimental: grains may bond across the interface
/// and particles of later grains that would overlap earlier ones are removed.
pub fn polycrystal_fill(grains: &[GrainSpec], eps: f64, gap: f64) -> Result<Configuration> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if !(gap >= 0.0) {
        return Err(Error::invalid("gap must be non-negative"));
    }
    for g in grains {
        check_orientation(g.theta)?;
    }
    for i in 0..grains.len() {
        for j in i + 1..grains.len() {
            let (p, q) = (&grains[i].region, &grains[j].region);
            if polygons_overlap(p, q, 1e-12 * p.diameter().max(q.diameter())) {
                return Err(Error::invalid(format!("grains {i} and {j} overlap")));
            }
        }
    }

    let tol = DEFAULT_RELATIVE_TOLERANCE * eps;
    let mut frames: Vec<LatticeFrame> = Vec::new();
    let mut frame_of = Vec::with_capacity(grains.len());
    for g in grains {
        let fr = LatticeFrame::new(g.offset, g.theta, eps);
        let k = frames.iter().position(|f| *f == fr).unwrap_or_else(|| {
            frames.push(fr);
            frames.len() - 1
        });
        frame_of.push(k);
    }

    let mut sites: Vec<BTreeSet<(i64, i64)>> = vec![BTreeSet::new(); frames.len()];
    for (i, g) in grains.iter().enumerate() {
        let frame = &frames[frame_of[i]];
        let mut dropped = 0usize;
        for t in lattice_triangles(&g.region, frame) {
            let near_other = t.iter().any(|&(a, b)| {
                let p = frame.embed(a, b);
                grains.iter().enumerate().any(|(j, h)| {
                    frame_of[j] != frame_of[i]
                        && (h.region.contains(p, 0.0) != Containment::Outside
                            || h.region.distance_to(p) <= gap + 2.0 * tol)
                })
            });
            if near_other {
                dropped += 1;
                continue;
            }
            sites[frame_of[i]].extend(t);
        }
        if dropped > 0 {
            debug!("grain {i}: dropped {dropped} triangles near other grains");
        }
    }

    let mut indices: Vec<LatticeIndex> = sites
        .iter()
        .enumerate()
        .flat_map(|(frame, s)| s.iter().map(move |&(a, b)| LatticeIndex { frame, a, b }))
        .collect();
    if gap < eps {
        indices = remove_cross_frame_overlaps(&frames, indices, eps, tol);
    }
    if indices.is_empty() {
        warn!("lattice fill is empty: epsilon {eps} is too large for the region");
    }
    Configuration::from_lattice(frames, indices, eps)
}

/// Greedy removal of particles closer than `eps - tol` to a kept particle of another frame.
fn remove_cross_frame_overlaps(
    frames: &[LatticeFrame],
    indices: Vec<LatticeIndex>,
    eps: f64,
    tol: f64,
) -> Vec<LatticeIndex> {
    let key = |p: Point2| ((p.x / eps).floor() as i64, (p.y / eps).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<(Point2, usize)>> = HashMap::new();
    let mut kept = Vec::with_capacity(indices.len());
    let mut removed = 0usize;
    for ix in indices {
        let p = frames[ix.frame].embed(ix.a, ix.b);
        let (kx, ky) = key(p);
        let clash = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                grid.get(&(kx + dx, ky + dy))
                    .is_some_and(|v| v.iter().any(|&(q, f)| f != ix.frame && p.dist(q) < eps - tol))
            })
        });
        if clash {
            removed += 1;
            continue;
        }
        grid.entry((kx, ky)).or_default().push((p, ix.frame));
        kept.push(ix);
    }
    if removed > 0 {
        warn!("experimental gap below epsilon: removed {removed} overlapping particles");
    }
    kept
}

/// How the union of two overlapping Wulff hexagons was split into grains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HexagonSplit {
    /// No overlap; each hexagon is a grain.
    Disjoint,
    /// Boundaries cross at `p` and `q`; the chord between them separates the grains.
    Chord { p: Point2, q: Point2 },
    /// Other crossing patterns: the first hexagon is kept whole and the rest of
    /// the second is cut into convex pieces along the first one's edge lines.
    Pieces,
}

/// `W_{theta1}`, `W_{theta2} + tau`, their overlap area and a grain decomposition of the union.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoHexagonGeometry {
    pub theta1: f64,
    pub theta2: f64,
    pub tau: Point2,
    pub w1: Polygon,
    pub w2: Polygon,
    /// `|W_{theta1} ∩ (W_{theta2} + tau)|`.
    pub m: f64,
    pub split: HexagonSplit,
    pub grains: Vec<GrainSpec>,
}

/// Overlap area of two convex polygons.
pub fn convex_overlap_area(p: &Polygon, q: &Polygon) -> f64 {
    p.clip_convex(q).map_or(0.0, |r| r.area())
}

fn boundary_crossings(p: &Polygon, q: &Polygon) -> Vec<Point2> {
    let mut pts: Vec<Point2> = Vec::new();
    for (a, b) in p.edges() {
        for (c, d) in q.edges() {
            if let Some(x) = segment_intersection(a, b, c, d) {
                if !pts.iter().any(|y| y.dist(x) < 1e-12) {
                    pts.push(x);
                }
            }
        }
    }
    pts
}

/// Convex pieces of `q \ p` for convex `p`.
pub fn convex_difference(q: &Polygon, p: &Polygon) -> Vec<Polygon> {
    let mut pieces = Vec::new();
    let mut rest = Some(q.clone());
    for (a, b) in p.edges() {
        let Some(r) = rest.take() else { break };
        let d = b - a;
        let n = Point2::new(d.y, -d.x);
        let c = n.dot(a);
        if let Some(out) = r.clip_halfplane(-n, -c) {
            if out.area() > 1e-14 {
                pieces.push(out);
            }
        }
        rest = r.clip_halfplane(n, c);
    }
    pieces
}

pub fn two_hexagon_geometry(theta1: f64, theta2: f64, tau: Point2) -> Result<TwoHexagonGeometry> {
    check_orientation(theta1)?;
    check_orientation(theta2)?;
    let w1 = wulff(theta1).polygon;
    let w2 = wulff(theta2).polygon.translate(tau);
    let m = convex_overlap_area(&w1, &w2);
    let whole = |region: &Polygon, theta, offset| GrainSpec {
        region: region.clone(),
        theta,
        offset,
    };
    let (split, grains) = if m <= 1e-14 {
        (HexagonSplit::Disjoint, vec![whole(&w1, theta1, Point2::ORIGIN), whole(&w2, theta2, tau)])
    } else {
        chord_split(&w1, &w2, theta1, theta2, tau).unwrap_or_else(|| {
            let mut g = vec![whole(&w1, theta1, Point2::ORIGIN)];
            g.extend(convex_difference(&w2, &w1).into_iter().map(|r| whole(&r, theta2, tau)));
            (HexagonSplit::Pieces, g)
        })
    };
    Ok(TwoHexagonGeometry {
        theta1,
        theta2,
        tau,
        w1,
        w2,
        m,
        split,
        grains,
    })
}

/// Split along the segment joining the two boundary crossings, if there are exactly two.
fn chord_split(
    w1: &Polygon,
    w2: &Polygon,
    theta1: f64,
    theta2: f64,
    tau: Point2,
) -> Option<(HexagonSplit, Vec<GrainSpec>)> {
    let x = boundary_crossings(w1, w2);
    if x.len() != 2 {
        return None;
    }
    let (p, q) = (x[0], x[1]);
    let mut n = (q - p).perp();
    // Orient the half-plane toward the part of w1 outside w2.
    let outside = w1
        .vertices()
        .iter()
        .copied()
        .find(|&v| w2.contains(v, 1e-12) == Containment::Outside)?;
    if n.dot(outside - p) > 0.0 {
        n = -n;
    }
    let c = n.dot(p);
    let g1 = w1.clip_halfplane(n, c)?;
    let g2 = w2.clip_halfplane(-n, -c)?;
    Some((
        HexagonSplit::Chord { p, q },
        vec![
            GrainSpec {
                region: g1,
                theta: theta1,
                offset: Point2::ORIGIN,
            },
            GrainSpec {
                region: g2,
                theta: theta2,
                offset: tau,
            },
        ],
    ))
}

#[derive(Clone, Debug)]
pub struct TwoHexagonConfig {
    pub config: Configuration,
    pub m: f64,
    pub geometry: TwoHexagonGeometry,
}

/// Fill the grains of `W_{theta1} ∪ (W_{theta2} + tau)`.
pub fn two_hexagon_config(theta1: f64, theta2: f64, tau: Point2, eps: f64, gap: f64) -> Result<TwoHexagonConfig> {
    let geometry = two_hexagon_geometry(theta1, theta2, tau)?;
    let config = polycrystal_fill(&geometry.grains, eps, gap)?;
    Ok(TwoHexagonConfig {
        config,
        m: geometry.m,
        geometry,
    })
}

/// Regular tile shapes that tessellate the plane, with unit edge length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TileFamily {
    Triangle,
    Square,
    Hexagon,
}

impl TileFamily {
    /// Admissible orientations: `(pi/3, 2pi/3]`, or `(pi/4, 3pi/4]` for squares.
    pub fn interval(self) -> AngleInterval {
        match self {
            TileFamily::Square => AngleInterval {
                lo: FRAC_PI_4,
                len: FRAC_PI_2,
            },
            _ => AngleInterval::ORIENTATION,
        }
    }

    /// The norm built from the tile's edge normals, at orientation `theta`.
    pub fn anisotropy(self, theta: f64) -> Box<dyn Anisotropy + Send + Sync> {
        match self {
            TileFamily::Square => Box::new(SquareNorm { theta }),
            _ => Box::new(FinslerHex::new(theta)),
        }
    }

    /// Perimeter of the unit-area Wulff shape of the family's norm.
    pub fn wulff_perimeter(self) -> f64 {
        match self {
            TileFamily::Square => 4.0,
            _ => crate::finsler::wulff_perimeter(),
        }
    }

    /// `theta` samples `lo + (k + 1) len / n`, `k = 0..n`.
    pub fn theta_grid(self, n: usize) -> Vec<f64> {
        let i = self.interval();
        (1..=n).map(|k| i.lo + i.len * k as f64 / n as f64).collect()
    }
}

/// Tiles `eps p_theta + tau` of the periodic tiling through `offset` that lie in `omega`.
///
/// Tiles may touch the boundary of `omega`. Triangles are the faces of the
/// triangular lattice with orientation `theta`; squares and hexagons are
/// rotated by `theta - pi/2` from the axis-aligned square and from the
/// hexagon with a vertex on the positive x-axis.
pub fn tile_fill(omega: &Polygon, family: TileFamily, theta: f64, eps: f64, offset: Point2) -> Result<Vec<Polygon>> {
    if !family.interval().contains(theta) {
        return Err(Error::invalid(format!("orientation {theta} is not admissible for {family:?} tiles")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let r = theta - FRAC_PI_2;
    let tol = 1e-9 * eps;
    let convex = omega.is_convex();
    let mut tiles = Vec::new();
    let mut try_push = |ring: Vec<Point2>| {
        if shape_inside(&ring, omega, convex, tol, false) {
            tiles.push(Polygon::from_ccw_unchecked(ring));
        }
    };
    match family {
        TileFamily::Triangle => {
            let frame = LatticeFrame::new(offset, theta, eps);
            let ((a0, a1), (b0, b1)) = index_range(&frame, omega);
            for a in a0..=a1 {
                for b in b0..=b1 {
                    for t in cell_triangles(a, b) {
                        try_push(t.iter().map(|&(x, y)| frame.embed(x, y)).collect());
                    }
                }
            }
        }
        TileFamily::Square => {
            let (u, w) = (Point2::polar(r) * eps, Point2::polar(r + FRAC_PI_2) * eps);
            let ((i0, i1), (j0, j1)) = basis_range(offset, u, w, omega, 2);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    let p = offset + u * i as f64 + w * j as f64;
                    try_push(vec![p, p + u, p + u + w, p + w]);
                }
            }
        }
        TileFamily::Hexagon => {
            let s3 = 3f64.sqrt() * eps;
            let (g1, g2) = (Point2::polar(r + FRAC_PI_6) * s3, Point2::polar(r + FRAC_PI_2) * s3);
            let ((i0, i1), (j0, j1)) = basis_range(offset, g1, g2, omega, 2);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    let c = offset + g1 * i as f64 + g2 * j as f64;
                    try_push((0..6).map(|k| c + Point2::polar(r + k as f64 * FRAC_PI_3) * eps).collect());
                }
            }
        }
    }
    Ok(tiles)
}

/// Perimeter of the union of edge-to-edge tiles.
pub fn tile_union_perimeter(tiles: &[Polygon], eps: f64) -> f64 {
    crate::geom::union_boundary_length(tiles.iter().map(|t| t.vertices()), 1e-7 * eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{energy_identity_check, pairwise_energy};
    use crate::graph::Analysis;
    use crate::orient::{orientation_field, segment_grains, DEFAULT_TOL_THETA};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force count of lattice points in the closed hexagon of side `s`.
    fn hexagon_count(s: i64) -> usize {
        let mut n = 0;
        for a in -3 * s..=3 * s {
            for b in -3 * s..=3 * s {
                let p = LatticeFrame::new(Point2::ORIGIN, FRAC_PI_2, 1.0).embed(a, b);
                // Inside the hexagon with vertices at distance s and apothem s sqrt(3)/2.
                let inside = (0..3).all(|k| {
                    let n = Point2::polar(FRAC_PI_6 + k as f64 * FRAC_PI_3);
                    p.dot(n).abs() <= s as f64 * 3f64.sqrt() / 2.0 + 1e-9
                });
                n += inside as usize;
            }
        }
        n
    }

    #[test]
    fn hexagon_minimizer_counts() {
        for s in 1..=12u32 {
            let c = hexagon_minimizer(s, 1.0).unwrap();
            let si = s as i64;
            assert_eq!(c.len() as i64, 3 * si * si + 3 * si + 1);
            if s <= 4 {
                assert_eq!(c.len(), hexagon_count(si));
            }
            let a = Analysis::new(&c).unwrap();
            assert_eq!(a.graph.edge_count() as i64, 9 * si * si + 3 * si);
            assert_eq!(a.euler.chi, 1);
            assert_eq!(a.faces.triangular.len() as i64, 6 * si * si);
            assert!(a.faces.non_triangular.is_empty());
            assert_eq!(a.edges.counts.wire, 0);
        }
        assert_eq!(hexagon_minimizer(1, 1.0).unwrap().len(), 7);
        assert!(hexagon_minimizer(0, 1.0).is_err());
    }

    #[test]
    fn square_fill_is_single_crystal() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let c = lattice_fill(&sq, FRAC_PI_2, 1.0 / 32.0, Point2::ORIGIN).unwrap();
        let a = Analysis::new(&c).unwrap();
        let field = orientation_field(&a.graph, &a.faces);
        assert_eq!(field.distinct_values(), vec![FRAC_PI_2]);
        assert!(c.points().iter().all(|&p| sq.contains(p, 0.0) == Containment::Inside));
        let r = energy_identity_check(&c).unwrap();
        // Surplus is the perimeter of the triangle union plus 3 eps per component.
        let eps = c.epsilon();
        assert_relative_eq!(
            r.surplus,
            eps * r.terms.union_perimeter as f64 + 3.0 * eps * a.graph.component_count() as f64,
            max_relative = 1e-12
        );
        assert_eq!(r.terms.wire, 0);
    }

    #[test]
    fn empty_fill() {
        let tiny = Polygon::rectangle(0.0, 0.0, 0.1, 0.1).unwrap();
        assert!(lattice_fill(&tiny, FRAC_PI_2, 1.0, Point2::ORIGIN).unwrap().is_empty());
        assert!(lattice_fill(&tiny, 0.2, 1.0, Point2::ORIGIN).is_err());
    }

    #[test]
    fn fill_is_periodic_in_offset() {
        let omega = Polygon::new(vec![
            Point2::new(0.013, 0.021),
            Point2::new(1.107, -0.033),
            Point2::new(0.71, 0.52),
            Point2::new(1.19, 1.017),
            Point2::new(-0.09, 0.93),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let theta = rng.gen_range(FRAC_PI_3 + 1e-3..2.0 * FRAC_PI_3);
            let eps = 0.07;
            let off = Point2::new(rng.gen_range(0.0..eps), rng.gen_range(0.0..eps));
            let frame = LatticeFrame::new(off, theta, eps);
            let shifted = off + frame.embed(3, -2) - frame.origin;
            let c1 = lattice_fill(&omega, theta, eps, off).unwrap();
            let c2 = lattice_fill(&omega, theta, eps, shifted).unwrap();
            let key = |c: &Configuration| {
                let mut v: Vec<(i64, i64)> = c
                    .points()
                    .iter()
                    .map(|p| ((p.x * 1e6).round() as i64, (p.y * 1e6).round() as i64))
                    .collect();
                v.sort();
                v
            };
            assert_eq!(key(&c1), key(&c2));
        }
    }

    #[test]
    fn polycrystal_two_grains() {
        let eps = 1.0 / 16.0;
        let grains = vec![
            GrainSpec {
                region: Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap(),
                theta: FRAC_PI_2,
                offset: Point2::ORIGIN,
            },
            GrainSpec {
                region: Polygon::rectangle(1.0, 0.0, 2.0, 1.0).unwrap(),
                theta: 7.0 * std::f64::consts::PI / 12.0,
                offset: Point2::ORIGIN,
            },
        ];
        let c = polycrystal_fill(&grains, eps, eps).unwrap();
        let a = Analysis::new(&c).unwrap();
        let field = orientation_field(&a.graph, &a.faces);
        assert_eq!(field.distinct_values().len(), 2);
        let gp = segment_grains(&field, &a.graph, &a.faces, DEFAULT_TOL_THETA);
        assert_eq!(gp.grains.len(), 2);
        assert_eq!(gp.interior_boundary, 0.0);
        energy_identity_check(&c).unwrap();

        let one = polycrystal_fill(&grains[..1], eps, eps).unwrap();
        let direct = lattice_fill(&grains[0].region, FRAC_PI_2, eps, Point2::ORIGIN).unwrap();
        assert_eq!(one.points(), direct.points());

        let mut bad = grains.clone();
        bad[1].region = Polygon::rectangle(0.5, 0.0, 1.5, 1.0).unwrap();
        assert!(polycrystal_fill(&bad, eps, eps).is_err());
    }

    #[test]
    fn experimental_small_gap_has_no_overlaps() {
        let eps = 1.0 / 16.0;
        let grains = vec![
            GrainSpec {
                region: Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap(),
                theta: FRAC_PI_2,
                offset: Point2::ORIGIN,
            },
            GrainSpec {
                region: Polygon::rectangle(1.0, 0.0, 2.0, 1.0).unwrap(),
                theta: 1.9,
                offset: Point2::new(0.01, 0.02),
            },
        ];
        let c = polycrystal_fill(&grains, eps, 0.0).unwrap();
        assert!(pairwise_energy(&c).is_ok());
    }

    #[test]
    fn two_hexagon_examples() {
        let (t1, t2) = (FRAC_PI_2, 2.0 * FRAC_PI_3);
        let far = two_hexagon_geometry(t1, t2, Point2::new(3.0, 0.0)).unwrap();
        assert_eq!(far.m, 0.0);
        assert_eq!(far.split, HexagonSplit::Disjoint);
        let centred = two_hexagon_geometry(t1, t2, Point2::ORIGIN).unwrap();
        assert!(centred.m > 0.9 && centred.m <= 1.0, "m = {}", centred.m);
        // Concentric hexagons rotated by pi/6 cross twelve times.
        assert_eq!(centred.split, HexagonSplit::Pieces);
        let total: f64 = centred.grains.iter().map(|g| g.region.area()).sum();
        assert_relative_eq!(total, 2.0 - centred.m, epsilon = 1e-12);

        let near = two_hexagon_geometry(t1, t2, Point2::new(1.0, 0.05)).unwrap();
        assert!(near.m > 0.0 && near.m < 0.05);
        assert!(matches!(near.split, HexagonSplit::Chord { .. }));
        let total: f64 = near.grains.iter().map(|g| g.region.area()).sum();
        assert_relative_eq!(total, 2.0 - near.m, epsilon = 1e-12);

        let mut prev = f64::INFINITY;
        let u = Point2::polar(0.3);
        for k in 0..60 {
            let m = two_hexagon_geometry(t1, t2, u * (0.6 + 0.01 * k as f64)).unwrap().m;
            assert!(m <= prev + 1e-12);
            prev = m;
        }

        let cfg = two_hexagon_config(t1, t2, Point2::new(1.0, 0.05), 1.0 / 16.0, 1.0 / 16.0).unwrap();
        let a = Analysis::new(&cfg.config).unwrap();
        let gp = segment_grains(&orientation_field(&a.graph, &a.faces), &a.graph, &a.faces, DEFAULT_TOL_THETA);
        assert_eq!(gp.grains.len(), 2);
    }

    #[test]
    fn square_tiles_tile_exactly() {
        for (k, n) in [(1, 8), (2, 4), (3, 16)] {
            let omega = Polygon::rectangle(0.0, 0.0, k as f64, k as f64).unwrap();
            let eps = 1.0 / n as f64;
            let tiles = tile_fill(&omega, TileFamily::Square, FRAC_PI_2, eps, Point2::ORIGIN).unwrap();
            assert_eq!(tiles.len(), k * k * n * n);
            assert_eq!(tile_union_perimeter(&tiles, eps), omega.perimeter());
        }
    }

    #[test]
    fn triangle_tiles_match_lattice_fill() {
        let omega = Polygon::regular(7, 1.0, 0.1, Point2::new(0.003, 0.007)).unwrap();
        let eps = 0.05;
        let theta = 1.2;
        let off = Point2::new(0.011, 0.017);
        let tiles = tile_fill(&omega, TileFamily::Triangle, theta, eps, off).unwrap();
        let c = lattice_fill(&omega, theta, eps, off).unwrap();
        let a = Analysis::new(&c).unwrap();
        assert_eq!(tiles.len(), a.faces.triangular.len());
        let r = energy_identity_check(&c).unwrap();
        assert_relative_eq!(tile_union_perimeter(&tiles, eps), eps * r.terms.union_perimeter as f64, max_relative = 1e-9);
    }

    #[test]
    fn hexagon_tiles_are_disjoint() {
        let omega = wulff(1.4).polygon.scale(2.0);
        let tiles = tile_fill(&omega, TileFamily::Hexagon, 1.4, 0.1, Point2::ORIGIN).unwrap();
        assert!(!tiles.is_empty());
        let area: f64 = tiles.iter().map(|t| t.area()).sum();
        assert!(area <= omega.area() + 1e-9);
        for i in 0..tiles.len().min(40) {
            for j in i + 1..tiles.len() {
                assert!(!polygons_overlap(&tiles[i], &tiles[j], 1e-9));
            }
        }
        assert!(tile_fill(&omega, TileFamily::Hexagon, 0.2, 0.1, Point2::ORIGIN).is_err());
        assert!(tile_fill(&omega, TileFamily::Square, 2.3, 0.1, Point2::ORIGIN).is_ok());
    }
}
