//! Lattice orientation of triangular faces and grain segmentation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{normalize_angle, AngleInterval, Point2};
use crate::graph::{BondGraph, FaceRecord, FaceSet};

/// Default grain threshold on orientation differences (radians).
pub const DEFAULT_TOL_THETA: f64 = 1e-6;

/// Relative window within which `alpha` counts as a tie between two multiples of `pi/3`.
pub const TIE_WINDOW: f64 = 1e-14;

/// Minimal integer `k` minimizing `|alpha - k pi/3|`.
///
/// Angles within `TIE_WINDOW` of a midpoint are treated as ties, so rounding
/// in `alpha` cannot flip the choice.
pub fn project_p(alpha: f64) -> i64 {
    let x = alpha / FRAC_PI_3 - 0.5;
    let r = x.round();
    if (x - r).abs() <= TIE_WINDOW * r.abs().max(1.0) {
        r as i64
    } else {
        x.ceil() as i64
    }
}

/// Orientation in `(pi/3, 2pi/3]` of a triangle with an edge at angle `alpha_w`.
pub fn orientation_from_edge_angle(alpha_w: f64) -> f64 {
    alpha_w - project_p(alpha_w) as f64 * FRAC_PI_3 + FRAC_PI_2
}

/// Orientation in `(pi/3, 2pi/3]` of a lattice frame with angle `angle`.
///
/// Angles already in range are returned unchanged.
pub fn frame_orientation(angle: f64) -> f64 {
    if AngleInterval::ORIENTATION.contains(angle) {
        angle
    } else {
        normalize_angle(angle, AngleInterval::ORIENTATION)
    }
}

/// `theta(f)`, the angle between `e1` and a median of the triangle `f`.
///
/// Faces whose vertices all sit on one lattice frame take the frame angle
/// directly, so every face of a lattice fill gets a bit-identical value.
pub fn face_orientation(g: &BondGraph, f: &FaceRecord) -> Result<f64> {
    if !f.is_triangular {
        return Err(Error::invalid(format!(
            "orientation is defined on triangular faces only (cycle length {})",
            f.cycle_len()
        )));
    }
    let c = g.configuration();
    let frames: Vec<Option<usize>> = f.vertices.iter().map(|&v| c.lattice_index(v).map(|ix| ix.frame)).collect();
    if let Some(Some(fr)) = frames.first() {
        if frames.iter().all(|x| *x == Some(*fr)) {
            return Ok(frame_orientation(c.frames()[*fr].angle));
        }
    }
    let w: Point2 = g.half_edge_vector(f.cycle[0]);
    Ok(orientation_from_edge_angle(w.angle()))
}

/// `theta(f)` on every triangular face; `None` elsewhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientationField {
    pub values: Vec<Option<f64>>,
}

impl OrientationField {
    pub fn get(&self, face: usize) -> Option<f64> {
        self.values.get(face).copied().flatten()
    }

    pub fn defined(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|t| (i, t)))
    }

    /// Distinct values, sorted.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.defined().map(|(_, t)| t).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

pub fn orientation_field(g: &BondGraph, fs: &FaceSet) -> OrientationField {
    let values = fs
        .faces
        .iter()
        .map(|f| {
            if f.is_triangular {
                face_orientation(g, f).ok()
            } else {
                None
            }
        })
        .collect();
    OrientationField { values }
}

/// Difference of two orientations modulo the `pi/3` lattice period.
pub fn orientation_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(FRAC_PI_3);
    d.min(FRAC_PI_3 - d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grain {
    /// Face indices, ascending.
    pub faces: Vec<usize>,
    /// Orientation of the lowest-index face.
    pub theta: f64,
    pub area: f64,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrainPartition {
    pub grains: Vec<Grain>,
    /// Length of edges between a grain face and anything that is not a triangular face.
    pub exterior_boundary: f64,
    /// Length of edges separating faces of different grains.
    pub interior_boundary: f64,
    /// `grain[face]` for triangular faces.
    #[serde(skip)]
    pub grain_of_face: Vec<Option<usize>>,
}

/// Edge-connected clusters of triangular faces whose orientations agree within `tol_theta`.
pub fn segment_grains(field: &OrientationField, g: &BondGraph, fs: &FaceSet, tol_theta: f64) -> GrainPartition {
    let nf = fs.len();
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let sides = |e: usize| (fs.face_left_of(2 * e), fs.face_left_of(2 * e + 1));
    for e in 0..g.edge_count() {
        if let (Some(a), Some(b)) = sides(e) {
            if let (Some(ta), Some(tb)) = (field.get(a), field.get(b)) {
                if a != b && orientation_distance(ta, tb) <= tol_theta {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    // Lower index becomes the root so grain order is canonical.
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[hi] = lo;
                }
            }
        }
    }

    let mut grain_of_root = vec![usize::MAX; nf];
    let mut grains: Vec<Grain> = Vec::new();
    let mut grain_of_face = vec![None; nf];
    for (f, theta) in field.defined() {
        let r = find(&mut parent, f);
        if grain_of_root[r] == usize::MAX {
            grain_of_root[r] = grains.len();
            grains.push(Grain {
                faces: Vec::new(),
                theta,
                area: 0.0,
                component: fs.faces[f].component,
            });
        }
        let gi = grain_of_root[r];
        grains[gi].faces.push(f);
        grains[gi].area += fs.faces[f].area;
        grain_of_face[f] = Some(gi);
    }

    let eps = g.epsilon();
    let (mut exterior, mut interior) = (0usize, 0usize);
    for e in 0..g.edge_count() {
        let (a, b) = sides(e);
        let ga = a.and_then(|f| grain_of_face[f]);
        let gb = b.and_then(|f| grain_of_face[f]);
        match (ga, gb) {
            (Some(x), Some(y)) if x != y => interior += 1,
            (Some(_), None) | (None, Some(_)) => exterior += 1,
            _ => {}
        }
    }
    GrainPartition {
        grains,
        exterior_boundary: exterior as f64 * eps,
        interior_boundary: interior as f64 * eps,
        grain_of_face,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{LatticeFrame, Polygon};
    use crate::graph::{Analysis, Configuration};
    use crate::synth::{hexagon_minimizer, lattice_fill};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_6, PI};

    /// Literal argmin over a window of candidates, smallest k on ties.
    fn project_p_oracle(alpha: f64) -> i64 {
        let k0 = (alpha / FRAC_PI_3).floor() as i64;
        (k0 - 2..=k0 + 2)
            .min_by(|&x, &y| {
                let dx = (alpha - x as f64 * FRAC_PI_3).abs();
                let dy = (alpha - y as f64 * FRAC_PI_3).abs();
                dx.total_cmp(&dy).then(x.cmp(&y))
            })
            .unwrap()
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_p(0.0), 0);
        assert_eq!(project_p(FRAC_PI_6), 0);
        assert_eq!(project_p(0.6), 1);
        assert_eq!(project_p(-FRAC_PI_6), -1);
        for i in -1000..1000 {
            let a = i as f64 * 0.0123;
            assert_eq!(project_p(a), project_p_oracle(a), "alpha = {a}");
        }
    }

    #[test]
    fn orientation_examples() {
        assert_relative_eq!(orientation_from_edge_angle(0.0), FRAC_PI_2);
        assert_relative_eq!(orientation_from_edge_angle(FRAC_PI_6), 2.0 * FRAC_PI_3, epsilon = 1e-15);
        for k in -4..4 {
            let t = orientation_from_edge_angle(0.3 + k as f64 * FRAC_PI_3);
            assert_relative_eq!(t, 0.3 + FRAC_PI_2, epsilon = 1e-12);
        }
    }

    #[test]
    fn free_form_triangle_edges_agree() {
        let tri = Polygon::regular(3, 1.0 / 3f64.sqrt(), 0.41, Point2::new(0.2, 0.1)).unwrap();
        let c = Configuration::new(tri.vertices().to_vec(), 1.0).unwrap();
        let a = Analysis::new(&c).unwrap();
        let f = &a.faces.faces[0];
        let thetas: Vec<f64> = f.cycle.iter().map(|&h| orientation_from_edge_angle(a.graph.half_edge_vector(h).angle())).collect();
        for t in &thetas {
            assert_relative_eq!(*t, thetas[0], epsilon = 1e-12);
            assert!(*t > PI / 3.0 && *t <= 2.0 * PI / 3.0);
        }
        assert!(face_orientation(&a.graph, f).is_ok());
    }

    #[test]
    fn non_triangular_face_is_rejected() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let c = Configuration::new(sq.vertices().to_vec(), 1.0).unwrap();
        let a = Analysis::new(&c).unwrap();
        assert!(face_orientation(&a.graph, &a.faces.faces[0]).is_err());
    }

    #[test]
    fn hexagon_is_single_grain_at_half_pi() {
        let a = Analysis::new(&hexagon_minimizer(1, 1.0).unwrap()).unwrap();
        let field = orientation_field(&a.graph, &a.faces);
        assert_eq!(field.distinct_values(), vec![FRAC_PI_2]);
        let gp = segment_grains(&field, &a.graph, &a.faces, DEFAULT_TOL_THETA);
        assert_eq!(gp.grains.len(), 1);
        assert_eq!(gp.interior_boundary, 0.0);
        assert_eq!(gp.exterior_boundary, 6.0);
        assert_relative_eq!(gp.grains[0].area, 6.0 * 3f64.sqrt() / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn theta_near_branch_cut_stays_one_grain() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let c = lattice_fill(&sq, 2.0 * FRAC_PI_3, 0.1, Point2::ORIGIN).unwrap();
        let a = Analysis::new(&c).unwrap();
        let field = orientation_field(&a.graph, &a.faces);
        // Perturb alternate faces across the pi/3 identification.
        let noisy = OrientationField {
            values: field
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| v.map(|t| if i % 2 == 0 { t } else { t - FRAC_PI_3 + 1e-7 }))
                .collect(),
        };
        let gp = segment_grains(&noisy, &a.graph, &a.faces, DEFAULT_TOL_THETA);
        assert_eq!(gp.grains.len(), 1);
    }

    #[test]
    fn rigid_rotation_shifts_orientation() {
        let hex = hexagon_minimizer(2, 1.0).unwrap();
        let free = Configuration::new(hex.points().to_vec(), 1.0).unwrap();
        for delta in [-0.4, -0.1, 0.05, 0.3, 0.5] {
            let moved = free.transformed(delta, Point2::new(1.0, 2.0)).unwrap();
            let a = Analysis::new(&moved).unwrap();
            let field = orientation_field(&a.graph, &a.faces);
            for (_, t) in field.defined() {
                assert_relative_eq!(t, FRAC_PI_2 + delta, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn frame_orientation_is_identity_in_range() {
        for t in [PI / 3.0 + 1e-12, 1.2, FRAC_PI_2, 2.0 * FRAC_PI_3] {
            assert_eq!(frame_orientation(t), t);
        }
        assert_relative_eq!(frame_orientation(FRAC_PI_2 + FRAC_PI_3), FRAC_PI_2, epsilon = 1e-15);
        let _ = LatticeFrame::new(Point2::ORIGIN, 1.0, 1.0);
    }
}
