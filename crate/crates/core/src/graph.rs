//! Bond graph construction, face enumeration, edge classes and Euler characteristic.
//!
//! Half-edge `h` belongs to edge `h / 2`; even ids run from the lower to the
//! higher vertex index. Faces lie to the left of their half-edges and are
//! traced by turning to the next bond clockwise at every vertex, so bounded
//! faces come out counterclockwise and the unbounded side of each connected
//! component is its single cycle of smallest signed area.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    bbox, lattice_dist2, point_in_ring, segments_cross_properly, signed_area, Containment, LatticeFrame, Point2,
};

/// Lattice provenance of one particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeIndex {
    pub frame: usize,
    pub a: i64,
    pub b: i64,
}

/// Default bond tolerance relative to epsilon.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-9;

/// A finite particle set with interaction radius `epsilon`.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    points: Vec<Point2>,
    lattice: Vec<Option<LatticeIndex>>,
    frames: Vec<LatticeFrame>,
    epsilon: f64,
    tolerance: f64,
}

impl Configuration {
    pub fn new(points: Vec<Point2>, epsilon: f64) -> Result<Self> {
        Self::with_tolerance(points, epsilon, DEFAULT_RELATIVE_TOLERANCE * epsilon)
    }

    pub fn with_tolerance(points: Vec<Point2>, epsilon: f64, tolerance: f64) -> Result<Self> {
        check_scales(epsilon, tolerance)?;
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("particle {i} has non-finite coordinates")));
        }
        Ok(Configuration {
            points,
            lattice: Vec::new(),
            frames: Vec::new(),
            epsilon,
            tolerance,
        })
    }

    /// Particles on one or more lattice frames; positions are embedded from the indices.
    pub fn from_lattice(frames: Vec<LatticeFrame>, indices: Vec<LatticeIndex>, epsilon: f64) -> Result<Self> {
        let points = indices
            .iter()
            .map(|ix| {
                frames
                    .get(ix.frame)
                    .map(|f| f.embed(ix.a, ix.b))
                    .ok_or_else(|| Error::invalid(format!("unknown lattice frame {}", ix.frame)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut c = Configuration::new(points, epsilon)?;
        c.attach_lattice(frames, indices.into_iter().map(Some).collect())?;
        Ok(c)
    }

    /// Attach exact provenance to existing positions (e.g. read back from a file).
    pub fn attach_lattice(&mut self, frames: Vec<LatticeFrame>, lattice: Vec<Option<LatticeIndex>>) -> Result<()> {
        if lattice.len() != self.points.len() {
            return Err(Error::invalid("lattice provenance length differs from particle count"));
        }
        for (i, ix) in lattice.iter().enumerate() {
            if let Some(ix) = ix {
                let f = frames
                    .get(ix.frame)
                    .ok_or_else(|| Error::invalid(format!("unknown lattice frame {}", ix.frame)))?;
                if (f.spacing - self.epsilon).abs() > self.tolerance {
                    return Err(Error::invalid("lattice spacing differs from epsilon"));
                }
                let d = f.embed(ix.a, ix.b).dist(self.points[i]);
                if d > 1e-6 * self.epsilon {
                    return Err(Error::invalid(format!(
                        "particle {i} lies {d} away from its lattice site"
                    )));
                }
            }
        }
        self.frames = frames;
        self.lattice = lattice;
        Ok(())
    }

    pub fn empty(epsilon: f64) -> Result<Self> {
        Configuration::new(Vec::new(), epsilon)
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn set_tolerance(&mut self, tolerance: f64) -> Result<()> {
        check_scales(self.epsilon, tolerance)?;
        self.tolerance = tolerance;
        Ok(())
    }

    pub fn frames(&self) -> &[LatticeFrame] {
        &self.frames
    }

    pub fn lattice_index(&self, i: usize) -> Option<LatticeIndex> {
        self.lattice.get(i).copied().flatten()
    }

    /// Every particle carries lattice provenance.
    pub fn is_exact(&self) -> bool {
        !self.lattice.is_empty() && self.lattice.iter().all(Option::is_some)
    }

    /// Same particles with every coordinate and epsilon scaled by `s`.
    pub fn scaled(&self, s: f64) -> Result<Configuration> {
        let mut c = Configuration::with_tolerance(
            self.points.iter().map(|&p| p * s).collect(),
            self.epsilon * s,
            self.tolerance * s,
        )?;
        if !self.frames.is_empty() {
            let frames = self
                .frames
                .iter()
                .map(|f| LatticeFrame::new(f.origin * s, f.angle, f.spacing * s))
                .collect();
            c.attach_lattice(frames, self.lattice.clone())?;
        }
        Ok(c)
    }

    /// Rigid motion `p -> R(angle) p + shift`; lattice provenance is carried along.
    pub fn transformed(&self, angle: f64, shift: Point2) -> Result<Configuration> {
        let mut c = Configuration::with_tolerance(
            self.points.iter().map(|p| p.rotate(angle) + shift).collect(),
            self.epsilon,
            self.tolerance,
        )?;
        if !self.frames.is_empty() {
            let frames = self
                .frames
                .iter()
                .map(|f| LatticeFrame::new(f.origin.rotate(angle) + shift, f.angle + angle, f.spacing))
                .collect();
            c.attach_lattice(frames, self.lattice.clone())?;
        }
        Ok(c)
    }
}

fn check_scales(epsilon: f64, tolerance: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(tolerance.is_finite() && tolerance >= 0.0 && tolerance < 0.5 * epsilon) {
        return Err(Error::invalid(format!(
            "tolerance must lie in [0, epsilon/2), got {tolerance}"
        )));
    }
    Ok(())
}

enum Pair {
    Bond,
    Apart,
    Overlap(f64),
}

/// Planar bond graph with rotation system.
#[derive(Clone, Debug)]
pub struct BondGraph {
    config: Configuration,
    edges: Vec<[usize; 2]>,
    rotation: Vec<Vec<usize>>,
    rot_pos: Vec<usize>,
    component: Vec<usize>,
    n_components: usize,
}

impl BondGraph {
    pub fn configuration(&self) -> &Configuration {
        &self.config
    }

    pub fn points(&self) -> &[Point2] {
        &self.config.points
    }

    pub fn epsilon(&self) -> f64 {
        self.config.epsilon
    }

    pub fn vertex_count(&self) -> usize {
        self.config.points.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn origin(&self, h: usize) -> usize {
        self.edges[h / 2][h & 1]
    }

    pub fn target(&self, h: usize) -> usize {
        self.edges[h / 2][1 - (h & 1)]
    }

    pub fn twin(h: usize) -> usize {
        h ^ 1
    }

    /// Outgoing half-edges of `v`, counterclockwise by direction.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Successor of `h` along the face on its left.
    pub fn next(&self, h: usize) -> usize {
        let v = self.target(h);
        let around = &self.rotation[v];
        let pos = self.rot_pos[Self::twin(h)];
        around[(pos + around.len() - 1) % around.len()]
    }

    pub fn component(&self, v: usize) -> usize {
        self.component[v]
    }

    pub fn component_count(&self) -> usize {
        self.n_components
    }

    pub fn half_edge_vector(&self, h: usize) -> Point2 {
        self.config.points[self.target(h)] - self.config.points[self.origin(h)]
    }
}

/// Bonds between all pairs at distance epsilon (within tolerance), found by spatial hashing.
pub fn build_bond_graph(c: &Configuration) -> Result<BondGraph> {
    let eps = c.epsilon;
    let tol = c.tolerance;
    let cell = eps + tol;
    let key = |p: Point2| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::with_capacity(c.points.len());
    for (i, &p) in c.points.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }

    let relation = |i: usize, j: usize| -> Pair {
        if let (Some(x), Some(y)) = (c.lattice_index(i), c.lattice_index(j)) {
            if x.frame == y.frame {
                return match lattice_dist2(x.a - y.a, x.b - y.b) {
                    0 => Pair::Overlap(0.0),
                    1 => Pair::Bond,
                    _ => Pair::Apart,
                };
            }
        }
        let d = c.points[i].dist(c.points[j]);
        if d < eps - tol {
            Pair::Overlap(d)
        } else if d <= eps + tol {
            Pair::Bond
        } else {
            Pair::Apart
        }
    };

    let mut edges = Vec::new();
    for (i, &p) in c.points.iter().enumerate() {
        let (kx, ky) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = grid.get(&(kx + dx, ky + dy)) else {
                    continue;
                };
                for &j in bucket {
                    if j <= i {
                        continue;
                    }
                    match relation(i, j) {
                        Pair::Bond => edges.push([i, j]),
                        Pair::Apart => {}
                        Pair::Overlap(distance) => {
                            return Err(Error::Overlap {
                                i,
                                j,
                                distance,
                                epsilon: eps,
                            })
                        }
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(assemble(c.clone(), edges))
}

fn assemble(config: Configuration, edges: Vec<[usize; 2]>) -> BondGraph {
    let n = config.points.len();
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &[i, j]) in edges.iter().enumerate() {
        rotation[i].push(2 * e);
        rotation[j].push(2 * e + 1);
    }
    let pts = &config.points;
    let dir = |h: usize| {
        let e = edges[h / 2];
        let (o, t) = if h & 1 == 0 { (e[0], e[1]) } else { (e[1], e[0]) };
        (pts[t] - pts[o]).angle()
    };
    let mut rot_pos = vec![0; 2 * edges.len()];
    for around in rotation.iter_mut() {
        around.sort_by(|&a, &b| dir(a).total_cmp(&dir(b)));
        debug_assert!(around.windows(2).all(|w| dir(w[0]) < dir(w[1])));
        for (p, &h) in around.iter().enumerate() {
            rot_pos[h] = p;
        }
    }

    let mut component = vec![usize::MAX; n];
    let mut n_components = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if component[s] != usize::MAX {
            continue;
        }
        component[s] = n_components;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &h in &rotation[v] {
                let e = edges[h / 2];
                let w = if e[0] == v { e[1] } else { e[0] };
                if component[w] == usize::MAX {
                    component[w] = n_components;
                    stack.push(w);
                }
            }
        }
        n_components += 1;
    }

    BondGraph {
        config,
        edges,
        rotation,
        rot_pos,
        component,
        n_components,
    }
}

/// What lies to the left of a traced cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleKind {
    Face(usize),
    /// The unbounded side of a connected component.
    Exterior,
    /// A bounded cycle whose enclosed region holds another component. Such
    /// ring-shaped regions are not faces.
    Enclosure,
}

#[derive(Clone, Debug)]
pub struct Cycle {
    pub half_edges: Vec<usize>,
    pub signed_area: f64,
    pub component: usize,
    pub kind: CycleKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceRecord {
    /// Boundary half-edges, rotated so the smallest id comes first.
    pub cycle: Vec<usize>,
    /// Origins of the cycle half-edges; vertices may repeat.
    pub vertices: Vec<usize>,
    pub is_triangular: bool,
    /// Edges with this face on both sides.
    pub inner_wire_edges: Vec<usize>,
    /// Boundary ring with slits removed.
    pub region: Vec<Point2>,
    pub area: f64,
    /// De Giorgi perimeter in units of epsilon (slits excluded).
    pub perimeter_units: usize,
    pub component: usize,
}

impl FaceRecord {
    /// Vertex-cycle length `k`.
    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }
}

#[derive(Clone, Debug)]
pub struct FaceSet {
    pub faces: Vec<FaceRecord>,
    pub triangular: Vec<usize>,
    pub non_triangular: Vec<usize>,
    pub cycles: Vec<Cycle>,
    cycle_of: Vec<usize>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// The cycle containing half-edge `h`.
    pub fn cycle_of(&self, h: usize) -> usize {
        self.cycle_of[h]
    }

    /// Face to the left of half-edge `h`, if any.
    pub fn face_left_of(&self, h: usize) -> Option<usize> {
        match self.cycles[self.cycle_of[h]].kind {
            CycleKind::Face(f) => Some(f),
            _ => None,
        }
    }
}

/// Trace every half-edge orbit and keep the bounded, point-free ones as faces.
pub fn enumerate_faces(g: &BondGraph) -> Result<FaceSet> {
    check_no_crossings(g)?;
    let nh = g.half_edge_count();
    let pts = g.points();
    let mut cycle_of = vec![usize::MAX; nh];
    let mut cycles: Vec<Cycle> = Vec::new();
    for start in 0..nh {
        if cycle_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut hs = Vec::new();
        let mut h = start;
        loop {
            if cycle_of[h] != usize::MAX {
                return Err(Error::NonPlanar("half-edge orbit revisits a traced half-edge".into()));
            }
            cycle_of[h] = id;
            hs.push(h);
            h = g.next(h);
            if h == start {
                break;
            }
        }
        let ring: Vec<Point2> = hs.iter().map(|&h| pts[g.origin(h)]).collect();
        cycles.push(Cycle {
            signed_area: signed_area(&ring),
            component: g.component(g.origin(start)),
            kind: CycleKind::Face(usize::MAX),
            half_edges: hs,
        });
    }

    // Per component: Euler's formula on the sphere, and the exterior cycle.
    let nc = g.component_count();
    let mut verts = vec![0i64; nc];
    let mut edges = vec![0i64; nc];
    let mut ncyc = vec![0i64; nc];
    let mut exterior = vec![usize::MAX; nc];
    for v in 0..g.vertex_count() {
        verts[g.component(v)] += 1;
    }
    for &[i, _] in g.edges() {
        edges[g.component(i)] += 1;
    }
    for (id, cy) in cycles.iter().enumerate() {
        let c = cy.component;
        ncyc[c] += 1;
        if exterior[c] == usize::MAX || cy.signed_area < cycles[exterior[c]].signed_area {
            exterior[c] = id;
        }
    }
    for c in 0..nc {
        if edges[c] > 0 && verts[c] - edges[c] + ncyc[c] != 2 {
            return Err(Error::NonPlanar(format!(
                "component {c}: V - E + F = {} != 2",
                verts[c] - edges[c] + ncyc[c]
            )));
        }
    }

    // Representative particle and bounding box of each component.
    let mut rep = vec![usize::MAX; nc];
    let mut members: Vec<Vec<Point2>> = vec![Vec::new(); nc];
    for v in 0..g.vertex_count() {
        let c = g.component(v);
        if rep[c] == usize::MAX {
            rep[c] = v;
        }
        members[c].push(pts[v]);
    }
    let boxes: Vec<(Point2, Point2)> = members.iter().map(|m| bbox(m)).collect();

    let mut faces = Vec::new();
    for (id, cy) in cycles.iter_mut().enumerate() {
        if exterior[cy.component] == id {
            cy.kind = CycleKind::Exterior;
            continue;
        }
        let ring: Vec<Point2> = cy.half_edges.iter().map(|&h| pts[g.origin(h)]).collect();
        if cy.half_edges.len() > 3 && nc > 1 && encloses_other_component(&ring, cy.component, &rep, &boxes, pts) {
            cy.kind = CycleKind::Enclosure;
            continue;
        }
        cy.kind = CycleKind::Face(faces.len());
        faces.push(face_record(g, cy, id, &cycle_of));
    }

    let triangular = (0..faces.len()).filter(|&f| faces[f].is_triangular).collect();
    let non_triangular = (0..faces.len()).filter(|&f| !faces[f].is_triangular).collect();
    Ok(FaceSet {
        faces,
        triangular,
        non_triangular,
        cycles,
        cycle_of,
    })
}

/// Bonds have length at most `eps + tol`, so crossing bonds have nearby midpoints.
fn check_no_crossings(g: &BondGraph) -> Result<()> {
    let pts = g.points();
    let cell = g.epsilon() + g.configuration().tolerance();
    let seg = |e: usize| (pts[g.edges[e][0]], pts[g.edges[e][1]]);
    let key = |e: usize| {
        let (a, b) = seg(e);
        let m = a.lerp(b, 0.5);
        ((m.x / cell).floor() as i64, (m.y / cell).floor() as i64)
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for e in 0..g.edge_count() {
        grid.entry(key(e)).or_default().push(e);
    }
    for e in 0..g.edge_count() {
        let (kx, ky) = key(e);
        let (a, b) = seg(e);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &f in grid.get(&(kx + dx, ky + dy)).into_iter().flatten() {
                    if f <= e {
                        continue;
                    }
                    let (c, d) = seg(f);
                    if segments_cross_properly(a, b, c, d) {
                        return Err(Error::NonPlanar(format!("bonds {e} and {f} cross")));
                    }
                }
            }
        }
    }
    Ok(())
}

fn encloses_other_component(
    ring: &[Point2],
    own: usize,
    rep: &[usize],
    boxes: &[(Point2, Point2)],
    pts: &[Point2],
) -> bool {
    let (lo, hi) = bbox(ring);
    (0..rep.len()).any(|c| {
        if c == own {
            return false;
        }
        let (blo, bhi) = boxes[c];
        if blo.x < lo.x || blo.y < lo.y || bhi.x > hi.x || bhi.y > hi.y {
            return false;
        }
        point_in_ring(pts[rep[c]], ring, 0.0) == Containment::Inside
    })
}

fn face_record(g: &BondGraph, cy: &Cycle, id: usize, cycle_of: &[usize]) -> FaceRecord {
    let mut cycle = cy.half_edges.clone();
    let min_pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, &h)| h)
        .map(|(p, _)| p)
        .unwrap_or(0);
    cycle.rotate_left(min_pos);

    let is_slit = |h: usize| cycle_of[BondGraph::twin(h)] == id;
    let mut inner_wire_edges: Vec<usize> = cycle.iter().filter(|&&h| is_slit(h)).map(|&h| h / 2).collect();
    inner_wire_edges.sort_unstable();
    inner_wire_edges.dedup();

    let pts = g.points();
    let region: Vec<Point2> = cycle
        .iter()
        .filter(|&&h| !is_slit(h))
        .map(|&h| pts[g.origin(h)])
        .collect();
    let perimeter_units = cycle.len() - 2 * inner_wire_edges.len();
    FaceRecord {
        vertices: cycle.iter().map(|&h| g.origin(h)).collect(),
        is_triangular: cycle.len() == 3,
        area: signed_area(&region),
        region,
        perimeter_units,
        inner_wire_edges,
        component: cy.component,
        cycle,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    /// Between two triangular faces.
    InteriorTriTri,
    /// One triangular face, the other side not a face.
    ExtTri,
    /// One non-triangular face, the other side not a face.
    ExtOther,
    /// A triangular and a non-triangular face.
    Int1,
    /// Two distinct non-triangular faces.
    Int2,
    /// No face, or the same face on both sides.
    Wire,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub interior_tri_tri: usize,
    pub ext_tri: usize,
    pub ext_other: usize,
    pub int1: usize,
    pub int2: usize,
    pub wire: usize,
}

impl EdgeCounts {
    pub fn total(&self) -> usize {
        self.interior_tri_tri + self.ext_tri + self.ext_other + self.int1 + self.int2 + self.wire
    }

    pub fn exterior(&self) -> usize {
        self.ext_tri + self.ext_other
    }
}

#[derive(Clone, Debug)]
pub struct EdgeClassification {
    pub labels: Vec<EdgeClass>,
    pub counts: EdgeCounts,
}

pub fn classify_edges(g: &BondGraph, f: &FaceSet) -> EdgeClassification {
    let mut counts = EdgeCounts::default();
    let labels = (0..g.edge_count())
        .map(|e| {
            let tri = |face: usize| f.faces[face].is_triangular;
            let label = match (f.face_left_of(2 * e), f.face_left_of(2 * e + 1)) {
                (None, None) => EdgeClass::Wire,
                (Some(a), Some(b)) if a == b => EdgeClass::Wire,
                (Some(a), None) | (None, Some(a)) => {
                    if tri(a) {
                        EdgeClass::ExtTri
                    } else {
                        EdgeClass::ExtOther
                    }
                }
                (Some(a), Some(b)) => match (tri(a), tri(b)) {
                    (true, true) => EdgeClass::InteriorTriTri,
                    (false, false) => EdgeClass::Int2,
                    _ => EdgeClass::Int1,
                },
            };
            match label {
                EdgeClass::InteriorTriTri => counts.interior_tri_tri += 1,
                EdgeClass::ExtTri => counts.ext_tri += 1,
                EdgeClass::ExtOther => counts.ext_other += 1,
                EdgeClass::Int1 => counts.int1 += 1,
                EdgeClass::Int2 => counts.int2 += 1,
                EdgeClass::Wire => counts.wire += 1,
            }
            label
        })
        .collect();
    EdgeClassification { labels, counts }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerData {
    pub v0: i64,
    pub v1: i64,
    pub v2: i64,
    pub chi: i64,
}

pub fn euler_characteristic(g: &BondGraph, f: &FaceSet) -> EulerData {
    let v0 = g.vertex_count() as i64;
    let v1 = g.edge_count() as i64;
    let v2 = f.len() as i64;
    EulerData {
        v0,
        v1,
        v2,
        chi: v0 - v1 + v2,
    }
}

/// Bond graph, faces, edge classes and Euler data of one configuration.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub graph: BondGraph,
    pub faces: FaceSet,
    pub edges: EdgeClassification,
    pub euler: EulerData,
}

impl Analysis {
    pub fn new(c: &Configuration) -> Result<Analysis> {
        let graph = build_bond_graph(c)?;
        let faces = enumerate_faces(&graph)?;
        let edges = classify_edges(&graph, &faces);
        let euler = euler_characteristic(&graph, &faces);
        Ok(Analysis {
            graph,
            faces,
            edges,
            euler,
        })
    }
}
