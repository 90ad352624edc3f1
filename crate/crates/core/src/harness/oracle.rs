//! Independent face oracle: rasterize the bond graph and compare the bounded
//! pixel regions against the enumerated faces.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{bbox, point_in_ring, Containment, Point2};
use crate::graph::{Analysis, Configuration, CycleKind};

/// Largest configuration the oracle accepts.
pub const MAX_POINTS: usize = 12;

/// Pixels per spacing used by the acceptance checks.
pub const DEFAULT_RESOLUTION: usize = 256;

/// Relative area mismatch tolerated between a raster region and its face.
pub const AREA_TOLERANCE: f64 = 0.01;

/// Regions below this fraction of a lattice triangle are junction artefacts.
const SLIVER_FRACTION: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceMatch {
    pub face: usize,
    pub area: f64,
    pub raster_area: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub pixels_per_epsilon: usize,
    pub raster_faces: usize,
    pub raster_enclosures: usize,
    pub slivers: usize,
    pub faces: usize,
    pub enclosures: usize,
    pub matches: Vec<FaceMatch>,
    pub max_area_error: f64,
}

struct Raster {
    w: usize,
    h: usize,
    wall: Vec<bool>,
}

impl Raster {
    fn idx(&self, x: i64, y: i64) -> Option<usize> {
        (x >= 0 && y >= 0 && (x as usize) < self.w && (y as usize) < self.h).then(|| y as usize * self.w + x as usize)
    }

    fn line(&mut self, (mut x0, mut y0): (i64, i64), (x1, y1): (i64, i64)) {
        let (dx, dy) = ((x1 - x0).abs(), -(y1 - y0).abs());
        let (sx, sy) = ((x1 - x0).signum(), (y1 - y0).signum());
        let mut err = dx + dy;
        loop {
            if let Some(i) = self.idx(x0, y0) {
                self.wall[i] = true;
            }
            if x0 == x1 && y0 == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x0 += sx;
            }
            if e2 <= dx {
                err += dx;
                y0 += sy;
            }
        }
    }

    fn neighbours(&self, i: usize, eight: bool) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = ((i % self.w) as i64, (i / self.w) as i64);
        const N4: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
        const D4: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
        N4.iter()
            .chain(if eight { &D4[..] } else { &[] })
            .filter_map(move |&(dx, dy)| self.idx(x + dx, y + dy))
    }
}

/// Rasterize `c` at `resolution` pixels per spacing and check that bounded
/// hole-free regions correspond one-to-one with faces, with matching areas,
/// and that regions with holes match the enclosure cycles.
pub fn oracle_face_check(c: &Configuration, resolution: usize) -> Result<OracleReport> {
    if c.len() > MAX_POINTS {
        return Err(Error::invalid(format!("oracle accepts at most {MAX_POINTS} points")));
    }
    if resolution < 16 {
        return Err(Error::invalid("oracle resolution must be at least 16"));
    }
    let a = Analysis::new(c)?;
    let px = c.epsilon() / resolution as f64;
    let mut report = OracleReport {
        pixels_per_epsilon: resolution,
        raster_faces: 0,
        raster_enclosures: 0,
        slivers: 0,
        faces: a.faces.len(),
        enclosures: a.faces.cycles.iter().filter(|c| c.kind == CycleKind::Enclosure).count(),
        matches: Vec::new(),
        max_area_error: 0.0,
    };
    let mut claimed = vec![false; a.faces.len()];
    for group in component_groups(&a, c.epsilon()) {
        scan_group(&a, &group, px, resolution, &mut report, &mut claimed)?;
    }
    if report.raster_faces != report.faces {
        return Err(Error::Consistency(format!(
            "{} raster faces but {} enumerated faces",
            report.raster_faces, report.faces
        )));
    }
    if report.raster_enclosures != report.enclosures {
        return Err(Error::Consistency(format!(
            "{} raster regions with holes but {} enclosure cycles",
            report.raster_enclosures, report.enclosures
        )));
    }
    if report.max_area_error > AREA_TOLERANCE {
        return Err(Error::Consistency(format!(
            "raster area differs from face area by {:.4}",
            report.max_area_error
        )));
    }
    report.matches.sort_by_key(|m| m.face);
    Ok(report)
}

/// Vertex sets of components whose padded bounding boxes chain together.
/// Regions never straddle two groups, so each group is rasterized alone.
fn component_groups(a: &Analysis, eps: f64) -> Vec<Vec<usize>> {
    let pts = a.graph.points();
    let nc = a.graph.component_count();
    let mut boxes = vec![(Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)); nc];
    for (v, p) in pts.iter().enumerate() {
        let b = &mut boxes[a.graph.component(v)];
        b.0 = Point2::new(b.0.x.min(p.x), b.0.y.min(p.y));
        b.1 = Point2::new(b.1.x.max(p.x), b.1.y.max(p.y));
    }
    let mut group: Vec<usize> = (0..nc).collect();
    let touch = |p: &(Point2, Point2), q: &(Point2, Point2)| {
        p.0.x - eps <= q.1.x && q.0.x - eps <= p.1.x && p.0.y - eps <= q.1.y && q.0.y - eps <= p.1.y
    };
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..nc {
            for j in 0..nc {
                if group[i] != group[j] && touch(&boxes[i], &boxes[j]) {
                    let (keep, drop) = (group[i].min(group[j]), group[i].max(group[j]));
                    group.iter_mut().filter(|g| **g == drop).for_each(|g| *g = keep);
                    changed = true;
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for v in 0..pts.len() {
        out[group[a.graph.component(v)]].push(v);
    }
    out.retain(|g| !g.is_empty());
    out
}

fn scan_group(
    a: &Analysis,
    members: &[usize],
    px: f64,
    resolution: usize,
    report: &mut OracleReport,
    claimed: &mut [bool],
) -> Result<()> {
    let all = a.graph.points();
    let pts: Vec<Point2> = members.iter().map(|&v| all[v]).collect();
    let pad = 4.0 * px;
    let (lo, hi) = bbox(&pts);
    let lo = lo - Point2::new(pad, pad);
    let w = ((hi.x - lo.x + pad) / px).ceil() as usize + 1;
    let h = ((hi.y - lo.y + pad) / px).ceil() as usize + 1;
    let mut r = Raster {
        w,
        h,
        wall: vec![false; w * h],
    };
    let pix = |p: Point2| (((p.x - lo.x) / px).round() as i64, ((p.y - lo.y) / px).round() as i64);
    let centre = |i: usize| lo + Point2::new((i % w) as f64 * px, (i / w) as f64 * px);
    for &p in &pts {
        r.line(pix(p), pix(p));
    }
    let mut member = vec![false; all.len()];
    members.iter().for_each(|&v| member[v] = true);
    for &[i, j] in a.graph.edges().iter().filter(|e| member[e[0]]) {
        r.line(pix(all[i]), pix(all[j]));
    }

    // 4-connected free regions.
    const NONE: usize = usize::MAX;
    let mut label = vec![NONE; w * h];
    let mut regions: Vec<(Vec<usize>, bool)> = Vec::new();
    for s in 0..w * h {
        if r.wall[s] || label[s] != NONE {
            continue;
        }
        let id = regions.len();
        let mut pixels = vec![s];
        let mut border = false;
        label[s] = id;
        let mut k = 0;
        while k < pixels.len() {
            let i = pixels[k];
            k += 1;
            let (x, y) = (i % w, i / w);
            border |= x == 0 || y == 0 || x + 1 == w || y + 1 == h;
            for n in r.neighbours(i, false) {
                if !r.wall[n] && label[n] == NONE {
                    label[n] = id;
                    pixels.push(n);
                }
            }
        }
        regions.push((pixels, border));
    }

    // Wall pixels are shared equally among the regions they touch.
    let mut share = vec![0.0; regions.len()];
    for i in (0..w * h).filter(|&i| r.wall[i]) {
        let mut touching: Vec<usize> = r.neighbours(i, true).map(|n| label[n]).filter(|&l| l != NONE).collect();
        touching.sort_unstable();
        touching.dedup();
        for &l in &touching {
            share[l] += 1.0 / touching.len() as f64;
        }
    }

    let sliver = SLIVER_FRACTION * 3f64.sqrt() / 4.0 * (resolution * resolution) as f64;
    for (id, (pixels, border)) in regions.iter().enumerate() {
        if *border {
            continue;
        }
        let raster_area = pixels.len() as f64 + share[id];
        if raster_area < sliver {
            report.slivers += 1;
            continue;
        }
        if has_hole(&r, &label, id, pixels) {
            report.raster_enclosures += 1;
            continue;
        }
        report.raster_faces += 1;
        let inside = |i: usize| label[i] == id;
        let deep = pixels
            .iter()
            .copied()
            .find(|&i| {
                let (x, y) = ((i % w) as i64, (i / w) as i64);
                (-2..=2).all(|dx| (-2..=2).all(|dy| r.idx(x + dx, y + dy).is_some_and(inside)))
            })
            .unwrap_or(pixels[0]);
        let q = centre(deep);
        let hits: Vec<usize> = (0..a.faces.len())
            .filter(|&f| point_in_ring(q, &a.faces.faces[f].region, 0.5 * px) == Containment::Inside)
            .collect();
        let [f] = hits[..] else {
            return Err(Error::Consistency(format!(
                "raster region at ({:.4}, {:.4}) lies in {} enumerated faces",
                q.x,
                q.y,
                hits.len()
            )));
        };
        if std::mem::replace(&mut claimed[f], true) {
            return Err(Error::Consistency(format!("face {f} matches two raster regions")));
        }
        let area = a.faces.faces[f].area;
        let raster_area = raster_area * px * px;
        let relative_error = (raster_area - area).abs() / area;
        report.max_area_error = report.max_area_error.max(relative_error);
        report.matches.push(FaceMatch {
            face: f,
            area,
            raster_area,
            relative_error,
        });
    }
    Ok(())
}

/// Whether the complement of region `id` has a bounded 8-connected part.
/// The flood runs inside the region's bounding box grown by one pixel,
/// whose frame lies entirely outside the region.
fn has_hole(r: &Raster, label: &[usize], id: usize, pixels: &[usize]) -> bool {
    let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
    for &i in pixels {
        let (x, y) = (i % r.w, i / r.w);
        (x0, y0, x1, y1) = (x0.min(x), y0.min(y), x1.max(x), y1.max(y));
    }
    let (x0, y0, x1, y1) = (x0 - 1, y0 - 1, x1 + 1, y1 + 1);
    let bw = x1 - x0 + 1;
    let local = |i: usize| (i / r.w - y0) * bw + (i % r.w - x0);
    let within = |i: usize| (x0..=x1).contains(&(i % r.w)) && (y0..=y1).contains(&(i / r.w));
    let mut seen = vec![false; bw * (y1 - y0 + 1)];
    let start = y0 * r.w + x0;
    seen[local(start)] = true;
    let mut queue = VecDeque::from([start]);
    let mut reached = 0usize;
    while let Some(i) = queue.pop_front() {
        reached += 1;
        for n in r.neighbours(i, true) {
            if within(n) && label[n] != id && !seen[local(n)] {
                seen[local(n)] = true;
                queue.push_back(n);
            }
        }
    }
    reached < seen.len() - pixels.len()
}
