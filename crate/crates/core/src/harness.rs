//! Epsilon sweeps and experiments: single-crystal limits, polycrystal bounds,
//! the two-hexagon overlap threshold and tessellation perimeters.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::energy::identity_report;
use crate::error::{Error, Result};
use crate::finsler::{aniso_perimeter, partition_perimeter, wulff, Anisotropy, FinslerHex};
use crate::geom::{segment_length_vs_convex, shared_boundary_length, AngleInterval, Point2, Polygon};
use crate::graph::{Analysis, Configuration};
use crate::orient::{orientation_field, segment_grains, DEFAULT_TOL_THETA};
use crate::synth::{
    hexagon_minimizer, lattice_fill, polycrystal_fill, tile_fill, tile_union_perimeter, two_hexagon_config,
    two_hexagon_geometry, GrainSpec, HexagonSplit, TileFamily,
};

pub mod oracle;

pub use oracle::{oracle_face_check, OracleReport, DEFAULT_RESOLUTION};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "STICKYDISCS_THREADS";

/// Bound assertions allow `SLACK_FACTOR * eps * Per(Omega)`.
pub const SLACK_FACTOR: f64 = 10.0;

/// Empirical mass must be within `MASS_FACTOR * eps` of the area.
pub const MASS_FACTOR: f64 = 5.0;

pub fn slack(eps: f64, per_omega: f64) -> f64 {
    SLACK_FACTOR * eps * per_omega
}

/// Run `f` on a pool sized by `STICKYDISCS_THREADS` (all cores when unset).
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// SHA-256 of the canonical JSON encoding.
pub fn config_hash<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("spec types serialize");
    hex::encode(Sha256::digest(&json))
}

fn default_area() -> f64 {
    1.0
}

fn default_tol_theta() -> f64 {
    DEFAULT_TOL_THETA
}

/// The macroscopic shape of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    Polygon {
        vertices: Vec<Point2>,
    },
    /// `sqrt(area) W_theta + center`.
    Wulff {
        theta: f64,
        #[serde(default = "default_area")]
        area: f64,
        #[serde(default)]
        center: Point2,
    },
    /// Regular hexagon of side 1 realized exactly by `hexagon_minimizer(1/eps)`.
    HexagonMinimizer,
    TwoHexagons {
        theta1: f64,
        theta2: f64,
        tau: Point2,
    },
    Grains {
        grains: Vec<GrainSpec>,
    },
}

impl ShapeSpec {
    /// The single region of a one-grain shape.
    pub fn region(&self) -> Result<Polygon> {
        match self {
            ShapeSpec::Polygon { vertices } => Polygon::new(vertices.clone()),
            ShapeSpec::Wulff { theta, area, center } => crate::finsler::wulff_scaled(*theta, *area, *center),
            ShapeSpec::HexagonMinimizer => Polygon::regular(6, 1.0, 0.0, Point2::ORIGIN),
            _ => Err(Error::invalid("shape has several grains; use the polycrystal sweep")),
        }
    }

    /// Grain decomposition for polycrystal sweeps.
    pub fn grains(&self, theta: Option<f64>) -> Result<Vec<GrainSpec>> {
        match self {
            ShapeSpec::Grains { grains } => Ok(grains.clone()),
            ShapeSpec::TwoHexagons { theta1, theta2, tau } => Ok(two_hexagon_geometry(*theta1, *theta2, *tau)?.grains),
            _ => {
                let region = self.region()?;
                let theta = theta.or(match self {
                    ShapeSpec::Wulff { theta, .. } => Some(*theta),
                    _ => None,
                });
                let theta = theta.ok_or_else(|| Error::invalid("orientation theta is required"))?;
                Ok(vec![GrainSpec {
                    region,
                    theta,
                    offset: Point2::ORIGIN,
                }])
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub shape: ShapeSpec,
    /// Lattice orientation of a single crystal; Wulff shapes default to their own.
    #[serde(default)]
    pub theta: Option<f64>,
    /// Decreasing lattice spacings.
    pub epsilons: Vec<f64>,
    /// Lattice phases; empty means the origin only.
    #[serde(default)]
    pub offsets: Vec<Point2>,
    /// Extra phases drawn uniformly from one lattice cell.
    #[serde(default)]
    pub random_offsets: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol_theta")]
    pub tol_theta: f64,
    /// Grain separation; `None` means `eps`.
    #[serde(default)]
    pub gap: Option<f64>,
}

impl SweepSpec {
    pub fn new(shape: ShapeSpec, theta: Option<f64>, epsilons: Vec<f64>) -> Self {
        SweepSpec {
            shape,
            theta,
            epsilons,
            offsets: Vec::new(),
            random_offsets: 0,
            seed: 0,
            tol_theta: DEFAULT_TOL_THETA,
            gap: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return Err(Error::invalid("epsilon schedule is empty"));
        }
        if self.epsilons.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(Error::invalid("epsilon values must be positive"));
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid("epsilon schedule must be strictly decreasing"));
        }
        if !(self.tol_theta >= 0.0) {
            return Err(Error::invalid("tol_theta must be non-negative"));
        }
        Ok(())
    }

    /// Fixed offsets followed by seeded random ones, in fractional cell coordinates scaled by `eps`.
    fn offsets_for(&self, eps: f64) -> Vec<Point2> {
        let mut out = if self.offsets.is_empty() {
            vec![Point2::ORIGIN]
        } else {
            self.offsets.clone()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random_offsets {
            let (s, t): (f64, f64) = (rng.gen(), rng.gen());
            out.push((Point2::new(1.0, 0.0) * s + Point2::new(0.5, 3f64.sqrt() / 2.0) * t) * eps);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub offset: Point2,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "E")]
    pub energy: i64,
    pub surplus: f64,
    pub target: f64,
    pub relative_error: f64,
    /// `eps^2 (sqrt(3)/2) N`.
    pub mass: f64,
    pub mass_error: f64,
    pub mass_ok: bool,
    pub grains: usize,
    pub components: usize,
    pub interior_boundary: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upper_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bounds_hold: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub spec_hash: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_seconds: Option<f64>,
}

impl ReportMeta {
    fn new<T: Serialize>(spec: &T) -> Self {
        ReportMeta {
            spec_hash: config_hash(spec),
            version: crate::VERSION.to_string(),
            wall_time_seconds: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub kind: String,
    pub spec: SweepSpec,
    /// `Per_{phi_theta}(Omega)` or the polycrystal upper bound.
    pub target: f64,
    pub area: f64,
    /// Euclidean perimeter of `Omega`.
    pub perimeter: f64,
    /// Rows by decreasing epsilon, then by offset.
    pub rows: Vec<SweepRow>,
    /// `max |mass - area| / eps` over the rows.
    pub mass_constant: f64,
    /// Increases of the relative error along the schedule (first offset).
    pub error_inversions: usize,
    /// Error at the smallest epsilon is at most the error at the largest and
    /// there is at most one inversion.
    pub error_trend_ok: bool,
    pub meta: ReportMeta,
}

impl SweepReport {
    pub fn rows_at(&self, eps: f64) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.epsilon == eps)
    }

    /// All mass checks and, for polycrystals, all bound checks hold.
    pub fn checks_pass(&self) -> bool {
        self.error_trend_ok && self.rows.iter().all(|r| r.mass_ok && r.bounds_hold != Some(false))
    }
}

fn empirical_mass(eps: f64, n: usize) -> f64 {
    eps * eps * 3f64.sqrt() / 2.0 * n as f64
}

struct Measured {
    n: usize,
    energy: i64,
    surplus: f64,
    grains: usize,
    components: usize,
    interior_boundary: f64,
}

/// Identity-checked energy and grain statistics; optionally require a constant field `theta`.
fn measure(c: &Configuration, tol_theta: f64, constant: Option<f64>) -> Result<Measured> {
    let a = Analysis::new(c)?;
    let report = identity_report(&a)?;
    let field = orientation_field(&a.graph, &a.faces);
    if let Some(theta) = constant {
        if let Some((f, t)) = field.defined().find(|&(_, t)| t != theta) {
            return Err(Error::Consistency(format!(
                "orientation field is not constant: face {f} has {t}, expected {theta}"
            )));
        }
    }
    let gp = segment_grains(&field, &a.graph, &a.faces, tol_theta);
    Ok(Measured {
        n: c.len(),
        energy: report.energy,
        surplus: report.surplus,
        grains: gp.grains.len(),
        components: a.graph.component_count(),
        interior_boundary: gp.interior_boundary,
    })
}

fn finish(kind: &str, spec: &SweepSpec, target: f64, area: f64, perimeter: f64, rows: Vec<SweepRow>) -> SweepReport {
    let mass_constant = rows.iter().map(|r| r.mass_error / r.epsilon).fold(0.0, f64::max);
    let first = rows.first().map(|r| r.offset);
    let errs: Vec<f64> = rows
        .iter()
        .filter(|r| Some(r.offset) == first)
        .map(|r| r.relative_error)
        .collect();
    let error_inversions = errs.windows(2).filter(|w| w[1] > w[0]).count();
    let error_trend_ok = match (errs.first(), errs.last()) {
        (Some(a), Some(b)) => b <= a && error_inversions <= 1,
        _ => false,
    };
    SweepReport {
        kind: kind.to_string(),
        spec: spec.clone(),
        target,
        area,
        perimeter,
        rows,
        mass_constant,
        error_inversions,
        error_trend_ok,
        meta: ReportMeta::new(spec),
    }
}

/// Lattice fills of one shape at one orientation, compared against `Per_{phi_theta}(Omega)`.
pub fn run_single_crystal_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let omega = spec.shape.region()?;
    let hexagon = matches!(spec.shape, ShapeSpec::HexagonMinimizer);
    let theta = match (&spec.shape, spec.theta) {
        (ShapeSpec::HexagonMinimizer, _) => FRAC_PI_2,
        (_, Some(t)) => t,
        (ShapeSpec::Wulff { theta, .. }, None) => *theta,
        _ => return Err(Error::invalid("single-crystal sweep needs theta")),
    };
    if !AngleInterval::ORIENTATION.contains(theta) {
        return Err(Error::invalid(format!("theta {theta} is outside (pi/3, 2pi/3]")));
    }
    let target = aniso_perimeter(&omega, theta)?;
    let area = omega.area();
    let jobs: Vec<(f64, Point2)> = spec
        .epsilons
        .iter()
        .flat_map(|&e| spec.offsets_for(e).into_iter().map(move |o| (e, o)))
        .collect();
    let rows = with_pool(|| {
        jobs.par_iter()
            .map(|&(eps, offset)| {
                let c = if hexagon {
                    let s = (1.0 / eps).round();
                    if (s * eps - 1.0).abs() > 1e-9 || s < 1.0 {
                        return Err(Error::invalid(format!("hexagon schedule needs eps = 1/s, got {eps}")));
                    }
                    hexagon_minimizer(s as u32, eps)?
                } else {
                    lattice_fill(&omega, theta, eps, offset)?
                };
                let m = measure(&c, spec.tol_theta, Some(theta))?;
                info!("eps {eps}: N = {}, surplus = {}", m.n, m.surplus);
                Ok(row(eps, offset, &m, target, area))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(finish("single_crystal", spec, target, area, omega.perimeter(), rows))
}

fn row(eps: f64, offset: Point2, m: &Measured, target: f64, area: f64) -> SweepRow {
    let mass = empirical_mass(eps, m.n);
    let mass_error = (mass - area).abs();
    SweepRow {
        epsilon: eps,
        offset,
        n: m.n,
        energy: m.energy,
        surplus: m.surplus,
        target,
        relative_error: (m.surplus - target).abs() / target,
        mass,
        mass_error,
        mass_ok: mass_error <= MASS_FACTOR * eps,
        grains: m.grains,
        components: m.components,
        interior_boundary: m.interior_boundary,
        lower_bound: None,
        upper_bound: None,
        slack: None,
        bounds_hold: None,
    }
}

/// Euclidean perimeter of the union and total interface length of a grain partition.
pub fn partition_geometry(grains: &[GrainSpec]) -> (f64, f64) {
    let mut interface = 0.0;
    for i in 0..grains.len() {
        for j in i + 1..grains.len() {
            let (p, q) = (&grains[i].region, &grains[j].region);
            interface += shared_boundary_length(p, q, 1e-9 * p.diameter().max(q.diameter()));
        }
    }
    let total: f64 = grains.iter().map(|g| g.region.perimeter()).sum();
    (total - 2.0 * interface, interface)
}

/// Polycrystal fills compared with `Per(Omega) + interface/2` from below and
/// `sum_j Per_{phi_{theta_j}}(omega_j)` from above.
pub fn run_polycrystal_bounds(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let grains = spec.shape.grains(spec.theta)?;
    if grains.is_empty() {
        return Err(Error::invalid("no grains"));
    }
    let (per, interface) = partition_geometry(&grains);
    let lower = per + 0.5 * interface;
    let parts: Vec<(Polygon, f64)> = grains.iter().map(|g| (g.region.clone(), g.theta)).collect();
    let upper = partition_perimeter(&parts)?;
    let area: f64 = grains.iter().map(|g| g.region.area()).sum();
    let rows = with_pool(|| {
        spec.epsilons
            .par_iter()
            .map(|&eps| {
                let c = polycrystal_fill(&grains, eps, spec.gap.unwrap_or(eps))?;
                let m = measure(&c, spec.tol_theta, None)?;
                let s = slack(eps, per);
                let mut r = row(eps, Point2::ORIGIN, &m, upper, area);
                r.lower_bound = Some(lower);
                r.upper_bound = Some(upper);
                r.slack = Some(s);
                r.bounds_hold = Some(lower <= m.surplus + s && m.surplus <= upper + s);
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(finish("polycrystal", spec, upper, area, per, rows))
}

fn default_theta_grid() -> usize {
    60
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapSpec {
    pub theta1: f64,
    pub theta2: f64,
    pub taus: Vec<Point2>,
    /// Also fill every configuration at this spacing and report its surplus.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub gap: Option<f64>,
    /// Samples of `(pi/3, 2pi/3]` for the single-crystal benchmark.
    #[serde(default = "default_theta_grid")]
    pub theta_grid: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapRow {
    pub tau: Point2,
    pub m: f64,
    pub split: String,
    /// Cheapest candidate partition: `chord`, `keep_first` or `keep_second`.
    pub candidate: String,
    pub polycrystal_bound: f64,
    pub single_crystal_benchmark: f64,
    pub benchmark_theta: f64,
    /// `(benchmark - bound) / benchmark`.
    pub relative_margin: f64,
    pub polycrystal_wins: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub surplus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grains: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub spec: OverlapSpec,
    pub rows: Vec<OverlapRow>,
    /// Largest overlap at which some partition beats every single crystal; report only.
    pub observed_crossover_m: Option<f64>,
    pub meta: ReportMeta,
}

/// `Per_phi(A \ B)` for convex `A` and `B`, from boundary pieces.
fn difference_cost(phi: &dyn Anisotropy, a: &Polygon, b: &Polygon) -> f64 {
    let outer: f64 = a
        .edges()
        .zip(a.outward_normals())
        .map(|((p, q), (n, _))| phi.eval(n) * segment_length_vs_convex(p, q, b, false))
        .sum();
    let inner: f64 = b
        .edges()
        .zip(b.outward_normals())
        .map(|((p, q), (n, _))| phi.eval(-n) * segment_length_vs_convex(p, q, a, true))
        .sum();
    outer + inner
}

/// `Per_phi(A ∪ B)` for convex `A` and `B`.
fn union_cost(phi: &dyn Anisotropy, a: &Polygon, b: &Polygon) -> f64 {
    let part = |x: &Polygon, y: &Polygon| -> f64 {
        x.edges()
            .zip(x.outward_normals())
            .map(|((p, q), (n, _))| phi.eval(n) * segment_length_vs_convex(p, q, y, false))
            .sum()
    };
    part(a, b) + part(b, a)
}

/// Minimum of `f` over `(pi/3, 2pi/3]`: grid of `n` samples plus extra points, then golden-section refinement.
fn minimize_theta(f: impl Fn(f64) -> f64, n: usize, extra: &[f64]) -> (f64, f64) {
    let step = FRAC_PI_3 / n as f64;
    let mut best = (f64::INFINITY, FRAC_PI_2);
    for t in (1..=n).map(|k| FRAC_PI_3 + step * k as f64).chain(extra.iter().copied()) {
        let v = f(t);
        if v < best.0 {
            best = (v, t);
        }
    }
    // phi_theta is pi/3-periodic in theta, so the bracket may leave the interval.
    let (mut lo, mut hi) = (best.1 - step, best.1 + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let (v, t) = if f1 <= f2 { (f1, x1) } else { (f2, x2) };
    let t = crate::geom::normalize_angle(t, AngleInterval::ORIENTATION);
    if v < best.0 {
        (v, t)
    } else {
        best
    }
}

/// For each translation: overlap area, the best two-grain bound and the best single crystal.
pub fn run_overlap_experiment(spec: &OverlapSpec) -> Result<OverlapReport> {
    if spec.theta_grid < 1 {
        return Err(Error::invalid("theta grid needs at least one sample"));
    }
    let (t1, t2) = (spec.theta1, spec.theta2);
    let (phi1, phi2) = (FinslerHex::new(t1), FinslerHex::new(t2));
    let rows = with_pool(|| {
        spec.taus
            .par_iter()
            .map(|&tau| {
                let geo = two_hexagon_geometry(t1, t2, tau)?;
                let (w1, w2) = (&geo.w1, &geo.w2);
                let mut candidates = vec![
                    ("keep_first", phi1.perimeter(w1) + difference_cost(&phi2, w2, w1)),
                    ("keep_second", difference_cost(&phi1, w1, w2) + phi2.perimeter(w2)),
                ];
                if let HexagonSplit::Chord { .. } = geo.split {
                    let parts: Vec<(Polygon, f64)> = geo.grains.iter().map(|g| (g.region.clone(), g.theta)).collect();
                    candidates.push(("chord", partition_perimeter(&parts)?));
                }
                let (candidate, bound) = candidates
                    .into_iter()
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("two candidates");
                let (bench, bench_theta) =
                    minimize_theta(|t| union_cost(&FinslerHex::new(t), w1, w2), spec.theta_grid, &[t1, t2]);
                let mut r = OverlapRow {
                    tau,
                    m: geo.m,
                    split: match geo.split {
                        HexagonSplit::Disjoint => "disjoint",
                        HexagonSplit::Chord { .. } => "chord",
                        HexagonSplit::Pieces => "pieces",
                    }
                    .to_string(),
                    candidate: candidate.to_string(),
                    polycrystal_bound: bound,
                    single_crystal_benchmark: bench,
                    benchmark_theta: bench_theta,
                    relative_margin: (bench - bound) / bench,
                    polycrystal_wins: bound < bench,
                    n: None,
                    surplus: None,
                    grains: None,
                };
                if let Some(eps) = spec.epsilon {
                    let cfg = two_hexagon_config(t1, t2, tau, eps, spec.gap.unwrap_or(eps))?;
                    let m = measure(&cfg.config, DEFAULT_TOL_THETA, None)?;
                    r.n = Some(m.n);
                    r.surplus = Some(m.surplus);
                    r.grains = Some(m.grains);
                }
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let observed_crossover_m = rows
        .iter()
        .filter(|r| r.polycrystal_wins && r.m > 0.0)
        .map(|r| r.m)
        .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.max(m))));
    Ok(OverlapReport {
        spec: spec.clone(),
        rows,
        observed_crossover_m,
        meta: ReportMeta::new(spec),
    })
}

/// `count` evenly spaced translations of length `start..=stop` along `direction`.
pub fn tau_ray(direction: f64, start: f64, stop: f64, count: usize) -> Vec<Point2> {
    let u = Point2::polar(direction);
    (0..count)
        .map(|k| u * (start + (stop - start) * k as f64 / (count.max(2) - 1) as f64))
        .collect()
}

/// One grain of a candidate partition in a tessellation sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateGrain {
    pub region: Polygon,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TessellationSpec {
    pub shape: ShapeSpec,
    pub family: TileFamily,
    pub thetas: Vec<f64>,
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub offset: Point2,
    #[serde(default = "default_theta_grid")]
    pub theta_grid: usize,
    /// Partitions of `Omega` bounding `Per_0` from above.
    #[serde(default)]
    pub candidates: Vec<Vec<CandidateGrain>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TessellationRow {
    pub theta: f64,
    pub epsilon: f64,
    pub tiles: usize,
    /// Perimeter of the union of tiles.
    pub per_eps: f64,
    /// `Per_{phi_theta}(Omega)` for the family's norm.
    pub per_phi: f64,
    /// `|per_eps - per_phi| / per_phi`.
    pub relative_error: f64,
    /// `per_eps / Per(Omega)`.
    pub ratio_to_perimeter: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TessellationReport {
    pub spec: TessellationSpec,
    pub perimeter: f64,
    pub area: f64,
    pub rows: Vec<TessellationRow>,
    /// Minimum of `Per_{phi_theta}(Omega)` over the grid.
    pub min_grid_per_phi: f64,
    pub min_grid_theta: f64,
    /// Best candidate-partition upper bound for `Per_0(Omega)`; single-grain partitions included.
    pub per0_upper: f64,
    /// `per0_upper <= min_grid_per_phi + 1e-9`.
    pub sop_holds: bool,
    /// `sqrt(|Omega|) Per(W_phi)`, the isoperimetric minimum at this area.
    pub wulff_lower: f64,
    /// `per0_upper >= wulff_lower - 1e-9`.
    pub isoperimetric_consistent: bool,
    pub meta: ReportMeta,
}

pub fn run_tessellation_sweep(spec: &TessellationSpec) -> Result<TessellationReport> {
    let omega = spec.shape.region()?;
    let family = spec.family;
    let per_phi = |t: f64| family.anisotropy(t).perimeter(&omega);
    let jobs: Vec<(f64, f64)> = spec
        .thetas
        .iter()
        .flat_map(|&t| spec.epsilons.iter().map(move |&e| (t, e)))
        .collect();
    let rows = with_pool(|| {
        jobs.par_iter()
            .map(|&(theta, eps)| {
                let tiles = tile_fill(&omega, family, theta, eps, spec.offset)?;
                let per_eps = tile_union_perimeter(&tiles, eps);
                let target = per_phi(theta);
                Ok(TessellationRow {
                    theta,
                    epsilon: eps,
                    tiles: tiles.len(),
                    per_eps,
                    per_phi: target,
                    relative_error: (per_eps - target).abs() / target,
                    ratio_to_perimeter: per_eps / omega.perimeter(),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let grid = family.theta_grid(spec.theta_grid.max(1));
    let (min_grid_per_phi, min_grid_theta) = grid
        .iter()
        .map(|&t| (per_phi(t), t))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty grid");
    let mut per0_upper = min_grid_per_phi;
    for cand in &spec.candidates {
        let cost: f64 = cand.iter().map(|g| family.anisotropy(g.theta).perimeter(&g.region)).sum();
        per0_upper = per0_upper.min(cost);
    }
    let wulff_lower = omega.area().sqrt() * family.wulff_perimeter();
    Ok(TessellationReport {
        spec: spec.clone(),
        perimeter: omega.perimeter(),
        area: omega.area(),
        rows,
        min_grid_per_phi,
        min_grid_theta,
        per0_upper,
        sop_holds: per0_upper <= min_grid_per_phi + 1e-9,
        wulff_lower,
        isoperimetric_consistent: per0_upper >= wulff_lower - 1e-9,
        meta: ReportMeta::new(spec),
    })
}

/// Dyadic schedule `1/2^k` for `k` in `from..=to`.
pub fn dyadic(from: u32, to: u32) -> Vec<f64> {
    (from..=to).map(|k| 1.0 / (1u64 << k) as f64).collect()
}

/// `W_theta` under its own norm, for reference in reports and examples.
pub fn wulff_target(theta: f64) -> f64 {
    FinslerHex::new(theta).perimeter(&wulff(theta).polygon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hexagon_schedule_is_exact() {
        let spec = SweepSpec::new(ShapeSpec::HexagonMinimizer, None, vec![1.0, 0.5, 0.25, 0.125]);
        let r = run_single_crystal_sweep(&spec).unwrap();
        assert_relative_eq!(r.target, 6.0, epsilon = 1e-12);
        for row in &r.rows {
            assert_relative_eq!(row.surplus, 6.0 + 3.0 * row.epsilon, max_relative = 1e-14);
            assert_eq!(row.grains, 1);
        }
        assert!(r.error_trend_ok);
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = SweepSpec {
            random_offsets: 2,
            seed: 9,
            ..SweepSpec::new(
                ShapeSpec::Polygon {
                    vertices: Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap().vertices().to_vec(),
                },
                Some(1.3),
                vec![0.25, 0.125],
            )
        };
        let a = serde_json::to_string(&run_single_crystal_sweep(&spec).unwrap()).unwrap();
        let b = serde_json::to_string(&run_single_crystal_sweep(&spec).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(run_single_crystal_sweep(&spec).unwrap().rows.len(), 6);
    }

    #[test]
    fn schedule_validation() {
        let mut spec = SweepSpec::new(ShapeSpec::HexagonMinimizer, None, vec![0.5, 1.0]);
        assert!(spec.validate().is_err());
        spec.epsilons = vec![];
        assert!(spec.validate().is_err());
        spec.epsilons = vec![0.5, -0.1];
        assert!(spec.validate().is_err());
    }

    #[test]
    fn adjacent_square_partition_geometry() {
        let g = |x0: f64, theta: f64| GrainSpec {
            region: Polygon::rectangle(x0, 0.0, x0 + 1.0, 1.0).unwrap(),
            theta,
            offset: Point2::ORIGIN,
        };
        let (per, interface) = partition_geometry(&[g(0.0, FRAC_PI_2), g(1.0, 1.8)]);
        assert_relative_eq!(per, 6.0, epsilon = 1e-12);
        assert_relative_eq!(interface, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn disjoint_hexagons_prefer_two_grains() {
        let spec = OverlapSpec {
            theta1: FRAC_PI_2,
            theta2: 2.0 * FRAC_PI_3,
            taus: vec![Point2::new(3.0, 0.0)],
            epsilon: None,
            gap: None,
            theta_grid: 60,
        };
        let r = run_overlap_experiment(&spec).unwrap();
        let row = &r.rows[0];
        assert_eq!(row.m, 0.0);
        assert_relative_eq!(row.polycrystal_bound, 2.0 * crate::finsler::wulff_perimeter(), epsilon = 1e-12);
        assert!(row.single_crystal_benchmark > row.polycrystal_bound);
    }

    #[test]
    fn equal_orientations_favour_one_crystal() {
        let spec = OverlapSpec {
            theta1: 1.2,
            theta2: 1.2,
            taus: vec![Point2::new(0.4, 0.3), Point2::new(2.0, 0.0)],
            epsilon: None,
            gap: None,
            theta_grid: 60,
        };
        for row in run_overlap_experiment(&spec).unwrap().rows {
            assert!(row.single_crystal_benchmark <= row.polycrystal_bound + 1e-9, "{row:?}");
            assert!((row.benchmark_theta - 1.2).abs() < 1e-6, "{row:?}");
        }
    }

    #[test]
    fn union_and_difference_costs() {
        let a = Polygon::rectangle(0.0, 0.0, 2.0, 1.0).unwrap();
        let b = Polygon::rectangle(1.0, 0.5, 3.0, 1.5).unwrap();
        let q = crate::finsler::SquareNorm { theta: FRAC_PI_2 };
        assert_relative_eq!(union_cost(&q, &a, &b), 9.0, epsilon = 1e-12);
        assert_relative_eq!(difference_cost(&q, &a, &b), 6.0, epsilon = 1e-12);
    }
}
