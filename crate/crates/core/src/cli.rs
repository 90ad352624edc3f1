//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{identity_report, EnergyReport};
use crate::error::{Error, Result};
use crate::finsler::wulff_scaled;
use crate::geom::{LatticeFrame, Point2, Polygon};
use crate::graph::{Analysis, Configuration, LatticeIndex};
use crate::harness::{
    config_hash, run_overlap_experiment, run_polycrystal_bounds, run_single_crystal_sweep, run_tessellation_sweep,
    tau_ray, OverlapSpec, ShapeSpec, SweepReport, SweepSpec, TessellationSpec,
};
use crate::orient::{orientation_field, segment_grains, Grain, DEFAULT_TOL_THETA};
use crate::synth::random::{random_cluster, ClusterParams};
use crate::synth::{hexagon_minimizer, lattice_fill, polycrystal_fill, two_hexagon_config, GrainSpec};

pub mod particles;
pub mod render;

pub use render::ColorBy;

#[derive(Parser, Debug)]
#[command(name = "stickydiscs", version, about = "Sticky-disc crystallization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Lattice spacing (contact distance).
    #[arg(long)]
    eps: Option<f64>,
    /// Absolute bond tolerance; defaults to 1e-9 * eps.
    #[arg(long)]
    tol: Option<f64>,
    /// Orientation tolerance for grain segmentation.
    #[arg(long = "tol-theta")]
    tol_theta: Option<f64>,
    /// Grain separation for polycrystal fills; defaults to eps.
    #[arg(long)]
    gap: Option<f64>,
    /// Lattice phase `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    offset: Option<Point2>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Record wall time in reports (makes them non-reproducible).
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn eps(&self) -> Result<f64> {
        let eps = self.eps.ok_or_else(|| Error::invalid("--eps is required"))?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::invalid("--eps must be positive"));
        }
        Ok(eps)
    }

    fn tol_theta(&self) -> Result<f64> {
        let t = self.tol_theta.unwrap_or(DEFAULT_TOL_THETA);
        if !(t >= 0.0) {
            return Err(Error::invalid("--tol-theta must be non-negative"));
        }
        Ok(t)
    }

    fn format(&self, allowed: &[Format]) -> Result<Format> {
        match self.format {
            None => Ok(allowed[0]),
            Some(f) if allowed.contains(&f) => Ok(f),
            Some(f) => Err(Error::invalid(format!("format {f:?} is not available here"))),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bonds, faces, energy identity and grains of a particle file.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a particle file.
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
    /// Run an epsilon sweep from a JSON spec.
    Sweep {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Two-hexagon overlap experiment.
    Overlap {
        /// JSON overlap spec; overrides the ray flags.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta1: f64,
        #[arg(long, default_value_t = 2.0 * std::f64::consts::FRAC_PI_3)]
        theta2: f64,
        /// Direction of the translation ray.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        direction: f64,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 1.3)]
        to: f64,
        #[arg(long, default_value_t = 27)]
        count: usize,
        #[arg(long = "theta-grid", default_value_t = 60)]
        theta_grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Tile-union perimeters from a JSON spec.
    Tessellate {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Draw a particle file as SVG.
    Render {
        input: PathBuf,
        #[arg(long = "color-by", value_enum, default_value_t = ColorBy::Orientation)]
        color_by: ColorBy,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum SynthKind {
    /// Hexagonal minimizer with `s` particles per half-side.
    Hexagon {
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Lattice points inside a shape.
    Fill {
        #[arg(long, value_enum, default_value_t = FillShape::Square)]
        shape: FillShape,
        /// Polygon vertices `x,y;x,y;...` for `--shape polygon`.
        #[arg(long, allow_hyphen_values = true)]
        vertices: Option<String>,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
        /// Area of the Wulff shape.
        #[arg(long, default_value_t = 1.0)]
        area: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Several grains from a JSON list of `{region, theta, offset}`.
    Polycrystal {
        grains: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Two Wulff hexagons split into grains.
    TwoHexagon {
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta1: f64,
        #[arg(long, default_value_t = 2.0 * std::f64::consts::FRAC_PI_3)]
        theta2: f64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        tau: Point2,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded random cluster.
    Random {
        #[arg(long, default_value_t = 30)]
        size: usize,
        #[arg(long, default_value_t = 3)]
        holes: usize,
        #[arg(long, default_value_t = 2)]
        wires: usize,
        #[arg(long, default_value_t = 1)]
        slits: usize,
        #[arg(long, default_value_t = 1)]
        components: usize,
        #[arg(long)]
        nested: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FillShape {
    /// The unit square `[0,1]^2`.
    Square,
    /// `W_theta` scaled to `--area`.
    Wulff,
    Polygon,
}

fn parse_point(s: &str) -> std::result::Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or("expected `x,y`")?;
    let x: f64 = x.trim().parse().map_err(|_| format!("bad number {x:?}"))?;
    let y: f64 = y.trim().parse().map_err(|_| format!("bad number {y:?}"))?;
    Ok(Point2::new(x, y))
}

fn parse_vertices(s: &str) -> Result<Vec<Point2>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_point(t).map_err(Error::invalid))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigInfo {
    pub hash: String,
    pub n: usize,
    pub epsilon: f64,
    pub tolerance: f64,
    pub tol_theta: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceCounts {
    pub triangular: usize,
    pub other: usize,
    pub wire: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boundaries {
    pub exterior: f64,
    pub interior: f64,
}

/// The `analyze` report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub config: ConfigInfo,
    pub energy: EnergyReport,
    pub faces: FaceCounts,
    pub chi: i64,
    pub grains: Vec<Grain>,
    pub boundaries: Boundaries,
}

#[derive(Serialize)]
struct HashedConfig<'a> {
    points: &'a [Point2],
    epsilon: f64,
    tolerance: f64,
    tol_theta: f64,
    frames: &'a [LatticeFrame],
    lattice: Vec<Option<LatticeIndex>>,
}

pub fn analyze_configuration(c: &Configuration, tol_theta: f64) -> Result<AnalyzeReport> {
    let a = Analysis::new(c)?;
    let energy = identity_report(&a)?;
    let field = orientation_field(&a.graph, &a.faces);
    let gp = segment_grains(&field, &a.graph, &a.faces, tol_theta);
    let hash = config_hash(&HashedConfig {
        points: c.points(),
        epsilon: c.epsilon(),
        tolerance: c.tolerance(),
        tol_theta,
        frames: c.frames(),
        lattice: (0..c.len()).map(|i| c.lattice_index(i)).collect(),
    });
    Ok(AnalyzeReport {
        config: ConfigInfo {
            hash,
            n: c.len(),
            epsilon: c.epsilon(),
            tolerance: c.tolerance(),
            tol_theta,
            exact: c.is_exact(),
        },
        faces: FaceCounts {
            triangular: a.faces.triangular.len(),
            other: a.faces.non_triangular.len(),
            wire: a.edges.counts.wire,
        },
        chi: a.euler.chi,
        energy,
        grains: gp.grains,
        boundaries: Boundaries {
            exterior: gp.exterior_boundary,
            interior: gp.interior_boundary,
        },
    })
}

/// Flat sweep row for CSV output.
#[derive(Serialize)]
struct CsvRow {
    epsilon: f64,
    offset_x: f64,
    offset_y: f64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "E")]
    energy: i64,
    surplus: f64,
    target: f64,
    relative_error: f64,
    mass: f64,
    mass_error: f64,
    mass_ok: bool,
    grains: usize,
    components: usize,
    interior_boundary: f64,
    lower_bound: Option<f64>,
    upper_bound: Option<f64>,
    slack: Option<f64>,
    bounds_hold: Option<bool>,
}

pub fn sweep_csv<W: Write>(report: &SweepReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &report.rows {
        w.serialize(CsvRow {
            epsilon: r.epsilon,
            offset_x: r.offset.x,
            offset_y: r.offset.y,
            n: r.n,
            energy: r.energy,
            surplus: r.surplus,
            target: r.target,
            relative_error: r.relative_error,
            mass: r.mass,
            mass_error: r.mass_error,
            mass_ok: r.mass_ok,
            grains: r.grains,
            components: r.components,
            interior_boundary: r.interior_boundary,
            lower_bound: r.lower_bound,
            upper_bound: r.upper_bound,
            slack: r.slack,
            bounds_hold: r.bounds_hold,
        })?;
    }
    w.flush()?;
    Ok(())
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let f = File::open(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_reader(BufReader::new(f)).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn load_particles(path: &Path, common: &Common) -> Result<Configuration> {
    let eps = common.eps()?;
    let f = File::open(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    particles::read_particles(BufReader::new(f), eps, common.tol)
}

fn emit_particles(c: &Configuration, common: &Common) -> Result<()> {
    common.format(&[Format::Csv])?;
    if c.is_empty() {
        warn!("generated configuration is empty");
    }
    let mut w = open_output(common.out.as_deref())?;
    particles::write_particles(c, &mut w)?;
    w.flush()?;
    Ok(())
}

fn elapsed(start: Instant, common: &Common) -> Option<f64> {
    common.timing.then(|| start.elapsed().as_secs_f64())
}

fn synth(kind: SynthKind) -> Result<()> {
    match kind {
        SynthKind::Hexagon { s, common } => emit_particles(&hexagon_minimizer(s, common.eps()?)?, &common),
        SynthKind::Fill {
            shape,
            vertices,
            theta,
            area,
            common,
        } => {
            let omega = match shape {
                FillShape::Square => Polygon::rectangle(0.0, 0.0, 1.0, 1.0)?,
                FillShape::Wulff => wulff_scaled(theta, area, Point2::ORIGIN)?,
                FillShape::Polygon => Polygon::new(parse_vertices(
                    vertices
                        .as_deref()
                        .ok_or_else(|| Error::invalid("--shape polygon needs --vertices"))?,
                )?)?,
            };
            let c = lattice_fill(&omega, theta, common.eps()?, common.offset.unwrap_or_default())?;
            emit_particles(&c, &common)
        }
        SynthKind::Polycrystal { grains, common } => {
            let grains: Vec<GrainSpec> = read_json(&grains)?;
            let eps = common.eps()?;
            emit_particles(&polycrystal_fill(&grains, eps, common.gap.unwrap_or(eps))?, &common)
        }
        SynthKind::TwoHexagon {
            theta1,
            theta2,
            tau,
            common,
        } => {
            let eps = common.eps()?;
            let t = two_hexagon_config(theta1, theta2, tau, eps, common.gap.unwrap_or(eps))?;
            emit_particles(&t.config, &common)
        }
        SynthKind::Random {
            size,
            holes,
            wires,
            slits,
            components,
            nested,
            common,
        } => {
            let params = ClusterParams {
                size,
                holes,
                wires,
                slits,
                extra_components: components,
                nested,
                epsilon: common.eps.unwrap_or(1.0),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed.unwrap_or(0));
            emit_particles(&random_cluster(&mut rng, &params)?, &common)
        }
    }
}

fn sweep(path: &Path, common: &Common) -> Result<()> {
    let start = Instant::now();
    let mut spec: SweepSpec = read_json(path)?;
    if let Some(seed) = common.seed {
        spec.seed = seed;
    }
    if let Some(gap) = common.gap {
        spec.gap = Some(gap);
    }
    if let Some(t) = common.tol_theta {
        spec.tol_theta = t;
    }
    if let Some(o) = common.offset {
        spec.offsets = vec![o];
    }
    let fmt = common.format(&[Format::Json, Format::Csv])?;
    let mut report = match spec.shape {
        ShapeSpec::Grains { .. } | ShapeSpec::TwoHexagons { .. } => run_polycrystal_bounds(&spec)?,
        _ => run_single_crystal_sweep(&spec)?,
    };
    report.meta.wall_time_seconds = elapsed(start, common);
    match fmt {
        Format::Csv => sweep_csv(&report, open_output(common.out.as_deref())?),
        _ => {
            write_json(&report, common.out.as_deref())?;
            if let Some(out) = &common.out {
                sweep_csv(&report, BufWriter::new(File::create(out.with_extension("csv"))?))?;
            }
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { input, common } => {
            common.format(&[Format::Json])?;
            let c = load_particles(&input, &common)?;
            write_json(&analyze_configuration(&c, common.tol_theta()?)?, common.out.as_deref())
        }
        Command::Synth { kind } => synth(kind),
        Command::Sweep { spec, common } => sweep(&spec, &common),
        Command::Overlap {
            spec,
            theta1,
            theta2,
            direction,
            from,
            to,
            count,
            theta_grid,
            common,
        } => {
            let start = Instant::now();
            common.format(&[Format::Json])?;
            let mut spec = match spec {
                Some(p) => read_json(&p)?,
                None => OverlapSpec {
                    theta1,
                    theta2,
                    taus: tau_ray(direction, from, to, count),
                    epsilon: None,
                    gap: None,
                    theta_grid,
                },
            };
            if common.eps.is_some() {
                spec.epsilon = Some(common.eps()?);
            }
            if common.gap.is_some() {
                spec.gap = common.gap;
            }
            if spec.theta1 == spec.theta2 {
                warn!("equal orientations: the experiment is degenerate");
            }
            let mut report = run_overlap_experiment(&spec)?;
            report.meta.wall_time_seconds = elapsed(start, &common);
            write_json(&report, common.out.as_deref())
        }
        Command::Tessellate { spec, common } => {
            let start = Instant::now();
            common.format(&[Format::Json])?;
            let mut spec: TessellationSpec = read_json(&spec)?;
            if let Some(o) = common.offset {
                spec.offset = o;
            }
            let mut report = run_tessellation_sweep(&spec)?;
            report.meta.wall_time_seconds = elapsed(start, &common);
            write_json(&report, common.out.as_deref())
        }
        Command::Render {
            input,
            color_by,
            common,
        } => {
            common.format(&[Format::Svg])?;
            let c = load_particles(&input, &common)?;
            let a = Analysis::new(&c)?;
            let field = orientation_field(&a.graph, &a.faces);
            let gp = segment_grains(&field, &a.graph, &a.faces, common.tol_theta()?);
            let mut w = open_output(common.out.as_deref())?;
            w.write_all(render::render_svg(&a, &field, &gp, color_by).as_bytes())?;
            w.flush()?;
            Ok(())
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("stickydiscs: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("1.5,-2").unwrap(), Point2::new(1.5, -2.0));
        assert!(parse_point("1.5").is_err());
        assert_eq!(parse_vertices("0,0;1,0;0,1").unwrap().len(), 3);
    }

    #[test]
    fn bad_flags_exit_2() {
        assert_eq!(run(["stickydiscs", "analyze"]), 2);
        assert_eq!(run(["stickydiscs", "frobnicate"]), 2);
    }
}
