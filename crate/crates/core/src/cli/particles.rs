//! Particle files: CSV with header `x,y`, optional integer columns `a,b`
//! (and `frame` when several lattices are present), preceded by one
//! `# lattice: ox oy theta eps` line per frame.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geom::{LatticeFrame, Point2};
use crate::graph::{Configuration, LatticeIndex};

const LATTICE_TAG: &str = "# lattice:";

fn parse_frame(line: &str) -> Result<LatticeFrame> {
    let fields: Vec<f64> = line
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| Error::invalid(format!("bad lattice field {t:?}"))))
        .collect::<Result<_>>()?;
    let [ox, oy, theta, eps] = fields[..] else {
        return Err(Error::invalid("lattice line needs `ox oy theta eps`"));
    };
    if !(eps > 0.0) || !fields.iter().all(|v| v.is_finite()) {
        return Err(Error::invalid("lattice line has a non-finite or non-positive value"));
    }
    Ok(LatticeFrame::new(Point2::new(ox, oy), theta, eps))
}

/// Read a particle file. `eps` always comes from the caller.
pub fn read_particles<R: BufRead>(mut input: R, eps: f64, tol: Option<f64>) -> Result<Configuration> {
    let mut frames = Vec::new();
    let mut body = String::new();
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let t = line.trim();
        if let Some(rest) = t.strip_prefix(LATTICE_TAG) {
            frames.push(parse_frame(rest)?);
        } else if t.starts_with('#') || t.is_empty() {
            continue;
        } else {
            body.push_str(&line);
        }
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(ix), Some(iy)) = (col("x"), col("y")) else {
        return Err(Error::invalid("particle file needs `x,y` columns"));
    };
    let lattice_cols = match (col("a"), col("b")) {
        (Some(a), Some(b)) => Some((a, b, col("frame"))),
        (None, None) => None,
        _ => return Err(Error::invalid("lattice columns must come as the pair `a,b`")),
    };
    if lattice_cols.is_some() && frames.is_empty() {
        return Err(Error::invalid("`a,b` columns need a `# lattice:` line"));
    }
    let mut points = Vec::new();
    let mut lattice = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        let num = |k: usize| -> Result<f64> {
            let s = rec.get(k).unwrap_or("");
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::invalid(format!("row {}: bad number {s:?}", row + 1)))
        };
        points.push(Point2::new(num(ix)?, num(iy)?));
        if let Some((ca, cb, cf)) = lattice_cols {
            let int = |k: usize| -> Result<i64> {
                let s = rec.get(k).unwrap_or("");
                s.parse::<i64>()
                    .map_err(|_| Error::invalid(format!("row {}: bad integer {s:?}", row + 1)))
            };
            let frame = match cf {
                Some(k) => usize::try_from(int(k)?).map_err(|_| Error::invalid("negative frame index"))?,
                None => 0,
            };
            lattice.push(Some(LatticeIndex {
                frame,
                a: int(ca)?,
                b: int(cb)?,
            }));
        }
    }
    let mut c = match tol {
        Some(t) => Configuration::with_tolerance(points, eps, t)?,
        None => Configuration::new(points, eps)?,
    };
    if lattice_cols.is_some() {
        c.attach_lattice(frames, lattice)?;
    }
    Ok(c)
}

/// Write a particle file; lattice columns are emitted when every particle has an index.
pub fn write_particles<W: Write>(c: &Configuration, mut out: W) -> Result<()> {
    let exact = c.is_exact() && !c.is_empty();
    if exact {
        for f in c.frames() {
            writeln!(out, "{LATTICE_TAG} {} {} {} {}", f.origin.x, f.origin.y, f.angle, f.spacing)?;
        }
    }
    let multi = exact && c.frames().len() > 1;
    let mut w = csv::Writer::from_writer(out);
    match (exact, multi) {
        (false, _) => w.write_record(["x", "y"])?,
        (true, false) => w.write_record(["x", "y", "a", "b"])?,
        (true, true) => w.write_record(["x", "y", "a", "b", "frame"])?,
    }
    for (i, p) in c.points().iter().enumerate() {
        let mut rec = vec![p.x.to_string(), p.y.to_string()];
        if let Some(ix) = c.lattice_index(i).filter(|_| exact) {
            rec.push(ix.a.to_string());
            rec.push(ix.b.to_string());
            if multi {
                rec.push(ix.frame.to_string());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::hexagon_minimizer;

    #[test]
    fn round_trip_is_exact() {
        let c = hexagon_minimizer(3, 0.1).unwrap();
        let mut buf = Vec::new();
        write_particles(&c, &mut buf).unwrap();
        let back = read_particles(&buf[..], 0.1, None).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn plain_files_parse() {
        let text = "x,y\n0,0\n1,0\n0.5,0.8660254037844386\n";
        let c = read_particles(text.as_bytes(), 1.0, None).unwrap();
        assert_eq!(c.len(), 3);
        assert!(!c.is_exact());
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(read_particles("x,y\n0,zero\n".as_bytes(), 1.0, None).is_err());
        assert!(read_particles("u,v\n0,0\n".as_bytes(), 1.0, None).is_err());
        assert!(read_particles("x,y,a,b\n0,0,0,0\n".as_bytes(), 1.0, None).is_err());
    }
}
