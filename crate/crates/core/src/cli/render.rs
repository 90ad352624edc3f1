//! Deterministic SVG rendering of a configuration.

use std::f64::consts::FRAC_PI_3;
use std::fmt::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::geom::bbox;
use crate::graph::{Analysis, EdgeClass};
use crate::orient::{GrainPartition, OrientationField};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ColorBy {
    #[default]
    Orientation,
    EdgeClass,
    Grain,
}

/// Hue in degrees for an orientation in `(pi/3, 2pi/3]`.
pub fn orientation_hue(theta: f64) -> f64 {
    ((theta - FRAC_PI_3) / FRAC_PI_3 * 360.0).clamp(0.0, 360.0)
}

fn edge_style(class: EdgeClass) -> &'static str {
    match class {
        EdgeClass::InteriorTriTri => "stroke:#9a9a9a;stroke-width:1",
        EdgeClass::ExtTri => "stroke:#1f4e99;stroke-width:2",
        EdgeClass::ExtOther => "stroke:#2a8c3a;stroke-width:2",
        EdgeClass::Int1 => "stroke:#c77c02;stroke-width:2",
        EdgeClass::Int2 => "stroke:#8e2aa8;stroke-width:2",
        EdgeClass::Wire => "stroke:#d01c1c;stroke-width:2;stroke-dasharray:4 2",
    }
}

pub fn render_svg(a: &Analysis, field: &OrientationField, grains: &GrainPartition, color_by: ColorBy) -> String {
    let pts = a.graph.points();
    let eps = a.graph.epsilon();
    let (lo, hi) = if pts.is_empty() {
        (Default::default(), Default::default())
    } else {
        bbox(pts)
    };
    // 40 px per spacing, y pointing up.
    let scale = 40.0 / eps;
    let margin = eps;
    let width = (hi.x - lo.x + 2.0 * margin) * scale;
    let height = (hi.y - lo.y + 2.0 * margin) * scale;
    let sx = |x: f64| (x - lo.x + margin) * scale;
    let sy = |y: f64| (hi.y - y + margin) * scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (fi, face) in a.faces.faces.iter().enumerate() {
        let fill = match color_by {
            ColorBy::Orientation => match field.get(fi) {
                Some(t) => format!("hsl({:.2},70%,65%)", orientation_hue(t)),
                None => "#e8e8e8".to_string(),
            },
            ColorBy::Grain => match grains.grain_of_face.get(fi).copied().flatten() {
                // Golden-angle spacing keeps neighbouring grain ids apart.
                Some(g) => format!("hsl({:.2},60%,65%)", (g as f64 * 137.507_764) % 360.0),
                None => "#e8e8e8".to_string(),
            },
            ColorBy::EdgeClass => if face.is_triangular { "#f2f2f2" } else { "#dcdcdc" }.to_string(),
        };
        let ring: Vec<String> = face.region.iter().map(|p| format!("{:.3},{:.3}", sx(p.x), sy(p.y))).collect();
        let _ = writeln!(s, r#"<polygon points="{}" fill="{fill}" stroke="none"/>"#, ring.join(" "));
    }
    for (e, &[i, j]) in a.graph.edges().iter().enumerate() {
        let style = match color_by {
            ColorBy::EdgeClass => edge_style(a.edges.labels[e]),
            _ => "stroke:#333333;stroke-width:1",
        };
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" style="{style}"/>"#,
            sx(pts[i].x),
            sy(pts[i].y),
            sx(pts[j].x),
            sy(pts[j].y)
        );
    }
    for p in pts {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#555555" stroke-width="0.5"/>"##,
            sx(p.x),
            sy(p.y),
            0.5 * eps * scale
        );
    }
    s.push_str("</svg>\n");
    s
}
