//! Static SVG 1.1 pictures of planar bodies and surface bodies.

use std::fmt::Write as _;
use std::path::Path;

use okounkov::scalar::{to_f64, to_fraction_string};
use okounkov::surfacezar::{classify_boundary, StratumKind};
use okounkov::{Polytope, Rational, SurfaceBody};

use crate::error::CliError;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 60.0;

pub enum Plot<'a> {
    Polygon(&'a Polytope),
    Surface(&'a SurfaceBody),
}

/// Maps body coordinates into the drawing area, `y` pointing up.
struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn fit(points: &[(f64, f64)]) -> Self {
        let (mut lo, mut hi) = ((0.0f64, 0.0f64), (1.0f64, 1.0f64));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(f64::EPSILON);
        Self { min: lo, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.min.0) * self.scale, SIZE - MARGIN - (y - self.min.1) * self.scale)
    }
}

fn point(p: &[Rational]) -> (f64, f64) {
    (to_f64(&p[0]), to_f64(&p[1]))
}

fn label(p: &[Rational]) -> String {
    format!("({}, {})", short(&p[0]), short(&p[1]))
}

fn short(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        to_fraction_string(x)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn axes(out: &mut String, frame: &Frame, names: (&str, &str)) {
    let (ox, oy) = frame.map((frame.min.0, frame.min.1));
    let _ = writeln!(
        out,
        r#"<g stroke="black" stroke-width="1"><line x1="{ox:.2}" y1="{oy:.2}" x2="{:.2}" y2="{oy:.2}"/><line x1="{ox:.2}" y1="{oy:.2}" x2="{ox:.2}" y2="{:.2}"/></g>"#,
        SIZE - MARGIN / 2.0,
        MARGIN / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" font-family="serif">{}</text><text x="{:.2}" y="{:.2}" font-size="14" font-family="serif">{}</text>"#,
        SIZE - MARGIN / 2.0 - 10.0,
        oy + 20.0,
        names.0,
        ox - 24.0,
        MARGIN / 2.0,
        names.1
    );
}

fn polygon_path(frame: &Frame, vertices: &[Vec<Rational>]) -> String {
    let pts: Vec<(f64, f64)> = order_counterclockwise(vertices).iter().map(|v| frame.map(point(v))).collect();
    pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

/// Sorts polygon vertices by angle around their centroid (exact comparisons).
fn order_counterclockwise(vertices: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    use std::cmp::Ordering;
    let n = Rational::from_integer(vertices.len().into());
    let cx = vertices.iter().map(|v| v[0].clone()).sum::<Rational>() / n.clone();
    let cy = vertices.iter().map(|v| v[1].clone()).sum::<Rational>() / n;
    let half = |v: &Vec<Rational>| {
        let (dx, dy) = (&v[0] - &cx, &v[1] - &cy);
        let zero = Rational::from_integer(0.into());
        if dy > zero || (dy == zero && dx > zero) {
            0
        } else {
            1
        }
    };
    let mut sorted = vertices.to_vec();
    sorted.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let cross = (&a[0] - &cx) * (&b[1] - &cy) - (&a[1] - &cy) * (&b[0] - &cx);
            cross.cmp(&Rational::from_integer(0.into())).reverse().then(Ordering::Equal)
        })
    });
    sorted
}

fn polygon_svg(p: &Polytope) -> Result<String, CliError> {
    if p.ambient_dim() != 2 {
        return Err(CliError::Unsupported(format!("SVG output needs a planar body, got dimension {}", p.ambient_dim())));
    }
    let pts: Vec<(f64, f64)> = p.vertices().iter().map(|v| point(v)).collect();
    let frame = Frame::fit(&pts);
    let mut out = String::new();
    header(&mut out, "Newton-Okounkov body");
    axes(&mut out, &frame, ("ν₁", "ν₂"));
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.6" stroke="#08519c" stroke-width="2"/>"##,
        polygon_path(&frame, p.vertices())
    );
    for v in p.vertices() {
        let (x, y) = frame.map(point(v));
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/><text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{}</text>"#,
            x + 5.0,
            y - 5.0,
            label(v)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn polyline(frame: &Frame, pts: &[(Rational, Rational)]) -> String {
    pts.iter()
        .map(|(t, y)| {
            let (x, y) = frame.map((to_f64(t), to_f64(y)));
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn surface_svg(body: &SurfaceBody) -> String {
    let poly = body.to_polytope();
    let pts: Vec<(f64, f64)> = poly.vertices().iter().map(|v| point(v)).collect();
    let frame = Frame::fit(&pts);
    let mut out = String::new();
    header(&mut out, "Newton-Okounkov body of a surface");
    axes(&mut out, &frame, ("t", "y"));
    if poly.dim() == Some(2) {
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="#c7e9c0" fill-opacity="0.7" stroke="none"/>"##,
            polygon_path(&frame, poly.vertices())
        );
    }
    let styles = [
        (StratumKind::LeftEdge, "#3182bd", ""),
        (StratumKind::LowerGraph, "#31a354", ""),
        (StratumKind::UpperGraph, "#e6550d", ""),
        (StratumKind::RightEdge, "#de2d26", r#" stroke-dasharray="6,4""#),
    ];
    let strata = classify_boundary(body);
    for s in &strata {
        let Some((_, color, dash)) = styles.iter().find(|(k, _, _)| *k == s.kind) else {
            continue;
        };
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="3"{dash}/>"#,
            polyline(&frame, &s.endpoints)
        );
        if s.kind == StratumKind::RightEdge {
            let (x0, y0) = frame.map(point(&[s.endpoints[0].0.clone(), s.endpoints[0].1.clone()]));
            let (_, y1) = frame.map(point(&[s.endpoints[1].0.clone(), s.endpoints[1].1.clone()]));
            let _ = writeln!(
                out,
                r##"<text x="{:.2}" y="{:.2}" font-size="20" font-weight="bold" fill="#de2d26" font-family="sans-serif">?</text>"##,
                x0 + 8.0,
                (y0 + y1) / 2.0
            );
        }
    }
    for t in &body.breakpoints {
        let (x, y) = frame.map((to_f64(t), frame.min.1));
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{}</text>"#,
            y + 5.0,
            x - 6.0,
            y + 20.0,
            short(t)
        );
    }
    for (i, (a, b)) in body.alpha.iter().zip(&body.beta).enumerate() {
        let mid = (&body.breakpoints[i] + &body.breakpoints[i + 1]) / Rational::from_integer(2.into());
        let (xa, ya) = frame.map((to_f64(&mid), to_f64(&a.eval(&mid))));
        let (xb, yb) = frame.map((to_f64(&mid), to_f64(&b.eval(&mid))));
        let _ = writeln!(
            out,
            r#"<text x="{xa:.2}" y="{:.2}" font-size="11" font-family="sans-serif">α = {}</text><text x="{xb:.2}" y="{:.2}" font-size="11" font-family="sans-serif">β = {}</text>"#,
            ya + 14.0,
            linear(a),
            yb - 6.0,
            linear(b)
        );
    }
    let legend = [
        ("#c7e9c0", "(a) interior: valuative"),
        ("#3182bd", "(b) left edge: valuative"),
        ("#31a354", "(c) graph of α: valuative"),
        ("#e6550d", "graph of β: non-valuative if g(C) > 0, else unknown"),
        ("#de2d26", "? right edge: unknown"),
    ];
    for (i, (color, text)) in legend.iter().enumerate() {
        let y = 16.0 + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{text}</text>"#,
            SIZE - 250.0,
            y - 9.0,
            SIZE - 235.0,
            y
        );
    }
    out.push_str("</svg>\n");
    out
}

fn linear(l: &okounkov::surfacezar::Linear<Rational>) -> String {
    format!("{}·t + {}", short(&l.slope), short(&l.intercept))
}

pub fn render(plot: &Plot<'_>) -> Result<String, CliError> {
    match plot {
        Plot::Polygon(p) => polygon_svg(p),
        Plot::Surface(b) => Ok(surface_svg(b)),
    }
}

pub fn emit_svg(plot: &Plot<'_>, path: &Path) -> Result<(), CliError> {
    let text = render(plot)?;
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use okounkov::surfacezar::{surface_body, SurfaceLattice};
    use okounkov::Scalar;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn triangle_has_three_vertices() {
        let p = Polytope::hull(2, &[vec![q(0), q(0)], vec![q(2), q(0)], vec![q(0), q(2)]]).unwrap();
        let svg = render(&Plot::Polygon(&p)).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("<polygon"));
    }

    #[test]
    fn other_dimensions_are_rejected() {
        let pts: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| q(i64::from(i == j))).collect()).collect();
        let p = Polytope::hull(4, &pts).unwrap();
        assert_eq!(render(&Plot::Polygon(&p)).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn surface_plot_labels_strata() {
        let l = SurfaceLattice::from_i64(&[&[1]], &[], &[&[1]]).unwrap();
        let body = surface_body(&l, &[q(2)], &[q(1)], &[]).unwrap();
        let svg = render(&Plot::Surface(&body)).unwrap();
        for needle in ["(a)", "(b)", "(c)", ">?</text>", "β = -1·t + 2"] {
            assert!(svg.contains(needle), "{needle}");
        }
    }

    #[test]
    fn vertices_are_ordered_around_the_centroid() {
        let square = vec![vec![q(0), q(0)], vec![q(1), q(1)], vec![q(1), q(0)], vec![q(0), q(1)]];
        let ordered = order_counterclockwise(&square);
        assert_eq!(ordered, vec![vec![q(1), q(1)], vec![q(0), q(1)], vec![q(0), q(0)], vec![q(1), q(0)]]);
    }
}
