//! SVG drawings of stick diagrams.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::heights::HeightCertificate;
use crate::knot::{CrossingAssignment, Over};
use crate::planar::{Diagram, Vec2};

#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Drawing width in pixels; the height follows the aspect ratio.
    pub width: f64,
    /// Half-length of the gap cut into an under-strand, as a fraction of the
    /// drawing's larger side.
    pub gap: f64,
    pub vertex_labels: bool,
    /// Vertex heights used for `L`/`P`/`H` annotations.
    pub heights: Option<HeightCertificate>,
    /// Vertices carrying a vertical stick; their second height sits after
    /// the walk's vertices in the certificate, in ascending vertex order.
    pub verticals: BTreeSet<usize>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 480.0,
            gap: 0.03,
            vertex_labels: true,
            heights: None,
            verticals: BTreeSet::new(),
        }
    }
}

/// Height band of each value: `L` in the lowest third of the range, `H` in
/// the highest, `P` between.
pub fn height_bands(z: &[f64]) -> Vec<char> {
    let lo = z.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let third = (hi - lo) / 3.0;
    z.iter()
        .map(|&v| {
            if third <= 0.0 {
                'P'
            } else if v < lo + third {
                'L'
            } else if v > hi - third {
                'H'
            } else {
                'P'
            }
        })
        .collect()
}

/// Draws the walk of `d`. With an assignment, each under-strand is cut at
/// its crossing.
pub fn render_svg(
    d: &Diagram,
    a: Option<&CrossingAssignment>,
    opts: &RenderOptions,
) -> Result<String> {
    let walk = &d.walk;
    let m = walk.edge_count();
    if m == 0 {
        return Err(Error::DegenerateDiagram("nothing to draw".into()));
    }
    if let Some(a) = a {
        if a.len() != d.crossings.len() {
            return Err(Error::InvalidParameter(format!(
                "assignment has {} entries for {} crossings",
                a.len(),
                d.crossings.len()
            )));
        }
    }

    let pts = &walk.vertices[..m];
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in pts {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let side = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = 0.12 * side;
    let scale = opts.width / (x1 - x0 + 2.0 * pad);
    let height = (y1 - y0 + 2.0 * pad) * scale;
    let map = |p: Vec2| ((p.x - x0 + pad) * scale, (y1 - p.y + pad) * scale);

    // Parameter intervals removed from each edge.
    let mut cuts: Vec<Vec<(f64, f64)>> = vec![Vec::new(); m];
    if let Some(a) = a {
        let g = opts.gap * side;
        for (c, &over) in d.crossings.iter().zip(&a.over) {
            let (e, t) = match over {
                Over::A => (c.edge_b, c.t_b),
                Over::B => (c.edge_a, c.t_a),
            };
            let len = walk.direction(e).norm();
            let h = g / len;
            cuts[e].push(((t - h).max(0.0), (t + h).min(1.0)));
            if t - h < 0.0 {
                let prev = (e + m - 1) % m;
                let hp = (h - t) * len / walk.direction(prev).norm();
                cuts[prev].push(((1.0 - hp).max(0.0), 1.0));
            }
        }
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.1}" height="{:.1}" viewBox="0 0 {:.1} {:.1}">"#,
        opts.width, height, opts.width, height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<g stroke="black" stroke-width="2" stroke-linecap="round" fill="none">"#
    );
    for (e, cut) in cuts.iter_mut().enumerate() {
        cut.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut start = 0.0;
        let mut pieces = Vec::new();
        for &(lo, hi) in cut.iter() {
            if lo > start {
                pieces.push((start, lo));
            }
            start = start.max(hi);
        }
        if start < 1.0 {
            pieces.push((start, 1.0));
        }
        for (s, t) in pieces {
            let (ax, ay) = map(walk.point_at(e, s));
            let (bx, by) = map(walk.point_at(e, t));
            let _ = writeln!(
                svg,
                r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}"/>"#
            );
        }
    }
    svg.push_str("</g>\n");

    let bands = opts.heights.as_ref().map(|c| height_bands(&c.z));
    if opts.vertex_labels || bands.is_some() {
        let _ = writeln!(
            svg,
            r#"<g font-family="sans-serif" font-size="12" fill="black">"#
        );
        for (k, &p) in pts.iter().enumerate() {
            let (x, y) = map(p);
            let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#);
            let mut text = String::new();
            if opts.vertex_labels {
                text.push_str(&k.to_string());
            }
            if let Some(b) = bands.as_ref().and_then(|b| b.get(k)) {
                if !text.is_empty() {
                    text.push(' ');
                }
                text.push(*b);
                if let Some(i) = opts.verticals.iter().position(|&v| v == k) {
                    if let Some(top) = bands.as_ref().and_then(|b| b.get(m + i)) {
                        text.push('/');
                        text.push(*top);
                    }
                }
            }
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}">{text}</text>"#,
                x + 5.0,
                y - 5.0
            );
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ngon_diagram, pentagram_5_1};
    use crate::planar::{Ordering, DEFAULT_EPS};

    fn line_count(svg: &str) -> usize {
        svg.matches("<line ").count()
    }

    #[test]
    fn convex_octagon_has_no_gaps() {
        let (_, d) = ngon_diagram(8, &Ordering::identity(8), DEFAULT_EPS).unwrap();
        let a = CrossingAssignment::all(Over::A, 0);
        let svg = render_svg(&d, Some(&a), &RenderOptions::default()).unwrap();
        assert_eq!(line_count(&svg), 8);
        assert_eq!(svg.matches("<text ").count(), 8);
    }

    #[test]
    fn each_interior_crossing_cuts_one_edge() {
        let (_, d) = ngon_diagram(5, &Ordering(vec![0, 2, 4, 1, 3]), DEFAULT_EPS).unwrap();
        assert_eq!(d.crossing_count(), 5);
        let a = CrossingAssignment::alternating(&d).unwrap();
        let svg = render_svg(&d, Some(&a), &RenderOptions::default()).unwrap();
        assert_eq!(line_count(&svg), 5 + 5);
        let plain = render_svg(&d, None, &RenderOptions::default()).unwrap();
        assert_eq!(line_count(&plain), 5);
    }

    #[test]
    fn rendering_is_deterministic() {
        let p = pentagram_5_1(DEFAULT_EPS).unwrap();
        let opts = RenderOptions {
            heights: Some(p.knot.certificate.clone()),
            verticals: p.verticals.clone(),
            ..RenderOptions::default()
        };
        let a = render_svg(&p.knot.diagram, Some(&p.knot.assignment), &opts).unwrap();
        let b = render_svg(&p.knot.diagram, Some(&p.knot.assignment), &opts).unwrap();
        assert_eq!(a, b);
        let stacked = a
            .lines()
            .filter(|l| l.starts_with("<text") && l.contains(['L', 'P', 'H']))
            .filter(|l| l.trim_end_matches("</text>").contains('/'))
            .count();
        assert_eq!(stacked, 3);
        assert!(a.contains('L') && a.contains('H'));
    }

    #[test]
    fn bands() {
        assert_eq!(height_bands(&[-3.0, 0.0, 3.0]), vec!['L', 'P', 'H']);
        assert_eq!(height_bands(&[1.0, 1.0]), vec!['P', 'P']);
    }
}
