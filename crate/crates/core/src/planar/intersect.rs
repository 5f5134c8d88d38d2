use serde::{Deserialize, Serialize};

use super::{DegeneracyKind, Vec2};
use crate::error::{Error, Result};

/// A non-transversal contact between two segments.
///
/// `t` and `s` are the parameters of the contact point on the first and
/// second segment. For a collinear overlap they give the overlap interval on
/// the first segment instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contact {
    pub kind: DegeneracyKind,
    pub t: f64,
    pub s: f64,
    pub point: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Intersection {
    None,
    Transversal { t: f64, s: f64, point: Vec2 },
    Degenerate(Contact),
}

/// Intersects segments `p0→p1` and `q0→q1`.
///
/// A transversal result has both parameters at least `eps` (in length) away
/// from the segment ends. An endpoint within `eps` of the other segment is a
/// degenerate contact, as is a collinear overlap.
pub fn segment_intersection(
    p0: Vec2,
    p1: Vec2,
    q0: Vec2,
    q1: Vec2,
    eps: f64,
) -> Result<Intersection> {
    let r = p1 - p0;
    let u = q1 - q0;
    let (lr, lu) = (r.norm(), u.norm());
    if lr <= eps || lu <= eps {
        return Err(Error::InvalidParameter("zero-length segment".into()));
    }

    let denom = r.cross(u);
    if denom.abs() <= eps * lr * lu {
        return Ok(parallel(p0, r, q0, q1, eps));
    }

    // Endpoint contacts first: an endpoint within eps of the other segment.
    let on_q = |p: Vec2| project(q0, u, p, eps);
    let on_p = |q: Vec2| project(p0, r, q, eps);
    let mut hits: Vec<(f64, f64)> = Vec::new();
    if let Some(s) = on_q(p0) {
        hits.push((0.0, s));
    }
    if let Some(s) = on_q(p1) {
        hits.push((1.0, s));
    }
    if let Some(t) = on_p(q0) {
        hits.push((t, 0.0));
    }
    if let Some(t) = on_p(q1) {
        hits.push((t, 1.0));
    }
    if let Some(&(t, s)) = hits.first() {
        let (t, s) = (snap(t, lr, eps), snap(s, lu, eps));
        let at_end = |x: f64| x == 0.0 || x == 1.0;
        let kind = if at_end(t) && at_end(s) {
            DegeneracyKind::VertexCoincidence
        } else {
            DegeneracyKind::VertexOnEdge
        };
        return Ok(Intersection::Degenerate(Contact {
            kind,
            t,
            s,
            point: p0.lerp(p1, t),
        }));
    }

    let w = q0 - p0;
    let t = w.cross(u) / denom;
    let s = w.cross(r) / denom;
    let inside = |x: f64, len: f64| x * len > eps && (1.0 - x) * len > eps;
    if inside(t, lr) && inside(s, lu) {
        Ok(Intersection::Transversal {
            t,
            s,
            point: p0.lerp(p1, t),
        })
    } else {
        Ok(Intersection::None)
    }
}

/// Parameter of `p` on segment `a + x·d` when `p` lies within `eps` of it.
fn project(a: Vec2, d: Vec2, p: Vec2, eps: f64) -> Option<f64> {
    let len2 = d.dot(d);
    let x = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    (a.lerp(a + d, x).distance(p) <= eps).then_some(x)
}

fn snap(x: f64, len: f64, eps: f64) -> f64 {
    if x * len <= eps {
        0.0
    } else if (1.0 - x) * len <= eps {
        1.0
    } else {
        x
    }
}

fn parallel(p0: Vec2, r: Vec2, q0: Vec2, q1: Vec2, eps: f64) -> Intersection {
    let lr = r.norm();
    let normal = r.perp().unit();
    if (q0 - p0).dot(normal).abs() > eps || (q1 - p0).dot(normal).abs() > eps {
        return Intersection::None;
    }
    let a = (q0 - p0).dot(r) / (lr * lr);
    let b = (q1 - p0).dot(r) / (lr * lr);
    let (lo, hi) = (a.min(b).max(0.0), a.max(b).min(1.0));
    let overlap = (hi - lo) * lr;
    if overlap > eps {
        Intersection::Degenerate(Contact {
            kind: DegeneracyKind::CollinearOverlap,
            t: lo,
            s: hi,
            point: p0.lerp(p0 + r, (lo + hi) / 2.0),
        })
    } else if overlap >= -eps {
        // End-to-end touch along a common line.
        let t = snap(lo, lr, eps);
        let touch = p0.lerp(p0 + r, t);
        let s = if touch.distance(q0) <= eps { 0.0 } else { 1.0 };
        Intersection::Degenerate(Contact {
            kind: DegeneracyKind::VertexCoincidence,
            t,
            s,
            point: touch,
        })
    } else {
        Intersection::None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-9;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn diagonals_cross_at_center() {
        match segment_intersection(v(0., 0.), v(2., 2.), v(0., 2.), v(2., 0.), EPS).unwrap() {
            Intersection::Transversal { t, s, point } => {
                assert!((t - 0.5).abs() < 1e-12 && (s - 0.5).abs() < 1e-12);
                assert!(point.distance(v(1., 1.)) < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn printed_heptagon_parameter() {
        // Segment through the origin at the printed parameter.
        let c = v(-0.88798, -1.3319);
        let g = v(0.71201, 1.0680);
        let dir = v(1.0, -0.4);
        match segment_intersection(c, g, dir * -1.0, dir, EPS).unwrap() {
            Intersection::Transversal { t, point, .. } => {
                assert!((t - 0.5549889).abs() < 1e-4, "t = {t}");
                assert!(point.norm() < 1e-4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn collinear_overlap() {
        let r = segment_intersection(v(0., 0.), v(2., 0.), v(1., 0.), v(3., 0.), EPS).unwrap();
        assert!(matches!(
            r,
            Intersection::Degenerate(Contact {
                kind: DegeneracyKind::CollinearOverlap,
                ..
            })
        ));
    }

    #[test]
    fn collinear_end_to_end_touch() {
        let r = segment_intersection(v(0., 0.), v(1., 0.), v(1., 0.), v(2., 0.), EPS).unwrap();
        match r {
            Intersection::Degenerate(c) => {
                assert_eq!(c.kind, DegeneracyKind::VertexCoincidence);
                assert_eq!((c.t, c.s), (1.0, 0.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parallel_disjoint() {
        let r = segment_intersection(v(0., 0.), v(1., 0.), v(0., 1.), v(1., 1.), EPS).unwrap();
        assert_eq!(r, Intersection::None);
    }

    #[test]
    fn vertex_on_edge() {
        let r = segment_intersection(v(0., 0.), v(2., 0.), v(1., 0.), v(1., 1.), EPS).unwrap();
        match r {
            Intersection::Degenerate(c) => {
                assert_eq!(c.kind, DegeneracyKind::VertexOnEdge);
                assert!((c.t - 0.5).abs() < 1e-12);
                assert_eq!(c.s, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shared_endpoint() {
        let r = segment_intersection(v(0., 0.), v(1., 0.), v(1., 0.), v(1., 1.), EPS).unwrap();
        assert!(matches!(
            r,
            Intersection::Degenerate(Contact {
                kind: DegeneracyKind::VertexCoincidence,
                ..
            })
        ));
    }

    #[test]
    fn near_miss_is_none() {
        let r = segment_intersection(v(0., 0.), v(1., 0.), v(2., -1.), v(2., 1.), EPS).unwrap();
        assert_eq!(r, Intersection::None);
    }

    #[test]
    fn zero_length_rejected() {
        assert!(segment_intersection(v(0., 0.), v(0., 0.), v(1., 0.), v(1., 1.), EPS).is_err());
    }
}
