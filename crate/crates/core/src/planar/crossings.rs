//! Crossing detection on closed walks, including the rules that turn
//! non-transversal contacts into crossings, non-crossings, or flags.
//!
//! A strand passing through a contact point is either the interior of an
//! edge or a vertex (the two edges meeting there). Two-strand contacts are
//! resolved by angular interleaving of the four directions leaving the
//! point: interleaved strands cross, others only touch. A crossing at a
//! vertex is stored on the vertex's outgoing edge with parameter exactly 0.
//!
//! Points where three or more edge interiors meet are split as if every
//! vertex had been nudged by a small generic offset; the order of crossings
//! along each edge then follows the first-order motion of the intersection
//! parameters, which keeps the resulting diagram planar.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::intersect::{segment_intersection, Intersection};
use super::{Vec2, Walk, CLOSURE_FACTOR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub edge_a: usize,
    pub edge_b: usize,
    pub t_a: f64,
    pub t_b: f64,
    pub point: Vec2,
    /// +1 when strand b passes from the right of strand a to its left.
    #[serde(rename = "sign")]
    pub orientation_sign: i8,
}

impl Crossing {
    /// Strand a passes through the start vertex of `edge_a`.
    pub fn vertex_a(&self) -> bool {
        self.t_a == 0.0
    }

    pub fn vertex_b(&self) -> bool {
        self.t_b == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyKind {
    VertexOnEdge,
    VertexCoincidence,
    CollinearOverlap,
    RetracePair,
    /// Three or more edge interiors through one point.
    MultiplePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Resolution {
    NoCrossing,
    Crossing { crossing: Crossing },
    Collapsed,
    Split { crossings: usize },
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Degeneracy {
    pub kind: DegeneracyKind,
    /// Edges whose interiors take part. Retrace pairs index the input walk;
    /// every other kind indexes the diagram's (collapsed) walk.
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
    pub point: Vec2,
    pub resolution: Resolution,
}

impl Degeneracy {
    pub fn is_unresolved(&self) -> bool {
        self.resolution == Resolution::Unresolved
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strand {
    Interior(usize),
    Vertex(usize),
}

/// A walk with its crossings. `walk` is the input walk after retrace pairs
/// have been collapsed; `edge_origin[i]` names the input edge behind edge `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagram {
    pub walk: Walk,
    pub crossings: Vec<Crossing>,
    pub degeneracies: Vec<Degeneracy>,
    pub edge_origin: Vec<usize>,
}

/// One visit of the traversal to a crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pass {
    pub crossing: usize,
    pub edge: usize,
    pub t: f64,
    /// The visit runs along strand a of the crossing.
    pub on_a: bool,
}

impl Diagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracies.iter().any(Degeneracy::is_unresolved)
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &Degeneracy> {
        self.degeneracies.iter().filter(|d| d.is_unresolved())
    }

    pub fn require_resolved(&self) -> Result<()> {
        match self.unresolved().next() {
            None => Ok(()),
            Some(d) => Err(Error::DegenerateDiagram(format!(
                "{:?} at {} is unresolved",
                d.kind, d.point
            ))),
        }
    }

    /// Crossing visits in walk order: edge by edge, by parameter along each
    /// edge, with coincident parameters split by the vertex perturbation.
    pub fn traversal(&self) -> Vec<Pass> {
        let m = self.walk.edge_count();
        let mut per_edge: Vec<Vec<(Pass, f64)>> = vec![Vec::new(); m];
        for (ci, c) in self.crossings.iter().enumerate() {
            let (da, db) = parameter_drift(&self.walk, c);
            per_edge[c.edge_a].push((
                Pass {
                    crossing: ci,
                    edge: c.edge_a,
                    t: c.t_a,
                    on_a: true,
                },
                da,
            ));
            per_edge[c.edge_b].push((
                Pass {
                    crossing: ci,
                    edge: c.edge_b,
                    t: c.t_b,
                    on_a: false,
                },
                db,
            ));
        }
        let mut out = Vec::with_capacity(2 * self.crossings.len());
        for mut passes in per_edge {
            passes.sort_by(|(p, dp), (q, dq)| {
                if (p.t - q.t).abs() > TIE_TOLERANCE {
                    p.t.total_cmp(&q.t)
                } else {
                    dp.total_cmp(dq).then(p.crossing.cmp(&q.crossing))
                }
            });
            out.extend(passes.into_iter().map(|(p, _)| p));
        }
        out
    }

    /// Edges that carry part of some crossing. A crossing at a vertex
    /// touches both edges meeting there.
    pub fn edges_at_crossings(&self) -> BTreeSet<usize> {
        let m = self.walk.edge_count();
        let mut out = BTreeSet::new();
        for c in &self.crossings {
            for (e, vertex) in [(c.edge_a, c.vertex_a()), (c.edge_b, c.vertex_b())] {
                out.insert(e);
                if vertex {
                    out.insert((e + m - 1) % m);
                }
            }
        }
        out
    }
}

const TIE_TOLERANCE: f64 = 1e-9;

/// Finds every crossing of a closed walk.
///
/// Consecutive back-and-forth edges are collapsed first; the remaining
/// contacts are then detected and resolved. Unresolved contacts leave the
/// diagram flagged (see [`Diagram::is_degenerate`]) rather than failing.
pub fn detect_crossings(walk: &Walk, eps: f64) -> Result<Diagram> {
    let tolerance = CLOSURE_FACTOR * eps;
    let gap = walk.closure_gap();
    if gap > tolerance {
        return Err(Error::NotClosed { gap, tolerance });
    }
    let (walk, edge_origin, retraces) = collapse_retraces(walk, eps);
    let m = walk.edge_count();

    let mut transversal: Vec<Crossing> = Vec::new();
    let mut vertex_edge: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut vertex_vertex: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut overlaps: Vec<Degeneracy> = Vec::new();

    for i in 0..m {
        for j in (i + 1)..m {
            if walk.adjacent(i, j) {
                continue;
            }
            let (p0, p1) = walk.edge(i);
            let (q0, q1) = walk.edge(j);
            match segment_intersection(p0, p1, q0, q1, eps)? {
                Intersection::None => {}
                Intersection::Transversal { t, s, point } => {
                    let sign = walk.direction(i).cross(walk.direction(j)).signum() as i8;
                    transversal.push(Crossing {
                        edge_a: i,
                        edge_b: j,
                        t_a: t,
                        t_b: s,
                        point,
                        orientation_sign: sign,
                    });
                }
                Intersection::Degenerate(c) => match c.kind {
                    super::DegeneracyKind::CollinearOverlap => overlaps.push(Degeneracy {
                        kind: DegeneracyKind::CollinearOverlap,
                        edges: vec![i, j],
                        vertices: vec![],
                        point: c.point,
                        resolution: Resolution::Unresolved,
                    }),
                    _ => {
                        let vi = endpoint_vertex(i, c.t, m);
                        let vj = endpoint_vertex(j, c.s, m);
                        match (vi, vj) {
                            (Some(a), Some(b)) if a != b => {
                                vertex_vertex.insert((a.min(b), a.max(b)));
                            }
                            (Some(_), Some(_)) => {}
                            (Some(a), None) => {
                                vertex_edge.insert((a, j));
                            }
                            (None, Some(b)) => {
                                vertex_edge.insert((b, i));
                            }
                            (None, None) => unreachable!("contact without an endpoint"),
                        }
                    }
                },
            }
        }
    }

    // Group every contact by location.
    let mut items: Vec<(Vec2, Vec<Strand>, Option<usize>)> = Vec::new();
    for (ci, c) in transversal.iter().enumerate() {
        items.push((
            c.point,
            vec![Strand::Interior(c.edge_a), Strand::Interior(c.edge_b)],
            Some(ci),
        ));
    }
    for &(k, e) in &vertex_edge {
        items.push((
            walk.vertex(k),
            vec![Strand::Vertex(k), Strand::Interior(e)],
            None,
        ));
    }
    for &(k, l) in &vertex_vertex {
        items.push((
            walk.vertex(k),
            vec![Strand::Vertex(k), Strand::Vertex(l)],
            None,
        ));
    }
    let clusters = cluster_points(&items.iter().map(|it| it.0).collect::<Vec<_>>(), tolerance);

    let mut crossings: Vec<Crossing> = Vec::new();
    let mut contacts: Vec<Degeneracy> = Vec::new();
    for members in clusters {
        let strands: BTreeSet<Strand> = members
            .iter()
            .flat_map(|&i| items[i].1.iter().copied())
            .collect();
        let point = items[members[0]].0;
        let transversal_members: Vec<usize> = members.iter().filter_map(|&i| items[i].2).collect();
        let all_interior = strands.iter().all(|s| matches!(s, Strand::Interior(_)));

        if all_interior && strands.len() == 2 {
            crossings.push(transversal[transversal_members[0]]);
            continue;
        }
        let (edges, vertices) = split_strands(&strands);
        let kind = if all_interior {
            DegeneracyKind::MultiplePoint
        } else if vertices.len() >= 2 {
            DegeneracyKind::VertexCoincidence
        } else {
            DegeneracyKind::VertexOnEdge
        };
        if kind == DegeneracyKind::MultiplePoint {
            let pairs = edges.len() * (edges.len() - 1) / 2;
            if transversal_members.len() == pairs {
                crossings.extend(transversal_members.iter().map(|&ci| transversal[ci]));
            }
        }
        contacts.push(Degeneracy {
            kind,
            edges,
            vertices,
            point,
            resolution: Resolution::Unresolved,
        });
    }
    contacts.extend(overlaps);

    let mut degeneracies = retraces;
    for d in resolve_degeneracies(&walk, &contacts) {
        if let Resolution::Crossing { crossing } = d.resolution {
            crossings.push(crossing);
        }
        degeneracies.push(d);
    }

    crossings.sort_by(|a, b| {
        a.edge_a
            .cmp(&b.edge_a)
            .then(a.t_a.total_cmp(&b.t_a))
            .then(a.edge_b.cmp(&b.edge_b))
    });
    Ok(Diagram {
        walk,
        crossings,
        degeneracies,
        edge_origin,
    })
}

/// Assigns a resolution to each detected contact on `walk`.
///
/// Retrace pairs are reported as collapsed and collinear overlaps stay
/// unresolved. Two-strand contacts through a vertex cross iff their four
/// outgoing directions interleave around the point. A point shared only by
/// edge interiors is split into pairwise crossings. Anything else is left
/// unresolved.
pub fn resolve_degeneracies(walk: &Walk, contacts: &[Degeneracy]) -> Vec<Degeneracy> {
    contacts
        .iter()
        .map(|d| {
            let resolution = match d.kind {
                DegeneracyKind::RetracePair => Resolution::Collapsed,
                DegeneracyKind::CollinearOverlap => Resolution::Unresolved,
                DegeneracyKind::MultiplePoint => {
                    let n = d.edges.len();
                    if n >= 3 && d.vertices.is_empty() {
                        Resolution::Split {
                            crossings: n * (n - 1) / 2,
                        }
                    } else {
                        Resolution::Unresolved
                    }
                }
                DegeneracyKind::VertexOnEdge | DegeneracyKind::VertexCoincidence => {
                    let strands: Vec<Strand> = d
                        .edges
                        .iter()
                        .map(|&e| Strand::Interior(e))
                        .chain(d.vertices.iter().map(|&k| Strand::Vertex(k)))
                        .collect();
                    match strands[..] {
                        [a, b] => resolve_pair(walk, a, b, d.point),
                        _ => Resolution::Unresolved,
                    }
                }
            };
            Degeneracy {
                resolution,
                ..d.clone()
            }
        })
        .collect()
}

fn split_strands(strands: &BTreeSet<Strand>) -> (Vec<usize>, Vec<usize>) {
    let mut edges = Vec::new();
    let mut vertices = Vec::new();
    for s in strands {
        match *s {
            Strand::Interior(e) => edges.push(e),
            Strand::Vertex(k) => vertices.push(k),
        }
    }
    (edges, vertices)
}

/// Outgoing and backward directions of a strand at its contact point.
fn strand_directions(walk: &Walk, s: Strand) -> (Vec2, Vec2) {
    let m = walk.edge_count();
    match s {
        Strand::Interior(e) => {
            let d = walk.direction(e);
            (d, -d)
        }
        Strand::Vertex(k) => {
            let here = walk.vertex(k);
            (walk.vertex(k + 1) - here, walk.vertex(k + m - 1) - here)
        }
    }
}

/// Angle of `x` measured counterclockwise from `from`, in `[0, 2π)`.
fn ccw_from(from: Vec2, x: Vec2) -> f64 {
    (x.angle() - from.angle()).rem_euclid(TAU)
}

const ANGLE_TOLERANCE: f64 = 1e-9;

fn resolve_pair(walk: &Walk, a: Strand, b: Strand, point: Vec2) -> Resolution {
    let (a_out, a_back) = strand_directions(walk, a);
    let (b_out, b_back) = strand_directions(walk, b);
    for x in [b_out, b_back] {
        for y in [a_out, a_back] {
            let d = ccw_from(y, x);
            if d < ANGLE_TOLERANCE || TAU - d < ANGLE_TOLERANCE {
                return Resolution::Unresolved;
            }
        }
    }
    let span = ccw_from(a_out, a_back);
    let left = |x: Vec2| ccw_from(a_out, x) < span;
    if left(b_out) == left(b_back) {
        return Resolution::NoCrossing;
    }
    // b leaves to the left of a: positive with respect to (a, b).
    let sign_ab: i8 = if left(b_out) { 1 } else { -1 };
    let (ea, ta) = strand_anchor(walk, a, point);
    let (eb, tb) = strand_anchor(walk, b, point);
    let crossing = if ea < eb {
        Crossing {
            edge_a: ea,
            edge_b: eb,
            t_a: ta,
            t_b: tb,
            point,
            orientation_sign: sign_ab,
        }
    } else {
        // Swapping the roles of the two strands flips the orientation.
        Crossing {
            edge_a: eb,
            edge_b: ea,
            t_a: tb,
            t_b: ta,
            point,
            orientation_sign: -sign_ab,
        }
    };
    Resolution::Crossing { crossing }
}

/// Edge and parameter recording a strand's passage through `point`.
fn strand_anchor(walk: &Walk, s: Strand, point: Vec2) -> (usize, f64) {
    match s {
        Strand::Interior(e) => {
            let (p, q) = walk.edge(e);
            let d = q - p;
            (e, (point - p).dot(d) / d.dot(d))
        }
        Strand::Vertex(k) => (k, 0.0),
    }
}

/// The walk vertex at parameter `t` of edge `e`, if `t` is an endpoint.
fn endpoint_vertex(e: usize, t: f64, m: usize) -> Option<usize> {
    if t == 0.0 {
        Some(e)
    } else if t == 1.0 {
        Some((e + 1) % m)
    } else {
        None
    }
}

fn cluster_points(points: &[Vec2], tolerance: f64) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].distance(points[j]) <= tolerance {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..points.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Removes consecutive edges that double back along each other, repeating
/// until none remain. Returns the shortened walk, the input edge behind each
/// remaining edge, and one record per collapsed pair.
fn collapse_retraces(walk: &Walk, eps: f64) -> (Walk, Vec<usize>, Vec<Degeneracy>) {
    let m0 = walk.edge_count();
    let mut verts: Vec<Vec2> = walk.vertices[..m0].to_vec();
    let mut origin: Vec<usize> = (0..m0).collect();
    let mut records = Vec::new();

    'outer: loop {
        let m = verts.len();
        if m < 2 {
            break;
        }
        for i in 0..m {
            let (a, b, c) = (i, (i + 1) % m, (i + 2) % m);
            let d1 = verts[b] - verts[a];
            let d2 = verts[c] - verts[b];
            let (l1, l2) = (d1.norm(), d2.norm());
            if d1.cross(d2).abs() > eps * l1 * l2 || d1.dot(d2) >= 0.0 {
                continue;
            }
            records.push(Degeneracy {
                kind: DegeneracyKind::RetracePair,
                edges: vec![origin[a], origin[b]],
                vertices: vec![],
                point: verts[b],
                resolution: Resolution::Collapsed,
            });
            if verts[c].distance(verts[a]) <= CLOSURE_FACTOR * eps || m == 2 {
                // Both edges vanish; the edge leaving `c` now leaves `a`.
                origin[a] = origin[c];
                for idx in descending(b, c) {
                    verts.remove(idx);
                    origin.remove(idx);
                }
                if m == 2 {
                    verts.truncate(1);
                    origin.clear();
                }
            } else {
                verts.remove(b);
                origin.remove(b);
            }
            continue 'outer;
        }
        break;
    }
    let walk = if origin.is_empty() {
        Walk {
            vertices: vec![verts.first().copied().unwrap_or(Vec2::ZERO)],
        }
    } else {
        Walk::from_cycle(verts)
    };
    (walk, origin, records)
}

fn descending(a: usize, b: usize) -> [usize; 2] {
    [a.max(b), a.min(b)]
}

/// First-order drift of a crossing's parameters under a fixed generic
/// nudge of every vertex. Used only to order crossings that share a point.
fn parameter_drift(walk: &Walk, c: &Crossing) -> (f64, f64) {
    let m = walk.edge_count();
    let nudge = |v: usize| {
        let k = (v % m + 1) as f64;
        Vec2::new(
            (0.754_877_666_246_692_7 * k).fract() - 0.5,
            (0.569_840_290_998_053_2 * k).fract() - 0.5,
        )
    };
    let (e, f) = (c.edge_a, c.edge_b);
    let r = walk.direction(e);
    let u = walk.direction(f);
    let denom = r.cross(u);
    if denom.abs() < f64::EPSILON {
        return (0.0, 0.0);
    }
    let dp = nudge(e);
    let dr = nudge(e + 1) - dp;
    let dq = nudge(f);
    let du = nudge(f + 1) - dq;
    let b = dq + du * c.t_b - dp - dr * c.t_a;
    (b.cross(u) / denom, b.cross(r) / denom)
}
