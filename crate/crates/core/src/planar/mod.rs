//! Planar vector sets and the closed walks obtained by placing them
//! tip-to-tail in a chosen order.

mod crossings;
mod intersect;

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use crossings::{
    detect_crossings, resolve_degeneracies, Crossing, Degeneracy, DegeneracyKind, Diagram, Pass,
    Resolution, Strand,
};
pub use intersect::{segment_intersection, Contact, Intersection};

/// Default geometric tolerance.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Closure tolerance, as a multiple of `eps`.
pub const CLOSURE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(length: f64, angle: f64) -> Self {
        Self::new(length * angle.cos(), length * angle.sin())
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn unit(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            (a + TAU) % TAU
        } else {
            a
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        self * (1.0 - t) + other * t
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6})", self.x, self.y)
    }
}

/// An ordered collection of planar vectors summing to zero.
///
/// `vertical_extras` counts vectors that project to the origin and only
/// carry a vertical component; they take no part in the planar walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorSet {
    pub vectors: Vec<Vec2>,
    #[serde(default)]
    pub vertical_extras: usize,
}

impl VectorSet {
    pub fn new(vectors: Vec<Vec2>, eps: f64) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidParameter("empty vector set".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("vector {i} is not finite")));
            }
            if v.norm() <= eps {
                return Err(Error::InvalidParameter(format!(
                    "vector {i} has zero length"
                )));
            }
        }
        let sum = vectors.iter().fold(Vec2::ZERO, |acc, &v| acc + v);
        let tolerance = CLOSURE_FACTOR * eps;
        if sum.norm() > tolerance {
            return Err(Error::NotClosed {
                gap: sum.norm(),
                tolerance,
            });
        }
        Ok(Self {
            vectors,
            vertical_extras: 0,
        })
    }

    pub fn with_vertical_extras(mut self, count: usize) -> Self {
        self.vertical_extras = count;
        self
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn sum(&self) -> Vec2 {
        self.vectors.iter().fold(Vec2::ZERO, |acc, &v| acc + v)
    }
}

/// A permutation of vector indices: the order in which vectors are laid
/// tip-to-tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ordering(pub Vec<usize>);

impl Ordering {
    pub fn identity(n: usize) -> Self {
        Ordering((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::InvalidParameter(format!(
                "ordering has {} entries for {} vectors",
                self.0.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &k in &self.0 {
            if k >= n || seen[k] {
                return Err(Error::InvalidParameter(format!(
                    "ordering is not a permutation of 0..{n}"
                )));
            }
            seen[k] = true;
        }
        Ok(())
    }

    /// Start the cyclic word at position `shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.0.len();
        Ordering((0..n).map(|i| self.0[(i + shift) % n]).collect())
    }

    pub fn reversed(&self) -> Self {
        Ordering(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A closed polygonal walk; edge `i` runs from `vertices[i]` to `vertices[i + 1]`
/// and the last vertex repeats the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Walk {
    pub vertices: Vec<Vec2>,
}

impl Walk {
    /// Builds a walk from cyclic vertex positions, appending the closing vertex.
    pub fn from_cycle(mut cycle: Vec<Vec2>) -> Self {
        if let Some(&first) = cycle.first() {
            cycle.push(first);
        }
        Walk { vertices: cycle }
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Vertex `k` taken cyclically.
    pub fn vertex(&self, k: usize) -> Vec2 {
        self.vertices[k % self.edge_count().max(1)]
    }

    pub fn edge(&self, i: usize) -> (Vec2, Vec2) {
        (self.vertices[i], self.vertices[i + 1])
    }

    pub fn direction(&self, i: usize) -> Vec2 {
        self.vertices[i + 1] - self.vertices[i]
    }

    pub fn closure_gap(&self) -> f64 {
        match (self.vertices.first(), self.vertices.last()) {
            (Some(&a), Some(&b)) => a.distance(b),
            _ => 0.0,
        }
    }

    /// True when edges `i` and `j` share a vertex in cyclic order.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let m = self.edge_count();
        if i == j {
            return true;
        }
        let d = i.abs_diff(j);
        d == 1 || d == m - 1
    }

    pub fn point_at(&self, edge: usize, t: f64) -> Vec2 {
        let (a, b) = self.edge(edge);
        a.lerp(b, t)
    }
}

/// Vectors of a regular n-gon: `length · (cos(phase + 2πk/n), sin(phase + 2πk/n))`.
pub fn regular_ngon(n: usize, length: f64, phase: f64) -> Result<VectorSet> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "regular n-gon needs n >= 3, got {n}"
        )));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "length must be positive, got {length}"
        )));
    }
    let vectors = (0..n)
        .map(|k| Vec2::from_polar(length, phase + TAU * k as f64 / n as f64))
        .collect();
    VectorSet::new(vectors, DEFAULT_EPS * length.max(1.0))
}

/// Places the vectors tip-to-tail from the origin in the order given.
pub fn build_walk(vs: &VectorSet, ord: &Ordering, eps: f64) -> Result<Walk> {
    ord.validate(vs.len())?;
    let mut vertices = Vec::with_capacity(vs.len() + 1);
    let mut p = Vec2::ZERO;
    vertices.push(p);
    for &k in ord.as_slice() {
        p += vs.vectors[k];
        vertices.push(p);
    }
    let walk = Walk { vertices };
    let tolerance = CLOSURE_FACTOR * eps;
    let gap = walk.closure_gap();
    if gap > tolerance {
        return Err(Error::NotClosed { gap, tolerance });
    }
    Ok(walk)
}

/// Orders vectors by polar angle in `[0, 2π)`; vectors whose angles agree
/// within `eps` go shortest first, then by index.
pub fn polar_sort(vs: &VectorSet, eps: f64) -> Result<Ordering> {
    if let Some(i) = vs.vectors.iter().position(|v| v.norm() <= eps) {
        return Err(Error::InvalidParameter(format!(
            "vector {i} has zero length"
        )));
    }
    let mut idx: Vec<usize> = (0..vs.len()).collect();
    let angle = |i: usize| vs.vectors[i].angle();
    idx.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)).then(a.cmp(&b)));

    // Angles near 2π wrap onto 0 for tie purposes.
    let mut keyed: Vec<(f64, usize)> = idx
        .iter()
        .map(|&i| {
            let a = angle(i);
            (if TAU - a <= eps { 0.0 } else { a }, i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut out = Vec::with_capacity(keyed.len());
    let mut start = 0;
    while start < keyed.len() {
        let mut end = start + 1;
        while end < keyed.len() && keyed[end].0 - keyed[end - 1].0 <= eps {
            end += 1;
        }
        let mut run: Vec<usize> = keyed[start..end].iter().map(|&(_, i)| i).collect();
        run.sort_by(|&a, &b| {
            vs.vectors[a]
                .norm()
                .total_cmp(&vs.vectors[b].norm())
                .then(a.cmp(&b))
        });
        out.extend(run);
        start = end;
    }
    Ok(Ordering(out))
}

/// True iff the x-components take both signs and the y-components take both signs.
pub fn sign_components_ok(vs: &VectorSet, eps: f64) -> bool {
    let has = |f: fn(&Vec2) -> f64, positive: bool| {
        vs.vectors.iter().any(|v| {
            let c = f(v);
            if positive {
                c > eps
            } else {
                c < -eps
            }
        })
    };
    has(|v| v.x, true) && has(|v| v.x, false) && has(|v| v.y, true) && has(|v| v.y, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// Finds a vector that alone carries one sign on an axis while every other
/// vector is zero or opposite there. When several qualify the lowest vector
/// index wins, then the x-axis.
pub fn unique_sign_component(vs: &VectorSet, eps: f64) -> Option<(Axis, usize)> {
    let mut best: Option<(usize, Axis)> = None;
    for axis in [Axis::X, Axis::Y] {
        let comp = |v: &Vec2| match axis {
            Axis::X => v.x,
            Axis::Y => v.y,
        };
        for positive in [true, false] {
            let holders: Vec<usize> = vs
                .vectors
                .iter()
                .enumerate()
                .filter(|(_, v)| {
                    if positive {
                        comp(v) > eps
                    } else {
                        comp(v) < -eps
                    }
                })
                .map(|(i, _)| i)
                .collect();
            if let [only] = holders[..] {
                if best.is_none_or(|(i, _)| only < i) {
                    best = Some((only, axis));
                }
            }
        }
    }
    best.map(|(i, axis)| (axis, i))
}

/// Number of strict local maxima of vertex heights along `direction`, taken
/// cyclically. Fails when two vertices share a height; callers perturb the
/// direction and retry.
pub fn local_maxima_count(walk: &Walk, direction: Vec2, eps: f64) -> Result<usize> {
    if direction.norm() <= eps {
        return Err(Error::InvalidParameter("direction must be nonzero".into()));
    }
    let d = direction.unit();
    let m = walk.edge_count();
    if m == 0 {
        return Ok(0);
    }
    let h: Vec<f64> = walk.vertices[..m].iter().map(|v| v.dot(d)).collect();
    let mut sorted: Vec<(f64, usize)> = h.iter().copied().zip(0..).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if (w[1].0 - w[0].0).abs() <= eps {
            return Err(Error::NonGenericDirection(w[0].1, w[1].1));
        }
    }
    Ok((0..m)
        .filter(|&i| h[i] > h[(i + m - 1) % m] && h[i] > h[(i + 1) % m])
        .count())
}

/// Serialized form of a diagram built from a vector set and an ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramRecord {
    pub vectors: Vec<Vec2>,
    pub ordering: Ordering,
    pub vertices: Vec<Vec2>,
    pub crossings: Vec<Crossing>,
    pub degeneracies: Vec<Degeneracy>,
}

impl DiagramRecord {
    pub fn new(vs: &VectorSet, ordering: &Ordering, d: &Diagram) -> Self {
        DiagramRecord {
            vectors: vs.vectors.clone(),
            ordering: ordering.clone(),
            vertices: d.walk.vertices.clone(),
            crossings: d.crossings.clone(),
            degeneracies: d.degeneracies.clone(),
        }
    }

    /// Builds the record for `ordering` of `vs` from scratch.
    pub fn build(vs: &VectorSet, ordering: &Ordering, eps: f64) -> Result<(Self, Diagram)> {
        let d = detect_crossings(&build_walk(vs, ordering, eps)?, eps)?;
        Ok((Self::new(vs, ordering, &d), d))
    }

    /// Recomputes the diagram from the stored vectors and ordering.
    pub fn diagram(&self, eps: f64) -> Result<Diagram> {
        let vs = VectorSet::new(self.vectors.clone(), eps)?;
        detect_crossings(&build_walk(&vs, &self.ordering, eps)?, eps)
    }
}
