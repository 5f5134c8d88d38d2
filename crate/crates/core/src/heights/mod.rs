//! Lifting a diagram to straight sticks in space: for a chosen over/under
//! assignment, find vertex heights that put every over-strand strictly above
//! its under-strand.

mod simplex;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{CrossingAssignment, Over, MAX_STATE_SUM_CROSSINGS};
use crate::planar::Diagram;

/// Limit on active height variables and on constraints.
pub const MAX_VARIABLES: usize = 64;
pub const MAX_CONSTRAINTS: usize = 64;

/// Smallest optimal uniform slack (with heights boxed to [-1, 1]) that
/// counts as feasible.
const FEASIBILITY_TOL: f64 = 1e-9;

/// `Σ coeff · z[var] > 0` for one crossing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightConstraint {
    pub coeffs: Vec<(usize, f64)>,
    pub crossing: usize,
}

impl HeightConstraint {
    /// Builds a constraint, merging repeated variables and dropping zeros.
    pub fn new(terms: impl IntoIterator<Item = (usize, f64)>, crossing: usize) -> Self {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for (v, c) in terms {
            *merged.entry(v).or_insert(0.0) += c;
        }
        HeightConstraint {
            coeffs: merged.into_iter().filter(|&(_, c)| c != 0.0).collect(),
            crossing,
        }
    }

    pub fn slack(&self, z: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, c)| c * z[v]).sum()
    }
}

/// Homogeneous strict system over `vertex_count` height variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightSystem {
    pub constraints: Vec<HeightConstraint>,
    pub vertex_count: usize,
}

impl HeightSystem {
    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// The system for the opposite assignment.
    pub fn negated(&self) -> Self {
        HeightSystem {
            constraints: self
                .constraints
                .iter()
                .map(|c| HeightConstraint {
                    coeffs: c.coeffs.iter().map(|&(v, x)| (v, -x)).collect(),
                    crossing: c.crossing,
                })
                .collect(),
            vertex_count: self.vertex_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightCertificate {
    pub z: Vec<f64>,
    /// Minimum slack; `f64::INFINITY` for an empty system.
    pub margin: f64,
}

impl HeightCertificate {
    pub fn scaled(&self, k: f64) -> Self {
        HeightCertificate {
            z: self.z.iter().map(|x| x * k).collect(),
            margin: self.margin * k,
        }
    }

    pub fn to_record(&self, assignment: &CrossingAssignment) -> CertificateRecord {
        CertificateRecord {
            assignment: assignment.bits(),
            z: self.z.clone(),
            margin: self.margin.is_finite().then_some(self.margin),
        }
    }
}

/// JSON form of a certificate; an infinite margin is written as null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub assignment: u64,
    pub z: Vec<f64>,
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub valid: bool,
    pub min_slack: f64,
}

/// Height system for `d` under `a`, one variable per walk vertex.
pub fn constraints_from_assignment(d: &Diagram, a: &CrossingAssignment) -> Result<HeightSystem> {
    build_system(d, a, &BTreeSet::new())
}

/// Height system where each vertex in `split` carries a vertical stick: the
/// edge arriving there ends at the stick's bottom and the edge leaving
/// starts at its top, an extra variable numbered after the walk vertices.
pub fn build_system(
    d: &Diagram,
    a: &CrossingAssignment,
    split: &BTreeSet<usize>,
) -> Result<HeightSystem> {
    d.require_resolved()?;
    if a.len() != d.crossing_count() {
        return Err(Error::InvalidParameter(format!(
            "assignment covers {} crossings, diagram has {}",
            a.len(),
            d.crossing_count()
        )));
    }
    let m = d.walk.edge_count();
    if let Some(&k) = split.iter().find(|&&k| k >= m) {
        return Err(Error::MissingVertex(k));
    }
    let top: BTreeMap<usize, usize> = split.iter().enumerate().map(|(i, &k)| (k, m + i)).collect();
    let start = |e: usize| top.get(&e).copied().unwrap_or(e);
    let end = |e: usize| (e + 1) % m;
    let height = |e: usize, t: f64| [(start(e), 1.0 - t), (end(e), t)];

    let constraints = d
        .crossings
        .iter()
        .zip(&a.over)
        .enumerate()
        .map(|(i, (c, over))| {
            let (o, u) = match over {
                Over::A => ((c.edge_a, c.t_a), (c.edge_b, c.t_b)),
                Over::B => ((c.edge_b, c.t_b), (c.edge_a, c.t_a)),
            };
            let under = height(u.0, u.1).map(|(v, w)| (v, -w));
            HeightConstraint::new(height(o.0, o.1).into_iter().chain(under), i)
        })
        .collect();
    Ok(HeightSystem {
        constraints,
        vertex_count: m + split.len(),
    })
}

/// Decides the strict homogeneous system by maximizing a uniform slack `s`
/// over heights boxed to [-1, 1]. Returns heights scaled to margin 1.
pub fn solve_feasibility(sys: &HeightSystem) -> Result<Option<HeightCertificate>> {
    if sys.constraints.len() > MAX_CONSTRAINTS {
        return Err(Error::TooLarge {
            what: "constraint count",
            got: sys.constraints.len(),
            limit: MAX_CONSTRAINTS,
        });
    }
    if sys.constraints.is_empty() {
        return Ok(Some(HeightCertificate {
            z: vec![0.0; sys.vertex_count],
            margin: f64::INFINITY,
        }));
    }
    let active: BTreeSet<usize> = sys
        .constraints
        .iter()
        .flat_map(|c| c.coeffs.iter().map(|&(v, _)| v))
        .collect();
    if let Some(&v) = active.iter().find(|&&v| v >= sys.vertex_count) {
        return Err(Error::MissingVertex(v));
    }
    if active.len() > MAX_VARIABLES {
        return Err(Error::TooLarge {
            what: "active height variables",
            got: active.len(),
            limit: MAX_VARIABLES,
        });
    }
    let index: BTreeMap<usize, usize> = active.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = active.len();

    // Variables: u (n), w (n), s; heights are u - w.
    let width = 2 * n + 1;
    let mut a: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    for c in &sys.constraints {
        let mut row = vec![0.0; width];
        for &(v, x) in &c.coeffs {
            row[index[&v]] -= x;
            row[n + index[&v]] += x;
        }
        row[2 * n] = 1.0;
        a.push(row);
        b.push(0.0);
    }
    for j in 0..width {
        let mut row = vec![0.0; width];
        row[j] = 1.0;
        a.push(row);
        b.push(1.0);
    }
    let mut obj = vec![0.0; width];
    obj[2 * n] = 1.0;
    let sol = simplex::maximize(&a, &b, &obj);
    if sol.value <= FEASIBILITY_TOL {
        return Ok(None);
    }

    let mut z = vec![0.0; sys.vertex_count];
    for (&v, &i) in &index {
        z[v] = sol.x[i] - sol.x[n + i];
    }
    let min = min_slack(sys, &z);
    if min <= 0.0 {
        return Ok(None);
    }
    for x in z.iter_mut() {
        *x /= min;
    }
    let margin = min_slack(sys, &z);
    Ok(Some(HeightCertificate { z, margin }))
}

fn min_slack(sys: &HeightSystem, z: &[f64]) -> f64 {
    sys.constraints
        .iter()
        .map(|c| c.slack(z))
        .fold(f64::INFINITY, f64::min)
}

/// Recomputes every slack of `cert` on `sys`.
pub fn verify_certificate(sys: &HeightSystem, cert: &HeightCertificate) -> Result<Verification> {
    if cert.z.len() < sys.vertex_count {
        return Err(Error::MissingVertex(cert.z.len()));
    }
    let min_slack = min_slack(sys, &cert.z);
    Ok(Verification {
        valid: min_slack > 0.0,
        min_slack,
    })
}

/// All assignments of `d` whose height systems are feasible, with
/// certificates, ordered by assignment bits. Prefixes that are already
/// infeasible are pruned.
pub fn feasible_assignments(d: &Diagram) -> Result<Vec<(CrossingAssignment, HeightCertificate)>> {
    feasible_assignments_split(d, &BTreeSet::new())
}

/// As [`feasible_assignments`], with vertical sticks at `split`.
pub fn feasible_assignments_split(
    d: &Diagram,
    split: &BTreeSet<usize>,
) -> Result<Vec<(CrossingAssignment, HeightCertificate)>> {
    let c = d.crossing_count();
    if c > MAX_STATE_SUM_CROSSINGS {
        return Err(Error::TooLarge {
            what: "crossing count",
            got: c,
            limit: MAX_STATE_SUM_CROSSINGS,
        });
    }
    let full = build_system(d, &CrossingAssignment::all(Over::A, c), split)?;
    let flipped = full.negated();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u64)> = vec![(0, 0)];
    let mut prefix = HeightSystem {
        constraints: Vec::new(),
        vertex_count: full.vertex_count,
    };
    while let Some((depth, bits)) = stack.pop() {
        prefix.constraints = (0..depth)
            .map(|i| {
                if bits >> i & 1 == 1 {
                    full.constraints[i].clone()
                } else {
                    flipped.constraints[i].clone()
                }
            })
            .collect();
        let Some(cert) = solve_feasibility(&prefix)? else {
            continue;
        };
        if depth == c {
            out.push((CrossingAssignment::from_bits(bits, c), cert));
        } else {
            stack.push((depth + 1, bits));
            stack.push((depth + 1, bits | 1 << depth));
        }
    }
    out.sort_by_key(|(a, _)| a.bits());
    Ok(out)
}

/// Stick count in space once vertical sticks are added at `vertices`.
pub fn vertical_stick_augmentation(d: &Diagram, vertices: &BTreeSet<usize>) -> usize {
    d.walk.edge_count() + vertices.len()
}
