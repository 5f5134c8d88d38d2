use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ngon_diagram;
use crate::error::{Error, Result};
use crate::heights::{
    build_system, constraints_from_assignment, feasible_assignments, solve_feasibility,
    vertical_stick_augmentation, HeightCertificate,
};
use crate::knot::{classify, CrossingAssignment, KnotClass};
use crate::planar::{Diagram, Ordering};

/// A reordering with a realizable assignment and its knot type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotConstruction {
    pub ordering: Ordering,
    pub diagram: Diagram,
    pub assignment: CrossingAssignment,
    pub certificate: HeightCertificate,
    pub class: KnotClass,
}

/// A planar diagram lifted with vertical sticks at `verticals`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PentagramConstruction {
    pub knot: KnotConstruction,
    pub verticals: BTreeSet<usize>,
    pub sticks: usize,
    /// Whether the assignment is realizable without the vertical sticks.
    pub planar_feasible: bool,
}

/// The 7-gon reordering drawn in the trefoil figure: its crossings sit at
/// two vertices and one edge interior.
pub fn heptagon_figure_ordering() -> Ordering {
    Ordering(vec![0, 1, 3, 5, 6, 2, 4])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexagonCase {
    pub ordering: Ordering,
    pub crossings: usize,
    /// Edges left after retrace collapse.
    pub edges: usize,
    pub feasible: usize,
    pub classes: Vec<KnotClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexagonReport {
    pub cases: Vec<HexagonCase>,
    pub unresolved: Vec<Ordering>,
}

impl HexagonReport {
    pub fn all_unknot(&self) -> bool {
        self.unresolved.is_empty()
            && self
                .cases
                .iter()
                .all(|c| c.classes.iter().all(|k| *k == KnotClass::Unknot))
    }
}

/// Every reordering of the regular hexagon with the first vector fixed,
/// with every realizable assignment classified.
pub fn exhaustive_6gon_check(eps: f64) -> Result<HexagonReport> {
    let orderings: Vec<Ordering> = (1..6)
        .permutations(5)
        .map(|p| Ordering(std::iter::once(0).chain(p).collect()))
        .collect();
    let results = orderings
        .par_iter()
        .map(|ord| -> Result<(Ordering, Option<HexagonCase>)> {
            let (_, d) = ngon_diagram(6, ord, eps)?;
            if d.is_degenerate() {
                return Ok((ord.clone(), None));
            }
            let feasible = feasible_assignments(&d)?;
            let mut classes = Vec::new();
            for (a, _) in &feasible {
                let k = classify(&d, a)?;
                if !classes.contains(&k) {
                    classes.push(k);
                }
            }
            Ok((
                ord.clone(),
                Some(HexagonCase {
                    ordering: ord.clone(),
                    crossings: d.crossing_count(),
                    edges: d.walk.edge_count(),
                    feasible: feasible.len(),
                    classes,
                }),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = HexagonReport {
        cases: Vec::new(),
        unresolved: Vec::new(),
    };
    for (ord, case) in results {
        match case {
            Some(c) => report.cases.push(c),
            None => report.unresolved.push(ord),
        }
    }
    Ok(report)
}

/// First 8-gon reordering, in lexicographic order, with four crossings
/// whose alternating assignment is realizable and is a figure-eight knot.
pub fn figure_eight_8gon(eps: f64) -> Result<KnotConstruction> {
    for p in (1..8).permutations(7) {
        let ord = Ordering(std::iter::once(0).chain(p).collect());
        let (_, d) = ngon_diagram(8, &ord, eps)?;
        if d.is_degenerate() || d.crossing_count() != 4 {
            continue;
        }
        let Some(a) = CrossingAssignment::alternating(&d) else {
            continue;
        };
        let Some(cert) = solve_feasibility(&constraints_from_assignment(&d, &a)?)? else {
            continue;
        };
        let class = classify(&d, &a)?;
        if class == KnotClass::FigureEight {
            return Ok(KnotConstruction {
                ordering: ord,
                diagram: d,
                assignment: a,
                certificate: cert,
                class,
            });
        }
    }
    Err(Error::SearchFailed(
        "no 4-crossing alternating figure-eight among 8-gon reorderings".into(),
    ))
}

/// The regular pentagon taken every third vector (a pentagram), lifted
/// with three vertical sticks so its alternating assignment is realizable.
/// The sticks go at the first vertex triple, in lexicographic order, that
/// makes the system feasible.
pub fn pentagram_5_1(eps: f64) -> Result<PentagramConstruction> {
    let ord = Ordering((0..5).map(|i| 3 * i % 5).collect());
    let (_, d) = ngon_diagram(5, &ord, eps)?;
    d.require_resolved()?;
    let a = CrossingAssignment::alternating(&d)
        .ok_or_else(|| Error::SearchFailed("pentagram is not alternating".into()))?;
    let planar_feasible = solve_feasibility(&constraints_from_assignment(&d, &a)?)?.is_some();
    let class = classify(&d, &a)?;
    for triple in (0..5).combinations(3) {
        let verticals: BTreeSet<usize> = triple.into_iter().collect();
        if let Some(cert) = solve_feasibility(&build_system(&d, &a, &verticals)?)? {
            let sticks = vertical_stick_augmentation(&d, &verticals);
            return Ok(PentagramConstruction {
                knot: KnotConstruction {
                    ordering: ord,
                    diagram: d,
                    assignment: a,
                    certificate: cert,
                    class,
                },
                verticals,
                sticks,
                planar_feasible,
            });
        }
    }
    Err(Error::SearchFailed(
        "no three vertical sticks make the pentagram realizable".into(),
    ))
}
