//! Constructions on regular polygon vector sets: the convex unknot, the
//! every-X-th-vector trefoil selection, small explicit knots, and
//! exhaustive searches over reorderings.

mod search;
mod small;

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heights::feasible_assignments;
use crate::knot::{classify, KnotClass};
use crate::planar::{
    build_walk, detect_crossings, polar_sort, regular_ngon, segment_intersection, Diagram,
    Intersection, Ordering, Vec2, VectorSet, CLOSURE_FACTOR,
};

pub use search::{
    canonical_ordering, search_ngon, CatalogMeta, ClassCount, SearchCatalog, SearchRecord,
};
pub use small::{
    exhaustive_6gon_check, figure_eight_8gon, heptagon_figure_ordering, pentagram_5_1, HexagonCase,
    HexagonReport, KnotConstruction, PentagramConstruction,
};

/// Regular n-gon (unit vectors, phase 0) reordered and analysed.
pub fn ngon_diagram(n: usize, ordering: &Ordering, eps: f64) -> Result<(VectorSet, Diagram)> {
    let vs = regular_ngon(n, 1.0, 0.0)?;
    let d = detect_crossings(&build_walk(&vs, ordering, eps)?, eps)?;
    Ok((vs, d))
}

/// Orders the vectors by polar angle, which traces a convex polygon.
pub fn unknot_ordering(vs: &VectorSet, eps: f64) -> Result<(Ordering, Diagram)> {
    let ord = polar_sort(vs, eps)?;
    let d = detect_crossings(&build_walk(vs, &ord, eps)?, eps)?;
    Ok((ord, d))
}

/// Step size and turning angle of the trefoil selection for `n` vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionParams {
    pub n: usize,
    pub x: usize,
    pub phi: f64,
}

impl SelectionParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 7 {
            return Err(Error::InvalidParameter(format!(
                "trefoil selection needs at least 7 vectors, got {n}"
            )));
        }
        let x = n / 3 + 1;
        Ok(SelectionParams {
            n,
            x,
            phi: 2.0 * PI * x as f64 / n as f64,
        })
    }

    /// `2π/3 < φ ≤ 2π/3 + 2π/7`, decided in integers: `3X > n` and `21X ≤ 10n`.
    pub fn angle_bounds_hold(&self) -> bool {
        3 * self.x > self.n && 21 * self.x <= 10 * self.n
    }
}

/// Vectors `0, X, 2X, 3X` (mod n), then the rest by ascending angle.
pub fn trefoil_selection(n: usize) -> Result<Ordering> {
    let p = SelectionParams::new(n)?;
    let mut ord: Vec<usize> = (0..4).map(|i| i * p.x % n).collect();
    let rest: Vec<usize> = (0..n).filter(|k| !ord.contains(k)).collect();
    ord.extend(rest);
    Ok(Ordering(ord))
}

/// Lower bound on `sin φ`, attained at `φ = 2π/3 + 2π/7`.
pub const SIN_PHI_LOWER: f64 = 0.149042;
/// Lower bound on the third tip's height.
pub const THIRD_TIP_LOWER: f64 = -0.369009;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionCase {
    pub n: usize,
    pub params: SelectionParams,
    pub sin_phi: f64,
    pub third_tip: Vec2,
    pub fourth_tip: Vec2,
    /// Height of the fourth tip above the line through the second vector.
    pub fourth_gap: f64,
    /// The first four vectors cross exactly at edge pairs (1,3), (2,4), (1,4).
    pub pairs_ok: bool,
    pub sin_ok: bool,
    pub third_ok: bool,
    pub fourth_ok: bool,
    /// Some realizable assignment of the full walk is a trefoil.
    pub trefoil_ok: bool,
    pub classes: Vec<KnotClass>,
}

impl SelectionCase {
    pub fn passes(&self) -> bool {
        self.pairs_ok && self.sin_ok && self.third_ok && self.fourth_ok && self.trefoil_ok
    }

    pub fn geometry_passes(&self) -> bool {
        self.pairs_ok && self.sin_ok && self.third_ok && self.fourth_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub cases: Vec<SelectionCase>,
}

impl SelectionReport {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(SelectionCase::passes)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SelectionCase> {
        self.cases.iter().filter(|c| !c.passes())
    }
}

/// Runs the selection checks for one `n`. Bounds are compared with
/// tolerance `tol`.
pub fn check_selection(n: usize, eps: f64, tol: f64) -> Result<SelectionCase> {
    let params = SelectionParams::new(n)?;
    let vs = regular_ngon(n, 1.0, 0.0)?;
    let ord = trefoil_selection(n)?;

    let mut tips = vec![Vec2::ZERO];
    for &k in &ord.as_slice()[..4] {
        tips.push(*tips.last().unwrap() + vs.vectors[k]);
    }
    let edge = |i: usize| (tips[i], tips[i + 1]);
    let crosses = |i: usize, j: usize| -> Result<bool> {
        let ((p0, p1), (q0, q1)) = (edge(i), edge(j));
        Ok(matches!(
            segment_intersection(p0, p1, q0, q1, eps)?,
            Intersection::Transversal { .. }
        ))
    };
    let pairs_ok = crosses(0, 2)? && crosses(1, 3)? && crosses(0, 3)?;

    let sin_phi = params.phi.sin();
    let sin_ok = SIN_PHI_LOWER - tol < sin_phi && sin_phi < 3f64.sqrt() / 2.0 + tol;
    let third_tip = tips[3];
    let third_ok = THIRD_TIP_LOWER - tol < third_tip.y && third_tip.y < tol && third_tip.x > -tol;
    let fourth_tip = tips[4];
    let tan = params.phi.tan();
    let fourth_gap = fourth_tip.y - (fourth_tip.x * tan - tan);
    let fourth_ok = fourth_gap > 0.0;

    let (_, d) = ngon_diagram(n, &ord, eps)?;
    let mut classes: Vec<KnotClass> = Vec::new();
    if !d.is_degenerate() {
        for (a, _) in feasible_assignments(&d)? {
            let k = classify(&d, &a)?;
            if !classes.contains(&k) {
                classes.push(k);
            }
        }
    }
    let trefoil_ok = classes.iter().any(|k| matches!(k, KnotClass::Trefoil(_)));

    Ok(SelectionCase {
        n,
        params,
        sin_phi,
        third_tip,
        fourth_tip,
        fourth_gap,
        pairs_ok,
        sin_ok,
        third_ok,
        fourth_ok,
        trefoil_ok,
        classes,
    })
}

/// [`check_selection`] over a range of `n`, in parallel.
pub fn verify_selection(range: RangeInclusive<usize>, eps: f64) -> Result<SelectionReport> {
    let ns: Vec<usize> = range.collect();
    let cases = ns
        .par_iter()
        .map(|&n| check_selection(n, eps, 1e-9))
        .collect::<Result<Vec<_>>>()?;
    Ok(SelectionReport { cases })
}

/// Outcome of arranging three equal vectors tip to tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "ordering", rename_all = "snake_case")]
pub enum ThreeVectorOutcome {
    /// The first and last edges of the open walk cross.
    Crossing(Ordering),
    /// The vectors sum to zero and close up into a triangle.
    ClosedLoop(Ordering),
}

/// Finds an order of three equal-length vectors whose open walk crosses
/// itself. The vectors must not lie in a closed half-plane.
pub fn three_vector_crossing(v: [Vec2; 3], eps: f64) -> Result<ThreeVectorOutcome> {
    let len = v[0].norm();
    if v.iter()
        .any(|u| (u.norm() - len).abs() > eps * len.max(1.0))
    {
        return Err(Error::InvalidParameter("vectors differ in length".into()));
    }
    let mut angles: Vec<f64> = v.iter().map(|u| u.angle()).collect();
    angles.sort_by(f64::total_cmp);
    let max_gap = (0..3)
        .map(|i| {
            if i == 2 {
                angles[0] + 2.0 * PI - angles[2]
            } else {
                angles[i + 1] - angles[i]
            }
        })
        .fold(0.0, f64::max);
    if max_gap >= PI - eps {
        return Err(Error::InvalidParameter(
            "vectors lie in a closed half-plane".into(),
        ));
    }
    if (v[0] + v[1] + v[2]).norm() <= CLOSURE_FACTOR * eps * len.max(1.0) {
        return Ok(ThreeVectorOutcome::ClosedLoop(Ordering::identity(3)));
    }
    for perm in (0..3).permutations(3) {
        let p1 = v[perm[0]];
        let p2 = p1 + v[perm[1]];
        let p3 = p2 + v[perm[2]];
        if let Intersection::Transversal { .. } = segment_intersection(Vec2::ZERO, p1, p2, p3, eps)?
        {
            return Ok(ThreeVectorOutcome::Crossing(Ordering(perm)));
        }
    }
    Err(Error::SearchFailed(
        "no ordering of the three vectors crosses".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{local_maxima_count, DEFAULT_EPS};

    const EPS: f64 = DEFAULT_EPS;

    #[test]
    fn selection_step() {
        assert_eq!(SelectionParams::new(7).unwrap().x, 3);
        assert_eq!(SelectionParams::new(9).unwrap().x, 4);
        assert_eq!(SelectionParams::new(12).unwrap().x, 5);
        assert!(SelectionParams::new(6).is_err());
        assert!(trefoil_selection(6).is_err());
    }

    #[test]
    fn selection_ordering_for_seven() {
        assert_eq!(
            trefoil_selection(7).unwrap(),
            Ordering(vec![0, 3, 6, 2, 1, 4, 5])
        );
        let p = SelectionParams::new(7).unwrap();
        assert!((p.phi - 6.0 * PI / 7.0).abs() < 1e-15);
        assert!((p.phi.sin() - 0.433_883_739_117_558).abs() < 1e-12);
    }

    #[test]
    fn angle_bounds_integer_form_matches_floats() {
        for n in 7..500 {
            let p = SelectionParams::new(n).unwrap();
            assert!(p.angle_bounds_hold(), "n = {n}");
            assert!(p.phi > 2.0 * PI / 3.0 && p.phi <= 2.0 * PI / 3.0 + 2.0 * PI / 7.0 + 1e-12);
        }
    }

    #[test]
    fn selection_geometry_for_seven() {
        let c = check_selection(7, EPS, 1e-9).unwrap();
        assert!(c.geometry_passes(), "{c:?}");
        assert!(c.third_tip.y < 0.0 && c.third_tip.x > 0.0);
    }

    #[test]
    fn convex_ordering_of_scrambled_octagon() {
        let base = regular_ngon(8, 1.0, 0.0).unwrap();
        let scrambled: Vec<Vec2> = [5, 2, 7, 0, 3, 6, 1, 4]
            .iter()
            .map(|&k| base.vectors[k])
            .collect();
        let vs = VectorSet::new(scrambled, EPS).unwrap();
        let (ord, d) = unknot_ordering(&vs, EPS).unwrap();
        assert_eq!(ord, Ordering(vec![3, 6, 1, 4, 7, 0, 5, 2]));
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(
            local_maxima_count(&d.walk, Vec2::new(0.3, 1.0), EPS).unwrap(),
            1
        );
    }

    #[test]
    fn three_vectors() {
        let at = |deg: f64| Vec2::from_polar(1.0, deg.to_radians());
        assert!(matches!(
            three_vector_crossing([at(0.0), at(120.0), at(240.0)], EPS).unwrap(),
            ThreeVectorOutcome::ClosedLoop(_)
        ));
        assert!(matches!(
            three_vector_crossing([at(0.0), at(150.0), at(250.0)], EPS).unwrap(),
            ThreeVectorOutcome::Crossing(_)
        ));
        assert!(three_vector_crossing([at(0.0), at(30.0), at(60.0)], EPS).is_err());
        assert!(three_vector_crossing([at(0.0), at(150.0), at(250.0) * 2.0], EPS).is_err());
    }
}
