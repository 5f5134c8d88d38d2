use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{extract_gauss_code, gauss_to_pd, jones, CrossingAssignment, LaurentPoly, PDCode};
use crate::error::Result;
use crate::planar::{segment_intersection, Diagram, Intersection, Vec2, DEFAULT_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    Left,
    Right,
}

impl Chirality {
    pub fn mirror(self) -> Self {
        match self {
            Chirality::Left => Chirality::Right,
            Chirality::Right => Chirality::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnotClass {
    Unknot,
    Trefoil(Chirality),
    FigureEight,
    Cinquefoil(Chirality),
    ThreeTwist(Chirality),
    Other { jones: LaurentPoly },
}

impl KnotClass {
    /// Rolfsen name, e.g. `3_1`.
    pub fn name(&self) -> &'static str {
        match self {
            KnotClass::Unknot => "0_1",
            KnotClass::Trefoil(_) => "3_1",
            KnotClass::FigureEight => "4_1",
            KnotClass::Cinquefoil(_) => "5_1",
            KnotClass::ThreeTwist(_) => "5_2",
            KnotClass::Other { .. } => "other",
        }
    }

    pub fn chirality(&self) -> Option<Chirality> {
        match self {
            KnotClass::Trefoil(c) | KnotClass::Cinquefoil(c) | KnotClass::ThreeTwist(c) => Some(*c),
            _ => None,
        }
    }

    /// (crossing number, stick number, bridge number).
    pub fn invariants(&self) -> Option<(u32, u32, u32)> {
        match self {
            KnotClass::Unknot => Some((0, 3, 1)),
            KnotClass::Trefoil(_) => Some((3, 6, 2)),
            KnotClass::FigureEight => Some((4, 7, 2)),
            KnotClass::Cinquefoil(_) | KnotClass::ThreeTwist(_) => Some((5, 8, 2)),
            KnotClass::Other { .. } => None,
        }
    }

    pub fn crossing_number(&self) -> Option<u32> {
        self.invariants().map(|t| t.0)
    }

    pub fn stick_number(&self) -> Option<u32> {
        self.invariants().map(|t| t.1)
    }

    pub fn bridge_number(&self) -> Option<u32> {
        self.invariants().map(|t| t.2)
    }

    pub fn mirror(&self) -> Self {
        match self {
            KnotClass::Trefoil(c) => KnotClass::Trefoil(c.mirror()),
            KnotClass::Cinquefoil(c) => KnotClass::Cinquefoil(c.mirror()),
            KnotClass::ThreeTwist(c) => KnotClass::ThreeTwist(c.mirror()),
            KnotClass::Other { jones } => KnotClass::Other {
                jones: jones.mirror(),
            },
            k => k.clone(),
        }
    }

    /// Same knot type, ignoring chirality.
    pub fn same_type(&self, other: &KnotClass) -> bool {
        match (self, other) {
            (KnotClass::Other { jones: a }, KnotClass::Other { jones: b }) => {
                a == b || *a == b.mirror()
            }
            _ => self.name() == other.name(),
        }
    }
}

impl fmt::Display for KnotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotClass::Other { jones } => write!(f, "other (V = {jones})"),
            k => match k.chirality() {
                Some(Chirality::Left) => write!(f, "{} (left)", k.name()),
                Some(Chirality::Right) => write!(f, "{} (right)", k.name()),
                None => f.write_str(k.name()),
            },
        }
    }
}

/// A reference diagram and its Jones polynomial.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub class: KnotClass,
    pub pd: PDCode,
    pub jones: LaurentPoly,
}

/// Minimal diagrams of the knots up to five crossings, in both
/// chiralities. Left-handed diagrams are the ones with negative writhe.
pub fn fixtures() -> &'static [Fixture] {
    static FIXTURES: OnceLock<Vec<Fixture>> = OnceLock::new();
    FIXTURES.get_or_init(|| {
        type Entry = (fn(Chirality) -> KnotClass, Vec<[usize; 4]>);
        let base: [Entry; 4] = [
            (
                KnotClass::Trefoil,
                vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]],
            ),
            (
                |_| KnotClass::FigureEight,
                vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]],
            ),
            (
                KnotClass::Cinquefoil,
                vec![
                    [1, 6, 2, 7],
                    [3, 8, 4, 9],
                    [5, 10, 6, 1],
                    [7, 2, 8, 3],
                    [9, 4, 10, 5],
                ],
            ),
            (
                KnotClass::ThreeTwist,
                vec![
                    [1, 4, 2, 5],
                    [3, 8, 4, 9],
                    [5, 10, 6, 1],
                    [9, 6, 10, 7],
                    [7, 2, 8, 3],
                ],
            ),
        ];
        let mut out = vec![Fixture {
            class: KnotClass::Unknot,
            pd: PDCode(vec![]),
            jones: LaurentPoly::one(),
        }];
        for (make, tuples) in base {
            let pd = PDCode(tuples);
            let w = pd.writhe();
            let j = jones(&pd, w).expect("fixture diagrams are valid");
            let hand = if w < 0 {
                Chirality::Left
            } else {
                Chirality::Right
            };
            let class = make(hand);
            if class.chirality().is_some() {
                out.push(Fixture {
                    class: class.mirror(),
                    pd: mirror_pd(&pd),
                    jones: j.mirror(),
                });
            }
            out.push(Fixture {
                class,
                pd,
                jones: j,
            });
        }
        out
    })
}

/// Switches every crossing: the incoming under arc becomes the incoming
/// over arc, which is the next entry counterclockwise.
fn mirror_pd(pd: &PDCode) -> PDCode {
    let n = 2 * pd.crossing_count();
    PDCode(
        pd.0.iter()
            .map(|&[i, j, k, l]| {
                if j == l % n + 1 {
                    [l, i, j, k]
                } else {
                    [j, k, l, i]
                }
            })
            .collect(),
    )
}

/// Matches a Jones polynomial against the fixtures.
pub fn classify_jones(j: &LaurentPoly) -> KnotClass {
    fixtures()
        .iter()
        .find(|f| f.jones == *j)
        .map(|f| f.class.clone())
        .unwrap_or_else(|| KnotClass::Other { jones: j.clone() })
}

/// Classifies a PD code with the given writhe. Diagrams with fewer than
/// three crossings are unknots.
pub fn classify_pd(pd: &PDCode, writhe: i32) -> Result<KnotClass> {
    if pd.crossing_count() < 3 {
        return Ok(KnotClass::Unknot);
    }
    Ok(classify_jones(&jones(pd, writhe)?))
}

/// Knot type of a diagram under an over/under assignment.
pub fn classify(d: &Diagram, a: &CrossingAssignment) -> Result<KnotClass> {
    let g = extract_gauss_code(d, a)?;
    if g.crossing_count() < 3 {
        return Ok(KnotClass::Unknot);
    }
    let pd = gauss_to_pd(&g)?;
    classify_pd(&pd, g.writhe())
}

/// Effective stick count after merging pairs of consecutive edges that carry
/// no crossing. A pair is merged only when the triangle it spans with the
/// shortcut meets no other edge, so the merge is an isotopy of the diagram.
/// Never goes below three.
pub fn merge_crossingless_runs(d: &Diagram) -> usize {
    let m = d.walk.edge_count();
    let touched = d.edges_at_crossings();
    let mut verts: Vec<Vec2> = d.walk.vertices[..m].to_vec();
    let mut free: Vec<bool> = (0..m).map(|e| !touched.contains(&e)).collect();
    'outer: while verts.len() > 3 {
        let n = verts.len();
        for i in 0..n {
            let j = (i + 1) % n;
            if free[i] && free[j] && !triangle_blocked(&verts, i) {
                verts.remove(j);
                free.remove(j);
                continue 'outer;
            }
        }
        break;
    }
    verts.len()
}

/// Whether sliding edges `i` and `i + 1` onto the shortcut from vertex `i`
/// to vertex `i + 2` would pass through some other edge.
fn triangle_blocked(verts: &[Vec2], i: usize) -> bool {
    let n = verts.len();
    let (a, b, c) = (verts[i], verts[(i + 1) % n], verts[(i + 2) % n]);
    let area = (b - a).cross(c - a);
    let inside = |p: Vec2| {
        let s = area.signum();
        s * (b - a).cross(p - a) > 0.0
            && s * (c - b).cross(p - b) > 0.0
            && s * (a - c).cross(p - c) > 0.0
    };
    let eps = DEFAULT_EPS;
    let hits = |p: Vec2, q: Vec2, r: Vec2, s: Vec2| {
        (q - p).norm() > eps
            && (s - r).norm() > eps
            && !matches!(
                segment_intersection(p, q, r, s, eps),
                Ok(Intersection::None)
            )
    };
    // Neighbouring edges share a corner; they only interfere by entering
    // the triangle's angle there.
    let before = verts[(i + n - 1) % n];
    let after = verts[(i + 3) % n];
    let into_angle = |corner: Vec2, x: Vec2, y: Vec2, dir: Vec2| {
        let s = (x - corner).cross(y - corner).signum();
        s * (x - corner).cross(dir) > 0.0 && s * dir.cross(y - corner) > 0.0
    };
    if n > 3 && (into_angle(a, b, c, before - a) || into_angle(c, a, b, after - c)) {
        return true;
    }
    for k in 0..n {
        let (p, q) = (verts[k], verts[(k + 1) % n]);
        let neighbour = k == (i + n - 1) % n || k == (i + 2) % n;
        if k == i || k == (i + 1) % n || neighbour {
            continue;
        }
        if inside(p) || inside(q) || hits(p, q, a, b) || hits(p, q, b, c) || hits(p, q, a, c) {
            return true;
        }
    }
    false
}

/// False when the knot type needs more sticks than are available. A walk
/// that retraces itself collapses to zero sticks and still counts as an
/// unknot.
pub fn stick_filter(effective_sticks: usize, k: &KnotClass) -> bool {
    *k == KnotClass::Unknot
        || k.stick_number()
            .is_none_or(|s| s as usize <= effective_sticks)
}
