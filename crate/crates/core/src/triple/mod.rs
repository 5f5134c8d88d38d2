//! Diagrams with one triple crossing and one ordinary crossing.
//!
//! The triple crossing has ends `1..=6` read clockwise, with strands
//! `1-4`, `2-5` and `3-6`. The ordinary crossing has ends `a, b, d, c`
//! read clockwise, with strands `a-d` and `b-c`.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{classify_pd, KnotClass, PDCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    Top,
    Middle,
    Bottom,
}

impl Level {
    fn height(self) -> u8 {
        match self {
            Level::Top => 2,
            Level::Middle => 1,
            Level::Bottom => 0,
        }
    }

    fn flip(self) -> Level {
        match self {
            Level::Top => Level::Bottom,
            Level::Middle => Level::Middle,
            Level::Bottom => Level::Top,
        }
    }
}

/// Heights of the three strands through the triple point, indexed by strand
/// (`0` is `1-4`, `1` is `2-5`, `2` is `3-6`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleLabeling(pub [Level; 3]);

impl TripleLabeling {
    /// The six bijections from strands to levels.
    pub fn all() -> Vec<Self> {
        [Level::Top, Level::Middle, Level::Bottom]
            .into_iter()
            .permutations(3)
            .map(|p| TripleLabeling([p[0], p[1], p[2]]))
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.0.iter().collect::<BTreeSet<_>>().len() == 3
    }

    pub fn mirrored(&self) -> Self {
        TripleLabeling(self.0.map(Level::flip))
    }
}

impl fmt::Display for TripleLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.0 {
            f.write_str(match l {
                Level::Top => "T",
                Level::Middle => "M",
                Level::Bottom => "B",
            })?;
        }
        Ok(())
    }
}

/// One of the three crossings a triple point opens into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairCrossing {
    pub over: usize,
    pub under: usize,
}

/// The three pairwise crossings of a labelled triple point, for the strand
/// pairs `(0,1)`, `(0,2)` and `(1,2)` in that order.
pub fn resolve_triple(label: &TripleLabeling) -> Result<[PairCrossing; 3]> {
    if !label.is_valid() {
        return Err(Error::InvalidParameter(format!(
            "labeling {label} is not a bijection"
        )));
    }
    Ok(STRAND_PAIRS.map(|(s, t)| {
        if label.0[s].height() > label.0[t].height() {
            PairCrossing { over: s, under: t }
        } else {
            PairCrossing { over: t, under: s }
        }
    }))
}

const STRAND_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TradEnd {
    A,
    B,
    C,
    D,
}

impl TradEnd {
    const ALL: [TradEnd; 4] = [TradEnd::A, TradEnd::B, TradEnd::C, TradEnd::D];

    /// Position in counterclockwise order `a, c, d, b`.
    fn slot(self) -> usize {
        match self {
            TradEnd::A => 0,
            TradEnd::C => 1,
            TradEnd::D => 2,
            TradEnd::B => 3,
        }
    }

    fn from_slot(s: usize) -> TradEnd {
        [TradEnd::A, TradEnd::C, TradEnd::D, TradEnd::B][s % 4]
    }
}

impl fmt::Display for TradEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TradEnd::A => "a",
            TradEnd::B => "b",
            TradEnd::C => "c",
            TradEnd::D => "d",
        })
    }
}

/// Which strand of the ordinary crossing is on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TradOver {
    /// `a-d` over `b-c`.
    AD,
    /// `b-c` over `a-d`.
    BC,
}

impl TradOver {
    pub const ALL: [TradOver; 2] = [TradOver::AD, TradOver::BC];

    pub fn flip(self) -> TradOver {
        match self {
            TradOver::AD => TradOver::BC,
            TradOver::BC => TradOver::AD,
        }
    }
}

/// A way to join the ten ends into a single closed curve: two triple ends
/// joined to each other, the other four joined to `a, b, c, d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosureScheme {
    pub internal: (u8, u8),
    pub links: [(u8, TradEnd); 4],
    /// Faces of the two-vertex graph; five means the arcs embed in the plane
    /// without new crossings.
    pub faces: usize,
}

impl ClosureScheme {
    /// Builds a scheme from its arcs, computing the face count.
    pub fn new(internal: (u8, u8), links: [(u8, TradEnd); 4]) -> Result<Self> {
        let mut ends: Vec<u8> = links.iter().map(|l| l.0).collect();
        ends.extend([internal.0, internal.1]);
        ends.sort_unstable();
        let trads: BTreeSet<TradEnd> = links.iter().map(|l| l.1).collect();
        if ends != [1, 2, 3, 4, 5, 6] || trads.len() != 4 {
            return Err(Error::InvalidParameter(
                "a closure must use every end exactly once".into(),
            ));
        }
        let (a, b) = (internal.0.min(internal.1), internal.0.max(internal.1));
        let mut links = links;
        links.sort();
        let mut s = ClosureScheme {
            internal: (a, b),
            links,
            faces: 0,
        };
        s.faces = s.face_count();
        Ok(s)
    }

    pub fn is_planar(&self) -> bool {
        self.faces == 5
    }

    /// Rotates the triple ends by `k` clockwise steps and the ordinary ends
    /// by `m` counterclockwise steps.
    pub fn rotated(&self, k: u8, m: usize) -> Self {
        let r = |e: u8| (e - 1 + k) % 6 + 1;
        let links = self
            .links
            .map(|(e, t)| (r(e), TradEnd::from_slot(t.slot() + m)));
        ClosureScheme::new((r(self.internal.0), r(self.internal.1)), links).unwrap()
    }

    /// Faces of the graph with the triple point and the ordinary crossing as
    /// vertices and the five closing arcs as edges.
    fn face_count(&self) -> usize {
        // Darts 0..6 are triple ends 1..=6, darts 6..10 the ordinary slots.
        let dart_of_end = |e: u8| (e - 1) as usize;
        let dart_of_trad = |t: TradEnd| 6 + t.slot();
        let mut alpha = [0usize; 10];
        let mut join = |x: usize, y: usize| {
            alpha[x] = y;
            alpha[y] = x;
        };
        join(dart_of_end(self.internal.0), dart_of_end(self.internal.1));
        for &(e, t) in &self.links {
            join(dart_of_end(e), dart_of_trad(t));
        }
        // Counterclockwise successor: triple ends run clockwise by label.
        let sigma = |d: usize| {
            if d < 6 {
                (d + 5) % 6
            } else {
                6 + (d - 6 + 1) % 4
            }
        };
        let mut seen = [false; 10];
        let mut faces = 0;
        for start in 0..10 {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                d = sigma(alpha[d]);
            }
        }
        faces
    }
}

impl fmt::Display for ClosureScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.internal.0, self.internal.1)?;
        for (e, t) in &self.links {
            write!(f, " ({e},{t})")?;
        }
        Ok(())
    }
}

type Port = (usize, usize);

/// Crossings `0..3` come from the triple point (for strand pairs in
/// [`STRAND_PAIRS`] order), crossing `3` is the ordinary one. Slots are
/// numbered counterclockwise and opposite slots share a strand.
struct Opened {
    /// Port reached from triple end `k` (index `k - 1`).
    end_port: [Port; 6],
    /// Ports joined inside the triple disk.
    inner: Vec<(Port, Port)>,
    /// Strand through each slot of the three triangle crossings.
    strand_at: [[usize; 4]; 3],
}

/// Pushes the middle strand off the triple point, leaving a small triangle
/// of three ordinary crossings.
fn open_triple() -> Opened {
    let end = |k: usize| {
        let th = PI / 2.0 - (k as f64 - 1.0) * PI / 3.0;
        [th.cos(), th.sin()]
    };
    let offset = 0.1;
    let mut lines = [[[0.0f64; 2]; 2]; 3];
    for (s, line) in lines.iter_mut().enumerate() {
        let (p, q) = (end(s + 1), end(s + 4));
        let n = [-(q[1] - p[1]) / 2.0, (q[0] - p[0]) / 2.0];
        let h = if s == 1 { offset } else { 0.0 };
        *line = [
            [p[0] + h * n[0], p[1] + h * n[1]],
            [q[0] + h * n[0], q[1] + h * n[1]],
        ];
    }
    let dir = |s: usize| {
        let [p, q] = lines[s];
        [q[0] - p[0], q[1] - p[1]]
    };
    let param = |s: usize, t: usize| {
        let ([p, _], [r, _]) = (lines[s], lines[t]);
        let (d, e) = (dir(s), dir(t));
        let den = d[0] * e[1] - d[1] * e[0];
        ((r[0] - p[0]) * e[1] - (r[1] - p[1]) * e[0]) / den
    };

    let mut strand_at = [[0usize; 4]; 3];
    // slot[node][(strand_local, forward)]
    let mut fwd_slot = HashMap::new();
    let mut bwd_slot = HashMap::new();
    for (node, &(s, t)) in STRAND_PAIRS.iter().enumerate() {
        let mut rays: Vec<(f64, usize, bool)> = Vec::new();
        for st in [s, t] {
            let d = dir(st);
            rays.push((d[1].atan2(d[0]), st, true));
            rays.push(((-d[1]).atan2(-d[0]), st, false));
        }
        rays.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (slot, &(_, st, forward)) in rays.iter().enumerate() {
            strand_at[node][slot] = st;
            if forward {
                fwd_slot.insert((node, st), slot);
            } else {
                bwd_slot.insert((node, st), slot);
            }
        }
    }

    let mut end_port = [(0, 0); 6];
    let mut inner = Vec::new();
    for s in 0..3 {
        let mut nodes: Vec<(f64, usize)> = STRAND_PAIRS
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == s || b == s)
            .map(|(node, &(a, b))| (param(s, if a == s { b } else { a }), node))
            .collect();
        nodes.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (first, last) = (nodes[0].1, nodes[1].1);
        end_port[s] = (first, bwd_slot[&(first, s)]);
        inner.push(((first, fwd_slot[&(first, s)]), (last, bwd_slot[&(last, s)])));
        end_port[s + 3] = (last, fwd_slot[&(last, s)]);
    }
    Opened {
        end_port,
        inner,
        strand_at,
    }
}

/// Assembles the four-crossing PD code of a closure, or `None` when the
/// arcs close up into more than one component.
pub fn assemble(
    scheme: &ClosureScheme,
    label: &TripleLabeling,
    trad: TradOver,
) -> Result<Option<PDCode>> {
    let pairs = resolve_triple(label)?;
    let opened = open_triple();
    let mut partner: HashMap<Port, Port> = HashMap::new();
    let mut join = |x: Port, y: Port| {
        partner.insert(x, y);
        partner.insert(y, x);
    };
    for &(x, y) in &opened.inner {
        join(x, y);
    }
    let ep = |e: u8| opened.end_port[(e - 1) as usize];
    join(ep(scheme.internal.0), ep(scheme.internal.1));
    for &(e, t) in &scheme.links {
        join(ep(e), (3, t.slot()));
    }

    // Walk the curve, numbering arcs so that visit m enters on arc m + 1.
    let start: Port = (3, 0);
    let mut visits: Vec<Port> = Vec::new();
    let mut at = start;
    loop {
        visits.push(at);
        let out = (at.0, (at.1 + 2) % 4);
        at = partner[&out];
        if at == start || visits.len() > 8 {
            break;
        }
    }
    if visits.len() != 8 {
        return Ok(None);
    }
    let n = visits.len();
    let mut arc: HashMap<Port, usize> = HashMap::new();
    for (m, &(node, slot)) in visits.iter().enumerate() {
        arc.insert((node, slot), m + 1);
        arc.insert((node, (slot + 2) % 4), (m + 1) % n + 1);
    }

    let under_strand = |node: usize, slot: usize| -> bool {
        if node == 3 {
            let on_ad = slot.is_multiple_of(2);
            on_ad == (trad == TradOver::BC)
        } else {
            opened.strand_at[node][slot] == pairs[node].under
        }
    };
    let mut pd = Vec::with_capacity(4);
    for node in 0..4 {
        let &(_, slot) = visits
            .iter()
            .find(|&&(v, s)| v == node && under_strand(v, s))
            .ok_or_else(|| Error::InconsistentCode(format!("crossing {node} has no under pass")))?;
        pd.push([0, 1, 2, 3].map(|k| arc[&(node, (slot + k) % 4)]));
    }
    Ok(Some(PDCode(pd)))
}

/// Every single-component closure whose arcs need no new crossings.
pub fn enumerate_all_closures() -> Vec<ClosureScheme> {
    let mut out = Vec::new();
    for pair in (1u8..=6).combinations(2) {
        let rest: Vec<u8> = (1u8..=6).filter(|e| !pair.contains(e)).collect();
        for perm in TradEnd::ALL.into_iter().permutations(4) {
            let links = [0, 1, 2, 3].map(|i| (rest[i], perm[i]));
            let s = ClosureScheme::new((pair[0], pair[1]), links).unwrap();
            if s.is_planar()
                && assemble(&s, &TripleLabeling::all()[0], TradOver::AD)
                    .unwrap()
                    .is_some()
            {
                out.push(s);
            }
        }
    }
    out
}

/// Planar single-component closures up to rotating either crossing. Each
/// representative joins `5` to `6` and `1` to `a`.
pub fn enumerate_closures() -> Vec<ClosureScheme> {
    enumerate_all_closures()
        .into_iter()
        .filter(|s| s.internal == (5, 6) && s.links.contains(&(1, TradEnd::A)))
        .collect()
}

/// The scheme built by pairing ends clockwise around the triple point with
/// ends counterclockwise around the ordinary crossing.
pub fn recipe_scheme() -> ClosureScheme {
    ClosureScheme::new(
        (5, 6),
        [
            (1, TradEnd::A),
            (2, TradEnd::C),
            (3, TradEnd::D),
            (4, TradEnd::B),
        ],
    )
    .unwrap()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleCase {
    pub scheme: ClosureScheme,
    pub labeling: TripleLabeling,
    pub traditional: TradOver,
    pub pd: PDCode,
    pub writhe: i32,
    pub class: KnotClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleReport {
    pub schemes: Vec<ClosureScheme>,
    pub representatives: Vec<ClosureScheme>,
    pub cases: Vec<TripleCase>,
    /// Distinct knot types, chirality included.
    pub classes: Vec<KnotClass>,
}

impl TripleReport {
    /// Knot type names with chirality dropped.
    pub fn types(&self) -> BTreeSet<&'static str> {
        self.classes.iter().map(KnotClass::name).collect()
    }
}

fn classify_case(s: &ClosureScheme, l: &TripleLabeling, t: TradOver) -> Result<TripleCase> {
    let pd = assemble(s, l, t)?.ok_or_else(|| {
        Error::InconsistentCode(format!("closure {s} does not give a single curve"))
    })?;
    pd.validate()?;
    let writhe = pd.writhe();
    let class = classify_pd(&pd, writhe)?;
    Ok(TripleCase {
        scheme: s.clone(),
        labeling: *l,
        traditional: t,
        pd,
        writhe,
        class,
    })
}

/// Classifies every planar closure under every labeling and both choices at
/// the ordinary crossing.
pub fn classify_triple_plus_one() -> Result<TripleReport> {
    let schemes = enumerate_all_closures();
    let mut cases = Vec::new();
    let mut classes: Vec<KnotClass> = Vec::new();
    for s in &schemes {
        for l in TripleLabeling::all() {
            for t in TradOver::ALL {
                let c = classify_case(s, &l, t)?;
                if !classes.contains(&c.class) {
                    classes.push(c.class.clone());
                }
                cases.push(c);
            }
        }
    }
    Ok(TripleReport {
        representatives: enumerate_closures(),
        schemes,
        cases,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_labelings_with_top_over_twice() {
        let all = TripleLabeling::all();
        assert_eq!(all.len(), 6);
        let frags: BTreeSet<_> = all
            .iter()
            .map(|l| resolve_triple(l).unwrap().map(|p| (p.over, p.under)))
            .collect();
        assert_eq!(frags.len(), 6);
        for l in &all {
            let f = resolve_triple(l).unwrap();
            let top = l.0.iter().position(|&x| x == Level::Top).unwrap();
            let bottom = l.0.iter().position(|&x| x == Level::Bottom).unwrap();
            assert_eq!(f.iter().filter(|p| p.over == top).count(), 2);
            assert_eq!(f.iter().filter(|p| p.under == bottom).count(), 2);
        }
        let bad = TripleLabeling([Level::Top, Level::Top, Level::Bottom]);
        assert!(resolve_triple(&bad).is_err());
    }

    #[test]
    fn opened_triangle_is_consistent() {
        let o = open_triple();
        let mut ports: Vec<Port> = o.end_port.to_vec();
        for &(x, y) in &o.inner {
            ports.extend([x, y]);
        }
        ports.sort_unstable();
        ports.dedup();
        assert_eq!(ports.len(), 12);
        for (node, &(s, t)) in STRAND_PAIRS.iter().enumerate() {
            for slot in 0..4 {
                let st = o.strand_at[node][slot];
                assert!(st == s || st == t);
                assert_eq!(o.strand_at[node][(slot + 2) % 4], st);
            }
        }
    }

    #[test]
    fn recipe_scheme_is_the_only_representative() {
        let reps = enumerate_closures();
        assert_eq!(reps, vec![recipe_scheme()]);
        assert!(recipe_scheme().is_planar());
    }

    #[test]
    fn all_closures_are_rotations_of_the_representative() {
        let all = enumerate_all_closures();
        let r = recipe_scheme();
        let orbit: BTreeSet<String> = (0..6)
            .flat_map(|k| (0..4).map(move |m| (k, m)))
            .map(|(k, m)| r.rotated(k, m).to_string())
            .collect();
        let got: BTreeSet<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(got, orbit);
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn blocked_and_linked_closures_are_rejected() {
        // Joining the two ends of one strand closes it off as its own loop.
        let s = ClosureScheme::new(
            (2, 5),
            [
                (1, TradEnd::A),
                (3, TradEnd::C),
                (4, TradEnd::D),
                (6, TradEnd::B),
            ],
        )
        .unwrap();
        assert!(!enumerate_all_closures().contains(&s));
        // Skipping an end around the triple point traps it.
        let s = ClosureScheme::new(
            (4, 6),
            [
                (1, TradEnd::A),
                (2, TradEnd::C),
                (3, TradEnd::D),
                (5, TradEnd::B),
            ],
        )
        .unwrap();
        assert!(!s.is_planar());
    }

    #[test]
    fn only_unknot_and_trefoil() {
        let r = classify_triple_plus_one().unwrap();
        assert_eq!(r.cases.len(), 24 * 6 * 2);
        assert!(r.cases.iter().all(|c| c.pd.crossing_count() == 4));
        assert_eq!(r.types(), BTreeSet::from(["0_1", "3_1"]));
    }

    #[test]
    fn mirroring_all_crossings_mirrors_the_class() {
        let s = recipe_scheme();
        for l in TripleLabeling::all() {
            for t in TradOver::ALL {
                let a = classify_case(&s, &l, t).unwrap().class;
                let b = classify_case(&s, &l.mirrored(), t.flip()).unwrap().class;
                assert_eq!(a.mirror(), b);
            }
        }
    }
}
