//! Diagram codes (Gauss and planar-diagram), polynomial invariants and
//! classification of small knots.

mod classify;
mod invariants;
mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::Diagram;

pub use classify::{
    classify, classify_jones, classify_pd, fixtures, merge_crossingless_runs, stick_filter,
    Chirality, Fixture, KnotClass,
};
pub use invariants::{determinant, jones, kauffman_bracket, tricolorable, MAX_STATE_SUM_CROSSINGS};
pub use poly::LaurentPoly;

/// Which strand of a crossing passes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Over {
    A,
    B,
}

impl Over {
    pub fn flip(self) -> Over {
        match self {
            Over::A => Over::B,
            Over::B => Over::A,
        }
    }
}

/// Over/under choice for every crossing of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossingAssignment {
    pub over: Vec<Over>,
}

impl CrossingAssignment {
    pub fn all(over: Over, crossings: usize) -> Self {
        CrossingAssignment {
            over: vec![over; crossings],
        }
    }

    /// Bit `i` set means strand a of crossing `i` is over.
    pub fn from_bits(bits: u64, crossings: usize) -> Self {
        CrossingAssignment {
            over: (0..crossings)
                .map(|i| if bits >> i & 1 == 1 { Over::A } else { Over::B })
                .collect(),
        }
    }

    pub fn bits(&self) -> u64 {
        self.over
            .iter()
            .enumerate()
            .filter(|(_, o)| **o == Over::A)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.over.len()
    }

    pub fn is_empty(&self) -> bool {
        self.over.is_empty()
    }

    pub fn flipped(&self) -> Self {
        CrossingAssignment {
            over: self.over.iter().map(|o| o.flip()).collect(),
        }
    }

    /// The assignment that alternates over and under along the traversal,
    /// starting over. None if the diagram admits no alternating assignment.
    pub fn alternating(d: &Diagram) -> Option<Self> {
        let mut over: Vec<Option<Over>> = vec![None; d.crossing_count()];
        for (k, pass) in d.traversal().iter().enumerate() {
            let on_top = k % 2 == 0;
            let choice = match (pass.on_a, on_top) {
                (true, true) | (false, false) => Over::A,
                _ => Over::B,
            };
            match over[pass.crossing] {
                None => over[pass.crossing] = Some(choice),
                Some(prev) if prev != choice => return None,
                Some(_) => {}
            }
        }
        Some(CrossingAssignment {
            over: over.into_iter().map(|o| o.unwrap_or(Over::A)).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussEntry {
    pub crossing: usize,
    pub over: bool,
    pub sign: i8,
}

/// Crossing visits along the knot, each crossing once over and once under.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GaussCode(pub Vec<GaussEntry>);

impl GaussCode {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn crossing_count(&self) -> usize {
        self.0.len() / 2
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i32 {
        self.0
            .iter()
            .filter(|e| e.over)
            .map(|e| i32::from(e.sign))
            .sum()
    }

    /// Checks that crossing ids run over `0..c`, each once over and once
    /// under with matching signs.
    pub fn validate(&self) -> Result<()> {
        if !self.0.len().is_multiple_of(2) {
            return Err(Error::InconsistentCode("odd number of entries".into()));
        }
        let c = self.crossing_count();
        let mut seen: Vec<[Option<i8>; 2]> = vec![[None; 2]; c];
        for e in &self.0 {
            if e.crossing >= c {
                return Err(Error::InconsistentCode(format!(
                    "crossing id {} out of range",
                    e.crossing
                )));
            }
            if e.sign != 1 && e.sign != -1 {
                return Err(Error::InconsistentCode(format!("sign {}", e.sign)));
            }
            let slot = &mut seen[e.crossing][usize::from(e.over)];
            if slot.is_some() {
                return Err(Error::InconsistentCode(format!(
                    "crossing {} visited {} twice",
                    e.crossing,
                    if e.over { "over" } else { "under" }
                )));
            }
            *slot = Some(e.sign);
        }
        for (i, [u, o]) in seen.iter().enumerate() {
            if u != o {
                return Err(Error::InconsistentCode(format!(
                    "crossing {i} has mismatched visits"
                )));
            }
        }
        Ok(())
    }

    /// Same knot traversed backwards.
    pub fn reversed(&self) -> Self {
        GaussCode(self.0.iter().rev().copied().collect())
    }

    /// Every crossing switched.
    pub fn mirrored(&self) -> Self {
        GaussCode(
            self.0
                .iter()
                .map(|e| GaussEntry {
                    over: !e.over,
                    sign: -e.sign,
                    ..*e
                })
                .collect(),
        )
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let s = if e.sign > 0 { '+' } else { '-' };
            write!(
                f,
                "{}{}{}",
                if e.over { 'O' } else { 'U' },
                e.crossing + 1,
                s
            )?;
        }
        Ok(())
    }
}

/// Planar-diagram code: `[i, j, k, l]` lists the arcs at a crossing
/// counterclockwise, starting from the incoming under arc.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PDCode(pub Vec<[usize; 4]>);

impl PDCode {
    pub fn crossing_count(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Crossing signs for codes whose arcs are numbered along the knot.
    /// Only meaningful with at least two crossings.
    pub fn signs(&self) -> Vec<i8> {
        let n = 2 * self.0.len();
        self.0
            .iter()
            .map(|&[_, j, _, l]| if j == l % n + 1 { 1 } else { -1 })
            .collect()
    }

    pub fn writhe(&self) -> i32 {
        self.signs().iter().map(|&s| i32::from(s)).sum()
    }

    /// Every arc label in `1..=2c` must appear exactly twice.
    pub fn validate(&self) -> Result<()> {
        let n = 2 * self.0.len();
        let mut count = vec![0usize; n + 1];
        for x in &self.0 {
            for &a in x {
                if a == 0 || a > n {
                    return Err(Error::InconsistentCode(format!(
                        "arc label {a} out of range"
                    )));
                }
                count[a] += 1;
            }
        }
        match count.iter().skip(1).position(|&k| k != 2) {
            Some(a) => Err(Error::InconsistentCode(format!(
                "arc {} appears {} times",
                a + 1,
                count[a + 1]
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PD[")?;
        for (k, [i, j, a, l]) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "X[{i},{j},{a},{l}]")?;
        }
        f.write_str("]")
    }
}

/// Reads the crossings of `d` in traversal order. The sign of each entry is
/// the knot crossing sign: the diagram's orientation sign of (a, b), negated
/// when b passes over.
pub fn extract_gauss_code(d: &Diagram, a: &CrossingAssignment) -> Result<GaussCode> {
    d.require_resolved()?;
    if a.len() != d.crossing_count() {
        return Err(Error::InvalidParameter(format!(
            "assignment covers {} crossings, diagram has {}",
            a.len(),
            d.crossing_count()
        )));
    }
    let entries = d
        .traversal()
        .into_iter()
        .map(|p| {
            let c = &d.crossings[p.crossing];
            let over_a = a.over[p.crossing] == Over::A;
            let sign = if over_a {
                c.orientation_sign
            } else {
                -c.orientation_sign
            };
            GaussEntry {
                crossing: p.crossing,
                over: p.on_a == over_a,
                sign,
            }
        })
        .collect();
    let g = GaussCode(entries);
    g.validate()?;
    Ok(g)
}

/// Converts a Gauss code to a PD code. Arc `m + 1` is the segment entering
/// the `m`-th visit.
pub fn gauss_to_pd(g: &GaussCode) -> Result<PDCode> {
    g.validate()?;
    let n = g.len();
    let c = g.crossing_count();
    let incoming = |m: usize| m + 1;
    let outgoing = |m: usize| (m + 1) % n + 1;
    let mut under = vec![0usize; c];
    let mut over = vec![0usize; c];
    for (m, e) in g.0.iter().enumerate() {
        if e.over {
            over[e.crossing] = m;
        } else {
            under[e.crossing] = m;
        }
    }
    let tuples = (0..c)
        .map(|x| {
            let (u, o) = (under[x], over[x]);
            let sign = g.0[u].sign;
            let (i, k) = (incoming(u), outgoing(u));
            let (j, l) = if sign > 0 {
                (outgoing(o), incoming(o))
            } else {
                (incoming(o), outgoing(o))
            };
            [i, j, k, l]
        })
        .collect();
    Ok(PDCode(tuples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{build_walk, detect_crossings, regular_ngon, Ordering, DEFAULT_EPS};

    fn diagram(n: usize, order: &[usize]) -> Diagram {
        let vs = regular_ngon(n, 1.0, 0.0).unwrap();
        let w = build_walk(&vs, &Ordering(order.to_vec()), DEFAULT_EPS).unwrap();
        detect_crossings(&w, DEFAULT_EPS).unwrap()
    }

    fn entry(crossing: usize, over: bool, sign: i8) -> GaussEntry {
        GaussEntry {
            crossing,
            over,
            sign,
        }
    }

    #[test]
    fn bits_round_trip() {
        let a = CrossingAssignment::from_bits(0b101, 3);
        assert_eq!(a.over, vec![Over::A, Over::B, Over::A]);
        assert_eq!(a.bits(), 0b101);
        assert_eq!(a.flipped().bits(), 0b010);
    }

    #[test]
    fn empty_diagram_gives_empty_code() {
        let d = diagram(5, &[0, 1, 2, 3, 4]);
        let g = extract_gauss_code(&d, &CrossingAssignment::all(Over::A, 0)).unwrap();
        assert!(g.is_empty());
        assert!(gauss_to_pd(&g).unwrap().is_empty());
    }

    #[test]
    fn heptagon_alternating_code() {
        let d = diagram(7, &[0, 1, 3, 5, 6, 2, 4]);
        let a = CrossingAssignment::alternating(&d).unwrap();
        let g = extract_gauss_code(&d, &a).unwrap();
        assert_eq!(g.len(), 6);
        for (k, e) in g.0.iter().enumerate() {
            assert_eq!(e.over, k % 2 == 0);
        }
        let pd = gauss_to_pd(&g).unwrap();
        assert_eq!(pd.crossing_count(), 3);
        pd.validate().unwrap();
        assert_eq!(pd.writhe(), g.writhe());
    }

    #[test]
    fn kink_pd() {
        let g = GaussCode(vec![entry(0, false, 1), entry(0, true, 1)]);
        assert_eq!(gauss_to_pd(&g).unwrap(), PDCode(vec![[1, 1, 2, 2]]));
    }

    #[test]
    fn trefoil_pd_by_hand() {
        // O1 U2 O3 U1 O2 U3, all negative: arcs 1..6 in visit order.
        let g = GaussCode(vec![
            entry(0, true, -1),
            entry(1, false, -1),
            entry(2, true, -1),
            entry(0, false, -1),
            entry(1, true, -1),
            entry(2, false, -1),
        ]);
        let pd = gauss_to_pd(&g).unwrap();
        assert_eq!(pd, PDCode(vec![[4, 1, 5, 2], [2, 5, 3, 6], [6, 3, 1, 4]]));
        assert_eq!(pd.writhe(), -3);
    }

    #[test]
    fn inconsistent_codes_rejected() {
        let twice_over = GaussCode(vec![entry(0, true, 1), entry(0, true, 1)]);
        assert!(gauss_to_pd(&twice_over).is_err());
        let sign_mismatch = GaussCode(vec![entry(0, true, 1), entry(0, false, -1)]);
        assert!(sign_mismatch.validate().is_err());
        let out_of_range = GaussCode(vec![entry(1, true, 1), entry(1, false, 1)]);
        assert!(out_of_range.validate().is_err());
        assert!(PDCode(vec![[1, 1, 2, 3]]).validate().is_err());
    }

    #[test]
    fn display_formats() {
        let g = GaussCode(vec![entry(0, false, 1), entry(0, true, 1)]);
        assert_eq!(g.to_string(), "U1+ O1+");
        assert_eq!(PDCode(vec![[1, 1, 2, 2]]).to_string(), "PD[X[1,1,2,2]]");
    }
}
