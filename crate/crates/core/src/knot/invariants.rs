use super::{GaussCode, LaurentPoly, PDCode};
use crate::error::{Error, Result};

/// Largest diagram accepted by the state sum (2^c states).
pub const MAX_STATE_SUM_CROSSINGS: usize = 16;

fn check_size(pd: &PDCode) -> Result<()> {
    if pd.crossing_count() > MAX_STATE_SUM_CROSSINGS {
        return Err(Error::TooLarge {
            what: "crossing count",
            got: pd.crossing_count(),
            limit: MAX_STATE_SUM_CROSSINGS,
        });
    }
    pd.validate()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Kauffman bracket by full state sum, normalized so the crossingless
/// circle is 1.
pub fn kauffman_bracket(pd: &PDCode) -> Result<LaurentPoly> {
    check_size(pd)?;
    let c = pd.crossing_count();
    if c == 0 {
        return Ok(LaurentPoly::one());
    }
    let arcs = 2 * c;
    // loops → count of states, per A-smoothing count.
    let mut tally: Vec<Vec<i64>> = vec![vec![0; arcs + 1]; c + 1];
    let mut parent = vec![0usize; arcs + 1];
    for state in 0u32..(1 << c) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        for (x, &[i, j, k, l]) in pd.0.iter().enumerate() {
            let pairs = if state >> x & 1 == 0 {
                [(i, j), (k, l)]
            } else {
                [(i, l), (j, k)]
            };
            for (a, b) in pairs {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let loops = (1..=arcs).filter(|&a| find(&mut parent, a) == a).count();
        let a_count = c - state.count_ones() as usize;
        tally[a_count][loops] += 1;
    }
    // d = -A^2 - A^-2
    let d = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    let d_powers: Vec<LaurentPoly> = (0..arcs).map(|k| d.pow(k as u32)).collect();
    let mut out = LaurentPoly::zero();
    for (a_count, row) in tally.iter().enumerate() {
        let b_count = c - a_count;
        let shift = a_count as i32 - b_count as i32;
        for (loops, &n) in row.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let term = &LaurentPoly::monomial(n, shift) * &d_powers[loops - 1];
            out = &out + &term;
        }
    }
    Ok(out)
}

/// Normalized bracket `(-A^3)^(-writhe) <K>`, the Jones polynomial in `A`
/// (with `t = A^-4`).
pub fn jones(pd: &PDCode, writhe: i32) -> Result<LaurentPoly> {
    let bracket = kauffman_bracket(pd)?;
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    Ok(&LaurentPoly::monomial(sign, -3 * writhe) * &bracket)
}

/// Knot determinant, the absolute value of the bracket at `A = e^{iπ/4}`
/// (equivalently the Jones polynomial at `t = -1`).
pub fn determinant(pd: &PDCode) -> Result<u64> {
    let bracket = kauffman_bracket(pd)?;
    let (mut re, mut im) = (0i64, 0i64);
    // A^e with A = e^{iπ/4}; only even exponents occur in a knot's bracket
    // up to a common odd shift, so work with A^2 = i and fix the phase.
    let odd = bracket
        .terms()
        .next()
        .map(|(e, _)| e.rem_euclid(2))
        .unwrap_or(0);
    for (e, c) in bracket.terms() {
        if e.rem_euclid(2) != odd {
            return Err(Error::InconsistentCode("mixed exponent parity".into()));
        }
        match ((e - odd) / 2).rem_euclid(4) {
            0 => re += c,
            1 => im += c,
            2 => re -= c,
            _ => im -= c,
        }
    }
    let sq = (re * re + im * im) as u64;
    let root = (sq as f64).sqrt().round() as u64;
    if root * root != sq {
        return Err(Error::InconsistentCode(format!(
            "bracket at the eighth root of unity has non-integer modulus sqrt({sq})"
        )));
    }
    Ok(root)
}

/// Whether the diagram admits a non-constant Fox 3-coloring.
pub fn tricolorable(g: &GaussCode) -> bool {
    let c = g.crossing_count();
    if c == 0 {
        return false;
    }
    // Arcs run from one under-visit to the next; arc k starts after the
    // k-th under-visit (cyclically, so the arc before the first one is the last).
    let mut arc_of_visit = vec![0usize; g.len()];
    let unders: Vec<usize> = (0..g.len()).filter(|&m| !g.0[m].over).collect();
    let arcs = unders.len();
    let mut current = arcs - 1;
    for (m, e) in g.0.iter().enumerate() {
        if !e.over {
            current = unders.iter().position(|&u| u == m).unwrap();
        }
        arc_of_visit[m] = current;
    }
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(c);
    for x in 0..c {
        let mut row = vec![0u8; arcs];
        for (m, e) in g.0.iter().enumerate() {
            if e.crossing != x {
                continue;
            }
            if e.over {
                row[arc_of_visit[m]] = (row[arc_of_visit[m]] + 2) % 3;
            } else {
                let out = arc_of_visit[m];
                let inc = (out + arcs - 1) % arcs;
                row[out] = (row[out] + 2) % 3;
                row[inc] = (row[inc] + 2) % 3;
            }
        }
        rows.push(row);
    }
    arcs - rank_mod3(rows) >= 2
}

fn rank_mod3(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        // 1 and 2 are self-inverse mod 3.
        let inv = rows[rank][col];
        for v in rows[rank].iter_mut() {
            *v = (*v * inv) % 3;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                let pivot = rows[rank].clone();
                for (v, p) in rows[r].iter_mut().zip(&pivot).take(cols) {
                    *v = (*v + 3 * 3 - f * p) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}
