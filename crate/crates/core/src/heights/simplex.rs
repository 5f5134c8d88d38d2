//! Dense tableau simplex for `max c·x` subject to `A x ≤ b`, `x ≥ 0`, with
//! `b ≥ 0` so the origin is a starting vertex. Bland's rule keeps pivoting
//! deterministic and cycle-free.

const TOL: f64 = 1e-12;

pub(crate) struct Solution {
    pub value: f64,
    pub x: Vec<f64>,
}

pub(crate) fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Solution {
    let rows = a.len();
    let n = c.len();
    let cols = n + rows;
    // Each tableau row: n structural columns, `rows` slack columns, rhs.
    let mut t: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(r, (ar, &br))| {
            let mut row = vec![0.0; cols + 1];
            row[..n].copy_from_slice(ar);
            row[n + r] = 1.0;
            row[cols] = br;
            row
        })
        .collect();
    let mut obj = vec![0.0; cols + 1];
    for (j, &cj) in c.iter().enumerate() {
        obj[j] = -cj;
    }
    let mut basis: Vec<usize> = (n..cols).collect();

    while let Some(enter) = (0..cols).find(|&j| obj[j] < -TOL) {
        let mut leave: Option<usize> = None;
        for r in 0..rows {
            if t[r][enter] > TOL {
                let ratio = t[r][cols] / t[r][enter];
                leave = match leave {
                    None => Some(r),
                    Some(l) => {
                        let best = t[l][cols] / t[l][enter];
                        if ratio < best - TOL || (ratio <= best + TOL && basis[r] < basis[l]) {
                            Some(r)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
        }
        let Some(l) = leave else {
            // Unbounded; cannot happen for the boxed problems built here.
            break;
        };
        let p = t[l][enter];
        for v in t[l].iter_mut() {
            *v /= p;
        }
        let pivot = t[l].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != l && row[enter] != 0.0 {
                let f = row[enter];
                for (v, &pv) in row.iter_mut().zip(&pivot) {
                    *v -= f * pv;
                }
            }
        }
        let f = obj[enter];
        for (v, &pv) in obj.iter_mut().zip(&pivot) {
            *v -= f * pv;
        }
        basis[l] = enter;
    }

    let mut x = vec![0.0; n];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[r][cols];
        }
    }
    Solution {
        value: obj[cols],
        x,
    }
}
