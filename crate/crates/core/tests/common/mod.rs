//! Independent oracles and property suites shared by the integration tests
//! and the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ngon_knots::heights::{
    feasible_assignments, solve_feasibility, verify_certificate, HeightConstraint, HeightSystem,
};
use ngon_knots::knot::{classify, fixtures, jones, CrossingAssignment, KnotClass, Over, PDCode};
use ngon_knots::planar::{
    segment_intersection, DiagramRecord, Intersection, Ordering, Vec2, VectorSet, DEFAULT_EPS,
};

pub const SEED: u64 = 0x5eed_2024;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

// ---------------------------------------------------------------- geometry

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Exact orientation of `c` relative to the line `a→b`.
fn orient(a: &[BigRational; 2], b: &[BigRational; 2], c: &[BigRational; 2]) -> BigRational {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

fn exact(p: Vec2) -> [BigRational; 2] {
    [q(p.x), q(p.y)]
}

/// Proper crossing of two segments decided in exact arithmetic, with the
/// parameter along the first segment.
pub fn exact_crossing(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Option<f64> {
    let (a, b, c, d) = (exact(p0), exact(p1), exact(q0), exact(q1));
    let (o1, o2) = (orient(&a, &b, &c), orient(&a, &b, &d));
    let (o3, o4) = (orient(&c, &d, &a), orient(&c, &d, &b));
    let z = BigRational::zero();
    if (&o1 * &o2) < z && (&o3 * &o4) < z {
        let t = &o3 / (&o3 - &o4);
        Some(to_f64(&t))
    } else {
        None
    }
}

fn to_f64(r: &BigRational) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap();
    let d: f64 = r.denom().to_string().parse().unwrap();
    n / d
}

/// Tip-to-tail vertices of an ordering, computed without the library.
pub fn walk_points(vectors: &[Vec2], ord: &[usize]) -> Vec<Vec2> {
    let mut pts = vec![Vec2::ZERO];
    for &k in ord {
        let last = *pts.last().unwrap();
        pts.push(Vec2 {
            x: last.x + vectors[k].x,
            y: last.y + vectors[k].y,
        });
    }
    pts
}

/// Crossings between non-adjacent edges of a closed walk, decided exactly.
pub fn exact_crossing_count(pts: &[Vec2]) -> usize {
    let m = pts.len() - 1;
    let mut count = 0;
    for i in 0..m {
        for j in i + 1..m {
            if j == i + 1 || (i == 0 && j == m - 1) {
                continue;
            }
            if exact_crossing(pts[i], pts[i + 1], pts[j], pts[j + 1]).is_some() {
                count += 1;
            }
        }
    }
    count
}

/// Random vectors summing to zero, no two parallel within a safe margin.
pub fn random_vectors(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec2> {
    loop {
        let mut v: Vec<Vec2> = (0..n - 1)
            .map(|_| Vec2 {
                x: r.gen_range(-1.0..1.0),
                y: r.gen_range(-1.0..1.0),
            })
            .collect();
        let s = v.iter().fold(Vec2::ZERO, |a, b| Vec2 {
            x: a.x + b.x,
            y: a.y + b.y,
        });
        v.push(Vec2 { x: -s.x, y: -s.y });
        let ok = v.iter().all(|a| a.norm() > 0.05)
            && v.iter().enumerate().all(|(i, a)| {
                v[i + 1..]
                    .iter()
                    .all(|b| a.cross(*b).abs() > 1e-3 * a.norm() * b.norm())
            });
        if ok {
            return v;
        }
    }
}

pub fn random_ordering(r: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut ord: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        ord.swap(i, r.gen_range(0..=i));
    }
    ord
}

/// Smallest |orientation| among edge-endpoint triples, relative to edge
/// lengths; small values flag near-degenerate configurations.
fn min_orientation(pts: &[Vec2]) -> f64 {
    let m = pts.len() - 1;
    let mut best = f64::INFINITY;
    for i in 0..m {
        let (a, b) = (pts[i], pts[i + 1]);
        let ab = Vec2 {
            x: b.x - a.x,
            y: b.y - a.y,
        };
        for (j, &c) in pts[..m].iter().enumerate() {
            if j == i || j == (i + 1) % m {
                continue;
            }
            let ac = Vec2 {
                x: c.x - a.x,
                y: c.y - a.y,
            };
            best = best.min(ab.cross(ac).abs() / ab.norm());
        }
    }
    best
}

/// 1,000 random closed walks: closure, restart/reversal invariance, the
/// exact crossing oracle and stability under a tiny perturbation.
pub fn planar_property_suite(cases: usize) -> Result<String, String> {
    let mut r = rng(1);
    let mut crossings_seen = 0;
    let mut skipped = 0;
    for case in 0..cases {
        let n = r.gen_range(4..=9);
        let v = random_vectors(&mut r, n);
        let ord = random_ordering(&mut r, n);
        let vs = VectorSet::new(v.clone(), DEFAULT_EPS).map_err(|e| e.to_string())?;
        let ordering = Ordering(ord.clone());
        let (rec, d) =
            DiagramRecord::build(&vs, &ordering, DEFAULT_EPS).map_err(|e| e.to_string())?;
        let pts = walk_points(&v, &ord);
        if d.walk.closure_gap() > 1e-8 {
            return Err(format!("case {case}: walk does not close"));
        }
        if min_orientation(&pts) < 1e-7 {
            skipped += 1;
            continue;
        }
        if d.is_degenerate() {
            return Err(format!("case {case}: generic walk reported degenerate"));
        }
        let want = exact_crossing_count(&pts);
        if d.crossing_count() != want {
            return Err(format!(
                "case {case}: {} crossings, exact oracle {want}",
                d.crossing_count()
            ));
        }
        for c in &d.crossings {
            let (p0, p1) = (pts[c.edge_a], pts[c.edge_a + 1]);
            let (q0, q1) = (pts[c.edge_b], pts[c.edge_b + 1]);
            let t = exact_crossing(p0, p1, q0, q1)
                .ok_or_else(|| format!("case {case}: crossing not confirmed"))?;
            if (t - c.t_a).abs() > 1e-9 {
                return Err(format!("case {case}: t {} vs exact {t}", c.t_a));
            }
            if let Ok(Intersection::Transversal { t: lt, .. }) =
                segment_intersection(p0, p1, q0, q1, DEFAULT_EPS)
            {
                if (lt - t).abs() > 1e-9 {
                    return Err(format!("case {case}: segment parameter {lt} vs {t}"));
                }
            } else {
                return Err(format!("case {case}: segment test disagrees"));
            }
        }
        for other in [ordering.rotated(r.gen_range(1..n)), ordering.reversed()] {
            let (_, d2) =
                DiagramRecord::build(&vs, &other, DEFAULT_EPS).map_err(|e| e.to_string())?;
            if d2.crossing_count() != d.crossing_count() {
                return Err(format!(
                    "case {case}: restart or reversal changed the count"
                ));
            }
        }
        let mut w = v.clone();
        let h = 1e-10;
        w[0].x += h;
        w[1].x -= h;
        let vs2 = VectorSet::new(w, DEFAULT_EPS).map_err(|e| e.to_string())?;
        let (_, d3) =
            DiagramRecord::build(&vs2, &ordering, DEFAULT_EPS).map_err(|e| e.to_string())?;
        if d3.crossing_count() != d.crossing_count() {
            return Err(format!("case {case}: perturbation changed the count"));
        }
        let back = rec.diagram(DEFAULT_EPS).map_err(|e| e.to_string())?;
        if back.crossings != d.crossings {
            return Err(format!("case {case}: record does not rebuild the diagram"));
        }
        crossings_seen += d.crossing_count();
    }
    Ok(format!(
        "{cases} walks, {crossings_seen} crossings checked, {skipped} near-degenerate skipped"
    ))
}

// ------------------------------------------------------------------- knots

fn strand_positive(x: &[usize; 4], n: usize) -> bool {
    x[1] == x[3] % n + 1
}

/// Mirror image: every crossing has its over and under strands exchanged.
pub fn mirror_pd(pd: &PDCode) -> PDCode {
    let n = 2 * pd.0.len();
    PDCode(
        pd.0.iter()
            .map(|x| {
                if strand_positive(x, n) {
                    [x[3], x[0], x[1], x[2]]
                } else {
                    [x[1], x[2], x[3], x[0]]
                }
            })
            .collect(),
    )
}

/// Inserts a kink on arc `m`. `form` picks one of the four kink shapes.
pub fn add_kink(pd: &PDCode, m: usize, form: usize) -> PDCode {
    let n = 2 * pd.0.len();
    let mut out: Vec<[usize; 4]> =
        pd.0.iter()
            .map(|x| {
                let mut y = *x;
                for p in 0..4 {
                    let a = x[p];
                    y[p] = if a > m {
                        a + 2
                    } else if a == m && x[(p + 2) % 4] == m % n + 1 {
                        m + 2
                    } else {
                        a
                    };
                }
                y
            })
            .collect();
    let (a, b, c) = (m, m + 1, m + 2);
    out.push(match form % 4 {
        0 => [a, b, b, c],
        1 => [a, c, b, b],
        2 => [b, b, c, a],
        _ => [b, a, c, b],
    });
    PDCode(out)
}

fn jones_of(pd: &PDCode) -> Result<ngon_knots::knot::LaurentPoly, String> {
    jones(pd, pd.writhe()).map_err(|e| e.to_string())
}

/// Determinant from the coloring matrix: one row per crossing, one column
/// per over-arc, absolute value of any first minor.
pub fn coloring_determinant(pd: &PDCode) -> u64 {
    let c = pd.0.len();
    if c == 0 {
        return 1;
    }
    let n = 2 * c;
    // Arcs of the diagram: PD arcs joined through over-passes.
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in &pd.0 {
        let (a, b) = (find(&mut parent, x[1]), find(&mut parent, x[3]));
        parent[a] = b;
    }
    let roots: Vec<usize> = {
        let mut s: BTreeSet<usize> = BTreeSet::new();
        for a in 1..=n {
            s.insert(find(&mut parent, a));
        }
        s.into_iter().collect()
    };
    let col = |p: &mut [usize], a: usize| roots.iter().position(|&r| r == find(p, a)).unwrap();
    let mut mat = vec![vec![BigRational::zero(); roots.len()]; c];
    for (row, x) in pd.0.iter().enumerate() {
        let over = col(&mut parent, x[1]);
        let (u1, u2) = (col(&mut parent, x[0]), col(&mut parent, x[2]));
        mat[row][over] += BigRational::from_integer(BigInt::from(2));
        mat[row][u1] -= BigRational::one();
        mat[row][u2] -= BigRational::one();
    }
    let k = c - 1;
    let mut minor: Vec<Vec<BigRational>> = mat[..k].iter().map(|r| r[..k].to_vec()).collect();
    let det = rational_det(&mut minor);
    det.abs().to_integer().to_string().parse().unwrap()
}

fn rational_det(m: &mut [Vec<BigRational>]) -> BigRational {
    let k = m.len();
    let mut det = BigRational::one();
    for i in 0..k {
        let Some(p) = (i..k).find(|&r| !m[r][i].is_zero()) else {
            return BigRational::zero();
        };
        if p != i {
            m.swap(p, i);
            det = -det;
        }
        det *= m[i][i].clone();
        for r in i + 1..k {
            let f = &m[r][i] / &m[i][i];
            let pivot = m[i].clone();
            for (x, p) in m[r].iter_mut().zip(&pivot).skip(i) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// Jones mirror symmetry and kink invariance on the reference diagrams,
/// plus the coloring-matrix determinant oracle.
pub fn knot_property_suite() -> Result<String, String> {
    let mut r = rng(2);
    let mut kinks = 0;
    for f in fixtures() {
        let j = jones_of(&f.pd)?;
        if j != f.jones {
            return Err(format!("{}: stored Jones disagrees", f.class));
        }
        let m = mirror_pd(&f.pd);
        m.validate().map_err(|e| e.to_string())?;
        if jones_of(&m)? != j.mirror() {
            return Err(format!("{}: mirror Jones is not V(1/t)", f.class));
        }
        if m.writhe() != -f.pd.writhe() {
            return Err(format!("{}: mirror writhe", f.class));
        }
        // A one-crossing code has two arc labels and no readable
        // orientation, so the crossingless circle gets no kinks.
        let rounds = if f.pd.0.is_empty() { 0 } else { 8 };
        for _ in 0..rounds {
            let n = 2 * f.pd.0.len();
            let k = add_kink(&f.pd, r.gen_range(1..=n), r.gen_range(0..4));
            k.validate().map_err(|e| e.to_string())?;
            if jones_of(&k)? != j {
                return Err(format!(
                    "{}: kink changed the Jones polynomial {k}",
                    f.class
                ));
            }
            kinks += 1;
        }
        let det = coloring_determinant(&f.pd);
        let lib = ngon_knots::knot::determinant(&f.pd).map_err(|e| e.to_string())?;
        let want = match f.class {
            KnotClass::Unknot => 1,
            KnotClass::Trefoil(_) => 3,
            KnotClass::FigureEight | KnotClass::Cinquefoil(_) => 5,
            KnotClass::ThreeTwist(_) => 7,
            KnotClass::Other { .. } => det,
        };
        if det != lib || det != want {
            return Err(format!("{}: determinant {lib}, coloring {det}", f.class));
        }
    }
    Ok(format!(
        "{} reference diagrams, {kinks} kinks",
        fixtures().len()
    ))
}

// ----------------------------------------------------------------- heights

/// Fourier-Motzkin elimination in exact arithmetic: is `a·z > 0` solvable
/// for every row?
pub fn fm_feasible(rows: &[Vec<BigRational>]) -> bool {
    let vars = rows.first().map_or(0, Vec::len);
    let mut cur: Vec<Vec<BigRational>> = rows.to_vec();
    for k in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in cur {
            if r[k].is_positive() {
                let s = r[k].clone();
                pos.push(r.iter().map(|x| x / &s).collect::<Vec<_>>());
            } else if r[k].is_negative() {
                let s = -r[k].clone();
                neg.push(r.iter().map(|x| x / &s).collect::<Vec<_>>());
            } else {
                rest.push(r);
            }
        }
        if !pos.is_empty() && !neg.is_empty() {
            for p in &pos {
                for q in &neg {
                    rest.push(p.iter().zip(q).map(|(a, b)| a + b).collect());
                }
            }
        }
        // Normalize and drop duplicates to keep the system small.
        let mut seen = BTreeSet::new();
        cur = rest
            .into_iter()
            .map(|r| {
                let scale = r
                    .iter()
                    .map(|x| x.abs())
                    .max()
                    .unwrap_or_else(BigRational::zero);
                if scale.is_zero() {
                    r
                } else {
                    r.iter().map(|x| x / &scale).collect()
                }
            })
            .filter(|r: &Vec<BigRational>| seen.insert(r.clone()))
            .collect();
    }
    cur.is_empty()
}

fn system_rows(sys: &HeightSystem) -> Vec<Vec<BigRational>> {
    sys.constraints
        .iter()
        .map(|c| {
            let mut row = vec![BigRational::zero(); sys.vertex_count];
            for &(v, x) in &c.coeffs {
                row[v] += q(x);
            }
            row
        })
        .collect()
}

fn random_integer_system(r: &mut ChaCha8Rng) -> HeightSystem {
    let vars = r.gen_range(2..=5);
    let rows = r.gen_range(1..=7);
    let constraints = (0..rows)
        .map(|i| {
            let terms: Vec<(usize, f64)> = (0..vars)
                .map(|v| (v, r.gen_range(-3i32..=3) as f64))
                .collect();
            HeightConstraint::new(terms, i)
        })
        .collect();
    HeightSystem {
        constraints,
        vertex_count: vars,
    }
}

/// Certificate homogeneity on random diagrams and simplex/elimination
/// agreement on random integer systems.
pub fn height_property_suite(cases: usize) -> Result<String, String> {
    let mut r = rng(3);
    let (mut feasible, mut infeasible) = (0, 0);
    for case in 0..cases {
        let sys = random_integer_system(&mut r);
        let lp = solve_feasibility(&sys).map_err(|e| e.to_string())?;
        let fm = fm_feasible(&system_rows(&sys));
        if lp.is_some() != fm {
            return Err(format!(
                "case {case}: simplex {} vs elimination {fm}",
                lp.is_some()
            ));
        }
        if let Some(cert) = lp {
            feasible += 1;
            for &k in &[0.5, 3.0, 1e3] {
                let v = verify_certificate(&sys, &cert.scaled(k)).map_err(|e| e.to_string())?;
                if !v.valid || (v.min_slack - k * cert.margin).abs() > 1e-6 * k.max(1.0) {
                    return Err(format!("case {case}: scaling by {k} broke the certificate"));
                }
            }
            let neg = verify_certificate(&sys, &cert.scaled(-1.0)).map_err(|e| e.to_string())?;
            if neg.valid {
                return Err(format!("case {case}: negated heights still valid"));
            }
        } else {
            infeasible += 1;
        }
    }

    let mut r = rng(4);
    let mut diagrams = 0;
    while diagrams < 60 {
        let n = r.gen_range(5..=7);
        let v = random_vectors(&mut r, n);
        let ord = Ordering(random_ordering(&mut r, n));
        let vs = VectorSet::new(v, DEFAULT_EPS).map_err(|e| e.to_string())?;
        let (_, d) = DiagramRecord::build(&vs, &ord, DEFAULT_EPS).map_err(|e| e.to_string())?;
        if d.is_degenerate() || d.crossing_count() == 0 || d.crossing_count() > 8 {
            continue;
        }
        diagrams += 1;
        let all = feasible_assignments(&d).map_err(|e| e.to_string())?;
        for (a, cert) in &all {
            let sys = ngon_knots::heights::constraints_from_assignment(&d, a)
                .map_err(|e| e.to_string())?;
            if !verify_certificate(&sys, &cert.scaled(7.0))
                .map_err(|e| e.to_string())?
                .valid
            {
                return Err("scaled diagram certificate rejected".into());
            }
            if !all.iter().any(|(b, _)| *b == a.flipped()) {
                return Err("flipped assignment missing".into());
            }
        }
    }
    Ok(format!(
        "{cases} integer systems ({feasible} feasible, {infeasible} infeasible), {diagrams} diagrams"
    ))
}

// ------------------------------------------------------------- projections

/// Re-projects a lifted polygon along `(-a, -b, 1)` and reads its knot type
/// from the 3D heights.
pub fn reproject_class(xy: &[Vec2], z: &[f64], a: f64, b: f64) -> Result<KnotClass, String> {
    let m = xy.len();
    let pts: Vec<Vec2> = (0..m)
        .map(|k| Vec2 {
            x: xy[k].x + a * z[k],
            y: xy[k].y + b * z[k],
        })
        .collect();
    let vectors: Vec<Vec2> = (0..m)
        .map(|k| {
            let (p, q) = (pts[k], pts[(k + 1) % m]);
            Vec2 {
                x: q.x - p.x,
                y: q.y - p.y,
            }
        })
        .collect();
    let vs = VectorSet::new(vectors, DEFAULT_EPS).map_err(|e| e.to_string())?;
    let (_, d) = DiagramRecord::build(&vs, &Ordering::identity(m), DEFAULT_EPS)
        .map_err(|e| e.to_string())?;
    if d.is_degenerate() || d.walk.edge_count() != m {
        return Err("re-projection is not generic".into());
    }
    let height = |e: usize, t: f64| z[e] * (1.0 - t) + z[(e + 1) % m] * t;
    let over = d
        .crossings
        .iter()
        .map(|c| {
            if height(c.edge_a, c.t_a) > height(c.edge_b, c.t_b) {
                Over::A
            } else {
                Over::B
            }
        })
        .collect();
    let asg = CrossingAssignment { over };
    classify(&d, &asg).map_err(|e| e.to_string())
}

/// Multipliers `y ≥ 0`, not all zero, with `Σ y_i a_i = 0`: a proof that
/// the strict system has no solution. Found from the left null space of
/// the coefficient matrix when it is one-dimensional.
pub fn gordan_multipliers(sys: &HeightSystem) -> Option<Vec<f64>> {
    let rows = sys.constraints.len();
    // Columns of the transpose are constraints; solve A^T y = 0.
    let mut m: Vec<Vec<f64>> = (0..sys.vertex_count)
        .map(|v| {
            sys.constraints
                .iter()
                .map(|c| c.coeffs.iter().find(|t| t.0 == v).map_or(0.0, |t| t.1))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..rows {
        let Some(p) = (row..m.len()).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
        else {
            break;
        };
        if m[p][col].abs() < 1e-12 {
            continue;
        }
        m.swap(p, row);
        let piv = m[row][col];
        for x in m[row].iter_mut() {
            *x /= piv;
        }
        for r2 in 0..m.len() {
            if r2 != row {
                let f = m[r2][col];
                let pivot = m[row].clone();
                for (x, p) in m[r2].iter_mut().zip(&pivot).take(rows) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..rows).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return None;
    }
    let f = free[0];
    let mut y = vec![0.0; rows];
    y[f] = 1.0;
    for (i, &pc) in pivots.iter().enumerate() {
        y[pc] = -m[i][f];
    }
    let s = y[0];
    if s.abs() < 1e-12 {
        return None;
    }
    let y: Vec<f64> = y.iter().map(|v| v / s).collect();
    y.iter().all(|&v| v >= -1e-12).then_some(y)
}
