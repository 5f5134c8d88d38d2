use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};

use ngon_knots::constructions::{
    exhaustive_6gon_check, figure_eight_8gon, ngon_diagram, pentagram_5_1, search_ngon,
    trefoil_selection, verify_selection,
};
use ngon_knots::heights::{constraints_from_assignment, solve_feasibility};
use ngon_knots::knot::{
    classify, determinant, extract_gauss_code, gauss_to_pd, CrossingAssignment,
};
use ngon_knots::triple::classify_triple_plus_one;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    #[value(name = "6gon")]
    Hexagon,
    Selection,
    Triple,
    #[value(name = "7gon-trefoil")]
    HeptagonTrefoil,
    #[value(name = "8gon-41")]
    OctagonFigureEight,
    #[value(name = "pentagram-51")]
    Pentagram,
    #[value(name = "8gon-census")]
    OctagonCensus,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub check: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Gate {
    pub target: Target,
    pub pass: bool,
    pub summary: String,
    pub mismatches: Vec<Mismatch>,
    pub details: Value,
}

struct Checks(Vec<Mismatch>);

impl Checks {
    fn expect(&mut self, check: &str, ok: bool, expected: impl ToString, got: impl ToString) {
        if !ok {
            self.0.push(Mismatch {
                check: check.into(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }
}

fn names<'a>(it: impl IntoIterator<Item = &'a ngon_knots::knot::KnotClass>) -> BTreeSet<String> {
    it.into_iter().map(|k| k.name().to_string()).collect()
}

pub fn run(target: Target, range: RangeInclusive<usize>, eps: f64) -> Result<Gate> {
    let mut c = Checks(Vec::new());
    let (summary, details) = match target {
        Target::Hexagon => {
            let r = exhaustive_6gon_check(eps)?;
            let total = r.cases.len() + r.unresolved.len();
            let classes = names(r.cases.iter().flat_map(|k| &k.classes));
            c.expect("orderings", total == 120, 120, total);
            c.expect("unresolved", r.unresolved.is_empty(), 0, r.unresolved.len());
            c.expect("classes", r.all_unknot(), "{0_1}", format!("{classes:?}"));
            (
                format!("{total} orderings, classes {classes:?}"),
                serde_json::to_value(&r)?,
            )
        }
        Target::Selection => {
            let r = verify_selection(range.clone(), eps)?;
            for f in r.failures() {
                let failed: Vec<&str> = [
                    ("crossing pairs", f.pairs_ok),
                    ("sin phi bounds", f.sin_ok),
                    ("third tip bounds", f.third_ok),
                    ("fourth tip side", f.fourth_ok),
                    ("realizable trefoil", f.trefoil_ok),
                ]
                .into_iter()
                .filter(|(_, ok)| !ok)
                .map(|(name, _)| name)
                .collect();
                c.expect(
                    &format!("n = {}", f.n),
                    false,
                    "all checks",
                    format!("failed: {}", failed.join(", ")),
                );
            }
            let passing = r.cases.len() - c.0.len();
            (
                format!(
                    "n in {}..={}: {passing} of {} pass",
                    range.start(),
                    range.end(),
                    r.cases.len()
                ),
                serde_json::to_value(&r)?,
            )
        }
        Target::Triple => {
            let r = classify_triple_plus_one()?;
            let types: BTreeSet<String> = r.types().into_iter().map(String::from).collect();
            let want: BTreeSet<String> = ["0_1".to_string(), "3_1".to_string()].into();
            c.expect(
                "types",
                types == want,
                format!("{want:?}"),
                format!("{types:?}"),
            );
            (
                format!(
                    "{} closures, {} cases, types {types:?}",
                    r.schemes.len(),
                    r.cases.len()
                ),
                serde_json::to_value(&r)?,
            )
        }
        Target::HeptagonTrefoil => {
            let ord = trefoil_selection(7)?;
            let (_, d) = ngon_diagram(7, &ord, eps)?;
            c.expect("crossings", d.crossing_count() == 3, 3, d.crossing_count());
            let mut class = None;
            let mut feasible = false;
            match CrossingAssignment::alternating(&d) {
                None => c.expect("alternating", false, "alternating assignment", "none"),
                Some(a) => {
                    feasible = solve_feasibility(&constraints_from_assignment(&d, &a)?)?.is_some();
                    c.expect("feasible", feasible, "feasible", "infeasible");
                    let k = classify(&d, &a)?;
                    c.expect("class", k.name() == "3_1", "3_1", &k);
                    class = Some(k);
                }
            }
            (
                format!("ordering {ord}, {} crossings", d.crossing_count()),
                json!({ "ordering": ord, "crossings": d.crossing_count(),
                        "alternating_feasible": feasible, "class": class }),
            )
        }
        Target::OctagonFigureEight => match figure_eight_8gon(eps) {
            Ok(k) => {
                let g = extract_gauss_code(&k.diagram, &k.assignment)?;
                let det = determinant(&gauss_to_pd(&g)?)?;
                c.expect(
                    "crossings",
                    k.diagram.crossing_count() == 4,
                    4,
                    k.diagram.crossing_count(),
                );
                c.expect("determinant", det == 5, 5, det);
                (
                    format!("ordering {}, class {}", k.ordering, k.class),
                    json!({ "construction": k, "determinant": det }),
                )
            }
            Err(e) => {
                c.expect("search", false, "a 4-crossing figure-eight", &e);
                ("no construction".into(), Value::Null)
            }
        },
        Target::Pentagram => {
            let p = pentagram_5_1(eps)?;
            c.expect("sticks", p.sticks == 8, 8, p.sticks);
            c.expect("planar", !p.planar_feasible, "infeasible", "feasible");
            c.expect("class", p.knot.class.name() == "5_1", "5_1", &p.knot.class);
            (
                format!(
                    "verticals {:?}, {} sticks, class {}",
                    p.verticals, p.sticks, p.knot.class
                ),
                serde_json::to_value(&p)?,
            )
        }
        Target::OctagonCensus => {
            let cat = search_ngon(8, true, eps)?;
            for name in ["4_1", "3_1"] {
                c.expect(
                    &format!("contains {name}"),
                    cat.contains(name),
                    "present",
                    "absent",
                );
            }
            let fives: Vec<String> = cat
                .records_with("5_1")
                .map(|r| r.ordering.to_string())
                .collect();
            c.expect(
                "no 5_1",
                fives.is_empty(),
                "absent",
                format!("present in {}", fives.join(" ")),
            );
            let observed = names(&cat.classes_observed());
            (
                format!(
                    "{} classes of orderings, types {observed:?}",
                    cat.records.len()
                ),
                json!({ "meta": cat.meta, "types": observed, "orderings_with_5_1": fives }),
            )
        }
    };
    Ok(Gate {
        target,
        pass: c.0.is_empty(),
        summary,
        mismatches: c.0,
        details,
    })
}
