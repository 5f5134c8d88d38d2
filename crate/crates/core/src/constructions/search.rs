use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ngon_diagram;
use crate::error::{Error, Result};
use crate::heights::feasible_assignments;
use crate::knot::{classify, merge_crossingless_runs, KnotClass, MAX_STATE_SUM_CROSSINGS};
use crate::planar::Ordering;

/// Largest polygon accepted by [`search_ngon`].
pub const MAX_SEARCH_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub class: KnotClass,
    pub count: usize,
}

/// One reordering: its crossings, how many assignments are realizable, and
/// the knot types among them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub n: usize,
    pub ordering: Ordering,
    pub crossings: usize,
    pub feasible: usize,
    pub classes: Vec<ClassCount>,
    pub effective_sticks: usize,
    /// Number of first-fixed reorderings this record stands for.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogMeta {
    pub n: usize,
    pub symmetry_reduced: bool,
    pub eps: f64,
    pub orderings_examined: usize,
    /// Reorderings left out because a contact could not be resolved.
    pub degenerate: Vec<Ordering>,
    /// Reorderings left out because they have too many crossings to enumerate.
    pub oversized: Vec<Ordering>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchCatalog {
    pub meta: CatalogMeta,
    pub records: Vec<SearchRecord>,
}

impl SearchCatalog {
    /// Distinct knot types seen across all records, in order of appearance.
    pub fn classes_observed(&self) -> Vec<KnotClass> {
        let mut out: Vec<KnotClass> = Vec::new();
        for r in &self.records {
            for c in &r.classes {
                if !out.contains(&c.class) {
                    out.push(c.class.clone());
                }
            }
        }
        out
    }

    /// Whether some record contains a knot of the given Rolfsen name.
    pub fn contains(&self, name: &str) -> bool {
        self.classes_observed().iter().any(|k| k.name() == name)
    }

    /// Records containing a knot of the given Rolfsen name.
    pub fn records_with<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a SearchRecord> {
        self.records
            .iter()
            .filter(move |r| r.classes.iter().any(|c| c.class.name() == name))
    }

    /// Writes the records as JSON lines, replacing `path`, with the run
    /// metadata beside it.
    pub fn write_jsonl(&self, path: &Path) -> Result<()> {
        self.write_records(File::create(path)?)?;
        self.write_meta(path)
    }

    /// Appends the records to `path` and rewrites the metadata beside it.
    pub fn append_jsonl(&self, path: &Path) -> Result<()> {
        self.write_records(OpenOptions::new().create(true).append(true).open(path)?)?;
        self.write_meta(path)
    }

    fn write_records(&self, file: File) -> Result<()> {
        let mut w = BufWriter::new(file);
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_meta(&self, path: &Path) -> Result<()> {
        let w = BufWriter::new(File::create(meta_path(path))?);
        serde_json::to_writer_pretty(w, &self.meta)?;
        Ok(())
    }

    /// Reads the records stored at `path`.
    pub fn read_records(path: &Path) -> Result<Vec<SearchRecord>> {
        let mut out = Vec::new();
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            if !line.trim().is_empty() {
                out.push(serde_json::from_str(&line)?);
            }
        }
        Ok(out)
    }

    /// Reads a catalog written by [`SearchCatalog::write_jsonl`].
    pub fn read_jsonl(path: &Path) -> Result<Self> {
        let meta = serde_json::from_reader(BufReader::new(File::open(meta_path(path))?))?;
        Ok(SearchCatalog {
            meta,
            records: Self::read_records(path)?,
        })
    }
}

fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// All images of an ordering under restarting the walk, reversing it, and
/// reflecting the polygon, each relabelled to start at vector 0.
fn orbit(ord: &[usize], n: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for shift in 0..n {
        for reverse in [false, true] {
            for reflect in [false, true] {
                let mut seq: Vec<usize> = (0..n).map(|i| ord[(i + shift) % n]).collect();
                if reverse {
                    seq.reverse();
                }
                if reflect {
                    for k in seq.iter_mut() {
                        *k = (n - *k) % n;
                    }
                }
                let first = seq[0];
                out.insert(seq.iter().map(|&k| (k + n - first) % n).collect());
            }
        }
    }
    out
}

/// Smallest ordering, lexicographically, among the images of `ord` under
/// restart, reversal and reflection. Reversal keeps the knot type;
/// reflection mirrors it.
pub fn canonical_ordering(ord: &Ordering, n: usize) -> Ordering {
    Ordering(orbit(ord.as_slice(), n).into_iter().next().unwrap())
}

enum Outcome {
    Record(SearchRecord),
    Degenerate(Ordering),
    Oversized(Ordering),
}

fn analyze(n: usize, ord: Ordering, multiplicity: usize, eps: f64) -> Result<Outcome> {
    let (_, d) = ngon_diagram(n, &ord, eps)?;
    if d.is_degenerate() {
        return Ok(Outcome::Degenerate(ord));
    }
    if d.crossing_count() > MAX_STATE_SUM_CROSSINGS {
        return Ok(Outcome::Oversized(ord));
    }
    let feasible = feasible_assignments(&d)?;
    let mut classes: Vec<ClassCount> = Vec::new();
    for (a, _) in &feasible {
        let k = classify(&d, a)?;
        match classes.iter_mut().find(|c| c.class == k) {
            Some(c) => c.count += 1,
            None => classes.push(ClassCount { class: k, count: 1 }),
        }
    }
    Ok(Outcome::Record(SearchRecord {
        n,
        crossings: d.crossing_count(),
        feasible: feasible.len(),
        classes,
        effective_sticks: merge_crossingless_runs(&d),
        ordering: ord,
        multiplicity,
    }))
}

/// Classifies every realizable assignment of every reordering of the
/// regular n-gon with vector 0 first. With `symmetry_reduce`, only the
/// canonical member of each symmetry class is analysed.
pub fn search_ngon(n: usize, symmetry_reduce: bool, eps: f64) -> Result<SearchCatalog> {
    if !(3..=MAX_SEARCH_N).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "search needs 3 ≤ n ≤ {MAX_SEARCH_N}, got {n}"
        )));
    }
    let orderings: Vec<Vec<usize>> = (1..n)
        .permutations(n - 1)
        .map(|p| std::iter::once(0).chain(p).collect())
        .collect();
    let examined = orderings.len();
    let outcomes = orderings
        .into_par_iter()
        .filter_map(|ord| {
            if !symmetry_reduce {
                return Some((ord, 1));
            }
            let images = orbit(&ord, n);
            (images.iter().next() == Some(&ord)).then_some((ord, images.len()))
        })
        .map(|(ord, mult)| analyze(n, Ordering(ord), mult, eps))
        .collect::<Result<Vec<_>>>()?;

    let mut catalog = SearchCatalog {
        meta: CatalogMeta {
            n,
            symmetry_reduced: symmetry_reduce,
            eps,
            orderings_examined: examined,
            degenerate: Vec::new(),
            oversized: Vec::new(),
        },
        records: Vec::new(),
    };
    for o in outcomes {
        match o {
            Outcome::Record(r) => catalog.records.push(r),
            Outcome::Degenerate(ord) => catalog.meta.degenerate.push(ord),
            Outcome::Oversized(ord) => catalog.meta.oversized.push(ord),
        }
    }
    Ok(catalog)
}
