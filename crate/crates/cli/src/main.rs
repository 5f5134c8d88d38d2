mod verify;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ngon_knots::constructions::{ngon_diagram, search_ngon};
use ngon_knots::heights::{build_system, feasible_assignments_split, solve_feasibility};
use ngon_knots::knot::{
    classify, determinant, extract_gauss_code, gauss_to_pd, jones, CrossingAssignment, Over,
};
use ngon_knots::planar::{Diagram, DiagramRecord, Ordering, DEFAULT_EPS};
use ngon_knots::render::{render_svg, RenderOptions};

use verify::Target;

#[derive(Debug, Parser)]
#[command(
    name = "ngon-knots",
    version,
    about = "Knots from reordered regular polygon edges"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
struct RunConfig {
    /// Geometric tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS, value_parser = positive)]
    eps: f64,
    /// Seed recorded in reports; every command is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Where to write the report, SVG or catalog.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one of the verification gates.
    Verify {
        #[arg(value_enum)]
        target: Target,
        /// Range of n for the selection gate, as `lo..hi` (inclusive).
        #[arg(long, default_value = "7..100", value_parser = parse_range)]
        range: RangeInclusive<usize>,
    },
    /// Classify a diagram under an over/under assignment.
    Classify {
        #[command(flatten)]
        input: DiagramInput,
        /// Print the height certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Draw a diagram as SVG, or with `--format json` write its diagram
    /// record for later `--input`.
    Render {
        #[command(flatten)]
        input: DiagramInput,
        /// Annotate vertices with L/P/H height bands from a certificate.
        #[arg(long)]
        heights: bool,
    },
    /// Classify every reordering of the regular n-gon.
    Search {
        #[arg(long)]
        n: usize,
        /// Analyse every ordering instead of one per symmetry class.
        #[arg(long)]
        no_symmetry: bool,
        /// Append to the catalog at --out instead of replacing it.
        #[arg(long)]
        append: bool,
    },
}

#[derive(Debug, Args)]
struct DiagramInput {
    /// Diagram JSON with `vectors` and `ordering`.
    #[arg(long, conflicts_with_all = ["n", "ordering"])]
    input: Option<PathBuf>,
    /// Regular polygon size.
    #[arg(long, requires = "ordering")]
    n: Option<usize>,
    /// Comma-separated vector indices.
    #[arg(long, value_delimiter = ',')]
    ordering: Option<Vec<usize>>,
    /// `alternating`, `feasible` (first realizable), a string of `A`/`B`
    /// per crossing, or an integer bit mask.
    #[arg(long, default_value = "alternating")]
    assignment: String,
    /// Vertices lifted with vertical sticks, comma-separated.
    #[arg(long, value_delimiter = ',')]
    verticals: Vec<usize>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s}")),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s}"))?;
    let lo: usize = lo.parse().map_err(|e| format!("{e}"))?;
    let hi: usize = hi
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(lo..=hi)
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Verify { target, range } => cmd_verify(cfg, *target, range.clone()),
        Command::Classify { input, certificate } => cmd_classify(cfg, input, *certificate),
        Command::Render { input, heights } => cmd_render(cfg, input, *heights),
        Command::Search {
            n,
            no_symmetry,
            append,
        } => cmd_search(cfg, *n, !no_symmetry, *append),
    }
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_verify(cfg: &RunConfig, target: Target, range: RangeInclusive<usize>) -> Result<Outcome> {
    let gate = verify::run(target, range, cfg.eps)?;
    let report = serde_json::to_string_pretty(&json!({ "config": cfg, "gate": gate }))?;
    if let Some(out) = &cfg.out {
        write_out(out, &report)?;
    }
    if cfg.format == Format::Json {
        println!("{report}");
    } else {
        let status = if gate.pass { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", target_name(target), gate.summary);
        for m in &gate.mismatches {
            println!("  {}", m.check);
            println!("  - {}", m.expected);
            println!("  + {}", m.got);
        }
    }
    Ok(if gate.pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn target_name(t: Target) -> String {
    t.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn load_diagram(input: &DiagramInput, eps: f64) -> Result<(DiagramRecord, Diagram)> {
    match (&input.input, input.n, &input.ordering) {
        (Some(path), _, _) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let rec: DiagramRecord = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            let d = rec.diagram(eps)?;
            Ok((rec, d))
        }
        (None, Some(n), Some(ord)) => {
            let ord = Ordering(ord.clone());
            let (vs, d) = ngon_diagram(n, &ord, eps)?;
            Ok((DiagramRecord::new(&vs, &ord, &d), d))
        }
        _ => bail!("give either --input or both --n and --ordering"),
    }
}

fn parse_assignment(
    spec: &str,
    d: &Diagram,
    verticals: &BTreeSet<usize>,
) -> Result<CrossingAssignment> {
    let c = d.crossing_count();
    match spec {
        "alternating" => {
            CrossingAssignment::alternating(d).context("the diagram has no alternating assignment")
        }
        "feasible" => feasible_assignments_split(d, verticals)?
            .into_iter()
            .next()
            .map(|(a, _)| a)
            .context("no assignment is realizable"),
        s if s.chars().all(|ch| ch == 'A' || ch == 'B') && !s.is_empty() => {
            if s.len() != c {
                bail!("assignment has {} letters for {c} crossings", s.len());
            }
            Ok(CrossingAssignment {
                over: s
                    .chars()
                    .map(|ch| if ch == 'A' { Over::A } else { Over::B })
                    .collect(),
            })
        }
        s => {
            let bits: u64 = s
                .parse()
                .with_context(|| format!("unrecognized assignment {s}"))?;
            if c < 64 && bits >> c != 0 {
                bail!("bit mask {bits} has bits beyond {c} crossings");
            }
            Ok(CrossingAssignment::from_bits(bits, c))
        }
    }
}

fn degeneracy_report(d: &Diagram) -> String {
    let mut s = String::from("degenerate diagram:\n");
    for g in d.unresolved() {
        s.push_str(&format!(
            "  {:?} at ({:.6}, {:.6}), edges {:?}, vertices {:?}\n",
            g.kind, g.point.x, g.point.y, g.edges, g.vertices
        ));
    }
    s
}

fn cmd_classify(cfg: &RunConfig, input: &DiagramInput, certificate: bool) -> Result<Outcome> {
    let (rec, d) = load_diagram(input, cfg.eps)?;
    let ord = rec.ordering;
    if d.is_degenerate() {
        eprint!("{}", degeneracy_report(&d));
        return Ok(Outcome::Fail);
    }
    let verticals: BTreeSet<usize> = input.verticals.iter().copied().collect();
    let a = parse_assignment(&input.assignment, &d, &verticals)?;
    let class = classify(&d, &a)?;
    let g = extract_gauss_code(&d, &a)?;
    let (jones_text, det) = if g.crossing_count() == 0 {
        ("1".to_string(), 1)
    } else {
        let pd = gauss_to_pd(&g)?;
        (jones(&pd, g.writhe())?.to_string(), determinant(&pd)?)
    };
    let cert = solve_feasibility(&build_system(&d, &a, &verticals)?)?;
    let report = json!({
        "ordering": ord,
        "crossings": d.crossing_count(),
        "assignment": a,
        "gauss": g.to_string(),
        "class": class,
        "name": class.name(),
        "determinant": det,
        "jones": jones_text,
        "feasible": cert.is_some(),
        "certificate": if certificate { cert.as_ref().map(|c| c.to_record(&a)) } else { None },
    });
    let text = serde_json::to_string_pretty(&report)?;
    if let Some(out) = &cfg.out {
        write_out(out, &text)?;
    }
    if cfg.format == Format::Json {
        println!("{text}");
    } else {
        let mut o = std::io::stdout().lock();
        writeln!(o, "ordering     {ord}")?;
        writeln!(o, "crossings    {}", d.crossing_count())?;
        writeln!(o, "gauss        {g}")?;
        writeln!(o, "class        {class}")?;
        writeln!(o, "determinant  {det}")?;
        writeln!(o, "jones        {jones_text}")?;
        writeln!(o, "feasible     {}", cert.is_some())?;
        if let (true, Some(c)) = (certificate, &cert) {
            let z: Vec<String> = c.z.iter().map(|v| format!("{v:.6}")).collect();
            writeln!(o, "heights      {}", z.join(" "))?;
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_render(cfg: &RunConfig, input: &DiagramInput, heights: bool) -> Result<Outcome> {
    let (rec, d) = load_diagram(input, cfg.eps)?;
    if cfg.format == Format::Json {
        let text = serde_json::to_string_pretty(&rec)?;
        match &cfg.out {
            Some(out) => write_out(out, &text)?,
            None => println!("{text}"),
        }
        return Ok(Outcome::Pass);
    }
    if d.is_degenerate() {
        eprint!("{}", degeneracy_report(&d));
        return Ok(Outcome::Fail);
    }
    let verticals: BTreeSet<usize> = input.verticals.iter().copied().collect();
    let a = parse_assignment(&input.assignment, &d, &verticals)?;
    let cert = if heights {
        Some(
            solve_feasibility(&build_system(&d, &a, &verticals)?)?
                .context("the assignment is not realizable, so there are no heights to show")?,
        )
    } else {
        None
    };
    let opts = RenderOptions {
        heights: cert,
        verticals,
        ..RenderOptions::default()
    };
    let svg = render_svg(&d, Some(&a), &opts)?;
    match &cfg.out {
        Some(out) => write_out(out, &svg)?,
        None => print!("{svg}"),
    }
    Ok(Outcome::Pass)
}

fn cmd_search(cfg: &RunConfig, n: usize, symmetry: bool, append: bool) -> Result<Outcome> {
    let cat = search_ngon(n, symmetry, cfg.eps)?;
    match &cfg.out {
        Some(out) if append => cat.append_jsonl(out)?,
        Some(out) => cat.write_jsonl(out)?,
        None => {}
    }
    if cfg.format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&cat)?);
    } else {
        println!(
            "n = {n}: {} orderings examined, {} records, {} degenerate, {} oversized",
            cat.meta.orderings_examined,
            cat.records.len(),
            cat.meta.degenerate.len(),
            cat.meta.oversized.len()
        );
        for k in cat.classes_observed() {
            let count: usize = cat
                .records
                .iter()
                .filter(|r| r.classes.iter().any(|c| c.class == k))
                .map(|r| r.multiplicity)
                .sum();
            println!("  {k}: {count} orderings");
        }
    }
    Ok(Outcome::Pass)
}
