//! Command-line surface: one executable, subcommands for every operation,
//! plus the reproduction bundle.
//!
//! Machine output is CSV with a fixed header; human tables go to stdout.
//! Every flag can also be supplied by a `key = value` config file via
//! `--config`; explicit flags win. `GR_SEED` is the seed fallback.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::audit::{
    full_range_audit, l1_audit, l2_counterexample, linf_audit, random_function, run_audit,
    AuditKind, AuditReport, CounterexampleCase,
};
use crate::error::{Error, Result};
use crate::graph::{build_grid_window, build_ladder, build_path, build_regular_tree, Graph};
use crate::isoperimetry::{
    closed_form_profile, compute_profile, congruent_up_to_isometry, min_edge_boundary,
    BoundaryKind, ProblemFamily,
};
use crate::ordering::{
    diamond_ordering, lex_ordering, path_ordering, snake_ordering, spiral_ordering,
    tree_bfs_ordering, VertexOrdering,
};
use crate::rearrange::{
    format_rational, grad_lp_norm, grad_power_sum, grad_sup, lp_norm, rational_int, rearrange,
    LatticeFunction, PNorm,
};
use crate::render::{render_function, render_ordering};

#[derive(Parser, Debug)]
#[command(
    name = "gr",
    about = "Discrete rearrangements and isoperimetric audits on lattice graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Isoperimetric profile by brute-force oracle and/or closed form.
    Profile(ProfileArgs),
    /// Rearrange a function file along an ordering.
    Rearrange(RearrangeArgs),
    /// Lp norms of a function and its gradient.
    Norms(NormsArgs),
    /// Audit an ordering against the inequality hypotheses.
    Audit(AuditArgs),
    /// Produce a function whose L2 gradient grows under the rearrangement.
    Counterexample(CounterexampleArgs),
    /// Recompute every headline number and compare against its known value.
    Reproduce(ReproduceArgs),
    /// Deterministic SVG heatmap of a function or label map of an ordering.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// key = value file supplying any flag not given explicitly.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// grid | ladder | path | tree:D
    #[arg(long)]
    family: Option<String>,
    /// edge | vertex
    #[arg(long)]
    kind: Option<String>,
    /// Single size or inclusive range, e.g. 5 or 1..6
    #[arg(long)]
    n: Option<String>,
    /// Search box (side / length / tree depth); default sized from N.
    #[arg(long = "box")]
    box_size: Option<usize>,
    /// Also emit the witness set per N.
    #[arg(long, default_value_t = false)]
    witness: bool,
    /// CSV output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RearrangeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// grid:W | ladder:L | path:L | tree:D,H
    #[arg(long)]
    graph: Option<String>,
    /// spiral | diamond | snake | lex | path | tree-bfs | file:PATH
    #[arg(long)]
    ordering: Option<String>,
    /// Input function file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output function file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NormsArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Comma-separated exponents, e.g. 1,2,1.5,inf
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    ordering: Option<String>,
    #[arg(long)]
    nmax: Option<usize>,
    /// Which audit families to run: any of 2 (L1), 3 (L-infinity), 4 (full range).
    #[arg(long)]
    theorems: Option<String>,
    #[arg(long = "box")]
    box_size: Option<usize>,
    /// Directory for machine CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CounterexampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    ordering: Option<String>,
    /// Witness function file (stdout always shows it too).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Report directory (default reproduce_out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the property spot checks (GR_SEED as fallback).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    graph: Option<String>,
    /// Render this ordering's rank labels.
    #[arg(long)]
    ordering: Option<String>,
    /// Render this function file as a heatmap.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Cap on the number of ranks labelled.
    #[arg(long)]
    upto: Option<usize>,
    /// Output SVG path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Entry point used by the `gr` binary.
pub fn run(args: impl Iterator<Item = String>) -> ExitCode {
    let mut argv: Vec<String> = vec!["gr".into()];
    argv.extend(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2u8 } else { 0u8 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Test-friendly entry point: parses and runs, returning the exit code.
pub fn execute(args: &[&str]) -> Result<u8> {
    let mut argv: Vec<String> = vec!["gr".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::Parse(e.to_string()))?;
    dispatch(cli.command)
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Profile(args) => cmd_profile(args),
        Command::Rearrange(args) => cmd_rearrange(args),
        Command::Norms(args) => cmd_norms(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Counterexample(args) => cmd_counterexample(args),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::Render(args) => cmd_render(args),
    }
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Config> {
        let mut map = BTreeMap::new();
        if let Some(path) = path {
            for line in fs::read_to_string(path)?.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad config line: {line}")))?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Config(map))
    }

    fn get(&self, key: &str) -> Option<String> {
        self.0.get(key).cloned()
    }

    /// Flags win over config values.
    fn string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.get(key))
    }

    fn path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.get(key).map(PathBuf::from))
    }

    fn usize(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self
                .get(key)
                .map(|s| {
                    s.parse()
                        .map_err(|_| Error::Parse(format!("bad {key} in config: {s}")))
                })
                .transpose(),
        }
    }
}

fn require<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("missing --{what}")))
}

fn resolve_seed(flag: Option<u64>, config: &Config) -> u64 {
    flag.or_else(|| config.get("seed").and_then(|s| s.parse().ok()))
        .or_else(|| std::env::var("GR_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(42)
}

// ---------------------------------------------------------------------------
// Selector parsing
// ---------------------------------------------------------------------------

/// Parses `grid:W`, `ladder:L`, `path:L`, `tree:D,H`.
pub fn parse_graph(selector: &str) -> Result<Arc<Graph>> {
    let (family, params) = selector
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("graph selector needs params: {selector}")))?;
    let ints: Vec<u32> = params
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad graph parameter {p}")))
        })
        .collect::<Result<_>>()?;
    match (family, ints.as_slice()) {
        ("grid", [w]) => build_grid_window(*w),
        ("ladder", [l]) => build_ladder(*l),
        ("path", [l]) => build_path(*l),
        ("tree", [d, h]) => build_regular_tree(*d, *h),
        _ => Err(Error::Parse(format!("bad graph selector: {selector}"))),
    }
}

/// Parses `spiral | diamond | snake | lex | path | tree-bfs | file:PATH`.
pub fn parse_ordering(graph: &Arc<Graph>, selector: &str) -> Result<VertexOrdering> {
    if let Some(path) = selector.strip_prefix("file:") {
        let text = fs::read_to_string(path)?;
        return VertexOrdering::from_text(Arc::clone(graph), &text);
    }
    match selector {
        "spiral" => spiral_ordering(graph),
        "diamond" => diamond_ordering(graph),
        "snake" => snake_ordering(graph),
        "lex" => lex_ordering(graph),
        "path" => path_ordering(graph),
        "tree-bfs" => tree_bfs_ordering(graph),
        other => Err(Error::Parse(format!("unknown ordering: {other}"))),
    }
}

fn parse_problem_family(selector: &str) -> Result<ProblemFamily> {
    match selector.split_once(':') {
        None => match selector {
            "grid" => Ok(ProblemFamily::Grid),
            "ladder" => Ok(ProblemFamily::Ladder),
            "path" => Ok(ProblemFamily::Path),
            other => Err(Error::Parse(format!("unknown family: {other}"))),
        },
        Some(("tree", d)) => Ok(ProblemFamily::Tree {
            degree: d
                .parse()
                .map_err(|_| Error::Parse(format!("bad tree degree {d}")))?,
        }),
        _ => Err(Error::Parse(format!("unknown family: {selector}"))),
    }
}

fn parse_kind(selector: &str) -> Result<BoundaryKind> {
    match selector {
        "edge" => Ok(BoundaryKind::Edge),
        "vertex" => Ok(BoundaryKind::Vertex),
        other => Err(Error::Parse(format!("unknown boundary kind: {other}"))),
    }
}

/// `5` or `1..6` (inclusive).
fn parse_n_range(selector: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = selector.split_once("..") {
        let lo: usize = lo
            .parse()
            .map_err(|_| Error::Parse(format!("bad range start {lo}")))?;
        let hi: usize = hi
            .trim_start_matches('=')
            .parse()
            .map_err(|_| Error::Parse(format!("bad range end {hi}")))?;
        if lo == 0 || hi < lo {
            return Err(Error::Parse(format!("bad range {selector}")));
        }
        Ok((lo..=hi).collect())
    } else {
        let n: usize = selector
            .parse()
            .map_err(|_| Error::Parse(format!("bad size {selector}")))?;
        Ok(vec![n])
    }
}

fn parse_p_list(selector: &str) -> Result<Vec<PNorm>> {
    selector.split(',').map(|p| p.trim().parse()).collect()
}

fn parse_theorems(selector: &str) -> Result<Vec<AuditKind>> {
    selector
        .split(',')
        .map(|t| match t.trim() {
            "2" => Ok(AuditKind::L1),
            "3" => Ok(AuditKind::LInf),
            "4" => Ok(AuditKind::FullRange),
            other => Err(Error::Parse(format!("unknown audit selector: {other}"))),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_profile(args: ProfileArgs) -> Result<u8> {
    let config = Config::load(args.common.config.as_deref())?;
    let family = parse_problem_family(&require(
        config.string(args.family, "family"),
        "family",
    )?)?;
    let kind = parse_kind(&require(config.string(args.kind, "kind"), "kind")?)?;
    let ns = parse_n_range(&require(config.string(args.n, "n"), "n")?)?;
    let box_size = config.usize(args.box_size, "box")?;
    let out = config.path(args.out, "out");

    let mut csv = String::new();
    if args.witness {
        csv.push_str("N,min,provenance,witness\n");
        for &n in &ns {
            let b = box_size.unwrap_or_else(|| crate::isoperimetry::default_box(family, n));
            let outcome = match kind {
                BoundaryKind::Edge => min_edge_boundary(family, n, b)?,
                BoundaryKind::Vertex => crate::isoperimetry::min_vertex_boundary(family, n, b)?,
            };
            let witness = if matches!(family, ProblemFamily::Tree { .. }) {
                outcome
                    .witness
                    .iter()
                    .map(|v| v.0.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            } else {
                outcome
                    .witness_coords()
                    .iter()
                    .map(|(x, y)| format!("{x}:{y}"))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            writeln!(csv, "{n},{},oracle(box={b}),{witness}", outcome.minimum).unwrap();
        }
    } else {
        csv.push_str("N,min,provenance\n");
        let profile = compute_profile(family, kind, ns.iter().copied(), box_size)?;
        for (&n, &(value, provenance)) in &profile.values {
            writeln!(csv, "{n},{value},{provenance}").unwrap();
        }
    }
    emit(out.as_deref(), &csv)?;
    Ok(0)
}

fn cmd_rearrange(args: RearrangeArgs) -> Result<u8> {
    let config = Config::load(args.common.config.as_deref())?;
    let graph = parse_graph(&require(config.string(args.graph, "graph"), "graph")?)?;
    let ordering = parse_ordering(
        &graph,
        &require(config.string(args.ordering, "ordering"), "ordering")?,
    )?;
    let input = require(config.path(args.input, "in"), "in")?;
    let out = config.path(args.out, "out");
    let f = LatticeFunction::from_text(Arc::clone(&graph), &fs::read_to_string(input)?)?;
    let fstar = rearrange(&f, &ordering)?;
    emit(out.as_deref(), &fstar.to_text())?;
    Ok(0)
}

fn cmd_norms(args: NormsArgs) -> Result<u8> {
    let config = Config::load(args.common.config.as_deref())?;
    let graph = parse_graph(&require(config.string(args.graph, "graph"), "graph")?)?;
    let input = require(config.path(args.input, "in"), "in")?;
    let ps = parse_p_list(&require(config.string(args.p, "p"), "p")?)?;
    let out = config.path(args.out, "out");
    let f = LatticeFunction::from_text(Arc::clone(&graph), &fs::read_to_string(input)?)?;
    let mut csv = String::from("p,lp_norm,grad_lp_norm\n");
    for p in &ps {
        writeln!(csv, "{p},{},{}", lp_norm(&f, p), grad_lp_norm(&f, p)).unwrap();
    }
    emit(out.as_deref(), &csv)?;
    Ok(0)
}

fn audit_rows_csv(report: &AuditReport) -> String {
    let mut csv =
        String::from("N,prefix_edge,min_edge,containment,min_vertex,boundary_matches,containment_ok\n");
    for n in 1..=report.nmax {
        let l1 = report
            .l1
            .as_ref()
            .and_then(|a| a.rows.iter().find(|r| r.n == n));
        let li = report
            .linf
            .as_ref()
            .and_then(|a| a.rows.iter().find(|r| r.n == n));
        let fr = report
            .full_range
            .as_ref()
            .and_then(|a| a.rows.iter().find(|r| r.n == n));
        let fmt_opt = |o: Option<String>| o.unwrap_or_default();
        writeln!(
            csv,
            "{n},{},{},{},{},{},{}",
            fmt_opt(
                l1.map(|r| r.prefix_edge.to_string())
                    .or(fr.map(|r| r.prefix_edge.to_string()))
            ),
            fmt_opt(l1.map(|r| r.min_edge.to_string())),
            fmt_opt(
                li.map(|r| r.containment.to_string())
                    .or(fr.map(|r| r.containment.to_string()))
            ),
            fmt_opt(
                li.map(|r| r.min_vertex.to_string())
                    .or(fr.map(|r| r.min_vertex.to_string()))
            ),
            fmt_opt(fr.map(|r| r.boundary_matches.to_string())),
            fmt_opt(fr.map(|r| r.containment_ok.to_string())),
        )
        .unwrap();
    }
    csv
}

fn audit_constants_csv(report: &AuditReport) -> String {
    let mut csv = String::from("constant,value\n");
    if let Some(l1) = &report.l1 {
        writeln!(csv, "alpha,{}", format_rational(&l1.alpha)).unwrap();
        writeln!(csv, "beta,{}", l1.beta).unwrap();
    }
    if let Some(li) = &report.linf {
        writeln!(csv, "c,{}", li.c).unwrap();
        writeln!(csv, "profile_nondecreasing,{}", li.profile_nondecreasing).unwrap();
    }
    if let Some(fr) = &report.full_range {
        writeln!(csv, "full_range_holds,{}", fr.holds).unwrap();
        writeln!(
            csv,
            "full_range_first_failure,{}",
            fr.first_failure.map_or(String::new(), |n| n.to_string())
        )
        .unwrap();
    }
    csv
}

fn cmd_audit(args: AuditArgs) -> Result<u8> {
    let config = Config::load(args.common.config.as_deref())?;
    let graph = parse_graph(&require(config.string(args.graph, "graph"), "graph")?)?;
    let ordering = parse_ordering(
        &graph,
        &require(config.string(args.ordering, "ordering"), "ordering")?,
    )?;
    let nmax = require(config.usize(args.nmax, "nmax")?, "nmax")?;
    let kinds = parse_theorems(
        &config
            .string(args.theorems, "theorems")
            .unwrap_or_else(|| "2,3,4".into()),
    )?;
    let box_size = config.usize(args.box_size, "box")?;
    let out = config.path(args.out, "out");

    let report = match run_audit(&ordering, nmax, &kinds, box_size) {
        Ok(report) => report,
        Err(Error::ProfileNotMonotone(n)) => {
            println!("hypothesis failure: vertex profile decreases at N={n}");
            return Ok(1);
        }
        Err(e) => return Err(e),
    };

    println!("ordering: {}  nmax: {}", report.ordering, report.nmax);
    println!("{}", audit_rows_csv(&report).trim_end().replace(',', "\t"));
    if let Some(l1) = &report.l1 {
        println!(
            "l1 constants: alpha = {}, beta = {}",
            format_rational(&l1.alpha),
            l1.beta
        );
    }
    if let Some(li) = &report.linf {
        println!("containment constant: c = {}", li.c);
    }
    if let Some(fr) = &report.full_range {
        match fr.first_failure {
            None => println!("full range: holds"),
            Some(n) => println!("full range: fails at N = {n}"),
        }
    }
    for caveat in &report.caveats {
        println!("caveat: {caveat}");
    }

    if let Some(dir) = out {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("audit_rows.csv"), audit_rows_csv(&report))?;
        fs::write(dir.join("audit_constants.csv"), audit_constants_csv(&report))?;
    }
    Ok(if report.hypotheses_hold() { 0 } else { 1 })
}

fn cmd_counterexample(args: CounterexampleArgs) -> Result<u8> {
    let config = Config::load(args.common.config.as_deref())?;
    let graph = parse_graph(&require(config.string(args.graph, "graph"), "graph")?)?;
    let ordering = parse_ordering(
        &graph,
        &require(config.string(args.ordering, "ordering"), "ordering")?,
    )?;
    let out = config.path(args.out, "out");
    let outcome = l2_counterexample(&ordering)?;
    let case = match outcome.case {
        CounterexampleCase::CenterPlus => "center-plus".to_string(),
        CounterexampleCase::PlusSweep { center } => format!("plus-sweep(center={center})"),
    };
    println!(
        "case: {case}\nratio_squared: {}\nratio: {}",
        format_rational(&outcome.ratio_squared),
        outcome.ratio
    );
    println!("witness:\n{}", outcome.witness.to_text().trim_end());
    if let Some(path) = out {
        emit(Some(&path), &outcome.witness.to_text())?;
    }
    Ok(0)
}

fn cmd_render(args: RenderArgs) -> Result<u8> {
    let config = Config::load(args.common.config.as_deref())?;
    let graph = parse_graph(&require(config.string(args.graph, "graph"), "graph")?)?;
    let out = config.path(args.out, "out");
    let ordering_sel = config.string(args.ordering, "ordering");
    let input = config.path(args.input, "in");
    let svg = match (ordering_sel, input) {
        (Some(sel), None) => {
            let o = parse_ordering(&graph, &sel)?;
            let upto = config.usize(args.upto, "upto")?.unwrap_or(o.len());
            render_ordering(&o, upto)?
        }
        (None, Some(path)) => {
            let f = LatticeFunction::from_text(Arc::clone(&graph), &fs::read_to_string(path)?)?;
            render_function(&f)?
        }
        _ => {
            return Err(Error::InvalidParameter(
                "render needs exactly one of --ordering or --in".into(),
            ))
        }
    };
    emit(out.as_deref(), &svg)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// Reproduce
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ReproduceRow {
    pub name: String,
    pub computed: String,
    pub expected: String,
    pub matched: bool,
}

#[derive(Debug)]
pub struct ReproduceReport {
    pub rows: Vec<ReproduceRow>,
    pub elapsed_seconds: f64,
}

impl ReproduceReport {
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| !r.matched).count()
    }
}

fn push_row(rows: &mut Vec<ReproduceRow>, name: &str, computed: String, expected: &str) {
    rows.push(ReproduceRow {
        name: name.to_string(),
        matched: computed == expected,
        computed,
        expected: expected.to_string(),
    });
}

fn join_usize(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Recomputes every headline value and compares it against its published
/// value. Writes CSV tables plus a summary into `out_dir`.
pub fn reproduce(out_dir: &Path, seed: u64) -> Result<ReproduceReport> {
    let start = Instant::now();
    fs::create_dir_all(out_dir)?;
    let mut rows: Vec<ReproduceRow> = Vec::new();

    // Vertex-isoperimetric profile of the grid, by exhaustive oracle.
    let profile = compute_profile(ProblemFamily::Grid, BoundaryKind::Vertex, 1..=6, None)?;
    let values: Vec<usize> = (1..=6).map(|n| profile.value(n).unwrap()).collect();
    push_row(&mut rows, "grid vertex profile N=1..6", join_usize(&values), "4,6,7,8,8,9");
    let mut csv = String::from("N,min,provenance\n");
    for (&n, &(v, p)) in &profile.values {
        writeln!(csv, "{n},{v},{p}").unwrap();
    }
    fs::write(out_dir.join("grid_vertex_profile.csv"), csv)?;

    // Spiral containment indices.
    let grid = build_grid_window(5)?;
    let spiral = spiral_ordering(&grid)?;
    let ms: Vec<usize> = (1..=6)
        .map(|n| spiral.containment_index(n))
        .collect::<Result<_>>()?;
    push_row(&mut rows, "spiral containment N=1..6", join_usize(&ms), "8,11,14,15,18,19");
    let mut csv = String::from("N,containment\n");
    for (i, m) in ms.iter().enumerate() {
        writeln!(csv, "{},{m}", i + 1).unwrap();
    }
    fs::write(out_dir.join("spiral_containment.csv"), csv)?;

    // Five-cell edge minimum and its witness shape.
    let outcome = min_edge_boundary(ProblemFamily::Grid, 5, 11)?;
    push_row(&mut rows, "grid edge minimum N=5", outcome.minimum.to_string(), "10");
    let block = [(0, 0), (1, 0), (1, 1), (0, 1), (-1, 1)];
    push_row(
        &mut rows,
        "edge witness congruent to block pentomino",
        congruent_up_to_isometry(&outcome.witness_coords(), &block).to_string(),
        "true",
    );

    // Ladder fixture: values (2,1,1), snake rearrangement.
    let ladder = build_ladder(8)?;
    let f_ladder = LatticeFunction::from_coords(
        &ladder,
        &[
            ((0, 0), rational_int(2)),
            ((0, 1), rational_int(1)),
            ((1, 0), rational_int(1)),
        ],
    )?;
    let snake = snake_ordering(&ladder)?;
    let f_ladder_star = rearrange(&f_ladder, &snake)?;
    push_row(
        &mut rows,
        "ladder fixture grad l1 before",
        format_rational(&grad_power_sum(&f_ladder, 1)),
        "5",
    );
    push_row(
        &mut rows,
        "ladder fixture grad l1 after snake",
        format_rational(&grad_power_sum(&f_ladder_star, 1)),
        "5",
    );
    push_row(
        &mut rows,
        "ladder fixture grad sup before",
        format_rational(&grad_sup(&f_ladder)),
        "1",
    );
    push_row(
        &mut rows,
        "ladder fixture grad sup after snake",
        format_rational(&grad_sup(&f_ladder_star)),
        "2",
    );

    // Grid fixture: plus shape (2,1,1,1,1) under the spiral.
    let f_plus = LatticeFunction::from_coords(
        &grid,
        &[
            ((0, 0), rational_int(2)),
            ((1, 0), rational_int(1)),
            ((-1, 0), rational_int(1)),
            ((0, 1), rational_int(1)),
            ((0, -1), rational_int(1)),
        ],
    )?;
    let f_plus_star = rearrange(&f_plus, &spiral)?;
    push_row(
        &mut rows,
        "grid fixture grad sup before",
        format_rational(&grad_sup(&f_plus)),
        "1",
    );
    push_row(
        &mut rows,
        "grid fixture grad sup after spiral",
        format_rational(&grad_sup(&f_plus_star)),
        "2",
    );

    // The two competing five-ones energies.
    let centered = LatticeFunction::from_coords(
        &grid,
        &[
            ((0, 0), rational_int(1)),
            ((1, 0), rational_int(1)),
            ((-1, 0), rational_int(1)),
            ((0, 1), rational_int(1)),
            ((0, -1), rational_int(1)),
        ],
    )?;
    let blocked = LatticeFunction::from_coords(
        &grid,
        &[
            ((0, 0), rational_int(1)),
            ((1, 0), rational_int(1)),
            ((1, 1), rational_int(1)),
            ((0, 1), rational_int(1)),
            ((0, -1), rational_int(1)),
        ],
    )?;
    push_row(
        &mut rows,
        "centered five-ones energy",
        format_rational(&grad_power_sum(&centered, 2)),
        "12",
    );
    push_row(
        &mut rows,
        "block five-ones energy",
        format_rational(&grad_power_sum(&blocked, 2)),
        "10",
    );

    // Closed forms against the oracle.
    let mut csv = String::from("family,kind,N,closed_form,oracle,agree\n");
    let mut all_agree = true;
    for n in 1..=6usize {
        let cf = closed_form_profile(ProblemFamily::Grid, BoundaryKind::Edge, n)?;
        let oracle = min_edge_boundary(ProblemFamily::Grid, n, 2 * n + 1)?.minimum;
        all_agree &= cf == oracle;
        writeln!(csv, "grid,edge,{n},{cf},{oracle},{}", cf == oracle).unwrap();
    }
    push_row(&mut rows, "grid edge closed form vs oracle N<=6", all_agree.to_string(), "true");

    let mut all_agree = true;
    for n in 1..=6usize {
        for kind in [BoundaryKind::Edge, BoundaryKind::Vertex] {
            let family = ProblemFamily::Tree { degree: 3 };
            let cf = closed_form_profile(family, kind, n)?;
            let oracle = match kind {
                BoundaryKind::Edge => min_edge_boundary(family, n, 3)?.minimum,
                BoundaryKind::Vertex => crate::isoperimetry::min_vertex_boundary(family, n, 3)?.minimum,
            };
            all_agree &= cf == oracle;
            writeln!(csv, "tree(d=3),{kind},{n},{cf},{oracle},{}", cf == oracle).unwrap();
        }
    }
    push_row(&mut rows, "tree d=3 closed form vs oracle N<=6", all_agree.to_string(), "true");

    let mut all_agree = true;
    for n in 1..=8usize {
        let cf = closed_form_profile(ProblemFamily::Ladder, BoundaryKind::Edge, n)?;
        let oracle = min_edge_boundary(ProblemFamily::Ladder, n, 2 * n)?.minimum;
        all_agree &= cf == oracle;
        writeln!(csv, "ladder,edge,{n},{cf},{oracle},{}", cf == oracle).unwrap();
    }
    push_row(&mut rows, "ladder edge case table vs oracle N<=8", all_agree.to_string(), "true");
    fs::write(out_dir.join("closed_form_agreement.csv"), csv)?;

    // Audit constants for the named orderings.
    let mut csv = String::from("ordering,alpha,beta,c\n");
    let l1 = l1_audit(&spiral, 6, None)?;
    let li = linf_audit(&spiral, 6, None)?;
    push_row(
        &mut rows,
        "spiral constants (alpha,beta,c)",
        format!("{},{},{}", format_rational(&l1.alpha), l1.beta, li.c),
        "1,0,2",
    );
    writeln!(csv, "spiral,{},{},{}", format_rational(&l1.alpha), l1.beta, li.c).unwrap();

    let ladder12 = build_ladder(12)?;
    let snake12 = snake_ordering(&ladder12)?;
    let l1 = l1_audit(&snake12, 8, None)?;
    let li = linf_audit(&snake12, 8, None)?;
    push_row(
        &mut rows,
        "snake constants (alpha,beta,c)",
        format!("{},{},{}", format_rational(&l1.alpha), l1.beta, li.c),
        "1,0,2",
    );
    writeln!(csv, "snake,{},{},{}", format_rational(&l1.alpha), l1.beta, li.c).unwrap();

    let lex12 = lex_ordering(&ladder12)?;
    let l1 = l1_audit(&lex12, 8, None)?;
    let li = linf_audit(&lex12, 8, None)?;
    push_row(
        &mut rows,
        "lex constants (alpha,beta,c)",
        format!("{},{},{}", format_rational(&l1.alpha), l1.beta, li.c),
        "1,0,1",
    );
    writeln!(csv, "lex,{},{},{}", format_rational(&l1.alpha), l1.beta, li.c).unwrap();
    fs::write(out_dir.join("audit_constants.csv"), csv)?;

    // Full-range audits.
    let path31 = build_path(31)?;
    let path_ord = path_ordering(&path31)?;
    push_row(
        &mut rows,
        "path full-range N<=10",
        full_range_audit(&path_ord, 10, None)?.holds.to_string(),
        "true",
    );
    let tree3 = build_regular_tree(3, 4)?;
    push_row(
        &mut rows,
        "tree d=3 full-range N<=8",
        full_range_audit(&tree_bfs_ordering(&tree3)?, 8, None)?
            .holds
            .to_string(),
        "true",
    );
    let tree4 = build_regular_tree(4, 4)?;
    push_row(
        &mut rows,
        "tree d=4 full-range N<=8",
        full_range_audit(&tree_bfs_ordering(&tree4)?, 8, None)?
            .holds
            .to_string(),
        "true",
    );
    let spiral_fr = full_range_audit(&spiral, 6, None)?;
    push_row(
        &mut rows,
        "spiral full-range first failure",
        spiral_fr
            .first_failure
            .map_or(String::from("none"), |n| n.to_string()),
        "3",
    );

    // L2 obstruction engine.
    let center_plus = crate::ordering::from_coords(
        &grid,
        &[(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)],
    )?;
    let out = l2_counterexample(&center_plus)?;
    push_row(
        &mut rows,
        "center-plus ratio squared",
        format_rational(&out.ratio_squared),
        "6/5",
    );
    let out = l2_counterexample(&spiral)?;
    push_row(
        &mut rows,
        "spiral obstruction ratio >= 1.01",
        (out.ratio >= 1.01).to_string(),
        "true",
    );

    // Seeded property spot checks (exact exponents only).
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid8 = build_grid_window(8)?;
    let spiral8 = spiral_ordering(&grid8)?;
    let mut violations = 0usize;
    for _ in 0..100 {
        let f = random_function(&grid8, &mut rng, 20);
        let fstar = rearrange(&f, &spiral8)?;
        if grad_power_sum(&fstar, 1) > grad_power_sum(&f, 1) {
            violations += 1;
        }
        if grad_sup(&fstar) > grad_sup(&f) * rational_int(2) {
            violations += 1;
        }
    }
    push_row(&mut rows, "spiral random spot check violations (100 fns)", violations.to_string(), "0");

    let mut violations = 0usize;
    for _ in 0..100 {
        let f = random_function(&ladder12, &mut rng, 11);
        let fstar = rearrange(&f, &lex12)?;
        if grad_power_sum(&fstar, 1) > grad_power_sum(&f, 1) {
            violations += 1;
        }
        if grad_sup(&fstar) > grad_sup(&f) {
            violations += 1;
        }
    }
    push_row(&mut rows, "lex random spot check violations (100 fns)", violations.to_string(), "0");

    let tree5 = build_regular_tree(3, 5)?;
    let tree_ord = tree_bfs_ordering(&tree5)?;
    let mut violations = 0usize;
    for _ in 0..50 {
        let f = random_function(&tree5, &mut rng, 20);
        let fstar = rearrange(&f, &tree_ord)?;
        for p in [1u32, 2, 3] {
            if grad_power_sum(&fstar, p) > grad_power_sum(&f, p) {
                violations += 1;
            }
        }
        if grad_sup(&fstar) > grad_sup(&f) {
            violations += 1;
        }
    }
    push_row(&mut rows, "tree random spot check violations (50 fns)", violations.to_string(), "0");

    // Summary.
    let mut csv = String::from("name,computed,expected,match\n");
    for row in &rows {
        writeln!(
            csv,
            "{},\"{}\",\"{}\",{}",
            row.name, row.computed, row.expected, row.matched
        )
        .unwrap();
    }
    fs::write(out_dir.join("summary.csv"), csv)?;

    Ok(ReproduceReport {
        rows,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<u8> {
    let config = Config::load(args.common.config.as_deref())?;
    let out = config
        .path(args.out, "out")
        .unwrap_or_else(|| PathBuf::from("reproduce_out"));
    let seed = resolve_seed(args.seed, &config);
    let report = reproduce(&out, seed)?;
    for row in &report.rows {
        println!(
            "{} {}: computed {} expected {}",
            if row.matched { "ok  " } else { "FAIL" },
            row.name,
            row.computed,
            row.expected
        );
    }
    println!(
        "{} rows, {} mismatches, {:.1}s",
        report.rows.len(),
        report.mismatches(),
        report.elapsed_seconds
    );
    Ok(if report.mismatches() == 0 { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_selector_parsing() {
        assert_eq!(parse_graph("grid:3").unwrap().vertex_count(), 49);
        assert_eq!(parse_graph("ladder:4").unwrap().vertex_count(), 8);
        assert_eq!(parse_graph("path:5").unwrap().vertex_count(), 5);
        assert_eq!(parse_graph("tree:3,2").unwrap().vertex_count(), 10);
        assert!(parse_graph("grid").is_err());
        assert!(parse_graph("blob:3").is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_n_range("5").unwrap(), vec![5]);
        assert_eq!(parse_n_range("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_n_range("1..=4").unwrap(), vec![1, 2, 3, 4]);
        assert!(parse_n_range("0..3").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn theorem_selector_parsing() {
        assert_eq!(
            parse_theorems("2,3,4").unwrap(),
            vec![AuditKind::L1, AuditKind::LInf, AuditKind::FullRange]
        );
        assert!(parse_theorems("5").is_err());
    }
}
