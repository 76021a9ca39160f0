//! Command-line front end: enumeration, counting with formula cross-checks,
//! region membership, moment polygons with SVG output, mutation graphs,
//! smoothing-closure reports, tautness queries, and a built-in oracle suite.
//!
//! Outputs are deterministic: no timestamps, JSON keys sorted, and every
//! emission carries a manifest line with the normalized command, the tool
//! version, and an FNV-1a digest of the body.

mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use lcy::delzant::{def_taut, moment_polygon, TautVerdict};
use lcy::formulas::{
    count_m2_general, count_m2_toric, count_m3_toric, count_minimal, restrictive_count_general,
    restrictive_count_toric, toric_region_member, Exactness,
};
use lcy::mutation::{mutation_graph, realization_report};
use lcy::rat::{fmt_rat, parse_rat, parse_rat_list, rint};
use lcy::{enumerate_lcy, Config, EnumOptions, Error as LcyError, Space, SympClass};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "lcy",
    version,
    about = "Log Calabi-Yau divisor configurations on rational surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Tsv => "tsv",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Enumerate,
    Both,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Enumerate => "enumerate",
            Method::Both => "both",
        }
    }
}

/// The surface and its symplectic weights, shared by most subcommands.
#[derive(clap::Args)]
struct Target {
    /// Target space: M0..M16 or quadric.
    #[arg(long)]
    space: String,
    /// Comma-separated blow-up weights, exact rationals like 2/5,1/5.
    #[arg(long)]
    delta: Option<String>,
    /// Fiber-to-base area ratio on the quadric, an exact rational >= 1.
    #[arg(long)]
    mu: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// List boundary configurations at the given weights.
    Enumerate {
        #[command(flatten)]
        target: Target,
        /// Keep only maximal-length (toric) configurations.
        #[arg(long)]
        toric: bool,
    },
    /// Count configurations by closed formula, by enumeration, or both.
    Count {
        #[command(flatten)]
        target: Target,
        /// Count only maximal-length (toric) configurations.
        #[arg(long)]
        toric: bool,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Test whether toric configurations exist at a blow-up weight vector.
    Region {
        /// Number of blow-up weights.
        #[arg(long)]
        l: usize,
        /// Comma-separated weights, exact rationals.
        #[arg(long)]
        delta: String,
    },
    /// Moment polygon of one toric configuration, optionally drawn as SVG.
    Polygon {
        #[command(flatten)]
        target: Target,
        /// Index into the sorted list of toric configurations.
        #[arg(long, default_value_t = 0)]
        config_index: usize,
        /// Write the polygon drawing to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Build the polygon mutation graph at the given weights.
    MutationGraph {
        #[command(flatten)]
        target: Target,
        /// Write the graph in DOT form to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Print a mutation path between two node indices.
        #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
        path: Option<Vec<usize>>,
    },
    /// Smoothing-closure coverage report for the toric configurations.
    Realize {
        #[command(flatten)]
        target: Target,
    },
    /// Tautness verdict for a boundary self-intersection cycle.
    Taut {
        /// Comma-separated self-intersection numbers.
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
    },
    /// Dump the candidate component classes as a table.
    Catalog {
        #[command(flatten)]
        target: Target,
    },
    /// Run the built-in oracle suite.
    Selftest,
}

enum Failure {
    Usage(String),
    Run(String),
}

type AppResult<T> = Result<T, Failure>;

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

fn run_fail(m: impl Into<String>) -> Failure {
    Failure::Run(m.into())
}

/// Library errors triggered by user inputs are usage errors; an internal
/// inconsistency is not.
fn map_lcy(e: LcyError) -> Failure {
    match e {
        LcyError::Bug(_) => Failure::Run(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> AppResult<()> {
    let format = cli.format;
    match cli.command {
        Cmd::Enumerate { target, toric } => cmd_enumerate(&target, toric, format),
        Cmd::Count { target, toric, method } => cmd_count(&target, toric, method, format),
        Cmd::Region { l, delta } => cmd_region(l, &delta, format),
        Cmd::Polygon { target, config_index, svg } => {
            cmd_polygon(&target, config_index, svg.as_deref(), format)
        }
        Cmd::MutationGraph { target, dot, path } => {
            cmd_mutation_graph(&target, dot.as_deref(), path.as_deref(), format)
        }
        Cmd::Realize { target } => cmd_realize(&target, format),
        Cmd::Taut { seq } => cmd_taut(&seq, format),
        Cmd::Catalog { target } => cmd_catalog(&target, format),
        Cmd::Selftest => cmd_selftest(format),
    }
}

impl Target {
    fn weights(&self) -> AppResult<SympClass> {
        let space = Space::parse(&self.space).map_err(map_lcy)?;
        match space {
            Space::Quadric => {
                if self.delta.is_some() {
                    return Err(usage("the quadric takes --mu, not --delta"));
                }
                let mu_s = self.mu.as_deref().ok_or_else(|| usage("the quadric needs --mu"))?;
                let mu = parse_rat(mu_s).map_err(map_lcy)?;
                if mu < rint(1) {
                    return Err(usage("the quadric ratio --mu must be at least 1"));
                }
                Ok(SympClass::quadric(mu))
            }
            Space::Blowup(l) => {
                if self.mu.is_some() {
                    return Err(usage("--mu only applies to the quadric"));
                }
                let delta = match self.delta.as_deref() {
                    None | Some("") => Vec::new(),
                    Some(s) => parse_rat_list(s).map_err(map_lcy)?,
                };
                if delta.len() != l {
                    return Err(usage(format!("M{l} needs {l} weights, got {}", delta.len())));
                }
                SympClass::blowup(delta).map_err(map_lcy)
            }
        }
    }
}

/// Enumeration cap: library default unless LCY_MAX_L overrides it.
fn enum_opts(toric_only: bool) -> AppResult<EnumOptions> {
    let mut opts = EnumOptions { toric_only, ..EnumOptions::default() };
    if let Ok(v) = std::env::var("LCY_MAX_L") {
        let cap: usize = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("LCY_MAX_L must be an integer, got {v:?}")))?;
        if cap > lcy::lattice::HARD_MAX_L {
            return Err(usage(format!(
                "LCY_MAX_L may not exceed {}",
                lcy::lattice::HARD_MAX_L
            )));
        }
        opts.max_l = cap;
    }
    Ok(opts)
}

/// Normalized command tokens for the manifest: exact parsed inputs, not the
/// raw argv.
fn space_tokens(w: &SympClass) -> Vec<String> {
    match w {
        SympClass::Blowup { delta } => {
            let mut t = vec!["--space".into(), format!("M{}", delta.len())];
            if !delta.is_empty() {
                t.push("--delta".into());
                t.push(delta.iter().map(fmt_rat).collect::<Vec<_>>().join(","));
            }
            t
        }
        SympClass::Quadric { mu } => {
            vec!["--space".into(), "quadric".into(), "--mu".into(), fmt_rat(mu)]
        }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn digest(bytes: &[u8]) -> String {
    format!("fnv1a:{:016x}", fnv1a(bytes))
}

/// Print the result in the chosen format, manifest included. The digest
/// covers the payload without the manifest so re-runs can be compared.
fn emit(format: Format, argv: &[String], inputs: Value, payload: Map<String, Value>, tsv: String) {
    let mut argv = argv.to_vec();
    argv.push("--format".into());
    argv.push(format.name().into());
    let command = argv.join(" ");
    match format {
        Format::Json => {
            let body = serde_json::to_string(&Value::Object(payload.clone()))
                .expect("payload serializes");
            let mut full = payload;
            full.insert(
                "manifest".into(),
                json!({
                    "command": command,
                    "version": VERSION,
                    "inputs": inputs,
                    "digest": digest(body.as_bytes()),
                }),
            );
            let text =
                serde_json::to_string_pretty(&Value::Object(full)).expect("payload serializes");
            println!("{text}");
        }
        Format::Tsv => {
            print!("# lcy {command} v{VERSION} {}\n{tsv}", digest(tsv.as_bytes()));
        }
    }
}

fn config_json(c: &Config) -> Value {
    let classes: Vec<Vec<i64>> = c.classes().iter().map(|cl| cl.coeffs().to_vec()).collect();
    json!({ "classes": classes })
}

fn config_cell(c: &Config) -> String {
    c.classes()
        .iter()
        .map(|cl| {
            cl.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_enumerate(target: &Target, toric: bool, format: Format) -> AppResult<()> {
    let w = target.weights()?;
    let res = enumerate_lcy(&w, &enum_opts(toric)?).map_err(map_lcy)?;
    let configs: &[Config] = if toric { &res.toric } else { &res.all };

    let mut argv = vec!["enumerate".to_string()];
    argv.extend(space_tokens(&w));
    if toric {
        argv.push("--toric".into());
    }
    let mut payload = Map::new();
    payload.insert("w".into(), json!(w.to_string()));
    payload.insert("count".into(), json!(res.count()));
    payload.insert("toric_count".into(), json!(res.toric_count()));
    payload.insert("configs".into(), Value::Array(configs.iter().map(config_json).collect()));

    let mut tsv = String::new();
    let _ = writeln!(tsv, "count\t{}", res.count());
    let _ = writeln!(tsv, "toric_count\t{}", res.toric_count());
    for c in configs {
        let _ = writeln!(tsv, "config\t{}", config_cell(c));
    }
    emit(format, &argv, json!({"w": w.to_string()}), payload, tsv);
    Ok(())
}

/// Closed-form count at `w`, when one applies: the value and whether it is
/// exact there or only an upper bound.
fn formula_count(w: &SympClass, toric: bool) -> AppResult<Option<(i64, Exactness)>> {
    let l = match w {
        SympClass::Quadric { .. } => {
            let (n, t) = count_minimal(w).map_err(map_lcy)?;
            let v = if toric { t } else { n };
            return Ok(Some((v as i64, Exactness::Exact)));
        }
        SympClass::Blowup { delta } => delta.len(),
    };
    match l {
        0 | 1 => {
            let (n, t) = count_minimal(w).map_err(map_lcy)?;
            let v = if toric { t } else { n };
            Ok(Some((v as i64, Exactness::Exact)))
        }
        2 => {
            if toric {
                Ok(Some((count_m2_toric(w).map_err(map_lcy)? as i64, Exactness::Exact)))
            } else {
                match count_m2_general(w) {
                    Ok(n) => Ok(Some((n as i64, Exactness::Exact))),
                    Err(LcyError::Unsupported(_)) => Ok(None),
                    Err(e) => Err(map_lcy(e)),
                }
            }
        }
        3 if toric => Ok(Some((count_m3_toric(w).map_err(map_lcy)? as i64, Exactness::Exact))),
        _ => {
            let (n, ex) = if toric {
                restrictive_count_toric(w).map_err(map_lcy)?
            } else {
                restrictive_count_general(w).map_err(map_lcy)?
            };
            Ok(Some((n, ex)))
        }
    }
}

fn cmd_count(target: &Target, toric: bool, method: Method, format: Format) -> AppResult<()> {
    let w = target.weights()?;
    let formula = match method {
        Method::Enumerate => None,
        _ => formula_count(&w, toric)?,
    };
    if method == Method::Formula && formula.is_none() {
        return Err(usage(format!("no closed formula for the full count applies at {w}")));
    }
    let enumerated = match method {
        Method::Formula => None,
        _ => {
            let res = enumerate_lcy(&w, &enum_opts(false)?).map_err(map_lcy)?;
            Some(if toric { res.toric_count() } else { res.count() })
        }
    };
    let consistent = match (&formula, &enumerated) {
        (Some((f, ex)), Some(e)) => Some(match ex {
            Exactness::Exact => *f == *e as i64,
            Exactness::UpperBound => *f >= *e as i64,
        }),
        _ => None,
    };

    let mut argv = vec!["count".to_string()];
    argv.extend(space_tokens(&w));
    if toric {
        argv.push("--toric".into());
    }
    argv.push("--method".into());
    argv.push(method.name().into());

    let mut payload = Map::new();
    payload.insert("w".into(), json!(w.to_string()));
    payload.insert("kind".into(), json!(if toric { "toric" } else { "general" }));
    payload.insert("method".into(), json!(method.name()));
    payload.insert("formula".into(), formula.map_or(Value::Null, |(f, _)| json!(f)));
    payload.insert(
        "exactness".into(),
        formula.map_or(Value::Null, |(_, ex)| match ex {
            Exactness::Exact => json!("exact"),
            Exactness::UpperBound => json!("upper-bound"),
        }),
    );
    payload.insert("enumerated".into(), enumerated.map_or(Value::Null, |e| json!(e)));
    payload.insert("consistent".into(), consistent.map_or(Value::Null, |c| json!(c)));

    let tsv = match method {
        Method::Formula => format!("{}\n", formula.expect("checked above").0),
        Method::Enumerate => format!("{}\n", enumerated.expect("enumerated")),
        Method::Both => {
            let f = formula.map_or("-".to_string(), |(f, _)| f.to_string());
            format!("{f} / {}\n", enumerated.expect("enumerated"))
        }
    };
    emit(format, &argv, json!({"w": w.to_string()}), payload, tsv);

    if consistent == Some(false) {
        let (f, ex) = formula.expect("present when compared");
        let e = enumerated.expect("present when compared");
        let rel = match ex {
            Exactness::Exact => "disagrees with",
            Exactness::UpperBound => "fails to bound",
        };
        return Err(run_fail(format!("formula value {f} {rel} the enumerated count {e} at {w}")));
    }
    Ok(())
}

fn cmd_region(l: usize, delta: &str, format: Format) -> AppResult<()> {
    let weights = parse_rat_list(delta).map_err(map_lcy)?;
    if weights.len() != l {
        return Err(usage(format!("--l {l} needs {l} weights, got {}", weights.len())));
    }
    let w = SympClass::blowup(weights).map_err(map_lcy)?;
    let member = toric_region_member(&w).map_err(map_lcy)?;

    let delta_norm: Vec<String> = match &w {
        SympClass::Blowup { delta } => delta.iter().map(fmt_rat).collect(),
        SympClass::Quadric { .. } => unreachable!("constructed as a blow-up"),
    };
    let argv = vec![
        "region".to_string(),
        "--l".into(),
        l.to_string(),
        "--delta".into(),
        delta_norm.join(","),
    ];
    let mut payload = Map::new();
    payload.insert("l".into(), json!(l));
    payload.insert("delta".into(), json!(delta_norm));
    payload.insert("member".into(), json!(member));
    let tsv = format!("member\t{member}\n");
    emit(format, &argv, json!({"l": l, "delta": delta_norm}), payload, tsv);
    Ok(())
}

fn cmd_polygon(
    target: &Target,
    config_index: usize,
    svg_path: Option<&std::path::Path>,
    format: Format,
) -> AppResult<()> {
    let w = target.weights()?;
    let res = enumerate_lcy(&w, &enum_opts(false)?).map_err(map_lcy)?;
    let total = res.toric.len();
    let c = res.toric.get(config_index).ok_or_else(|| {
        usage(format!("--config-index {config_index} out of range, {total} toric configurations at {w}"))
    })?;
    let p = moment_polygon(c, &w).map_err(map_lcy)?;
    let bd = p.boundary_data();

    let svg_digest = match svg_path {
        Some(path) => {
            let drawing = svg::polygon_svg(&p);
            std::fs::write(path, &drawing)
                .map_err(|e| run_fail(format!("cannot write {}: {e}", path.display())))?;
            Some(digest(drawing.as_bytes()))
        }
        None => None,
    };

    let mut argv = vec!["polygon".to_string()];
    argv.extend(space_tokens(&w));
    argv.push("--config-index".into());
    argv.push(config_index.to_string());
    if let Some(path) = svg_path {
        argv.push("--svg".into());
        argv.push(path.display().to_string());
    }

    let vertices: Vec<Vec<String>> =
        p.vertices().iter().map(|(x, y)| vec![fmt_rat(x), fmt_rat(y)]).collect();
    let lengths: Vec<String> = bd.lengths.iter().map(fmt_rat).collect();
    let mut payload = Map::new();
    payload.insert("w".into(), json!(w.to_string()));
    payload.insert("config_index".into(), json!(config_index));
    payload.insert("toric_total".into(), json!(total));
    payload.insert("vertices".into(), json!(vertices));
    payload.insert("s".into(), json!(bd.self_ints));
    payload.insert("a".into(), json!(lengths));
    payload.insert("area".into(), json!(fmt_rat(&p.area())));
    payload.insert("svg_digest".into(), svg_digest.clone().map_or(Value::Null, Value::String));

    let mut tsv = String::new();
    let _ = writeln!(tsv, "toric_total\t{total}");
    for v in &vertices {
        let _ = writeln!(tsv, "vertex\t{}\t{}", v[0], v[1]);
    }
    for (s, a) in bd.self_ints.iter().zip(&lengths) {
        let _ = writeln!(tsv, "edge\t{s}\t{a}");
    }
    let _ = writeln!(tsv, "area\t{}", fmt_rat(&p.area()));
    if let Some(d) = &svg_digest {
        let _ = writeln!(tsv, "svg\t{d}");
    }
    emit(
        format,
        &argv,
        json!({"w": w.to_string(), "config_index": config_index}),
        payload,
        tsv,
    );
    Ok(())
}

fn cmd_mutation_graph(
    target: &Target,
    dot_path: Option<&std::path::Path>,
    path_query: Option<&[usize]>,
    format: Format,
) -> AppResult<()> {
    let w = target.weights()?;
    let g = mutation_graph(&w, &enum_opts(false)?).map_err(map_lcy)?;

    let dot_digest = match dot_path {
        Some(path) => {
            let text = graph_dot(&g);
            std::fs::write(path, &text)
                .map_err(|e| run_fail(format!("cannot write {}: {e}", path.display())))?;
            Some(digest(text.as_bytes()))
        }
        None => None,
    };
    let hops = match path_query {
        Some(&[from, to]) => Some(g.mutation_path(from, to).map_err(map_lcy)?),
        Some(_) => return Err(usage("--path takes two node indices")),
        None => None,
    };

    let mut argv = vec!["mutation-graph".to_string()];
    argv.extend(space_tokens(&w));
    if let Some(path) = dot_path {
        argv.push("--dot".into());
        argv.push(path.display().to_string());
    }
    if let Some(&[from, to]) = path_query {
        argv.push("--path".into());
        argv.push(from.to_string());
        argv.push(to.to_string());
    }

    let mut payload = Map::new();
    payload.insert("w".into(), json!(w.to_string()));
    payload.insert("nodes".into(), json!(g.nodes.len()));
    payload.insert("edges".into(), json!(g.edges.len()));
    payload.insert("connected".into(), json!(g.is_connected()));
    payload.insert("out_of_set".into(), json!(g.out_of_set.len()));
    payload.insert("rejected_vertex_hits".into(), json!(g.rejected_vertex_hits));
    payload.insert("rejected_non_delzant".into(), json!(g.rejected_non_delzant));
    if let Some(hops) = &hops {
        payload.insert(
            "path".into(),
            hops.as_ref().map_or(Value::Null, |hs| {
                Value::Array(
                    hs.iter()
                        .map(|e| json!({"from": e.from, "vertex": e.vertex, "to": e.to}))
                        .collect(),
                )
            }),
        );
    }
    if let Some(d) = &dot_digest {
        payload.insert("dot_digest".into(), json!(d));
    }

    let mut tsv = String::new();
    let _ = writeln!(tsv, "nodes\t{}", g.nodes.len());
    let _ = writeln!(tsv, "edges\t{}", g.edges.len());
    let _ = writeln!(tsv, "connected\t{}", g.is_connected());
    let _ = writeln!(tsv, "out_of_set\t{}", g.out_of_set.len());
    match &hops {
        Some(Some(hs)) => {
            for e in hs {
                let _ = writeln!(tsv, "hop\t{}\t{}\t{}", e.from, e.vertex, e.to);
            }
        }
        Some(None) => {
            let _ = writeln!(tsv, "path\tunreachable");
        }
        None => {}
    }
    if let Some(d) = &dot_digest {
        let _ = writeln!(tsv, "dot\t{d}");
    }
    emit(format, &argv, json!({"w": w.to_string()}), payload, tsv);
    Ok(())
}

fn graph_dot(g: &lcy::mutation::MutationGraph) -> String {
    let mut out = String::from("digraph mutation {\n  rankdir=LR;\n  node [shape=box];\n");
    for (i, c) in g.nodes.iter().enumerate() {
        let s: Vec<String> = c.self_intersection_seq().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  n{i} [label=\"{i}: s=[{}]\"];", s.join(","));
    }
    for e in &g.edges {
        let _ = writeln!(out, "  n{} -> n{} [label=\"v{}\"];", e.from, e.to, e.vertex);
    }
    out.push_str("}\n");
    out
}

fn cmd_realize(target: &Target, format: Format) -> AppResult<()> {
    let w = target.weights()?;
    let rep = realization_report(&w, &enum_opts(false)?).map_err(map_lcy)?;

    let mut argv = vec!["realize".to_string()];
    argv.extend(space_tokens(&w));
    let mut payload = Map::new();
    payload.insert("w".into(), json!(w.to_string()));
    payload.insert("covered".into(), json!(rep.covered.len()));
    payload.insert("uncovered".into(), json!(rep.uncovered.len()));
    payload.insert(
        "uncovered_configs".into(),
        Value::Array(rep.uncovered.iter().map(config_json).collect()),
    );

    let mut tsv = String::new();
    let _ = writeln!(tsv, "covered\t{}", rep.covered.len());
    let _ = writeln!(tsv, "uncovered\t{}", rep.uncovered.len());
    for c in &rep.uncovered {
        let _ = writeln!(tsv, "uncovered_config\t{}", config_cell(c));
    }
    emit(format, &argv, json!({"w": w.to_string()}), payload, tsv);
    Ok(())
}

fn cmd_taut(seq: &str, format: Format) -> AppResult<()> {
    let parsed: Result<Vec<i64>, _> =
        seq.split(',').map(|t| t.trim().parse::<i64>()).collect();
    let s = parsed.map_err(|_| usage(format!("--seq must be comma-separated integers, got {seq:?}")))?;
    if s.is_empty() {
        return Err(usage("--seq must not be empty"));
    }
    let verdict = def_taut(&s);
    let (name, summary, preimages) = match &verdict {
        TautVerdict::Taut => ("taut", "taut".to_string(), None),
        TautVerdict::Undecided => ("undecided", "undecided".to_string(), None),
        TautVerdict::NotTaut(pre) => (
            "not-taut",
            format!("not def-taut; {} preimages", pre.len()),
            Some(pre.clone()),
        ),
    };

    let argv = vec![
        "taut".to_string(),
        "--seq".into(),
        s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
    ];
    let mut payload = Map::new();
    payload.insert("seq".into(), json!(s));
    payload.insert("verdict".into(), json!(name));
    payload.insert("summary".into(), json!(summary));
    payload.insert(
        "preimages".into(),
        preimages.as_ref().map_or(Value::Null, |pre| {
            Value::Array(pre.iter().map(|(n, a)| json!({"n": n, "a": a})).collect())
        }),
    );

    let mut tsv = format!("{summary}\n");
    if let Some(pre) = &preimages {
        for (n, a) in pre {
            let n_s: Vec<String> = n.iter().map(|x| x.to_string()).collect();
            let a_s: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(tsv, "preimage\t{}\t{}", n_s.join(","), a_s.join(","));
        }
    }
    emit(format, &argv, json!({"seq": s}), payload, tsv);
    Ok(())
}

fn cmd_catalog(target: &Target, format: Format) -> AppResult<()> {
    let w = target.weights()?;
    let classes = match &w {
        SympClass::Quadric { .. } => lcy::catalog::quadric_catalog(&w).map_err(map_lcy)?,
        SympClass::Blowup { .. } => lcy::catalog::catalog_members(&w).map_err(map_lcy)?,
    };

    let mut argv = vec!["catalog".to_string()];
    argv.extend(space_tokens(&w));
    let mut rows = Vec::new();
    let mut tsv = String::new();
    for c in &classes {
        let area = w.area(c).map_err(map_lcy)?;
        let coeffs: Vec<String> = c.coeffs().iter().map(|x| x.to_string()).collect();
        rows.push(json!({
            "coeffs": c.coeffs().to_vec(),
            "square": c.square(),
            "genus": c.genus(),
            "area": fmt_rat(&area),
        }));
        let _ = writeln!(
            tsv,
            "{}\t{}\t{}\t{}",
            coeffs.join(","),
            c.square(),
            c.genus(),
            fmt_rat(&area)
        );
    }
    let mut payload = Map::new();
    payload.insert("w".into(), json!(w.to_string()));
    payload.insert("classes".into(), Value::Array(rows));
    emit(format, &argv, json!({"w": w.to_string()}), payload, tsv);
    Ok(())
}

fn cmd_selftest(format: Format) -> AppResult<()> {
    let report = lcy::selftest::run();
    let argv = vec!["selftest".to_string()];
    let mut payload = Map::new();
    payload.insert("failures".into(), json!(report.failures));
    payload.insert("lines".into(), json!(report.lines));
    let mut tsv = String::new();
    for line in &report.lines {
        let _ = writeln!(tsv, "{line}");
    }
    emit(format, &argv, json!({}), payload, tsv);
    if report.failures > 0 {
        return Err(run_fail(format!("{} oracle checks failed", report.failures)));
    }
    Ok(())
}
