//! `run`, `check` and `convert`.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use revcgd::document::{
    canonical_document, parse_document, print_document, print_graph, GraphDocument,
};
use revcgd::dynamics::{CheckReport, DynamicsError};
use revcgd::hm::{
    event_counts, hm_step_dir, hm_step_matter, vertex_successor, AlgebraNamer, CollisionRule,
    Direction, FreshIndices, HmError, StepStats, SuccessorMap,
};
use revcgd::maps::{alpha, site_of_name};
use revcgd::{
    anonymize, canonicalize, AnonymousGraph, MatterGraph, MatterWord, NameTerm, PortGraph, Site,
};

use crate::rules::{parse_rules, Rules};
use crate::suites::{run_suite, SuiteConfig, SuiteError};

/// Exit status of a command.
#[derive(Debug)]
pub enum Failure {
    /// A checked property does not hold.
    Property,
    /// The input could not be read or parsed.
    Input(String),
    /// The dynamics could not be applied.
    Dynamics(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Property => 1,
            Failure::Input(_) => 2,
            Failure::Dynamics(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Property => write!(f, "property check failed"),
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Dynamics(m) => write!(f, "dynamics error: {m}"),
        }
    }
}

fn input<E: fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn dynamics<E: fmt::Display>(e: E) -> Failure {
    Failure::Dynamics(e.to_string())
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        dynamics(e)
    }
}

impl From<HmError> for Failure {
    fn from(e: HmError) -> Self {
        dynamics(e)
    }
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Dynamics(e) => dynamics(e),
            other => input(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormalismArg {
    Anonymous,
    Invisible,
    Named,
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(input),
    }
}

fn read_rules(path: Option<&Path>) -> Result<Rules, Failure> {
    match path {
        Some(p) => parse_rules(&read_text(p)?).map_err(input),
        None => Ok(Rules::default()),
    }
}

fn read_document(path: &Path) -> Result<GraphDocument, Failure> {
    parse_document(&read_text(path)?).map_err(input)
}

fn read_named(doc: &GraphDocument) -> Result<PortGraph<NameTerm>, Failure> {
    if !doc.graph.is_well_named() {
        return Err(input("vertex names are not well-named"));
    }
    Ok(doc.graph.clone())
}

fn is_materialized(doc: &GraphDocument) -> bool {
    doc.graph.labelled_vertices().any(|(_, l)| l.is_matter())
}

/// An invisible-matter graph from a plain document (matter attached at
/// `depth`) or from a materialized one (ports `m l r` and matter vertices).
pub fn read_matter(doc: &GraphDocument, depth: usize) -> Result<MatterGraph<NameTerm>, Failure> {
    if !is_materialized(doc) {
        let g = read_named(doc)?;
        let w = doc.pointer_matter.as_ref().map(|w| w.0.clone());
        let pointer = Site {
            vertex: doc.origin(),
            matter: w,
        };
        return MatterGraph::new(g, pointer, depth).map_err(input);
    }
    let g = &doc.graph;
    let visible: std::collections::BTreeSet<NameTerm> = g
        .labelled_vertices()
        .filter(|(_, l)| !l.is_matter())
        .map(|(v, _)| v.clone())
        .collect();
    let full = g
        .induced_subgraph(&visible)
        .map_err(input)?
        .into_graph()
        .map_err(input)?;
    let (ports, vs, es) = full.decompose();
    let k = ports
        .len()
        .checked_sub(3)
        .ok_or_else(|| input("missing m, l, r ports"))?;
    let names: Vec<&str> = ports.names()[..k].iter().map(String::as_str).collect();
    let plain = revcgd::PortSet::new(names.iter().copied()).map_err(input)?;
    let vg = PortGraph::build(
        plain,
        vs,
        es.into_iter()
            .filter(|(x, y, _)| x.1.index() < k && y.1.index() < k),
    )
    .map_err(input)?;
    let mut depth = 0;
    for v in g.vertices().filter(|v| !visible.contains(v)) {
        let site = site_of_name(&vg, v).map_err(input)?;
        depth = depth.max(site.matter_depth().unwrap_or(0));
    }
    let pointer = site_of_name(&vg, &doc.origin()).map_err(input)?;
    let mg = MatterGraph::new(vg, pointer, depth).map_err(input)?;
    let rebuilt = materialized_document(&mg)?;
    if parse_document(&rebuilt).map_err(input)?.graph != doc.graph {
        return Err(input(
            "matter trees are not complete binary trees with η names",
        ));
    }
    Ok(mg)
}

/// The visible graph and pointer, with `pointer v at w;` for matter pointers.
pub fn matter_document(mg: &MatterGraph<NameTerm>) -> String {
    print_document(&GraphDocument {
        graph: mg.visible().clone(),
        pointer: Some(mg.pointer().vertex.clone()),
        pointer_matter: mg.pointer().matter.clone().map(MatterWord),
    })
}

/// The materialized graph over ports `π m l r`, matter nodes named by η.
pub fn materialized_document(mg: &MatterGraph<NameTerm>) -> Result<String, Failure> {
    let m = mg.materialize().map_err(input)?;
    let mut text = print_graph(&m, |s: &Site<NameTerm>| s.name().to_string());
    text.push_str(&format!("pointer {};\n", mg.pointer().name()));
    Ok(text)
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Graph document to evolve.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "named")]
    pub formalism: FormalismArg,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    /// Apply the inverse step instead.
    #[arg(long)]
    pub inverse: bool,
    #[arg(long, default_value_t = 4)]
    pub matter_depth: usize,
    /// CSV file for per-step statistics.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Rules file (successor and collision variant).
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Output file; standard output if absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn stats_row<N: Ord + Clone + fmt::Debug>(
    step: usize,
    g: &PortGraph<N>,
    counts: (usize, usize),
) -> StepStats {
    StepStats {
        step,
        vertices: g.vertex_count(),
        particles: g.particle_count(),
        splits: counts.0,
        merges: counts.1,
    }
}

fn write_stats(path: &Path, rows: &[StepStats]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_path(path).map_err(input)?;
    for r in rows {
        w.serialize(r).map_err(input)?;
    }
    w.flush().map_err(input)
}

fn step_setup(
    rules: &Rules,
    g: &PortGraph<impl Ord + Clone + fmt::Debug>,
) -> Result<(SuccessorMap, CollisionRule), Failure> {
    let s = match &rules.successor {
        Some(pairs) => {
            let pairs: Vec<(&str, &str)> = pairs
                .iter()
                .map(|(x, y)| (x.as_str(), y.as_str()))
                .collect();
            SuccessorMap::from_pairs(g.ports(), &pairs).map_err(input)?
        }
        None => SuccessorMap::standard(g.ports()),
    };
    let rule = CollisionRule::standard(g.ports())
        .map_err(input)?
        .with_mode(rules.mode);
    Ok((s, rule))
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let doc = read_document(&args.input)?;
    let rules = read_rules(args.rules.as_deref())?;
    let dir = if args.inverse {
        Direction::Backward
    } else {
        Direction::Forward
    };
    let mut rows = Vec::with_capacity(args.steps + 1);
    let text = match args.formalism {
        FormalismArg::Named => {
            let mut g = read_named(&doc)?;
            let (s, rule) = step_setup(&rules, &g)?;
            let mut pointer = doc.pointer.clone();
            rows.push(stats_row(0, &g, (0, 0)));
            for step in 1..=args.steps {
                let (h, events) = hm_step_dir(&g, &s, &rule, &mut AlgebraNamer, dir)?;
                let moved = vertex_successor(&events);
                pointer = pointer.map(|p| moved.get(&p).cloned().unwrap_or(p));
                rows.push(stats_row(step, &h, event_counts(&events)));
                g = h;
            }
            print_document(&GraphDocument {
                graph: g,
                pointer,
                pointer_matter: None,
            })
        }
        FormalismArg::Anonymous => {
            let x = canonicalize(&doc.graph, &doc.origin()).map_err(input)?;
            let mut g = x.graph().clone();
            let (s, rule) = step_setup(&rules, &g)?;
            let mut pointer = 0usize;
            rows.push(stats_row(0, &g, (0, 0)));
            for step in 1..=args.steps {
                let mut namer = FreshIndices::for_graph(&g);
                let (h, events) = hm_step_dir(&g, &s, &rule, &mut namer, dir)?;
                pointer = vertex_successor(&events)
                    .get(&pointer)
                    .copied()
                    .unwrap_or(pointer);
                rows.push(stats_row(step, &h, event_counts(&events)));
                g = h;
            }
            let a: AnonymousGraph = revcgd::anonymize_graph(&g).map_err(dynamics)?;
            canonical_document(a.representative())
        }
        FormalismArg::Invisible => {
            let mut mg = read_matter(&doc, args.matter_depth)?;
            let (s, rule) = step_setup(&rules, mg.visible())?;
            rows.push(stats_row(0, mg.visible(), (0, 0)));
            for step in 1..=args.steps {
                let (next, events, _) =
                    hm_step_matter(&mg, &s, &rule, &mut AlgebraNamer, rules.relocation, dir)?;
                rows.push(stats_row(step, next.visible(), event_counts(&events)));
                mg = next;
            }
            matter_document(&mg)
        }
    };
    if let Some(path) = &args.stats {
        write_stats(path, &rows)?;
    }
    write_output(args.output.as_deref(), &text, out)
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    /// Suite name, or `all`.
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample size scale; the continuity search limit is twice this.
    #[arg(long, default_value_t = 6)]
    pub max_size: usize,
    #[arg(long, default_value_t = 3)]
    pub matter_depth: usize,
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Print one JSON object per report instead of text.
    #[arg(long)]
    pub json: bool,
}

pub fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = SuiteConfig {
        seed: args.seed,
        max_size: args.max_size,
        matter_depth: args.matter_depth,
        rules: read_rules(args.rules.as_deref())?,
    };
    let names: Vec<&str> = if args.suite == "all" {
        crate::suites::SUITES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for name in names {
        reports.extend(run_suite(name, &cfg)?);
    }
    for r in &reports {
        let line = if args.json { r.to_json() } else { r.to_text() };
        writeln!(out, "{line}").map_err(input)?;
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

#[derive(Args, Debug, Clone)]
pub struct ConvertArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub from: FormalismArg,
    #[arg(long, value_enum)]
    pub to: FormalismArg,
    #[arg(long, default_value_t = 4)]
    pub matter_depth: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn anonymous_to_named(a: &AnonymousGraph) -> Result<GraphDocument, Failure> {
    let x = a.representative();
    let g = x
        .graph()
        .map_names(|i| NameTerm::atom(&revcgd::document::canonical_name(*i)))
        .map_err(dynamics)?;
    Ok(GraphDocument::pointed(
        g,
        NameTerm::atom(&revcgd::document::canonical_name(0)),
    ))
}

pub fn convert_text(
    text: &str,
    from: FormalismArg,
    to: FormalismArg,
    depth: usize,
) -> Result<String, Failure> {
    use FormalismArg::*;
    let doc = parse_document(text).map_err(input)?;
    let anon = |doc: &GraphDocument| -> Result<AnonymousGraph, Failure> {
        let x = canonicalize(&doc.graph, &doc.origin()).map_err(input)?;
        anonymize(&x).map_err(input)
    };
    Ok(match (from, to) {
        (Anonymous, Anonymous) | (Named, Anonymous) => {
            canonical_document(anon(&doc)?.representative())
        }
        (Anonymous, Named) => print_document(&anonymous_to_named(&anon(&doc)?)?),
        (Anonymous, Invisible) => {
            let named = anonymous_to_named(&anon(&doc)?)?;
            materialized_document(&read_matter(&named, depth)?)?
        }
        (Named, Named) => {
            read_named(&doc)?;
            print_document(&doc)
        }
        (Named, Invisible) | (Invisible, Invisible) => {
            materialized_document(&read_matter(&doc, depth)?)?
        }
        (Invisible, Anonymous) => {
            canonical_document(alpha(&read_matter(&doc, depth)?)?.representative())
        }
        (Invisible, Named) => matter_document(&read_matter(&doc, depth)?),
    })
}

pub fn cmd_convert(args: &ConvertArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = convert_text(
        &read_text(&args.input)?,
        args.from,
        args.to,
        args.matter_depth,
    )?;
    write_output(args.output.as_deref(), &text, out)
}
