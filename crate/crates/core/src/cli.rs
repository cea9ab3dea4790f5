//! Command-line front end. [`run`] takes the full argument list and writes
//! results to `out` and diagnostics to `err`; it returns the exit code
//! (0 success, 1 input error, 2 usage error).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::colorgraph::ColorGraph;
use crate::digraph::{line_digraph, ArcColoring, DigraphJson, OrientedDigraph, VertexColoring};
use crate::esp_ocn::{chi_o_esp, color_esp_qr7, qr7};
use crate::expr::{
    evaluate, fixture, fixture_names, parse, parse_fixture_file, recognize_esp, Flavor, Generator, Node,
    Recognition, SpExpression, FIXTURES,
};
use crate::msp_oci::chi_o_index_msp;
use crate::oracle::{chi_o_exact, chi_o_index_exact, emit_oci_decision, emit_ocn_decision, EncodingFormat};
use crate::DpOptions;

#[derive(Parser, Debug)]
#[command(name = "spcolor", version, about = "Oriented colorings of series-parallel digraphs")]
struct Cli {
    /// Print the bundled fixture names and exit.
    #[arg(long, global = true)]
    list_fixtures: bool,
    /// Seed for the random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone, Default)]
struct Input {
    /// esp (arc leaves) or msp (vertex leaves); inferred from `->` if omitted.
    #[arg(long)]
    flavor: Option<Flavor>,
    /// Expression text.
    #[arg(long, conflicts_with_all = ["file", "fixture", "generator"])]
    expr: Option<String>,
    /// Expression file (optionally with a `# flavor:` header) or JSON digraph.
    #[arg(long, conflicts_with_all = ["fixture", "generator"])]
    file: Option<String>,
    /// Bundled fixture X1..X6.
    #[arg(long, conflicts_with = "generator")]
    fixture: Option<String>,
    /// Generated family, e.g. `esp_path:10`, `msp_y:3`, `random_esp:8`.
    #[arg(long)]
    generator: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Out {
    #[default]
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    #[default]
    Off,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Problem {
    #[default]
    Ocn,
    Oci,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Out::Text)]
    out: Out,
    /// Also print a witness coloring.
    #[arg(long)]
    witness: bool,
    /// Dominance pruning of DP states; used by chi-o-index, where it is on
    /// unless switched off.
    #[arg(long, value_enum)]
    prune: Option<Switch>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print the canonical expression.
    Parse(Common),
    /// Evaluate an expression to its digraph.
    Eval(Common),
    /// χ_o of an esp expression by dynamic programming.
    ChiO(Common),
    /// χ'_o of an msp expression by dynamic programming.
    ChiOIndex(Common),
    /// χ_o by exhaustive search (at most 30 vertices).
    ChiOExact(Common),
    /// χ'_o by exhaustive search (at most 30 arcs).
    ChiOIndexExact(Common),
    /// 7-coloring of an esp expression into QR7.
    ColorQr7(Common),
    /// Decide whether a digraph is esp and print an expression for it.
    RecognizeEsp(Common),
    /// DIMACS CNF of the r-coloring decision problem.
    EmitCnf(Emit),
    /// LP-format binary program of the r-coloring decision problem.
    EmitLp(Emit),
    /// Time the dynamic program on growing instances.
    Bench(Bench),
    /// List the bundled fixtures.
    Fixtures,
}

#[derive(Args, Debug)]
struct Emit {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    r: usize,
    #[arg(long, value_enum, default_value_t = Problem::Ocn)]
    problem: Problem,
}

#[derive(Args, Debug)]
struct Bench {
    /// esp_path or msp_chain.
    #[arg(long, default_value = "esp_path")]
    generator: String,
    /// Comma-separated ascending sizes.
    #[arg(long, default_value = "")]
    sizes: String,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    prune: Switch,
}

enum Failure {
    Input(String),
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = if cli.list_fixtures {
        Ok(fixture_names().map(|n| format!("{n}\n")).collect())
    } else {
        match cli.command {
            Some(cmd) => dispatch(cmd, cli.seed),
            None => Err(Failure::Usage("no subcommand given (see --help)".into())),
        }
    };
    match result {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            2
        }
    }
}

enum Source {
    Expr(SpExpression),
    Graph(OrientedDigraph),
}

impl Input {
    fn load(&self, seed: u64) -> Result<Source, Failure> {
        let checked = |x: SpExpression| match self.flavor {
            Some(f) if f != x.flavor() => {
                Err(Failure::Input(format!("expression is {} but --flavor {f} was given", x.flavor())))
            }
            _ => Ok(Source::Expr(x)),
        };
        if let Some(text) = &self.expr {
            let flavor = self.flavor.unwrap_or(if text.contains("->") { Flavor::Esp } else { Flavor::Msp });
            return Ok(Source::Expr(parse(text, flavor)?));
        }
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            if text.trim_start().starts_with('{') {
                let doc: DigraphJson = serde_json::from_str(&text)?;
                return Ok(Source::Graph(OrientedDigraph::from_json(&doc)?));
            }
            let has_header = text.lines().any(|l| l.trim_start().starts_with("# flavor:"));
            return match (has_header, self.flavor) {
                (true, _) => checked(parse_fixture_file(&text)?),
                (false, Some(f)) => Ok(Source::Expr(parse(&text, f)?)),
                (false, None) => Err(Failure::Usage(format!("{path} has no flavor header; pass --flavor"))),
            };
        }
        if let Some(name) = &self.fixture {
            return checked(fixture(name)?);
        }
        if let Some(spec) = &self.generator {
            let g: Generator = spec.parse()?;
            return checked(g.build_seeded(seed)?);
        }
        Err(Failure::Usage("give one of --expr, --file, --fixture, --generator".into()))
    }

    fn expression(&self, seed: u64) -> Result<SpExpression, Failure> {
        match self.load(seed)? {
            Source::Expr(x) => Ok(x),
            Source::Graph(_) => Err(Failure::Usage("this command needs an expression, not a digraph".into())),
        }
    }

    fn graph(&self, seed: u64) -> Result<OrientedDigraph, Failure> {
        match self.load(seed)? {
            Source::Expr(x) => Ok(evaluate(&x)?.graph),
            Source::Graph(g) => Ok(g),
        }
    }
}

fn dispatch(cmd: Command, seed: u64) -> Outcome {
    match cmd {
        Command::Parse(c) => cmd_parse(&c, seed),
        Command::Eval(c) => {
            let g = c.input.graph(seed)?;
            Ok(match c.out {
                Out::Text => graph_text(&g),
                Out::Json => pretty(&g.to_json())?,
                Out::Dot => g.to_dot(),
            })
        }
        Command::ChiO(c) => {
            let x = c.input.expression(seed)?;
            if x.flavor() != Flavor::Esp {
                return Err(Failure::Input("chi-o needs an esp expression; use chi-o-exact for msp".into()));
            }
            let witness = c.witness || c.out == Out::Dot;
            let sol = chi_o_esp(&x, DpOptions { prune: c.prune == Some(Switch::On), witness })?;
            let g = if witness { Some(evaluate(&x)?.graph) } else { None };
            vertex_result(c.out, sol.value, g.as_ref().zip(sol.witness.as_ref()))
        }
        Command::ChiOIndex(c) => {
            let x = c.input.expression(seed)?;
            if x.flavor() != Flavor::Msp {
                return Err(Failure::Input("chi-o-index needs an msp expression; use chi-o-index-exact for esp".into()));
            }
            let witness = c.witness || c.out == Out::Dot;
            let sol = chi_o_index_msp(&x, DpOptions { prune: c.prune != Some(Switch::Off), witness })?;
            let g = if witness { Some(evaluate(&x)?.graph) } else { None };
            arc_result(c.out, sol.value, g.as_ref().zip(sol.witness.as_ref()))
        }
        Command::ChiOExact(c) => {
            let g = c.input.graph(seed)?;
            let (value, w) = chi_o_exact(&g)?;
            let show = c.witness || c.out == Out::Dot;
            vertex_result(c.out, value, show.then_some((&g, &w)))
        }
        Command::ChiOIndexExact(c) => {
            let g = c.input.graph(seed)?;
            let (value, w) = chi_o_index_exact(&g)?;
            let show = c.witness || c.out == Out::Dot;
            arc_result(c.out, value, show.then_some((&g, &w)))
        }
        Command::ColorQr7(c) => {
            let x = c.input.expression(seed)?;
            let w = color_esp_qr7(&x)?;
            let g = evaluate(&x)?.graph;
            Ok(match c.out {
                Out::Text => coloring_lines(g.names().iter().map(String::as_str), &w.colors),
                Out::Json => pretty(&w.to_json(&g))?,
                Out::Dot => qr7().to_dot(),
            })
        }
        Command::RecognizeEsp(c) => {
            let g = c.input.graph(seed)?;
            let rec = recognize_esp(&g);
            Ok(match (c.out, rec) {
                (Out::Json, Recognition::Esp(x)) => {
                    pretty(&serde_json::json!({ "esp": true, "expression": x.to_string() }))?
                }
                (Out::Json, Recognition::NotEsp) => pretty(&serde_json::json!({ "esp": false }))?,
                (Out::Dot, Recognition::Esp(x)) => tree_dot(&x),
                (_, Recognition::Esp(x)) => format!("{x}\n"),
                (_, Recognition::NotEsp) => "not an esp-digraph\n".to_string(),
            })
        }
        Command::EmitCnf(e) => emit(&e, EncodingFormat::Cnf, seed),
        Command::EmitLp(e) => emit(&e, EncodingFormat::Lp, seed),
        Command::Bench(b) => bench(&b),
        Command::Fixtures => Ok(FIXTURES
            .iter()
            .map(|(name, flavor, _)| {
                let x = fixture(name).expect("bundled fixture parses");
                let g = evaluate(&x).expect("bundled fixture evaluates").graph;
                format!("{name}\t{flavor}\t{} vertices\t{} arcs\n", g.vertex_count(), g.arc_count())
            })
            .collect()),
    }
}

fn cmd_parse(c: &Common, seed: u64) -> Outcome {
    let x = c.input.expression(seed)?;
    Ok(match c.out {
        Out::Text => format!("{x}\n"),
        Out::Json => pretty(&serde_json::json!({
            "flavor": x.flavor(),
            "expression": x.to_string(),
            "leaves": x.leaf_count(),
        }))?,
        Out::Dot => tree_dot(&x),
    })
}

fn emit(e: &Emit, format: EncodingFormat, seed: u64) -> Outcome {
    let g = e.input.graph(seed)?;
    if e.r == 0 {
        return Err(Failure::Usage("--r must be at least 1".into()));
    }
    Ok(match e.problem {
        Problem::Ocn => emit_ocn_decision(&g, e.r, format),
        Problem::Oci => emit_oci_decision(&g, e.r, format)?,
    })
}

fn bench(b: &Bench) -> Outcome {
    let sizes: Vec<usize> = b
        .sizes
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Usage(format!("bad size `{s}`"))))
        .collect::<Result<_, _>>()?;
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Failure::Usage("sizes must be ascending".into()));
    }
    let opts = DpOptions { prune: b.prune == Switch::On, witness: false };
    // build the shared tournament tables outside the timed region
    crate::colorgraph::tournaments(7);
    let mut s = String::from("n\tvalue\tseconds\tratio\n");
    let mut prev: Option<f64> = None;
    for &n in &sizes {
        let (value, secs) = match b.generator.as_str() {
            "esp_path" => {
                let x = crate::expr::esp_path(n)?;
                let t = Instant::now();
                let v = chi_o_esp(&x, opts)?.value;
                (v, t.elapsed().as_secs_f64())
            }
            "msp_chain" => {
                let x = crate::expr::msp_chain(n)?;
                let t = Instant::now();
                let v = chi_o_index_msp(&x, opts)?.value;
                (v, t.elapsed().as_secs_f64())
            }
            other => return Err(Failure::Usage(format!("bench supports esp_path and msp_chain, not `{other}`"))),
        };
        let ratio = prev.map_or("-".to_string(), |p| format!("{:.2}", secs / p.max(1e-9)));
        let _ = writeln!(s, "{n}\t{value}\t{secs:.6}\t{ratio}");
        prev = Some(secs);
    }
    Ok(s)
}

fn pretty<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn graph_text(g: &OrientedDigraph) -> String {
    let mut s = format!("vertices {}\narcs {}\n", g.vertex_count(), g.arc_count());
    for &(t, h) in g.arcs() {
        let _ = writeln!(s, "{} -> {}", g.name(t), g.name(h));
    }
    s
}

fn coloring_lines<'a>(names: impl Iterator<Item = &'a str>, colors: &[u32]) -> String {
    let mut s = String::new();
    for (name, c) in names.zip(colors) {
        let _ = writeln!(s, "{name}\t{c}");
    }
    s
}

/// DOT of a color graph given by its label count and arcs.
fn image_dot(count: u32, arcs: &BTreeSet<(u32, u32)>) -> String {
    if count <= 7 {
        let mut h = ColorGraph::EMPTY;
        for c in 1..=count {
            h = h.with_label(c as u8);
        }
        for &(a, b) in arcs {
            h = h.with_arc(a as u8, b as u8);
        }
        return h.to_dot();
    }
    let mut s = String::from("digraph H {\n");
    for c in 1..=count {
        let _ = writeln!(s, "  c{c};");
    }
    for (a, b) in arcs {
        let _ = writeln!(s, "  c{a} -> c{b};");
    }
    s.push_str("}\n");
    s
}

fn vertex_result(out: Out, value: u32, w: Option<(&OrientedDigraph, &VertexColoring)>) -> Outcome {
    Ok(match (out, w) {
        (Out::Text, None) => format!("{value}\n"),
        (Out::Text, Some((g, w))) => {
            format!("{value}\n{}", coloring_lines(g.names().iter().map(String::as_str), &w.colors))
        }
        (Out::Json, w) => {
            let mut doc = serde_json::json!({ "value": value });
            if let Some((g, w)) = w {
                doc["witness"] = w.to_json(g);
            }
            pretty(&doc)?
        }
        (Out::Dot, Some((g, w))) => {
            let arcs = g.arcs().iter().map(|&(t, h)| (w.colors[t.0], w.colors[h.0])).collect();
            image_dot(w.count, &arcs)
        }
        (Out::Dot, None) => unreachable!("dot output always computes a witness"),
    })
}

fn arc_result(out: Out, value: u32, w: Option<(&OrientedDigraph, &ArcColoring)>) -> Outcome {
    Ok(match (out, w) {
        (Out::Text, None) => format!("{value}\n"),
        (Out::Text, Some((g, w))) => {
            let labels: Vec<String> =
                g.arcs().iter().enumerate().map(|(k, &(t, h))| format!("{k}:{}->{}", g.name(t), g.name(h))).collect();
            format!("{value}\n{}", coloring_lines(labels.iter().map(String::as_str), &w.colors))
        }
        (Out::Json, w) => {
            let mut doc = serde_json::json!({ "value": value });
            if let Some((_, w)) = w {
                doc["witness"] = w.to_json();
            }
            pretty(&doc)?
        }
        (Out::Dot, Some((g, w))) => {
            let ld = line_digraph(g)?;
            let arcs = ld.arcs().iter().map(|&(a, b)| (w.colors[a.0], w.colors[b.0])).collect();
            image_dot(w.count, &arcs)
        }
        (Out::Dot, None) => unreachable!("dot output always computes a witness"),
    })
}

/// DOT of the expression tree, nodes named by arena index.
fn tree_dot(x: &SpExpression) -> String {
    let mut s = String::from("digraph T {\n");
    for (i, node) in x.nodes().iter().enumerate() {
        let label = match node {
            Node::Arc { tail, head } => format!("{tail}->{head}"),
            Node::Vertex(name) => name.clone(),
            Node::Parallel(..) => "+".to_string(),
            Node::Series(..) => "*".to_string(),
        };
        let _ = writeln!(s, "  n{i} [label={}];", serde_json::Value::String(label));
    }
    for (i, node) in x.nodes().iter().enumerate() {
        if let Node::Parallel(l, r) | Node::Series(l, r) = node {
            let _ = writeln!(s, "  n{i} -> n{l};\n  n{i} -> n{r};");
        }
    }
    s.push_str("}\n");
    s
}
