//! Command-line runner. Every output carries the resolved configuration.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analytics::{
    brickwork_alpha, brickwork_beta, dalzell_bounds, delta_gap, delta_gap_asymptote, design_depth_formula,
    disconnection_bounds, leading_order_depth, BetaVariant, DalzellKind, DisconnectionShape,
};
use crate::architectures::{Boundary, EnsembleSpec, Family, SiteGraph};
use crate::connectivity::mean_connection_count;
use crate::engine::{self, EngineConfig, ErrorKind};
use crate::error::{Error, Result};
use crate::oracle;
use crate::perm_algebra::{ExperimentVector, LocalDim};

/// Inclusive integer range written `a:b`, or a single value `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.end).collect()
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range bound {t:?}"));
        let span = match s.split_once(':') {
            Some((a, b)) => Span { start: num(a)?, end: num(b)? },
            None => {
                let v = num(s)?;
                Span { start: v, end: v }
            }
        };
        if span.start > span.end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(span)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Multiplicative,
    Collisional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaName {
    Alpha,
    Beta,
    Depth,
    Leading,
    Delta,
    DeltaAsymptote,
    Dalzell,
    Disconnection,
}

#[derive(Debug, Parser)]
#[command(name = "twodesign", version, about = "Design and anticoncentration depths of random circuit architectures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    /// Graph family (linear, circle, complete, star, lollipop, bridge, hourglass, tree[:k],
    /// random_regular:d[:seed]) or architecture (brickwork, brickwork_pbc, pcg, pb, pbfe, local).
    #[arg(long)]
    pub family: Option<String>,
    /// Graph JSON file `{"n":..,"edges":[[i,j],..]}`.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    /// Site count or range `a:b`; taken from the graph file when omitted.
    #[arg(long)]
    pub n: Option<Span>,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Realizations (or samples) for sampled ensembles and connection counts.
    #[arg(long, default_value_t = 100)]
    pub realizations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; never changes results.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to json for `formula` and csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicative and collisional error per step.
    ErrorCurve {
        #[command(flatten)]
        ens: EnsembleArgs,
        #[arg(long)]
        steps: Span,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Steps needed to reach `--eps`, for each n.
    Depth {
        #[command(flatten)]
        ens: EnsembleArgs,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, value_enum, default_value = "multiplicative")]
        kind: KindArg,
        /// Track one experiment given as a bit string instead of the maximum.
        #[arg(long)]
        experiment: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Error of every experiment class per step.
    Sweep {
        #[command(flatten)]
        ens: EnsembleArgs,
        #[arg(long)]
        steps: Span,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Naive and greedy connected-block counts per gate (or layer) count.
    Connections {
        #[command(flatten)]
        ens: EnsembleArgs,
        /// Gates for graph ensembles, layers for layered ones.
        #[arg(long)]
        layers: Span,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Closed-form depth formulas.
    Formula {
        #[arg(long, value_enum)]
        name: FormulaName,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// entangled_boundaries|collision; brickwork|general|general_exact|general_relaxed; bridge|general
        #[arg(long)]
        variant: Option<String>,
        /// Disconnection probability for the general disconnection bound.
        #[arg(long)]
        p: Option<f64>,
        /// Size of the disconnected part for the general disconnection bound.
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Lower bounds on depth and gate count, for each n.
    Bounds {
        #[arg(long)]
        n: Span,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Engine against the dense oracles (n <= 3).
    OracleCheck {
        #[command(flatten)]
        ens: EnsembleArgs,
        #[arg(long)]
        steps: Span,
        #[command(flatten)]
        run: RunArgs,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unreached { .. } => 3,
        Error::OracleMismatch(_) => 4,
        Error::Numerical(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

/// Rows with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Result of one command: output tables plus an optional deferred failure.
#[derive(Debug)]
pub struct Outcome {
    pub config: Value,
    pub body: Body,
    pub failure: Option<Error>,
}

#[derive(Debug)]
pub enum Body {
    Table(Table),
    Object(Map<String, Value>),
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Serializes `outcome`, recording `format` in its configuration.
pub fn render(outcome: &Outcome, format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut config = outcome.config.clone();
    if let Value::Object(m) = &mut config {
        m.insert("format".into(), json!(format));
    }
    match format {
        Format::Json => {
            let mut top = Map::new();
            top.insert("config".into(), config);
            match &outcome.body {
                Body::Table(t) => {
                    let rows: Vec<Value> = t
                        .rows
                        .iter()
                        .map(|r| Value::Object(t.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                        .collect();
                    top.insert("rows".into(), Value::Array(rows));
                }
                Body::Object(o) => top.extend(o.clone()),
            }
            serde_json::to_writer_pretty(&mut buf, &Value::Object(top))?;
            buf.push(b'\n');
        }
        Format::Csv => {
            writeln!(buf, "# config: {}", serde_json::to_string(&config)?)?;
            let mut w = csv::Writer::from_writer(&mut buf);
            match &outcome.body {
                Body::Table(t) => {
                    w.write_record(&t.columns)?;
                    for r in &t.rows {
                        w.write_record(r.iter().map(cell))?;
                    }
                }
                Body::Object(o) => {
                    w.write_record(o.keys())?;
                    w.write_record(o.values().map(cell))?;
                }
            }
            w.flush()?;
        }
    }
    Ok(buf)
}

fn local_dim(q: u32) -> Result<LocalDim> {
    LocalDim::new(q)
}

/// Ensemble for one site count.
fn build_spec(family: Option<&str>, graph: Option<&SiteGraph>, n: usize, q: LocalDim) -> Result<EnsembleSpec> {
    if let Some(g) = graph {
        if g.n() != n {
            return Err(Error::Config(format!("--n {n} disagrees with the graph file (n = {})", g.n())));
        }
        return EnsembleSpec::graph(g.clone(), q);
    }
    let name = family.ok_or_else(|| Error::Config("one of --family or --graph is required".into()))?;
    match name {
        "brickwork" | "brickwork_obc" => EnsembleSpec::brickwork(n, Boundary::Open, q),
        "brickwork_pbc" => EnsembleSpec::brickwork(n, Boundary::Periodic, q),
        "pcg" => EnsembleSpec::pcg(n, q),
        "pb" => EnsembleSpec::pb(n, q),
        "pbfe" => EnsembleSpec::pbfe(n, q),
        "local" => EnsembleSpec::local(n, q),
        other => EnsembleSpec::family(other.parse::<Family>()?, n, q),
    }
}

struct Resolved {
    specs: Vec<EnsembleSpec>,
    config: Map<String, Value>,
}

fn resolve(command: &str, ens: &EnsembleArgs, run: &RunArgs) -> Result<Resolved> {
    let q = local_dim(ens.q)?;
    let graph = ens.graph.as_deref().map(SiteGraph::load).transpose()?;
    let span = match (ens.n, &graph) {
        (Some(s), _) => s,
        (None, Some(g)) => Span { start: g.n(), end: g.n() },
        (None, None) => return Err(Error::Config("--n is required without --graph".into())),
    };
    let specs = span.values().into_iter().map(|n| build_spec(ens.family.as_deref(), graph.as_ref(), n, q)).collect::<Result<Vec<_>>>()?;
    let mut config = Map::new();
    config.insert("command".into(), json!(command));
    config.insert("family".into(), json!(ens.family));
    config.insert(
        "graph".into(),
        match (&ens.graph, &graph) {
            (Some(p), Some(g)) => json!({"path": p, "n": g.n(), "edges": g.edges()}),
            _ => Value::Null,
        },
    );
    config.insert("n".into(), json!(span));
    config.insert("q".into(), json!(ens.q));
    insert_run(&mut config, run);
    Ok(Resolved { specs, config })
}

fn insert_run(config: &mut Map<String, Value>, run: &RunArgs) {
    config.insert("realizations".into(), json!(run.realizations));
    config.insert("seed".into(), json!(run.seed));
    config.insert("threads".into(), json!(run.threads));
    config.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
}

fn engine_config(run: &RunArgs) -> EngineConfig {
    EngineConfig { realizations: run.realizations, master_seed: run.seed, ..EngineConfig::default() }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn steps_of(span: Span) -> Vec<usize> {
    span.values()
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::ErrorCurve { ens, steps, run } => {
            let mut r = resolve("error-curve", ens, run)?;
            r.config.insert("steps".into(), json!(steps));
            let cfg = engine_config(run);
            let mut t = Table::new(&["n", "step", "mult_error", "coll_error", "mult_std_err", "coll_std_err", "argmax", "validity"]);
            for spec in &r.specs {
                let curve = engine::error_curve(spec, &steps_of(*steps), &cfg)?;
                for p in curve.points {
                    t.push(vec![
                        json!(spec.n),
                        json!(p.step),
                        num(p.mult_error),
                        num(p.coll_error),
                        num(p.mult_std_err),
                        num(p.coll_std_err),
                        json!(p.argmax.to_string()),
                        json!(p.validity),
                    ]);
                }
            }
            Ok(Outcome { config: Value::Object(r.config), body: Body::Table(t), failure: None })
        }
        Command::Depth { ens, eps, kind, experiment, max_steps, run } => {
            let mut r = resolve("depth", ens, run)?;
            r.config.insert("eps".into(), num(*eps));
            r.config.insert("kind".into(), json!(kind));
            r.config.insert("experiment".into(), json!(experiment));
            r.config.insert("max_steps".into(), json!(max_steps));
            let cfg = EngineConfig { max_steps: *max_steps, ..engine_config(run) };
            let kind = match kind {
                KindArg::Multiplicative => ErrorKind::Multiplicative,
                KindArg::Collisional => ErrorKind::Collisional,
            };
            let mut t = Table::new(&[
                "n", "depth", "lower_step", "lower_error", "upper_step", "upper_error", "upper_std_err", "argmax", "validity", "gates",
            ]);
            let mut failure = None;
            for spec in &r.specs {
                let res = match experiment {
                    Some(bits) => {
                        let a: ExperimentVector = bits.parse()?;
                        engine::experiment_depth(spec, &a, *eps, &cfg)
                    }
                    None => engine::design_depth(spec, *eps, kind, &cfg),
                };
                match res {
                    Ok(d) => {
                        let gates: usize = (1..=d.upper.step).map(|s| spec.gates_per_step(s)).sum();
                        t.push(vec![
                            json!(spec.n),
                            num(d.depth),
                            json!(d.lower.step),
                            num(d.lower.value),
                            json!(d.upper.step),
                            num(d.upper.value),
                            num(d.upper.std_err),
                            json!(d.upper.argmax.to_string()),
                            json!(d.upper.validity),
                            json!(gates),
                        ]);
                    }
                    Err(e @ Error::Unreached { .. }) => {
                        let mut row = vec![json!(spec.n)];
                        row.extend(std::iter::repeat_n(Value::Null, 9));
                        t.push(row);
                        failure.get_or_insert(e);
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(Outcome { config: Value::Object(r.config), body: Body::Table(t), failure })
        }
        Command::Sweep { ens, steps, run } => {
            let mut r = resolve("sweep", ens, run)?;
            r.config.insert("steps".into(), json!(steps));
            let cfg = engine_config(run);
            let mut t = Table::new(&["n", "step", "experiment", "orbit_size", "error", "std_err", "is_argmax"]);
            for spec in &r.specs {
                let sw = engine::experiment_sweep(spec, &steps_of(*steps), &cfg)?;
                for (k, &step) in sw.steps.iter().enumerate() {
                    for (c, class) in sw.classes.iter().enumerate() {
                        t.push(vec![
                            json!(spec.n),
                            json!(step),
                            json!(class.representative.to_string()),
                            json!(class.orbit_size),
                            num(class.errors[k]),
                            num(class.std_errs[k]),
                            json!(sw.argmax[k] == c),
                        ]);
                    }
                }
            }
            Ok(Outcome { config: Value::Object(r.config), body: Body::Table(t), failure: None })
        }
        Command::Connections { ens, layers, run } => {
            let mut r = resolve("connections", ens, run)?;
            r.config.insert("layers".into(), json!(layers));
            let mut t = Table::new(&["n", "s", "naive_mean", "greedy_mean", "naive_se", "greedy_se"]);
            for spec in &r.specs {
                for s in layers.values() {
                    let gates = if spec.is_layered() { (1..=s).map(|l| spec.gates_per_step(l)).sum() } else { s };
                    let st = mean_connection_count(spec, gates, run.realizations, run.seed)?;
                    t.push(vec![json!(st.n), json!(s), num(st.naive_mean), num(st.greedy_mean), num(st.naive_se), num(st.greedy_se)]);
                }
            }
            Ok(Outcome { config: Value::Object(r.config), body: Body::Table(t), failure: None })
        }
        Command::Formula { name, n, q, eps, variant, p, m, run } => {
            let ld = local_dim(*q)?;
            let mut config = Map::new();
            config.insert("command".into(), json!("formula"));
            config.insert("name".into(), json!(name));
            config.insert("n".into(), json!(n));
            config.insert("q".into(), json!(q));
            config.insert("eps".into(), num(*eps));
            config.insert("variant".into(), json!(variant));
            config.insert("p".into(), json!(p));
            config.insert("m".into(), json!(m));
            insert_run(&mut config, run);
            let (value, used) = formula(*name, *n, ld, *eps, variant.as_deref(), *p, *m)?;
            let mut inputs = Map::new();
            inputs.insert("n".into(), json!(n));
            inputs.insert("q".into(), json!(q));
            if !matches!(name, FormulaName::Alpha | FormulaName::Beta | FormulaName::Delta | FormulaName::DeltaAsymptote) {
                inputs.insert("eps".into(), num(*eps));
            }
            if let (FormulaName::Disconnection, Some("general")) = (name, used.as_deref()) {
                inputs.insert("p".into(), json!(p));
                inputs.insert("m".into(), json!(m));
            }
            let mut body = Map::new();
            body.insert("value".into(), num(value));
            body.insert("inputs".into(), Value::Object(inputs));
            body.insert("variant".into(), json!(used));
            Ok(Outcome { config: Value::Object(config), body: Body::Object(body), failure: None })
        }
        Command::Bounds { n, q, eps, run } => {
            let ld = local_dim(*q)?;
            let mut config = Map::new();
            config.insert("command".into(), json!("bounds"));
            config.insert("n".into(), json!(n));
            config.insert("q".into(), json!(q));
            config.insert("eps".into(), num(*eps));
            insert_run(&mut config, run);
            let mut t = Table::new(&["n", "bound", "variant", "value", "unit"]);
            for n in n.values() {
                for (kind, label) in [
                    (DalzellKind::Brickwork, "brickwork"),
                    (DalzellKind::General, "general"),
                    (DalzellKind::GeneralExact, "general_exact"),
                    (DalzellKind::GeneralRelaxed, "general_relaxed"),
                ] {
                    if kind == DalzellKind::General && ld != LocalDim::QUBIT {
                        continue;
                    }
                    let unit = if kind == DalzellKind::Brickwork { "layers" } else { "gates_per_site" };
                    let mut v = dalzell_bounds(n, ld, *eps, kind)?;
                    if kind != DalzellKind::Brickwork {
                        // stated for 2s/n
                        v /= 2.0;
                    }
                    t.push(vec![json!(n), json!("dalzell"), json!(label), num(v), json!(unit)]);
                }
                if n >= 3 {
                    let b = disconnection_bounds(n, ld, *eps, DisconnectionShape::Bridge)?;
                    t.push(vec![json!(n), json!("disconnection"), json!("bridge"), num(b), json!("gates")]);
                }
            }
            Ok(Outcome { config: Value::Object(config), body: Body::Table(t), failure: None })
        }
        Command::OracleCheck { ens, steps, run } => {
            let mut r = resolve("oracle-check", ens, run)?;
            r.config.insert("steps".into(), json!(steps));
            r.config.insert("tolerance".into(), num(ORACLE_TOL));
            let cfg = engine_config(run);
            let mut t = Table::new(&["n", "step", "engine", "sector", "choi", "psd_min_eigenvalue", "agree"]);
            let mut failure = None;
            for spec in &r.specs {
                let haar = oracle::dense_global_haar(spec.n, spec.q)?;
                let hs = oracle::sector_matrix(&haar)?;
                for s in steps.values() {
                    let e = engine::multiplicative_error(spec, s, &cfg)?.value;
                    let d = oracle::dense_spec_moment(spec, s)?;
                    let sec = oracle::sector_error(&oracle::sector_matrix(&d)?, &hs);
                    let choi = oracle::choi_bisection(&d, &haar, 1e-12)?.epsilon;
                    let psd = oracle::psd_check(&d.matrix, 1e-10)?;
                    let ok = agree(e, sec) && agree(e, choi);
                    if !ok {
                        failure.get_or_insert(Error::OracleMismatch(format!("n={} step={s}: engine {e}, sector {sec}, choi {choi}", spec.n)));
                    }
                    t.push(vec![json!(spec.n), json!(s), num(e), num(sec), num(choi), num(psd.min_eigenvalue), json!(ok)]);
                }
            }
            Ok(Outcome { config: Value::Object(r.config), body: Body::Table(t), failure })
        }
    }
}

/// Relative tolerance of engine/oracle agreement; absolute below `1e-12`.
pub const ORACLE_TOL: f64 = 1e-8;

pub fn agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= ORACLE_TOL * a.abs().max(b.abs()) + 1e-12
}

fn formula(
    name: FormulaName,
    n: usize,
    q: LocalDim,
    eps: f64,
    variant: Option<&str>,
    p: Option<f64>,
    m: Option<usize>,
) -> Result<(f64, Option<String>)> {
    let beta_variant = |v: Option<&str>| match v.unwrap_or("entangled_boundaries") {
        "entangled_boundaries" => Ok(BetaVariant::EntangledBoundaries),
        "collision" => Ok(BetaVariant::Collision),
        other => Err(Error::Config(format!("unknown beta variant {other:?}"))),
    };
    let with = |v: f64, label: &str| Ok((v, Some(label.to_string())));
    match name {
        FormulaName::Alpha => Ok((brickwork_alpha(n, q)?, None)),
        FormulaName::Beta => {
            let b = beta_variant(variant)?;
            with(brickwork_beta(n, q, b)?, variant.unwrap_or("entangled_boundaries"))
        }
        FormulaName::Depth => {
            let b = beta_variant(variant)?;
            with(design_depth_formula(n, q, eps, b)?, variant.unwrap_or("entangled_boundaries"))
        }
        FormulaName::Leading => Ok((leading_order_depth(n, q, eps)?, None)),
        FormulaName::Delta => Ok((delta_gap(n, q)?, None)),
        FormulaName::DeltaAsymptote => Ok((delta_gap_asymptote(n), None)),
        FormulaName::Dalzell => {
            let label = variant.unwrap_or("general");
            let kind = match label {
                "brickwork" => DalzellKind::Brickwork,
                "general" => DalzellKind::General,
                "general_exact" => DalzellKind::GeneralExact,
                "general_relaxed" => DalzellKind::GeneralRelaxed,
                other => return Err(Error::Config(format!("unknown Dalzell variant {other:?}"))),
            };
            with(dalzell_bounds(n, q, eps, kind)?, label)
        }
        FormulaName::Disconnection => {
            let label = variant.unwrap_or("bridge");
            let shape = match label {
                "bridge" => DisconnectionShape::Bridge,
                "general" => DisconnectionShape::General {
                    p: p.ok_or_else(|| Error::Config("--p is required for the general disconnection bound".into()))?,
                    m: m.ok_or_else(|| Error::Config("--m is required for the general disconnection bound".into()))?,
                },
                other => return Err(Error::Config(format!("unknown disconnection variant {other:?}"))),
            };
            with(disconnection_bounds(n, q, eps, shape)?, label)
        }
    }
}

fn run_args(command: &Command) -> &RunArgs {
    match command {
        Command::ErrorCurve { run, .. }
        | Command::Depth { run, .. }
        | Command::Sweep { run, .. }
        | Command::Connections { run, .. }
        | Command::Formula { run, .. }
        | Command::Bounds { run, .. }
        | Command::OracleCheck { run, .. } => run,
    }
}

/// Runs a parsed command, writes its output and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let run = run_args(&cli.command);
    if let Some(t) = run.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        // a global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = execute(&cli.command).and_then(|outcome| {
        let format = run.format.unwrap_or(match cli.command {
            Command::Formula { .. } => Format::Json,
            _ => Format::Csv,
        });
        let bytes = render(&outcome, format)?;
        match &run.out {
            Some(path) => std::fs::write(path, &bytes)?,
            None => std::io::stdout().write_all(&bytes)?,
        }
        match outcome.failure {
            Some(e) => Err(e),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    run(&Cli::parse())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("3:5".parse::<Span>().unwrap().values(), vec![3, 4, 5]);
        assert_eq!("7".parse::<Span>().unwrap().values(), vec![7]);
        assert!("5:3".parse::<Span>().is_err());
        assert!("x".parse::<Span>().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::Unreached { epsilon: 0.1, steps: 1, last_error: 1.0 }), 3);
        assert_eq!(exit_code(&Error::OracleMismatch("x".into())), 4);
    }
}
