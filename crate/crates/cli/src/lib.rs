//! Command-line front end for `motivic-core`.
//!
//! [`run`] is the whole program minus process I/O, so tests can drive it
//! directly. JSON output is deterministic: object keys are sorted and motive
//! expressions are printed in canonical atom order.

mod matrix_arg;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use motivic_core::arrangements::{self, parse_arrangement, Arrangement, ArrangementError};
use motivic_core::atinfinity::{cover_from_graph, homology_at_infinity_with, rz_complex};
use motivic_core::gwring::ClassifyOptions;
use motivic_core::mumford::{self, link_decomposition_with, LinkResult, Mode, MotiveExpression, MumfordError};
use motivic_core::plumbing::{catalog, catalog_names, parse_graph, serialize_graph, PlumbingGraph};
use motivic_core::smithlift::{diagonalize_zeps, is_divisibility_chain, snf_int, verify, Obstruction};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub use matrix_arg::{parse_matrix, MatrixArg};

#[derive(Parser, Debug)]
#[command(name = "motivic-plumb", version, about = "Motivic links of plumbing graphs and arrangement complements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Link decomposition of a plumbing graph
    Link(Opts),
    /// Oriented or quadratic Mumford matrix
    Mumford(Opts),
    /// Smith normal form of a matrix, or diagonalization of a graph's Mumford matrix
    Snf(Opts),
    /// Homology at infinity of a plumbing graph
    Homology(Opts),
    /// Čech-shaped resolution of the boundary divisor
    Rz(Opts),
    /// Flats and decompositions of a hyperplane arrangement
    Arrangement(Opts),
    /// List catalog names, or print one catalog graph
    Catalog(Opts),
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_enum, default_value_t = ModeArg::Oriented)]
    pub mode: ModeArg,
    /// Drop torsion from homology output
    #[arg(long)]
    pub rational: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Default)]
#[group(multiple = false)]
pub struct Input {
    #[arg(long, value_name = "NAME")]
    pub catalog: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub arrangement: Option<PathBuf>,
    /// Rows separated by `;`, entries by whitespace; entries may use `e` and `h`
    #[arg(long, value_name = "STR", allow_hyphen_values = true)]
    pub matrix: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Oriented,
    Quadratic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Oriented => Mode::Oriented,
            ModeArg::Quadratic => Mode::Quadratic,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{message}")]
    Domain { kind: String, message: String, details: Value },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain { .. } => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
            CliError::Parse(_) => "ParseError",
            CliError::Domain { kind, .. } => kind,
        }
    }

    pub fn to_json(&self) -> Value {
        let details = match self {
            CliError::Domain { details, .. } => details.clone(),
            _ => Value::Null,
        };
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "details": details } })
    }
}

fn domain(kind: &str, message: impl ToString, details: Value) -> CliError {
    CliError::Domain { kind: kind.to_string(), message: message.to_string(), details }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize to JSON")
}

fn mumford_error(e: MumfordError) -> CliError {
    let details = match &e {
        MumfordError::NotOrientable { vertex, self_intersection } => {
            json!({ "vertex": vertex, "self_intersection": self_intersection })
        }
        MumfordError::NotTransverse { a, b, multiplicity } => json!({ "a": a, "b": b, "multiplicity": multiplicity }),
        MumfordError::NotTree => Value::Null,
        MumfordError::MissingExtension { a, b, degree } | MumfordError::NonRationalPoint { a, b, degree } => {
            json!({ "a": a, "b": b, "degree": degree })
        }
        MumfordError::PointClass { a, b, error } => json!({ "a": a, "b": b, "reason": error.to_string() }),
        MumfordError::Obstruction { obstruction, oriented_fallback } => json!({
            "obstruction": to_value(obstruction.as_ref()),
            "oriented_fallback": link_json(oriented_fallback),
        }),
    };
    domain(e.kind(), &e, details)
}

fn obstruction_error(o: Obstruction) -> CliError {
    domain("Obstruction", &o, to_value(&o))
}

fn arrangement_error(e: ArrangementError) -> CliError {
    match e {
        ArrangementError::Parse { .. } | ArrangementError::DimensionMismatch { .. } => CliError::Parse(e.to_string()),
        _ => domain(e.kind(), &e, to_value(&e)),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_graph(input: &Input) -> Result<PlumbingGraph, CliError> {
    if let Some(name) = &input.catalog {
        return catalog(name).map_err(|e| domain("CatalogError", &e, to_value(&e)));
    }
    let Some(path) = &input.graph else {
        return Err(CliError::Usage("expected --catalog NAME or --graph FILE".into()));
    };
    let text = read(path)?;
    if path.extension().is_some_and(|x| x == "json") {
        let g: PlumbingGraph =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        g.validate().map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Ok(g)
    } else {
        parse_graph(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

fn load_arrangement(input: &Input) -> Result<Arrangement, CliError> {
    let Some(path) = &input.arrangement else {
        return Err(CliError::Usage("expected --arrangement FILE".into()));
    };
    parse_arrangement(&read(path)?).map_err(|e| match e {
        ArrangementError::Parse { .. } | ArrangementError::DimensionMismatch { .. } => {
            CliError::Parse(format!("{}: {e}", path.display()))
        }
        other => arrangement_error(other),
    })
}

fn reject_other_inputs(input: &Input, allowed: &[&str]) -> Result<(), CliError> {
    let given = [
        ("catalog", input.catalog.is_some()),
        ("graph", input.graph.is_some()),
        ("arrangement", input.arrangement.is_some()),
        ("matrix", input.matrix.is_some()),
    ];
    match given.iter().find(|(name, set)| *set && !allowed.contains(name)) {
        Some((name, _)) => Err(CliError::Usage(format!("--{name} is not accepted by this subcommand"))),
        None => Ok(()),
    }
}

fn expression_json(e: &MotiveExpression) -> Value {
    let mut v = to_value(e);
    v["display"] = Value::String(e.to_string());
    v
}

fn link_json(r: &LinkResult) -> Value {
    let mut v = to_value(r);
    if let Some(e) = r.expression() {
        v["display"] = Value::String(e.to_string());
    }
    v
}

/// JSON payload and its table rendering.
struct Report {
    json: Value,
    table: String,
}

fn cmd_link(o: &Opts, opts: &ClassifyOptions) -> Result<Report, CliError> {
    reject_other_inputs(&o.input, &["catalog", "graph"])?;
    let g = load_graph(&o.input)?;
    let r = link_decomposition_with(&g, o.mode.into(), opts).map_err(mumford_error)?;
    Ok(Report { table: render::link(&r), json: link_json(&r) })
}

fn cmd_mumford(o: &Opts, opts: &ClassifyOptions) -> Result<Report, CliError> {
    reject_other_inputs(&o.input, &["catalog", "graph"])?;
    let g = load_graph(&o.input)?;
    let ids: Vec<&str> = g.vertices.iter().map(|v| v.id.as_str()).collect();
    match o.mode {
        ModeArg::Oriented => {
            let m = mumford::oriented_matrix(&g);
            Ok(Report {
                table: render::matrix(&ids, &m.to_rows()),
                json: json!({ "mode": "oriented", "vertices": ids, "matrix": to_value(&m) }),
            })
        }
        ModeArg::Quadratic => {
            let m = mumford::quadratic_matrix_with(&g, opts).map_err(mumford_error)?;
            Ok(Report {
                table: render::matrix(&ids, &m.to_rows()),
                json: json!({ "mode": "quadratic", "vertices": ids, "matrix": to_value(&m) }),
            })
        }
    }
}

fn cmd_snf(o: &Opts, opts: &ClassifyOptions) -> Result<Report, CliError> {
    reject_other_inputs(&o.input, &["catalog", "graph", "matrix"])?;
    let m = match &o.input.matrix {
        Some(s) => parse_matrix(s).map_err(CliError::Parse)?,
        None => {
            let g = load_graph(&o.input)?;
            match o.mode {
                ModeArg::Oriented => MatrixArg::Integer(mumford::oriented_matrix(&g)),
                ModeArg::Quadratic => MatrixArg::ZEps(mumford::quadratic_matrix_with(&g, opts).map_err(mumford_error)?),
            }
        }
    };
    match m {
        MatrixArg::Integer(a) => {
            let r = snf_int(&a);
            let d = r.diagonal();
            let mut json = to_value(&r);
            json["ring"] = json!("integer");
            json["diagonal"] = to_value(&d.iter().map(ToString::to_string).collect::<Vec<_>>());
            json["verified"] = json!(verify(&a, &r) && is_divisibility_chain(&d));
            Ok(Report { table: render::diagonal(&d), json })
        }
        MatrixArg::ZEps(a) => {
            let r = diagonalize_zeps(&a).map_err(obstruction_error)?;
            let d = r.diagonal();
            let mut json = to_value(&r);
            json["ring"] = json!("zeps");
            json["diagonal"] = to_value(&d);
            json["verified"] = json!(verify(&a, &r));
            Ok(Report { table: render::diagonal(&d), json })
        }
    }
}

fn cmd_homology(o: &Opts, opts: &ClassifyOptions) -> Result<Report, CliError> {
    reject_other_inputs(&o.input, &["catalog", "graph"])?;
    let g = load_graph(&o.input)?;
    let mut h = homology_at_infinity_with(&g, o.mode.into(), opts).map_err(mumford_error)?;
    if o.rational {
        h = h.rationalized();
    }
    Ok(Report { table: render::homology(&h), json: to_value(&h) })
}

fn cmd_rz(o: &Opts) -> Result<Report, CliError> {
    reject_other_inputs(&o.input, &["catalog", "graph"])?;
    let g = load_graph(&o.input)?;
    let terms = rz_complex(&cover_from_graph(&g)).map_err(|e| domain("InconsistentIncidence", &e, to_value(&e)))?;
    Ok(Report { table: render::rz(&terms), json: json!({ "terms": to_value(&terms) }) })
}

fn cmd_arrangement(o: &Opts) -> Result<Report, CliError> {
    reject_other_inputs(&o.input, &["arrangement"])?;
    let a = load_arrangement(&o.input)?;
    let flats = arrangements::flats(&a).map_err(arrangement_error)?;
    let m = arrangements::multiplicities(&a).map_err(arrangement_error)?;
    let complement = arrangements::complement_decomposition(&a).map_err(arrangement_error)?;
    let nc = flats.is_normal_crossing();
    let optional = |r: Result<MotiveExpression, ArrangementError>| r.ok().map_or(Value::Null, |e| expression_json(&e));
    let json = json!({
        "dimension": a.dimension,
        "hyperplanes": a.len(),
        "flats": flats
            .consistent()
            .map(|(subset, codim)| json!({ "subset": subset, "codim": codim }))
            .collect::<Vec<_>>(),
        "multiplicities": m.iter().map(|(n, c)| (n.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
        "normal_crossing": nc,
        "complement": expression_json(&complement),
        "infinity": optional(arrangements::infinity_decomposition(&a)),
        "dual": optional(arrangements::dual_decomposition(&a)),
        "compact_support": optional(arrangements::compact_support_decomposition(&a)),
    });
    Ok(Report { table: render::arrangement(&json), json })
}

fn cmd_catalog(o: &Opts) -> Result<Report, CliError> {
    reject_other_inputs(&o.input, &["catalog"])?;
    match &o.input.catalog {
        None => {
            let names = catalog_names();
            Ok(Report { table: names.join("\n") + "\n", json: json!({ "names": names }) })
        }
        Some(name) => {
            let g = load_graph(&o.input)?;
            let dsl = serialize_graph(&g);
            Ok(Report {
                json: json!({ "name": name, "graph": to_value(&g), "checks": to_value(&g.checks()), "dsl": dsl }),
                table: dsl,
            })
        }
    }
}

fn dispatch(cli: &Cli, opts: &ClassifyOptions) -> Result<(Report, Format), CliError> {
    let (report, o) = match &cli.command {
        Command::Link(o) => (cmd_link(o, opts)?, o),
        Command::Mumford(o) => (cmd_mumford(o, opts)?, o),
        Command::Snf(o) => (cmd_snf(o, opts)?, o),
        Command::Homology(o) => (cmd_homology(o, opts)?, o),
        Command::Rz(o) => (cmd_rz(o)?, o),
        Command::Arrangement(o) => (cmd_arrangement(o)?, o),
        Command::Catalog(o) => (cmd_catalog(o)?, o),
    };
    Ok((report, o.format))
}

/// Parses `args` (including the program name) and runs the invocation.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli, &ClassifyOptions::from_env()) {
        Ok((report, Format::Json)) => Output {
            code: 0,
            stdout: serde_json::to_string_pretty(&report.json).expect("JSON values serialize") + "\n",
            stderr: String::new(),
        },
        Ok((report, Format::Table)) => Output { code: 0, stdout: report.table, stderr: String::new() },
        Err(e) => Output {
            code: e.exit_code(),
            stdout: serde_json::to_string_pretty(&e.to_json()).expect("JSON values serialize") + "\n",
            stderr: format!("error: {e}\n"),
        },
    }
}
