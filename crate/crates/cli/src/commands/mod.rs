mod averages;
mod fenchel;
mod paper;
mod thermo;

use std::path::Path;

use ergomax::graph::{trim_and_recode, WeightedDigraph};
use ergomax::symbolic::{parse_system, SystemDocument};
use ergomax::{Graph, System};
use serde_json::Value;

use crate::args::{Cli, Command, MethodArg};
use crate::error::CliError;
use crate::report::{env_overrides, Outcome};

pub use averages::{alpha, horizons, point, subaction};
pub use fenchel::{fenchel, FenchelInstance};
pub use paper::paper_example;
pub use thermo::{axioms, entropy, pressure};

/// Runs a parsed command line. Tolerance overrides come from the
/// environment first and the `--tol` flags second.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut tol = env_overrides()?;
    tol.extend(cli.tol.iter().cloned());
    let outcome = match &cli.command {
        Command::Alpha { system, method } => alpha(system, *method == MethodArg::Brute, &tol)?,
        Command::PaperExample { a, horizon } => paper_example(*a, *horizon, &tol)?,
        Command::Horizons { system, horizon } => horizons(system, *horizon, &tol)?,
        Command::Point { system, point: p } => point(system, p, &tol)?,
        Command::Subaction { system } => subaction(system, &tol)?,
        Command::Pressure { system, competitors, seed } => pressure(system, *competitors, *seed, &tol)?,
        Command::Entropy { system, transitions, max_iter } => entropy(system, transitions.as_deref(), *max_iter, &tol)?,
        Command::Fenchel { instance } => fenchel(instance, &tol)?,
        Command::Axioms { system, kind, samples, seed } => axioms(system, *kind, *samples, *seed, &tol)?,
    };
    if cli.csv && outcome.csv.is_none() {
        return Err(CliError::Parse(format!("{} has no tabular output; use --json", outcome.report.command)));
    }
    Ok(outcome)
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Parses a system file and echoes it back as a document.
pub(crate) fn load_system(path: &Path) -> Result<(System, Value), CliError> {
    let system = parse_system(&read_file(path)?)?;
    let echo = serde_json::json!({
        "path": path.display().to_string(),
        "system": SystemDocument::from_system(&system),
    });
    Ok((system, echo))
}

pub(crate) fn load_graph(path: &Path) -> Result<(System, Graph, Value), CliError> {
    let (system, echo) = load_system(path)?;
    let graph = trim_and_recode(&system)?;
    Ok((system, graph, echo))
}

pub(crate) fn labels<T: ergomax::Scalar>(graph: &WeightedDigraph<T>, vertices: &[usize]) -> Vec<String> {
    vertices.iter().map(|&v| graph.vertex_label(v)).collect()
}

pub(crate) fn edge_labels<T: ergomax::Scalar>(graph: &WeightedDigraph<T>) -> Vec<String> {
    graph.edges().iter().map(|&(u, v)| format!("{}->{}", graph.vertex_label(u), graph.vertex_label(v))).collect()
}

pub(crate) fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
