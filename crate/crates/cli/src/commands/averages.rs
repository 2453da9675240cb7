use std::path::Path;

use ergomax::averages::{alpha_bruteforce, alpha_karp, horizon_table};
use ergomax::subaction::verify_duality;
use ergomax::symbolic::EventuallyPeriodicPoint;
use serde_json::json;

use super::{csv_table, edge_labels, labels, load_graph, load_system};
use crate::error::CliError;
use crate::report::{resolve_tolerances, Outcome, RunReport};

pub fn alpha(system: &Path, brute: bool, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    let tolerances = resolve_tolerances(&[], &[], tol)?;
    let (_, graph, echo) = load_graph(system)?;
    let result = if brute { alpha_bruteforce(&graph)? } else { alpha_karp(&graph) };
    let inputs = json!({ "system": echo, "method": if brute { "brute" } else { "karp" } });
    let results = json!({
        "value": result.value,
        "witness_cycle": result.witness_cycle,
        "witness_labels": labels(&graph, &result.witness_cycle),
        "method": result.method,
        "vertices": graph.len(),
    });
    Ok(Outcome::new(RunReport::new("alpha", inputs, results, tolerances)))
}

pub fn horizons(system: &Path, horizon: usize, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    let tolerances = resolve_tolerances(&[], &[], tol)?;
    let (_, graph, echo) = load_graph(system)?;
    let table = horizon_table(&graph, horizon)?;
    let alpha = alpha_karp(&graph).value;
    let inputs = json!({ "system": echo, "horizon": horizon });
    let results = json!({
        "rows": table.rows.iter().map(|&(n, v)| json!({ "n": n, "sup_value": v })).collect::<Vec<_>>(),
        "running_inf": table.running_inf,
        "running_inf_at": table.running_inf_at,
        "error_bound": table.error_bound,
        "alpha": alpha,
    });
    let mut outcome = Outcome::new(RunReport::new("horizons", inputs, results, tolerances));
    let rows = table
        .rows
        .iter()
        .map(|&(n, v)| vec![n.to_string(), v.to_string()])
        .chain([
            vec!["inf".to_string(), table.running_inf.to_string()],
            vec!["error_bound".to_string(), table.error_bound.to_string()],
        ]);
    outcome.csv = Some(csv_table(&["n", "sup_value"], rows));
    Ok(outcome)
}

pub fn point(system: &Path, text: &str, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    let tolerances = resolve_tolerances(&[], &[], tol)?;
    let (system, echo) = load_system(system)?;
    let p = EventuallyPeriodicPoint::parse(text, &system)?;
    let profile = ergomax::averages::exact_inf_time_average(&p, &system)?;
    let inputs = json!({ "system": echo, "point": text });
    let results = json!({
        "point": p.display(&system).to_string(),
        "inf_over_n": profile.inf_over_n,
        "inf_attained_at": profile.inf_attained_at,
        "liminf": profile.liminf,
        "limsup": profile.limsup,
        "sup_over_n": profile.sup_over_n,
    });
    Ok(Outcome::new(RunReport::new("point", inputs, results, tolerances)))
}

pub fn subaction(system: &Path, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    let tolerances = resolve_tolerances(&[("duality_gap", 1e-9), ("tight", 1e-9)], &[], tol)?;
    let (_, graph, echo) = load_graph(system)?;
    let (sol, report) = verify_duality(&graph, tolerances["tight"])?;
    let vertex_names = labels(&graph, &(0..graph.len()).collect::<Vec<_>>());
    let inputs = json!({ "system": echo });
    let results = json!({
        "dual_value": sol.dual_value,
        "psi": vertex_names.iter().zip(&sol.psi).map(|(v, p)| json!({ "vertex": v, "value": p })).collect::<Vec<_>>(),
        "slack": edge_labels(&graph).iter().zip(&sol.slack).map(|(e, s)| json!({ "edge": e, "value": s })).collect::<Vec<_>>(),
        "alpha": report.alpha,
        "dual_objective": report.dual_value,
        "gap": report.gap,
        "max_violation": report.max_violation,
        "tight_cycle": report.tight_cycle.as_ref().map(|c| labels(&graph, c)),
        "tight_cycle_mean": report.tight_cycle_mean,
    });
    let mut outcome = Outcome::new(RunReport::new("subaction", inputs, results, tolerances.clone()));
    outcome.check(report.gap <= tolerances["duality_gap"], || format!("duality gap {} exceeds tolerance", report.gap));
    outcome.check(report.max_violation <= tolerances["duality_gap"], || {
        format!("sub-action violates a constraint by {}", report.max_violation)
    });
    Ok(outcome)
}
