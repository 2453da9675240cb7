use ergomax::averages::{alpha_karp, exact_inf_time_average, horizon_table};
use ergomax::fixtures::three_point_system;
use ergomax::graph::trim_and_recode;
use ergomax::symbolic::{birkhoff_sum, EventuallyPeriodicPoint};
use serde_json::{json, Value};

use super::{csv_table, labels};
use crate::error::CliError;
use crate::report::{resolve_tolerances, Outcome, RunReport};

type ClosedForm = Box<dyn Fn(usize) -> f64>;

/// The three points of the example: name, point syntax and the closed form
/// of `S_nφ(x)/n`.
fn points(a: f64) -> [(&'static str, &'static str, ClosedForm); 3] {
    let odd = |n: usize| !n.is_multiple_of(2);
    [
        ("(10)^inf", "|1,0", Box::new(move |n| if odd(n) { 0.5 + 0.5 / n as f64 } else { 0.5 })),
        ("(01)^inf", "|0,1", Box::new(move |n| if odd(n) { 0.5 - 0.5 / n as f64 } else { 0.5 })),
        ("a(10)^inf", "a|1,0", Box::new(move |n| if odd(n) { 0.5 + (a - 0.5) / n as f64 } else { 0.5 + a / n as f64 })),
    ]
}

/// `sup_x S_nφ(x)/n` as printed for each parity of `n` and range of `a`.
fn horizon_closed_form(a: f64, n: usize) -> f64 {
    let nf = n as f64;
    if n.is_multiple_of(2) {
        if a < 0.0 {
            0.5
        } else {
            0.5 + a / nf
        }
    } else if a < 1.0 {
        0.5 + 1.0 / (2.0 * nf)
    } else {
        0.5 + (2.0 * a - 1.0) / (2.0 * nf)
    }
}

fn identity(name: &str, expected: f64, actual: f64, tol: f64) -> (Value, bool) {
    let holds = (expected - actual).abs() <= tol;
    (json!({ "name": name, "expected": expected, "actual": actual, "holds": holds }), holds)
}

/// Reproduces the three-point example for parameter `a` up to `horizon`.
pub fn paper_example(a: f64, horizon: usize, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    if !a.is_finite() {
        return Err(CliError::Parse(format!("a must be a finite number, got {a}")));
    }
    if a == 0.0 || a == 1.0 {
        return Err(CliError::Domain(format!("the example needs a outside {{0, 1}}, got {a}")));
    }
    if horizon == 0 {
        return Err(CliError::Parse("horizon must be at least 1".into()));
    }
    let tolerances = resolve_tolerances(&[("identity", 1e-12)], &[], tol)?;
    let eps = tolerances["identity"];
    let system = three_point_system(a);
    let graph = trim_and_recode(&system)?;
    let alpha = alpha_karp(&graph);

    let mut point_rows = Vec::new();
    let mut series_cols = Vec::new();
    let mut profiles = Vec::new();
    let mut worst_series = 0.0f64;
    for (name, syntax, closed) in points(a) {
        let p = EventuallyPeriodicPoint::parse(syntax, &system)?;
        let series: Vec<f64> =
            (1..=horizon).map(|n| birkhoff_sum(&p, n, &system).map(|s| s / n as f64)).collect::<Result<_, _>>()?;
        let closed: Vec<f64> = (1..=horizon).map(closed).collect();
        worst_series = series.iter().zip(&closed).fold(worst_series, |m, (s, c)| m.max((s - c).abs()));
        let prof = exact_inf_time_average(&p, &system)?;
        point_rows.push(json!({
            "name": name,
            "point": syntax,
            "series": series,
            "closed_form": closed,
            "inf_over_n": prof.inf_over_n,
            "inf_attained_at": prof.inf_attained_at,
            "liminf": prof.liminf,
            "limsup": prof.limsup,
            "sup_over_n": prof.sup_over_n,
        }));
        series_cols.push(series);
        profiles.push((name, prof));
    }

    let table = horizon_table(&graph, horizon)?;
    let horizon_closed: Vec<f64> = (1..=horizon).map(|n| horizon_closed_form(a, n)).collect();
    let worst_horizon = table.rows.iter().zip(&horizon_closed).fold(0.0f64, |m, (&(_, v), c)| m.max((v - c).abs()));

    // inf_n sup_x is α: every row sits above it and the rows close in on it
    let rows_above = table.rows.iter().all(|&(_, v)| v >= alpha.value - eps);
    let converging = table.running_inf - alpha.value <= table.error_bound + eps;
    let certified = rows_above && converging;
    let attained_at = table.rows.iter().find(|&&(_, v)| (v - alpha.value).abs() <= eps).map(|&(n, _)| n);
    let inf_sup = alpha.value;

    let (best_name, best) = profiles
        .iter()
        .map(|(n, p)| (*n, p.inf_over_n))
        .fold(("", f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let sup_sup = profiles.iter().map(|(_, p)| p.sup_over_n).fold(f64::NEG_INFINITY, f64::max);
    let inf_inf = profiles.iter().map(|(_, p)| p.inf_over_n).fold(f64::INFINITY, f64::min);

    let mut identities = Vec::new();
    let mut failures = Vec::new();
    let mut record = |(v, holds): (Value, bool)| {
        if !holds {
            failures.push(format!("identity failed: {v}"));
        }
        identities.push(v);
    };
    record(identity("alpha", 0.5, alpha.value, eps));
    record(identity("inf_n_sup_x", 0.5, inf_sup, eps));
    record((json!({ "name": "inf_n_sup_x_certificate", "holds": certified }), certified));
    record(identity("sup_x_inf_n", 0.5, best, eps));
    record(identity("inf_n at (01)^inf", 0.0, profiles[1].1.inf_over_n, eps));
    record(identity("inf_n at (10)^inf", 0.5, profiles[0].1.inf_over_n, eps));
    record(identity("sup_n at (10)^inf", 1.0, profiles[0].1.sup_over_n, eps));
    record(identity("series closed forms (max error)", 0.0, worst_series, eps));
    record(identity("horizon closed form (max error)", 0.0, worst_horizon, eps));

    let inputs = json!({ "a": a, "horizon": horizon });
    let results = json!({
        "alpha": { "value": alpha.value, "witness_cycle": labels(&graph, &alpha.witness_cycle) },
        "points": point_rows,
        "horizon_sup": table.rows.iter().map(|&(_, v)| v).collect::<Vec<_>>(),
        "horizon_closed_form": horizon_closed,
        "inf_n_sup_x": {
            "value": inf_sup,
            "attained_at": attained_at,
            "running_inf": table.running_inf,
            "running_inf_at": table.running_inf_at,
            "error_bound": table.error_bound,
            "certified": certified,
        },
        "sup_x_inf_n": { "value": best, "attained_by": best_name },
        "sup_sup": sup_sup,
        "inf_inf": inf_inf,
        "identities": identities,
    });
    let mut outcome = Outcome::new(RunReport::new("paper-example", inputs, results, tolerances));
    outcome.failures = failures;
    let rows = (0..horizon).map(|i| {
        let mut row = vec![(i + 1).to_string()];
        row.extend(series_cols.iter().map(|c| c[i].to_string()));
        row.push(table.rows[i].1.to_string());
        row
    });
    outcome.csv = Some(csv_table(&["n", "(10)^inf", "(01)^inf", "a(10)^inf", "horizon_sup"], rows));
    Ok(outcome)
}
