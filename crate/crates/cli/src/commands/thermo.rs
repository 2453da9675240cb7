use std::path::Path;

use ergomax::markov::{markov_entropy, MarkovMeasure};
use ergomax::pressure::{
    axiom_check, gibbs_chain, max_ergodic_pressure, sup_pressure, PotentialDepth, PressureEvaluation, PressureKind,
};
use ergomax::random::random_potential;
use ergomax::variational::{entropy_via_vp2, vp1_check};
use ergomax::Error;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{labels, load_graph, load_system, read_file};
use crate::args::KindArg;
use crate::error::CliError;
use crate::report::{resolve_tolerances, Outcome, RunReport};

const LAMBDAS: [f64; 3] = [0.25, 0.5, 0.75];
const SAMPLE_SCALE: f64 = 2.0;

pub fn pressure(system: &Path, competitors: usize, seed: u64, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    let tolerances = resolve_tolerances(
        &[("entropy_recovery", 1e-5), ("vp1_competitor", 1e-9), ("vp1_gap", 1e-8), ("vp2_gradient", 1e-7)],
        &[],
        tol,
    )?;
    let (_, graph, echo) = load_graph(system)?;
    let gamma = PressureEvaluation::from_graph(PressureKind::Spectral, graph.clone())?;
    let phi = gamma.graph_potential();
    let value = gamma.evaluate(&phi)?;
    let vp1 = vp1_check(&gamma, &phi, competitors, seed)?;
    let gibbs = gibbs_chain(&gamma, &phi)?;
    let analytic = markov_entropy(&gibbs);
    let vp2 = entropy_via_vp2(&gamma, &gibbs, tolerances["vp2_gradient"], 100_000)?;
    let inputs = json!({ "system": echo, "competitors": competitors, "seed": seed });
    let results = json!({
        "gamma": value,
        "vp1": vp1,
        "entropy_vp2": vp2.value,
        "entropy_analytic": analytic,
        "vp2": vp2,
        "gibbs": {
            "vertices": labels(&graph, &(0..graph.len()).collect::<Vec<_>>()),
            "stationary": gibbs.stationary,
            "transitions": gibbs.transitions,
        },
        "sup_norm": sup_pressure(&phi),
        "max_ergodic": max_ergodic_pressure(&graph, &phi)?,
    });
    let mut outcome = Outcome::new(RunReport::new("pressure", inputs, results, tolerances.clone()));
    outcome.check(vp1.gap <= tolerances["vp1_gap"], || format!("VP1 gap {} exceeds tolerance", vp1.gap));
    outcome.check(vp1.competitor_max_excess <= tolerances["vp1_competitor"], || {
        format!("a competitor beats the pressure by {}", vp1.competitor_max_excess)
    });
    let err = (vp2.value - analytic).abs();
    outcome.check(err <= tolerances["entropy_recovery"], || format!("VP2 entropy off by {err}"));
    Ok(outcome)
}

pub fn entropy(system: &Path, transitions: Option<&Path>, max_iter: usize, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    let tolerances = resolve_tolerances(&[("entropy_recovery", 1e-5), ("vp2_gradient", 1e-7)], &[], tol)?;
    let (_, graph, echo) = load_graph(system)?;
    let gamma = PressureEvaluation::from_graph(PressureKind::Spectral, graph.clone())?;
    let (target, source) = match transitions {
        Some(path) => {
            let matrix: Vec<Vec<f64>> = serde_json::from_str(&read_file(path)?)?;
            (MarkovMeasure::from_transitions(&graph, matrix)?, path.display().to_string())
        }
        None => (gibbs_chain(&gamma, &gamma.graph_potential())?, "gibbs".to_string()),
    };
    let analytic = markov_entropy(&target);
    let vp2 = entropy_via_vp2(&gamma, &target, tolerances["vp2_gradient"], max_iter)?;
    let err = (vp2.value - analytic).abs();
    let inputs = json!({ "system": echo, "target": source, "max_iter": max_iter });
    let results = json!({
        "target": { "stationary": target.stationary, "transitions": target.transitions },
        "entropy_vp2": vp2.value,
        "entropy_analytic": analytic,
        "error": err,
        "vp2": vp2,
    });
    let mut outcome = Outcome::new(RunReport::new("entropy", inputs, results, tolerances.clone()));
    outcome.check(err <= tolerances["entropy_recovery"], || format!("VP2 entropy off by {err}"));
    Ok(outcome)
}

pub fn axioms(system: &Path, kind: Option<KindArg>, samples: usize, seed: u64, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    let tolerances = resolve_tolerances(&[("axiom", 1e-9)], &[], tol)?;
    if samples < 2 {
        return Err(CliError::Parse("axioms needs at least two samples".into()));
    }
    let (system_doc, echo) = load_system(system)?;
    let selected = kind.map(|k| match k {
        KindArg::Spectral => PressureKind::Spectral,
        KindArg::SupNorm => PressureKind::SupNorm,
        KindArg::MaxErgodic => PressureKind::MaxErgodic,
    });
    let kinds = match selected {
        Some(k) => vec![k],
        None => vec![PressureKind::Spectral, PressureKind::SupNorm, PressureKind::MaxErgodic],
    };
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    for k in kinds {
        let gamma = match PressureEvaluation::new(k, &system_doc) {
            Ok(g) => g,
            Err(e @ Error::Reducible { .. }) if kind.is_none() => {
                skipped.push(json!({ "kind": k, "reason": e.to_string() }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = |i: usize| if i.is_multiple_of(2) { PotentialDepth::Vertex } else { PotentialDepth::Edge };
        let pairs: Vec<_> = (0..samples)
            .map(|i| {
                let phi = random_potential(&gamma.graph, depth(i), SAMPLE_SCALE, &mut rng);
                let psi = random_potential(&gamma.graph, depth(i / 2), SAMPLE_SCALE, &mut rng);
                (phi, psi)
            })
            .collect();
        let report = axiom_check(&gamma, &pairs, &LAMBDAS, tolerances["axiom"])?;
        if !report.passed {
            failures.push(format!("{} pressure fails {} axiom checks", json!(k), report.failures.len()));
        }
        reports.push(report);
    }
    let inputs = json!({ "system": echo, "kind": selected, "samples": samples, "seed": seed });
    let results = json!({ "reports": reports, "skipped": skipped, "lambdas": LAMBDAS });
    let mut outcome = Outcome::new(RunReport::new("axioms", inputs, results, tolerances));
    outcome.failures = failures;
    Ok(outcome)
}
