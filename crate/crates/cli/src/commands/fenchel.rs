use std::path::Path;

use ergomax::convex::{bilinear_minimax, fr_duality_gap, BilinearGame, ExtReal, GridConvexFunction};
use serde::Deserialize;
use serde_json::json;

use super::read_file;
use crate::error::CliError;
use crate::report::{resolve_tolerances, Outcome, RunReport};

/// A duality instance read from JSON, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FenchelInstance {
    FenchelRockafellar {
        f: GridConvexFunction<f64>,
        g: GridConvexFunction<f64>,
        dual_grid: Vec<Vec<f64>>,
        lipschitz: f64,
    },
    Bilinear(BilinearGame<f64>),
}

pub fn fenchel(instance: &Path, tol: &[(String, f64)]) -> Result<Outcome, CliError> {
    let tolerances = resolve_tolerances(&[("minimax", 1e-6), ("weak_duality", 1e-12)], &[], tol)?;
    let text = read_file(instance)?;
    let parsed: FenchelInstance = serde_json::from_str(&text)?;
    let echo: serde_json::Value = serde_json::from_str(&text)?;
    let inputs = json!({ "path": instance.display().to_string(), "instance": echo });
    let weak = tolerances["weak_duality"];
    match parsed {
        FenchelInstance::FenchelRockafellar { f, g, dual_grid, lipschitz } => {
            if !(lipschitz.is_finite() && lipschitz >= 0.0) {
                return Err(CliError::Parse("lipschitz must be finite and nonnegative".into()));
            }
            let report = fr_duality_gap(&f, &g, dual_grid, lipschitz)?;
            let mut outcome = Outcome::new(RunReport::new("fenchel", inputs, json!(report), tolerances.clone()));
            outcome.check(report.primal >= ExtReal::Finite(report.dual - weak), || {
                format!("weak duality fails: primal {} < dual {}", report.primal, report.dual)
            });
            outcome.check(!report.qualified || report.within_tolerance, || {
                format!("qualified instance has gap {} above {}", report.gap, report.tolerance)
            });
            Ok(outcome)
        }
        FenchelInstance::Bilinear(game) => {
            let report = bilinear_minimax(&game)?;
            let mut outcome = Outcome::new(RunReport::new("fenchel", inputs, json!(report), tolerances.clone()));
            outcome.check(report.sup_inf <= report.inf_sup + weak, || {
                format!("sup inf {} exceeds inf sup {}", report.sup_inf, report.inf_sup)
            });
            outcome.check(!report.exact || report.gap <= tolerances["minimax"], || {
                format!("minimax gap {} exceeds tolerance", report.gap)
            });
            Ok(outcome)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_tags() {
        let b: FenchelInstance =
            serde_json::from_str(r#"{"kind":"bilinear","strategies":[[1,0],[0,1]],"simplex_dim":2}"#).unwrap();
        assert!(matches!(b, FenchelInstance::Bilinear(_)));
        assert!(serde_json::from_str::<FenchelInstance>(r#"{"kind":"bilinear","strategies":[[1]],"simplex_dim":1,"x":1}"#).is_err());
        let fr: FenchelInstance = serde_json::from_str(
            r#"{"kind":"fenchel_rockafellar","f":{"grid":[[0,1]],"values":[0,"+inf"]},"g":{"grid":[[0,1]],"values":[1,0]},"dual_grid":[[-1,0,1]],"lipschitz":1}"#,
        )
        .unwrap();
        assert!(matches!(fr, FenchelInstance::FenchelRockafellar { .. }));
        assert!(serde_json::from_str::<FenchelInstance>(r#"{"kind":"other"}"#).is_err());
    }
}
