use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub const TOL_ENV: &str = "ERGOMAX_TOL_OVERRIDES";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub timestamp: String,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, results: Value, tolerances: BTreeMap<String, f64>) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            results,
            tolerances,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Output of a command: the report, an optional CSV rendering of its table
/// and the identity checks that failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub csv: Option<String>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn new(report: RunReport) -> Self {
        Self { report, csv: None, failures: Vec::new() }
    }

    pub fn check(&mut self, holds: bool, what: impl FnOnce() -> String) {
        if !holds {
            self.failures.push(what());
        }
    }
}

/// `NAME=VALUE`.
pub fn parse_tol(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {text:?}"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("tolerance {name:?} is not a number: {value:?}"))?;
    if !value.is_finite() || value < 0.0 {
        return Err(format!("tolerance {name:?} must be finite and nonnegative"));
    }
    Ok((name.trim().to_string(), value))
}

/// Comma-separated `NAME=VALUE` list from the environment.
pub fn env_overrides() -> Result<Vec<(String, f64)>, CliError> {
    match std::env::var(TOL_ENV) {
        Ok(text) => text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_tol(s).map_err(|e| CliError::Parse(format!("{TOL_ENV}: {e}"))))
            .collect(),
        Err(_) => Ok(Vec::new()),
    }
}

/// Command defaults, then environment overrides, then `--tol` flags.
/// Unknown names are rejected.
pub fn resolve_tolerances(
    defaults: &[(&str, f64)],
    env: &[(String, f64)],
    flags: &[(String, f64)],
) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out: BTreeMap<String, f64> = defaults.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    for (name, value) in env.iter().chain(flags) {
        match out.get_mut(name) {
            Some(slot) => *slot = *value,
            None => {
                let known: Vec<&str> = defaults.iter().map(|d| d.0).collect();
                return Err(CliError::Parse(format!("unknown tolerance {name:?} (this command accepts {known:?})")));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_precedence() {
        let env = vec![("gap".to_string(), 1e-6), ("tight".to_string(), 1e-3)];
        let flags = vec![("gap".to_string(), 1e-4)];
        let t = resolve_tolerances(&[("gap", 1e-9), ("tight", 1e-9)], &env, &flags).unwrap();
        assert_eq!(t["gap"], 1e-4);
        assert_eq!(t["tight"], 1e-3);
        assert!(matches!(resolve_tolerances(&[("gap", 1.0)], &[], &[("nope".into(), 1.0)]), Err(CliError::Parse(_))));
    }

    #[test]
    fn tol_syntax() {
        assert_eq!(parse_tol("gap=1e-3"), Ok(("gap".to_string(), 1e-3)));
        assert!(parse_tol("gap").is_err());
        assert!(parse_tol("gap=x").is_err());
        assert!(parse_tol("gap=-1").is_err());
    }
}
