//! JSON contract for out-of-process property models.
//!
//! Antoine request: `{"smiles": ["CCO"]}`, response
//! `{"antoine": {"A": .., "B": .., "C": .., "t_min_K": .., "t_max_K": .., "p_unit": "bar"}}`
//! or `{"antoine": null}` when the remote does not cover the component.
//!
//! Activity request: `{"smiles": ["CCCCCC", "CCO"], "T_K": 400.0, "x1_grid": [0.0, ...]}`,
//! response `{"ln_gamma1": [...], "ln_gamma2": [...]}` aligned with the grid.
//!
//! Responses are checked against the same invariants as native models and
//! rejected (never repaired) when they fail.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::activity::{ActivityError, ActivityModel, NORMALIZATION_TOLERANCE};
use crate::antoine::AntoineParameterSet;
use crate::units::Kelvin;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum AdapterError {
    #[error("remote model unavailable: {0}")]
    RemoteUnavailable(String),
    #[error("remote model violated the contract: {0}")]
    ContractViolation(String),
}

/// Moves one JSON request to a remote model and returns its JSON reply.
pub trait Transport: Send + Sync + fmt::Debug {
    fn call(&self, request: &Value) -> Result<Value, AdapterError>;
}

#[derive(Debug, Serialize)]
pub struct ActivityRequest<'a> {
    pub smiles: [&'a str; 2],
    #[serde(rename = "T_K")]
    pub temperature: f64,
    pub x1_grid: &'a [f64],
}

#[derive(Debug, Deserialize)]
struct ActivityReply {
    ln_gamma1: Vec<f64>,
    ln_gamma2: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct AntoineReply {
    antoine: Option<AntoineParameterSet>,
}

/// Asks the remote for Antoine constants of one canonical SMILES.
pub fn fetch_antoine(
    transport: &dyn Transport,
    canonical_smiles: &str,
) -> Result<Option<AntoineParameterSet>, AdapterError> {
    let reply = transport.call(&json!({ "smiles": [canonical_smiles] }))?;
    let parsed: AntoineReply = serde_json::from_value(reply)
        .map_err(|e| AdapterError::ContractViolation(format!("malformed Antoine reply: {e}")))?;
    parsed
        .antoine
        .map(|p| {
            p.validated()
                .map_err(|e| AdapterError::ContractViolation(e.to_string()))
        })
        .transpose()
}

/// Asks the remote for ln gamma on `grid` and validates the reply.
pub fn fetch_ln_gamma(
    transport: &dyn Transport,
    smiles: [&str; 2],
    t: Kelvin,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>, AdapterError> {
    let request = serde_json::to_value(ActivityRequest {
        smiles,
        temperature: t.0,
        x1_grid: grid,
    })
    .expect("request serializes");
    let reply = transport.call(&request)?;
    let parsed: ActivityReply = serde_json::from_value(reply)
        .map_err(|e| AdapterError::ContractViolation(format!("malformed activity reply: {e}")))?;
    validate_activity_reply(grid, &parsed.ln_gamma1, &parsed.ln_gamma2)?;
    Ok(parsed.ln_gamma1.into_iter().zip(parsed.ln_gamma2).collect())
}

fn validate_activity_reply(grid: &[f64], g1: &[f64], g2: &[f64]) -> Result<(), AdapterError> {
    let violation = |m: String| Err(AdapterError::ContractViolation(m));
    if g1.len() != grid.len() || g2.len() != grid.len() {
        return violation(format!(
            "expected {} values per component, got {} and {}",
            grid.len(),
            g1.len(),
            g2.len()
        ));
    }
    for (k, &x) in grid.iter().enumerate() {
        if !(g1[k].is_finite() && g2[k].is_finite()) {
            return violation(format!("non-finite ln gamma at x1 = {x}"));
        }
        if x == 1.0 && g1[k].abs() > NORMALIZATION_TOLERANCE {
            return violation(format!("ln gamma1(x1 = 1) = {}, expected 0", g1[k]));
        }
        if x == 0.0 && g2[k].abs() > NORMALIZATION_TOLERANCE {
            return violation(format!("ln gamma2(x1 = 0) = {}, expected 0", g2[k]));
        }
    }
    Ok(())
}

/// Activity model served by a remote process.
#[derive(Debug, Clone)]
pub struct ExternalActivityModel {
    name: String,
    smiles: [String; 2],
    transport: Arc<dyn Transport>,
}

impl ExternalActivityModel {
    pub fn new(name: impl Into<String>, smiles: [String; 2], transport: Arc<dyn Transport>) -> Self {
        Self {
            name: name.into(),
            smiles,
            transport,
        }
    }
}

impl ActivityModel for ExternalActivityModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn ln_gamma(&self, x1: f64, t: Kelvin) -> Result<(f64, f64), ActivityError> {
        let v = self.ln_gamma_grid(&[x1], t)?;
        Ok(v[0])
    }

    fn ln_gamma_grid(&self, grid: &[f64], t: Kelvin) -> Result<Vec<(f64, f64)>, ActivityError> {
        fetch_ln_gamma(
            self.transport.as_ref(),
            [&self.smiles[0], &self.smiles[1]],
            t,
            grid,
        )
        .map_err(ActivityError::Remote)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::{activity_curve, Nrtl, NrtlParameterSet};

    #[derive(Debug)]
    struct Canned(Result<Value, AdapterError>);

    impl Transport for Canned {
        fn call(&self, _: &Value) -> Result<Value, AdapterError> {
            self.0.clone()
        }
    }

    /// Answers activity requests with a fixed NRTL model.
    #[derive(Debug)]
    struct NrtlEcho(Nrtl);

    impl Transport for NrtlEcho {
        fn call(&self, req: &Value) -> Result<Value, AdapterError> {
            let t = req["T_K"].as_f64().unwrap();
            let grid: Vec<f64> = serde_json::from_value(req["x1_grid"].clone()).unwrap();
            let vals: Vec<(f64, f64)> = grid
                .iter()
                .map(|&x| self.0.ln_gamma(x, Kelvin(t)).unwrap())
                .collect();
            let (a, b): (Vec<f64>, Vec<f64>) = vals.into_iter().unzip();
            Ok(json!({"ln_gamma1": a, "ln_gamma2": b}))
        }
    }

    #[test]
    fn normalization_violation_rejected() {
        let t = Canned(Ok(json!({"ln_gamma1": [1.0, 0.2], "ln_gamma2": [0.0, 0.5]})));
        let err = fetch_ln_gamma(&t, ["CC", "CO"], Kelvin(300.0), &[0.0, 1.0]).unwrap_err();
        assert!(matches!(err, AdapterError::ContractViolation(_)));
    }

    #[test]
    fn length_mismatch_rejected() {
        let t = Canned(Ok(json!({"ln_gamma1": [1.0], "ln_gamma2": [0.0, 0.5]})));
        assert!(fetch_ln_gamma(&t, ["CC", "CO"], Kelvin(300.0), &[0.0, 1.0]).is_err());
        let t = Canned(Ok(json!({"nothing": true})));
        assert!(matches!(
            fetch_ln_gamma(&t, ["CC", "CO"], Kelvin(300.0), &[0.5]),
            Err(AdapterError::ContractViolation(_))
        ));
    }

    #[test]
    fn unavailable_passes_through() {
        let t = Canned(Err(AdapterError::RemoteUnavailable("connection refused".into())));
        assert!(matches!(
            fetch_antoine(&t, "CCO"),
            Err(AdapterError::RemoteUnavailable(_))
        ));
    }

    #[test]
    fn antoine_reply_validated() {
        let t = Canned(Ok(json!({"antoine": {"A": 4.0, "B": 1000.0, "C": -50.0, "t_min_K": 400.0, "t_max_K": 300.0, "p_unit": "bar"}})));
        assert!(matches!(fetch_antoine(&t, "CCO"), Err(AdapterError::ContractViolation(_))));
        let t = Canned(Ok(json!({"antoine": null})));
        assert_eq!(fetch_antoine(&t, "CCO"), Ok(None));
    }

    #[test]
    fn echo_matches_native_path() {
        let native = Nrtl::new(NrtlParameterSet::three(0.5, 0.8, 0.3)).unwrap();
        let remote = ExternalActivityModel::new(
            "nrtl",
            ["CCCCCC".into(), "CCO".into()],
            Arc::new(NrtlEcho(native.clone())),
        );
        let a = activity_curve(&native, Kelvin(350.0), 0.01).unwrap();
        let b = activity_curve(&remote, Kelvin(350.0), 0.01).unwrap();
        assert_eq!(a, b);
    }
}
