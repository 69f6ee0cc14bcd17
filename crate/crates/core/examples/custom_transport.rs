//! Plug an out-of-process activity model in through the `Transport` trait.
//! Here the "remote" is an in-process closure that answers with NRTL
//! values, so the resulting diagram matches the native one exactly.
//!
//! ```bash
//! cargo run -p thermoprop --example custom_transport
//! ```

use std::sync::Arc;

use serde_json::{json, Value};
use thermoprop::activity::{ActivityModel, Nrtl, NrtlParameterSet};
use thermoprop::adapter::{fetch_ln_gamma, AdapterError, Transport};
use thermoprop::registry::{
    register_component, resolve_activity_model, resolve_antoine, ExternalActivitySource, ProviderRegistry,
};
use thermoprop::units::{Kelvin, StateSpec};
use thermoprop::vle::{build_diagram, BinarySystem};

#[derive(Debug)]
struct InProcess {
    model: Nrtl,
    break_normalization: bool,
}

impl Transport for InProcess {
    fn call(&self, request: &Value) -> Result<Value, AdapterError> {
        let t = Kelvin(request["T_K"].as_f64().ok_or_else(|| AdapterError::ContractViolation("T_K".into()))?);
        let grid: Vec<f64> = serde_json::from_value(request["x1_grid"].clone())
            .map_err(|e| AdapterError::ContractViolation(e.to_string()))?;
        let (mut g1, g2): (Vec<f64>, Vec<f64>) = grid
            .iter()
            .map(|&x| self.model.ln_gamma(x, t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| AdapterError::RemoteUnavailable(e.to_string()))?
            .into_iter()
            .unzip();
        if self.break_normalization {
            *g1.last_mut().unwrap() = 0.1;
        }
        Ok(json!({ "ln_gamma1": g1, "ln_gamma2": g2 }))
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nrtl = Nrtl::new(NrtlParameterSet::three(1.1, 1.7, 0.45))?;
    let transport = Arc::new(InProcess {
        model: nrtl.clone(),
        break_normalization: false,
    });

    let values = fetch_ln_gamma(transport.as_ref(), ["CCCCCC", "CCO"], Kelvin(400.0), &[0.0, 0.5, 1.0])?;
    println!("remote ln gamma: {values:?}");

    let registry = ProviderRegistry::demo().with_activity_source("external", Arc::new(ExternalActivitySource::new(transport)));
    let hexane = register_component("CCCCCC", &registry)?;
    let ethanol = register_component("CCO", &registry)?;
    let psat = [resolve_antoine(&hexane, &registry)?, resolve_antoine(&ethanol, &registry)?];
    let state = StateSpec::isothermal(Kelvin(400.0))?;

    let remote = resolve_activity_model("external", [&hexane, &ethanol], &registry)?;
    let a = build_diagram(&state, &BinarySystem::new(psat[0], psat[1], remote))?;
    let b = build_diagram(&state, &BinarySystem::new(psat[0], psat[1], Arc::new(nrtl.clone())))?;
    println!("remote and native bubble lines identical: {}", a.bubble == b.bubble);

    let broken = InProcess {
        model: nrtl,
        break_normalization: true,
    };
    match fetch_ln_gamma(&broken, ["CCCCCC", "CCO"], Kelvin(400.0), &[0.0, 0.5, 1.0]) {
        Ok(_) => println!("accepted a bad reply"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
