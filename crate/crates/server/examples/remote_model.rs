//! A remote activity model served over HTTP and consumed through the
//! `external` model name.
//!
//! The stub answers the activity contract with NRTL values for the
//! hexane/ethanol surrogate pair.
//!
//! ```bash
//! cargo run -p thermoprop-server --example remote_model
//! ```

use std::sync::Arc;

use axum::routing::post;
use axum::{Json, Router};
use serde_json::{json, Value};
use thermoprop::activity::{ActivityModel, Nrtl, NrtlParameterSet};
use thermoprop::units::Kelvin;
use thermoprop_server::config::Config;
use thermoprop_server::task::{run_task, TaskRequest};

fn stub() -> Router {
    let model = Arc::new(Nrtl::new(NrtlParameterSet::three(1.1, 1.7, 0.45)).unwrap());
    Router::new().route(
        "/activity",
        post(move |Json(req): Json<Value>| async move {
            let t = Kelvin(req["T_K"].as_f64().unwrap_or(f64::NAN));
            let grid: Vec<f64> = serde_json::from_value(req["x1_grid"].clone()).unwrap_or_default();
            let (g1, g2): (Vec<f64>, Vec<f64>) = grid.iter().filter_map(|&x| model.ln_gamma(x, t).ok()).unzip();
            Json(json!({ "ln_gamma1": g1, "ln_gamma2": g2 }))
        }),
    )
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rt = tokio::runtime::Runtime::new()?;
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let addr = listener.local_addr()?;
    rt.spawn(async move { axum::serve(listener, stub()).await });

    let mut config = Config::default();
    config.adapters.activity_url = Some(format!("http://{addr}/activity"));
    config.adapters.timeout_s = Some(5.0);
    let registry = config.build_registry()?;
    println!("models: {:?}", registry.models().iter().map(|m| &m.name).collect::<Vec<_>>());

    let request = |model: &str| -> TaskRequest {
        serde_json::from_value(json!({
            "task": "vle", "smiles": ["CCCCCC", "CCO"], "model": model, "T_K": 400.0
        }))
        .unwrap()
    };
    let remote = run_task(&request("external"), &registry).map_err(|e| e.to_json().to_string())?;
    let native = run_task(&request("nrtl-demo"), &registry).map_err(|e| e.to_json().to_string())?;
    assert_eq!(remote.to_csv(), native.to_csv());
    println!("remote diagram ({} CSV lines) matches the native one", remote.to_csv().lines().count());

    let activity: TaskRequest = serde_json::from_value(json!({
        "task": "activity", "smiles": ["CCCCCC", "CCO"], "model": "external", "T_K": 350.0
    }))?;
    print!("{}", run_task(&activity, &registry).map_err(|e| e.to_json().to_string())?.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
