//! Run the HTTP service in-process and talk to it as a client would.
//!
//! ```bash
//! cargo run -p thermoprop-server --example embedded_service
//! ```

use std::sync::Arc;

use serde_json::json;
use thermoprop::registry::ProviderRegistry;
use thermoprop_server::http::router;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rt = tokio::runtime::Runtime::new()?;
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let base = format!("http://{}", listener.local_addr()?);
    let app = router(Arc::new(ProviderRegistry::demo()));
    rt.spawn(async move { axum::serve(listener, app).await });

    let client = reqwest::blocking::Client::new();
    let health: serde_json::Value = client.get(format!("{base}/healthz")).send()?.json()?;
    println!("GET /healthz -> {health}");

    let r = client
        .post(format!("{base}/v1/vapor-pressure"))
        .json(&json!({"smiles": "CCO", "T_K": 351.4}))
        .send()?;
    println!("POST /v1/vapor-pressure -> {} {}", r.status(), r.text()?);

    let r = client
        .post(format!("{base}/v1/vle"))
        .header("Accept", "text/csv")
        .json(&json!({"smiles": ["c1ccccc1", "Cc1ccccc1"], "model": "unifac", "p_Pa": 101325.0}))
        .send()?;
    let status = r.status();
    let csv = r.text()?;
    println!("POST /v1/vle (csv) -> {status}, {} lines", csv.lines().count());
    for line in csv.lines().take(3) {
        println!("  {line}");
    }

    let r = client
        .post(format!("{base}/v1/fit-nrtl"))
        .json(&json!({"smiles": ["CCCCCC", "CCO"], "model": "unifac", "variant": 3, "T_range_K": [300.0, 350.0]}))
        .send()?;
    println!("POST /v1/fit-nrtl with a range -> {} {}", r.status(), r.text()?);

    let r = client
        .post(format!("{base}/v1/validate-smiles"))
        .json(&json!({"smiles": "c1ccc"}))
        .send()?;
    println!("POST /v1/validate-smiles -> {} {}", r.status(), r.text()?);
    Ok(())
}
