#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::routing::post;
use axum::{Json, Router};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use thermoprop::activity::{ActivityModel, Nrtl, NrtlParameterSet};
use thermoprop::registry::ProviderRegistry;
use thermoprop::units::Kelvin;
use thermoprop_server::http::router;

pub struct Reply {
    pub status: StatusCode,
    pub content_type: String,
    pub body: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.body).unwrap_or_else(|e| panic!("{e}: {}", self.body))
    }
}

pub async fn send(registry: &Arc<ProviderRegistry>, method: &str, uri: &str, body: Option<Value>, csv: bool) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    if csv {
        req = req.header(header::ACCEPT, "text/csv");
    }
    let req = match body {
        Some(b) => req
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = router(registry.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let content_type = resp
        .headers()
        .get(header::CONTENT_TYPE)
        .map(|v| v.to_str().unwrap().to_owned())
        .unwrap_or_default();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        content_type,
        body: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

/// The bundled hexane/ethanol surrogate pair.
pub fn surrogate_nrtl() -> Nrtl {
    Nrtl::new(NrtlParameterSet::three(1.1, 1.7, 0.45)).unwrap()
}

/// Remote activity model that answers with NRTL values, or with `tamper`
/// applied to them.
pub fn nrtl_stub(model: Nrtl, tamper: fn(&mut Vec<f64>, &[f64])) -> Router {
    let model = Arc::new(model);
    Router::new().route(
        "/activity",
        post(move |Json(req): Json<Value>| {
            let model = model.clone();
            async move {
                let t = req["T_K"].as_f64().unwrap();
                let grid: Vec<f64> = serde_json::from_value(req["x1_grid"].clone()).unwrap();
                let (mut g1, g2): (Vec<f64>, Vec<f64>) =
                    grid.iter().map(|&x| model.ln_gamma(x, Kelvin(t)).unwrap()).unzip();
                tamper(&mut g1, &grid);
                Json(json!({"ln_gamma1": g1, "ln_gamma2": g2}))
            }
        }),
    )
}

/// Serves `app` on an ephemeral local port and returns its base URL.
pub async fn spawn(app: Router) -> String {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    format!("http://{addr}")
}

/// A local port with nothing listening on it.
pub fn closed_port_url() -> String {
    let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = l.local_addr().unwrap().port();
    drop(l);
    format!("http://127.0.0.1:{port}/")
}

pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("thermoprop").chain(args.iter().copied());
    let code = thermoprop_server::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}
