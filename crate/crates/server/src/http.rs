//! `/v1` HTTP API.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, MethodRouter};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use thermoprop::registry::ProviderRegistry;

use crate::error::{ApiError, ErrorClass};
use crate::task::{run_task, validate_smiles, Task, TaskInput, TaskRequest};

pub const CSV_CONTENT_TYPE: &str = "text/csv; charset=utf-8";

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self.to_json())).into_response()
    }
}

type Shared = Arc<ProviderRegistry>;

pub fn router(registry: Arc<ProviderRegistry>) -> Router {
    Router::new()
        .route("/healthz", get(|| async { Json(json!({"status": "ok"})) }))
        .route("/v1/models", get(models))
        .route("/v1/validate-smiles", post(validate))
        .route("/v1/vapor-pressure", task_route(Task::VaporPressure))
        .route("/v1/boiling-temperature", task_route(Task::BoilingTemperature))
        .route("/v1/activity", task_route(Task::Activity))
        .route("/v1/vle", task_route(Task::Vle))
        .route("/v1/fit-nrtl", task_route(Task::NrtlFit))
        .fallback(not_found)
        .with_state(registry)
}

fn task_route(kind: Task) -> MethodRouter<Shared> {
    post(move |s: State<Shared>, h: HeaderMap, b: Bytes| task(kind, s, h, b))
}

async fn not_found() -> Response {
    let e = ApiError::new(ErrorClass::Malformed, "not_found", "api", "no such endpoint");
    (StatusCode::NOT_FOUND, Json(e.to_json())).into_response()
}

async fn models(State(registry): State<Shared>) -> Response {
    Json(json!({ "models": registry.models() })).into_response()
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(ErrorClass::Malformed, "malformed_request", "api", e.to_string()))
}

/// Runs CPU-bound work off the async executor.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ApiError::new(ErrorClass::Internal, "internal", "api", e.to_string())))
}

#[derive(Deserialize)]
struct ValidateBody {
    smiles: String,
}

async fn validate(State(registry): State<Shared>, body: Bytes) -> Response {
    let result = async {
        let b: ValidateBody = parse_body(&body)?;
        blocking(move || validate_smiles(&b.smiles, &registry)).await
    }
    .await;
    match result {
        Ok(c) => Json(c).into_response(),
        Err(e) => e.into_response(),
    }
}

fn wants_csv(headers: &HeaderMap) -> bool {
    headers
        .get_all(header::ACCEPT)
        .iter()
        .filter_map(|v| v.to_str().ok())
        .flat_map(|v| v.split(','))
        .any(|m| m.split(';').next().unwrap_or("").trim().eq_ignore_ascii_case("text/csv"))
}

async fn task(kind: Task, State(registry): State<Shared>, headers: HeaderMap, body: Bytes) -> Response {
    let result = async {
        let input: TaskInput = parse_body(&body)?;
        let request = TaskRequest { task: kind, input };
        blocking(move || run_task(&request, &registry)).await
    }
    .await;
    match result {
        Ok(out) if wants_csv(&headers) => {
            ([(header::CONTENT_TYPE, HeaderValue::from_static(CSV_CONTENT_TYPE))], out.to_csv()).into_response()
        }
        Ok(out) => Json(out.to_json()).into_response(),
        Err(e) => {
            tracing::info!(code = %e.code, module = %e.module, "request rejected");
            e.into_response()
        }
    }
}

/// Binds `addr` and serves until ctrl-c.
pub async fn serve(registry: ProviderRegistry, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(Arc::new(registry)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
