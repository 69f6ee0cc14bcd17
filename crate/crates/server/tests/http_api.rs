mod common;

use std::sync::Arc;

use axum::http::StatusCode;
use serde_json::json;

use thermoprop::registry::ProviderRegistry;

use common::send;

fn demo() -> Arc<ProviderRegistry> {
    Arc::new(ProviderRegistry::demo())
}

#[tokio::test]
async fn healthz() {
    let r = send(&demo(), "GET", "/healthz", None, false).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), json!({"status": "ok"}));
}

#[tokio::test]
async fn models_are_listed() {
    let r = send(&demo(), "GET", "/v1/models", None, false).await;
    let names: Vec<String> = r.json()["models"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["name"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(names, ["nrtl", "nrtl-demo", "unifac", "unifac-modified"]);
}

#[tokio::test]
async fn invalid_smiles_is_422_with_offset() {
    let r = send(&demo(), "POST", "/v1/validate-smiles", Some(json!({"smiles": "C("})), false).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    let e = &r.json()["error"];
    assert_eq!(e["code"], "invalid_smiles");
    assert_eq!(e["module"], "chem");
    assert!(e["offset"].is_u64(), "{e}");
}

#[tokio::test]
async fn validate_echoes_canonical_form() {
    let r = send(&demo(), "POST", "/v1/validate-smiles", Some(json!({"smiles": "OCC"})), false).await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    assert_eq!(v["canonical_smiles"], "CCO");
    assert_eq!(v["input_smiles"], "OCC");
}

#[tokio::test]
async fn vle_surrogate_has_101_points_per_line() {
    let body = json!({"smiles": ["CCCCCC", "CCO"], "model": "nrtl-demo", "T_K": 400.0});
    let r = send(&demo(), "POST", "/v1/vle", Some(body), false).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let v = r.json();
    assert_eq!(v["bubble"].as_array().unwrap().len(), 101);
    assert_eq!(v["dew"].as_array().unwrap().len(), 101);
    assert_eq!(v["azeotropes"].as_array().unwrap().len(), 1);
    assert_eq!(v["mode"], "isothermal");
    assert_eq!(v["T_K"], 400.0);
    assert!(v["bubble"][0]["p_Pa"].is_f64());
}

#[tokio::test]
async fn vle_csv_on_request() {
    let body = json!({"smiles": ["CCCCCC", "CCO"], "model": "nrtl-demo", "T_K": 400.0});
    let r = send(&demo(), "POST", "/v1/vle", Some(body), true).await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.content_type.starts_with("text/csv"));
    let lines: Vec<&str> = r.body.lines().collect();
    assert_eq!(lines.len(), 203);
    assert_eq!(lines[0], "x1,y1,T_K,p_Pa,gamma1,gamma2,line");
    assert_eq!(lines.iter().filter(|l| l.ends_with(",dew")).count(), 101);
}

#[tokio::test]
async fn isobaric_vle_with_modified_unifac() {
    let body = json!({"smiles": ["Oc1ccccc1", "CCCc1ccccc1N"], "model": "unifac-modified", "p_Pa": 60000.0});
    let r = send(&demo(), "POST", "/v1/vle", Some(body), false).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    assert_eq!(r.json()["mode"], "isobaric");
}

#[tokio::test]
async fn pure_component_endpoints() {
    let r = send(&demo(), "POST", "/v1/vapor-pressure", Some(json!({"smiles": "CCO", "T_K": 351.4})), false).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let p = r.json()["p_Pa"].as_f64().unwrap();
    let r = send(&demo(), "POST", "/v1/boiling-temperature", Some(json!({"smiles": "CCO", "p_Pa": p})), false).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    assert!((r.json()["T_K"].as_f64().unwrap() - 351.4).abs() < 1e-9);
}

#[tokio::test]
async fn activity_csv_has_101_rows() {
    let body = json!({"smiles": ["CCCCCC", "CCO"], "model": "unifac", "T_K": 330.0});
    let r = send(&demo(), "POST", "/v1/activity", Some(body), true).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    assert_eq!(r.body.lines().count(), 102);
}

#[tokio::test]
async fn fit_three_parameters() {
    let body = json!({"smiles": ["CCCCCC", "CCO"], "model": "unifac", "variant": 3, "T_K": 330.0});
    let r = send(&demo(), "POST", "/v1/fit-nrtl", Some(body), false).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let v = r.json();
    assert_eq!(v["n_starts"], 8);
    assert_eq!(v["grid"]["variant"], 3);
    assert_eq!(v["fitted"][0]["x1"].as_array().unwrap().len(), 101);
    assert!(v["loss"].as_f64().unwrap() < 1e-2);
}

#[tokio::test]
async fn errors_carry_code_and_module() {
    let cases = [
        ("/v1/fit-nrtl", json!({"smiles": ["CCCCCC", "CCO"], "model": "unifac", "variant": 3, "T_range_K": [300.0, 400.0]}), "range_forbidden", "fit"),
        ("/v1/fit-nrtl", json!({"smiles": ["CCCCCC", "CCO"], "model": "unifac", "variant": 6, "T_K": 300.0}), "range_required", "fit"),
        ("/v1/vle", json!({"smiles": ["CCCCCC", "CCO"], "model": "nope", "T_K": 400.0}), "unknown_model", "registry"),
        ("/v1/vle", json!({"smiles": ["CCCCCC"], "model": "nrtl", "T_K": 400.0}), "component_count", "api"),
        ("/v1/vapor-pressure", json!({"smiles": "ClCCl", "T_K": 300.0}), "not_covered", "registry"),
        ("/v1/activity", json!({"smiles": ["O", "CN"], "model": "unifac", "T_K": 300.0}), "parameter_gap", "activity"),
    ];
    for (uri, body, code, module) in cases {
        let r = send(&demo(), "POST", uri, Some(body), false).await;
        assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY, "{uri}: {}", r.body);
        let e = &r.json()["error"];
        assert_eq!((e["code"].as_str().unwrap(), e["module"].as_str().unwrap()), (code, module), "{e}");
        assert!(!e["message"].as_str().unwrap().is_empty());
    }
}

#[tokio::test]
async fn malformed_body_and_unknown_path() {
    let r = send(&demo(), "POST", "/v1/vle", Some(json!({"smiles": 3})), false).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["error"]["code"], "malformed_request");
    let r = send(&demo(), "GET", "/v2/vle", None, false).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
}

/// The bundled modified UNIFAC OH/H2O row is illustrative and gives a bubble
/// temperature with several extrema; that diagram must not be released.
#[tokio::test]
async fn inconsistent_diagram_is_withheld() {
    let body = json!({"smiles": ["CCO", "O"], "model": "unifac-modified", "p_Pa": 101325.0});
    let r = send(&demo(), "POST", "/v1/vle", Some(body), true).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(r.content_type.starts_with("application/json"));
    let e = &r.json()["error"];
    assert_eq!(e["code"], "consistency_violation");
    assert_eq!(e["details"]["failed_checks"], json!(["slope_sign_agreement"]));
}
