use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use qcluster_cli::server::{router, ServerConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

fn fixture(name: &str) -> Value {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(match body {
            Some(v) => Body::from(v.to_string()),
            None => Body::empty(),
        })
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn session(app: &Router, seed: Value) -> (String, Value) {
    let (status, body) = call(app, "POST", "/api/session", Some(seed)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    (body["id"].as_str().unwrap().to_string(), body["state"].clone())
}

#[tokio::test]
async fn a2_session_flow() {
    let app = router(ServerConfig::default());
    let (id, initial) = session(&app, fixture("a2.json")).await;
    assert_eq!(initial["vars"].as_array().unwrap().len(), 2);
    assert_eq!(initial["canUndo"], false);

    let (status, state) = call(&app, "POST", &format!("/api/session/{id}/mutate"), Some(json!({"k": 1}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["badges"][0], json!({"barInvariant": true, "positive": true, "termCount": 2}));
    assert_eq!(state["history"], json!([1]));
    assert_eq!(state["L"], json!([[0, 2], [-2, 0]]));

    let (status, back) = call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(back.to_string(), initial.to_string());

    let (status, current) = call(&app, "GET", &format!("/api/session/{id}/state"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(current, initial);

    let (status, _) = call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn wrapped_seed_body_accepted() {
    let app = router(ServerConfig::default());
    let (_, state) = session(&app, json!({ "seed": fixture("kronecker.json") })).await;
    assert_eq!(state["B"], json!([[0, 2], [-2, 0]]));
}

#[tokio::test]
async fn bad_directions_are_400() {
    let app = router(ServerConfig::default());
    let (id, _) = session(&app, fixture("a2.json")).await;
    let uri = format!("/api/session/{id}/mutate");
    for body in [json!({"k": 7}), json!({"k": -1}), json!({"x": 1})] {
        let (status, _) = call(&app, "POST", &uri, Some(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
    }

    let (fid, _) = session(&app, fixture("f3.json")).await;
    let (status, body) = call(&app, "POST", &format!("/api/session/{fid}/mutate"), Some(json!({"k": 2}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].as_str().unwrap().contains("frozen"));
    let (_, state) = call(&app, "GET", &format!("/api/session/{fid}/state"), None).await;
    assert_eq!(state["history"], json!([]));
}

#[tokio::test]
async fn unknown_session_is_404() {
    let app = router(ServerConfig::default());
    let (status, _) = call(&app, "GET", "/api/session/00000000-0000-0000-0000-000000000000/state", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "GET", "/api/session/not-a-uuid/state", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn invalid_seed_is_422_with_violations() {
    let app = router(ServerConfig::default());
    let (status, body) = call(&app, "POST", "/api/session", Some(fixture("broken.json"))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let violations: Vec<&str> = body["violations"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(violations.iter().any(|v| v.starts_with("parity violation")), "{violations:?}");

    let incompatible = json!({"indices": {"ex": [1, 2]}, "L": [[0, 1], [-1, 0]], "B": [[0, 1], [-1, 0]]});
    let (status, _) = call(&app, "POST", "/api/session", Some(incompatible)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, _) = call(&app, "POST", "/api/session", Some(json!({"indices": 3}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn ledger_follows_mutation_and_decat() {
    let app = router(ServerConfig::default());
    let (id, state) = session(&app, fixture("f3.json")).await;
    assert_eq!(state["hasLedger"], true);
    assert_eq!(state["frozen"], json!([2, 3]));
    let uri = format!("/api/session/{id}/decat");
    let (status, body) = call(&app, "POST", &uri, Some(json!({"k": 1}))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!((body["m"].as_i64(), body["mPrime"].as_i64()), (Some(0), Some(3)));
    assert_eq!(body["delta"], 1);

    call(&app, "POST", &format!("/api/session/{id}/mutate"), Some(json!({"k": 1}))).await;
    let (status, body) = call(&app, "POST", &uri, Some(json!({"k": 1}))).await;
    assert_eq!(status, StatusCode::OK, "{body}");

    let (aid, _) = session(&app, fixture("a2.json")).await;
    let (status, _) = call(&app, "POST", &format!("/api/session/{aid}/decat"), Some(json!({"k": 1}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn audit_and_isolation() {
    let app = router(ServerConfig::default());
    let (a, _) = session(&app, fixture("kronecker.json")).await;
    let (b, b0) = session(&app, fixture("kronecker.json")).await;
    for k in [1, 2, 1, 2] {
        call(&app, "POST", &format!("/api/session/{a}/mutate"), Some(json!({"k": k}))).await;
    }
    let (status, report) = call(&app, "GET", &format!("/api/session/{a}/audit"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["passed"], true);
    assert_eq!(report["report"]["variables_checked"], 2);
    let (_, b_now) = call(&app, "GET", &format!("/api/session/{b}/state"), None).await;
    assert_eq!(b_now, b0);
}

#[tokio::test]
async fn expired_sessions_are_evicted() {
    let app = router(ServerConfig {
        ttl: std::time::Duration::ZERO,
        ..ServerConfig::default()
    });
    let (id, _) = session(&app, fixture("a2.json")).await;
    let (status, _) = call(&app, "GET", &format!("/api/session/{id}/state"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn cors_allows_local_origin() {
    let app = router(ServerConfig::default());
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/api/session")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    assert_eq!(
        resp.headers().get("access-control-allow-origin").unwrap(),
        "http://localhost:5173"
    );
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/api/session")
        .header("origin", "http://evil.example")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert!(resp.headers().get("access-control-allow-origin").is_none());
}
