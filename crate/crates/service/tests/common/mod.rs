#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use percept_service::api::router;
use percept_service::{AppState, ServiceConfig};
use serde_json::Value;
use tower::ServiceExt;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn config(manifest: &str, annotations: &str, log: &Path) -> ServiceConfig {
    ServiceConfig {
        manifest_path: data(manifest),
        annotations_path: data(annotations),
        session_log_path: log.to_path_buf(),
        listen_address: "127.0.0.1:0".into(),
        page_size_default: 20,
    }
}

/// Router over the five-video bounds fixture with a fresh session log.
pub fn fixture_app(log: &Path) -> (Arc<AppState>, Router) {
    let state = Arc::new(
        AppState::load(&config("fixtures/bounds_manifest.csv", "fixtures/bounds_annotations.csv", log)).unwrap(),
    );
    (state.clone(), router(state))
}

pub fn synthetic_app(log: &Path) -> (Arc<AppState>, Router) {
    let state = Arc::new(AppState::load(&config("manifest.csv", "annotations.csv", log)).unwrap());
    (state.clone(), router(state))
}

pub enum Payload<'a> {
    None,
    Json(&'a str),
    /// Raw text sent with a JSON content type.
    Raw(&'a str),
}

pub async fn call(app: &Router, method: &str, uri: &str, payload: Payload<'_>) -> (StatusCode, Value) {
    let builder = Request::builder().method(method).uri(uri);
    let request = match payload {
        Payload::None => builder.body(Body::empty()).unwrap(),
        Payload::Json(text) | Payload::Raw(text) => builder
            .header("content-type", "application/json")
            .body(Body::from(text.to_string()))
            .unwrap(),
    };
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let body = serde_json::from_slice(&bytes)
        .unwrap_or_else(|e| panic!("{method} {uri}: body is not JSON ({e}): {:?}", String::from_utf8_lossy(&bytes)));
    (status, body)
}

pub struct GoldenCase {
    pub name: &'static str,
    pub method: &'static str,
    pub uri: &'static str,
    pub body: Option<&'static str>,
}

const fn case(name: &'static str, method: &'static str, uri: &'static str, body: Option<&'static str>) -> GoldenCase {
    GoldenCase { name, method, uri, body }
}

/// Requests replayed in order against the fixture service; later cases see
/// the events posted by earlier ones.
pub const GOLDEN_CASES: &[GoldenCase] = &[
    case("videos_page", "GET", "/videos?offset=1&limit=2", None),
    case("videos_bad_params", "GET", "/videos?offset=minus", None),
    case("query_default", "POST", "/query", Some("{}")),
    case(
        "query_perceptual",
        "POST",
        "/query",
        Some(r#"{"application":"sleep","spoken":"non_spoken_only","calmness":{"lo":5.5,"hi":7.0}}"#),
    ),
    case("query_ui1", "POST", "/query", Some(r#"{"mode":"ui1","keyword":"tapping"}"#)),
    case(
        "query_ui2",
        "POST",
        "/query",
        Some(r#"{"mode":"ui2","keyword":"tapping","spoken":"non_spoken_only","tingles":{"lo":5.0,"hi":7.0},"calmness":{"lo":6.5,"hi":7.0}}"#),
    ),
    case("query_malformed", "POST", "/query", Some(r#"{"application":"sleep","#)),
    case("query_inverted_range", "POST", "/query", Some(r#"{"tingles":{"lo":6.0,"hi":2.0}}"#)),
    case("query_unknown_application", "POST", "/query", Some(r#"{"application":"gaming"}"#)),
    case("bounds_sleep", "GET", "/bounds?application=sleep", None),
    case("bounds_no_videos", "GET", "/bounds?application=concentration", None),
    case("bounds_unknown_application", "GET", "/bounds?application=gaming", None),
    case("bounds_missing_param", "GET", "/bounds", None),
    case(
        "event_query",
        "POST",
        "/events",
        Some(r#"{"session_id":"g1","timestamp_ms":0,"kind":"query_issued","interface_mode":"perceptual"}"#),
    ),
    case(
        "event_open",
        "POST",
        "/events",
        Some(r#"{"session_id":"g1","timestamp_ms":10000,"kind":"video_opened","video_id":"f1"}"#),
    ),
    case(
        "event_open_duplicate",
        "POST",
        "/events",
        Some(r#"{"session_id":"g1","timestamp_ms":10000,"kind":"video_opened","video_id":"f1"}"#),
    ),
    case(
        "event_mark",
        "POST",
        "/events",
        Some(r#"{"session_id":"g1","timestamp_ms":50000,"kind":"marked_satisfactory","video_id":"f1"}"#),
    ),
    case(
        "event_regression",
        "POST",
        "/events",
        Some(r#"{"session_id":"g1","timestamp_ms":100,"kind":"video_opened","video_id":"f2"}"#),
    ),
    case(
        "event_mark_unopened",
        "POST",
        "/events",
        Some(r#"{"session_id":"g1","timestamp_ms":60000,"kind":"marked_satisfactory","video_id":"f3"}"#),
    ),
    case("event_malformed", "POST", "/events", Some(r#"{"session_id":"g1","kind":"teleported"}"#)),
    case("metrics_session", "GET", "/metrics?session_id=g1", None),
    case("metrics_unknown_session", "GET", "/metrics?session_id=nobody", None),
    case("metrics_missing_param", "GET", "/metrics", None),
    case("summary_perceptual", "GET", "/metrics/summary?mode=perceptual", None),
    case("summary_no_sessions", "GET", "/metrics/summary?mode=ui2", None),
    case("summary_bad_mode", "GET", "/metrics/summary?mode=ui9", None),
    case("sus_submit", "POST", "/sus", Some(r#"{"participant_id":"u1","items":[4,2,4,2,4,2,4,2,4,2]}"#)),
    case("sus_second", "POST", "/sus", Some(r#"{"participant_id":"u2","items":[3,3,3,3,3,3,3,3,3,3]}"#)),
    case("sus_wrong_count", "POST", "/sus", Some(r#"{"participant_id":"u3","items":[3,3,3]}"#)),
    case("sus_out_of_range", "POST", "/sus", Some(r#"{"participant_id":"u3","items":[3,3,3,3,3,3,3,3,3,9]}"#)),
    case("unknown_route", "GET", "/nope", None),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Error bodies must be `{"error": {"code": str, "message": str}, ...}`.
pub fn is_error_object(body: &Value) -> bool {
    body["error"]["code"].is_string() && body["error"]["message"].is_string()
}

/// Replay every golden case. Returns a list of mismatch descriptions.
///
/// With `UPDATE_GOLDEN=1` the golden files are rewritten instead.
pub async fn run_golden_cases() -> Vec<String> {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = fixture_app(&dir.path().join("sessions.ndjson"));
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();

    for case in GOLDEN_CASES {
        let payload = match case.body {
            Some(text) => Payload::Raw(text),
            None => Payload::None,
        };
        let (status, body) = call(&app, case.method, case.uri, payload).await;
        let actual = serde_json::json!({ "status": status.as_u16(), "body": body });
        let path = golden_dir().join(format!("{}.json", case.name));

        if (status.is_client_error() || status.is_server_error()) && !is_error_object(&body) {
            failures.push(format!("{}: error response lacks error object: {body}", case.name));
        }
        if update {
            std::fs::write(&path, serde_json::to_string_pretty(&actual).unwrap() + "\n").unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(text) => {
                let expected: Value = serde_json::from_str(&text).unwrap();
                if expected != actual {
                    failures.push(format!(
                        "{}: golden mismatch\n  expected {expected}\n  actual   {actual}",
                        case.name
                    ));
                }
            }
            Err(e) => failures.push(format!("{}: cannot read {}: {e}", case.name, path.display())),
        }
    }
    failures
}
