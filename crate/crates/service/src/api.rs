//! HTTP endpoints.
//!
//! | method | path               | body / params                          |
//! |--------|--------------------|----------------------------------------|
//! | GET    | `/videos`          | `offset`, `limit`                      |
//! | POST   | `/query`           | filter fields, `mode`, `keyword`       |
//! | GET    | `/bounds`          | `application`                          |
//! | POST   | `/events`          | one session event                      |
//! | GET    | `/metrics`         | `session_id`                           |
//! | GET    | `/metrics/summary` | `mode`                                 |
//! | POST   | `/sus`             | one SUS response                       |
//!
//! Every error is `{"error": {"code": ..., "message": ...}}`.

use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use percept_core::query::MetricRange;
use percept_core::session::{aggregate_study, AppendOutcome};
use percept_core::{
    application_bounds, content_search, execute_query, keyword_search, mean_sus_score, sus_score, Application,
    ContentFilter, InterfaceMode, QueryFilter, SessionError, SessionEvent, SusResponse,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::state::{AppState, RecordError};

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/videos", get(list_videos))
        .route("/query", post(run_query))
        .route("/bounds", get(bounds))
        .route("/events", post(record_event))
        .route("/metrics", get(session_metrics))
        .route("/metrics/summary", get(study_summary))
        .route("/sus", post(submit_sus))
        .fallback(not_found)
        .with_state(state)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    extra: Option<serde_json::Value>,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            extra: None,
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": { "code": self.code, "message": self.message } });
        if let (Some(extra), Some(map)) = (self.extra, body.as_object_mut()) {
            if let Some(fields) = extra.as_object() {
                map.extend(fields.clone());
            }
        }
        (self.status, Json(body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(rejection: JsonRejection) -> Self {
        ApiError::bad_request(rejection.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(rejection: QueryRejection) -> Self {
        ApiError::bad_request(rejection.body_text())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PageParams {
    offset: Option<usize>,
    limit: Option<usize>,
}

async fn list_videos(
    State(state): State<Arc<AppState>>,
    params: Result<Query<PageParams>, QueryRejection>,
) -> ApiResult<percept_core::ResultList> {
    let Query(params) = params?;
    let limit = params.limit.unwrap_or(state.page_size_default);
    Ok(Json(
        keyword_search(&state.dataset, "").page(params.offset.unwrap_or(0), limit),
    ))
}

/// Which of the three interfaces a query comes from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryMode {
    #[default]
    Perceptual,
    /// Keyword only.
    #[serde(alias = "ui1_keyword")]
    Ui1,
    /// Keyword plus content section.
    #[serde(alias = "ui2_content")]
    Ui2,
}

#[derive(Debug, Deserialize)]
pub struct QueryRequest {
    #[serde(flatten)]
    pub filter: QueryFilter,
    #[serde(default)]
    pub mode: QueryMode,
    #[serde(default)]
    pub keyword: Option<String>,
    #[serde(default)]
    pub offset: Option<usize>,
    #[serde(default)]
    pub limit: Option<usize>,
}

async fn run_query(
    State(state): State<Arc<AppState>>,
    body: Result<Json<QueryRequest>, JsonRejection>,
) -> ApiResult<percept_core::ResultList> {
    let Json(request) = body?;
    let keyword = request.keyword.as_deref().unwrap_or("");
    let result = match request.mode {
        QueryMode::Perceptual => execute_query(&state.dataset, &request.filter),
        QueryMode::Ui1 => keyword_search(&state.dataset, keyword),
        QueryMode::Ui2 => content_search(&state.dataset, keyword, &ContentFilter::from(&request.filter)),
    };
    let limit = request.limit.unwrap_or(usize::MAX);
    Ok(Json(result.page(request.offset.unwrap_or(0), limit)))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsParams {
    application: Application,
}

async fn bounds(
    State(state): State<Arc<AppState>>,
    params: Result<Query<BoundsParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(params) = params?;
    match application_bounds(&state.dataset, params.application) {
        Ok(bounds) => Ok(Json(bounds).into_response()),
        Err(missing) => {
            let full = MetricRange::FULL;
            let mut err = ApiError::new(StatusCode::NOT_FOUND, "no_videos_for_application", missing.to_string());
            err.extra = Some(json!({
                "application": params.application,
                "reset": {
                    "tingles": full,
                    "excitement": full,
                    "calmness": full,
                    "sadness": full,
                    "stress": full,
                }
            }));
            Err(err)
        }
    }
}

#[derive(Debug, Serialize)]
struct EventAck {
    status: AppendOutcome,
    session_id: String,
    events_in_session: usize,
}

async fn record_event(
    State(state): State<Arc<AppState>>,
    body: Result<Json<SessionEvent>, JsonRejection>,
) -> ApiResult<EventAck> {
    let Json(event) = body?;
    let session_id = event.session_id.clone();
    let mut store = state.sessions.lock().unwrap_or_else(|e| e.into_inner());
    let status = store.record(event).map_err(|e| match e {
        RecordError::Rejected(e) => ApiError::new(StatusCode::CONFLICT, "invalid_event", e.to_string()),
        RecordError::Io(e) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "persistence_failed", e.to_string()),
    })?;
    let events_in_session = store
        .log()
        .session_events(&session_id)
        .map_or(0, |events| events.len());
    Ok(Json(EventAck {
        status,
        session_id,
        events_in_session,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricsParams {
    session_id: String,
}

async fn session_metrics(
    State(state): State<Arc<AppState>>,
    params: Result<Query<MetricsParams>, QueryRejection>,
) -> ApiResult<percept_core::SessionMetrics> {
    let Query(params) = params?;
    let store = state.sessions.lock().unwrap_or_else(|e| e.into_inner());
    store
        .log()
        .compute_session_metrics(&params.session_id)
        .map(Json)
        .map_err(|e| ApiError::new(StatusCode::NOT_FOUND, "unknown_session", e.to_string()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummaryParams {
    mode: QueryMode,
}

impl From<QueryMode> for InterfaceMode {
    fn from(mode: QueryMode) -> Self {
        match mode {
            QueryMode::Perceptual => InterfaceMode::Perceptual,
            QueryMode::Ui1 => InterfaceMode::Ui1Keyword,
            QueryMode::Ui2 => InterfaceMode::Ui2Content,
        }
    }
}

async fn study_summary(
    State(state): State<Arc<AppState>>,
    params: Result<Query<SummaryParams>, QueryRejection>,
) -> ApiResult<percept_core::session::StudySummary> {
    let Query(params) = params?;
    let store = state.sessions.lock().unwrap_or_else(|e| e.into_inner());
    aggregate_study(store.log(), params.mode.into())
        .map(Json)
        .map_err(|e| match e {
            SessionError::NoSessionsForMode(_) => {
                ApiError::new(StatusCode::NOT_FOUND, "no_sessions_for_mode", e.to_string())
            }
            other => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", other.to_string()),
        })
}

#[derive(Debug, Serialize)]
struct SusAck {
    participant_id: String,
    score: f64,
    responses: usize,
    mean_score: f64,
}

async fn submit_sus(
    State(state): State<Arc<AppState>>,
    body: Result<Json<SusResponse>, JsonRejection>,
) -> ApiResult<SusAck> {
    let Json(response) = body?;
    let score = sus_score(&response);
    let participant_id = response.participant_id.clone();
    let mut stored = state.sus.lock().unwrap_or_else(|e| e.into_inner());
    stored.push(response);
    let mean_score = mean_sus_score(&stored).unwrap_or(score);
    Ok(Json(SusAck {
        participant_id,
        score,
        responses: stored.len(),
        mean_score,
    }))
}
