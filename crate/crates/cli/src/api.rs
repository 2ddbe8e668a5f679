//! JSON API consumed by the web UI.
//!
//! Errors share one envelope, `{"error": {"code", "message"}}`.

use std::path::Path;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{any, get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::{ServeDir, ServeFile};

use semrank::ranking::CriteriaConfig;
use semrank::{
    ConceptTree, Engine, ExpansionConfig, Pipeline, RankedSession, RankedView, RunOptions, SessionError,
    SessionStore, ViewMode, WeightingConfig,
};

#[derive(Clone)]
pub struct AppState {
    pub pipeline: Arc<Pipeline>,
    pub store: Arc<SessionStore>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let (status, code) = match &e {
            SessionError::EmptyQuery => (StatusCode::BAD_REQUEST, "empty_query"),
            SessionError::NotFound(_) => (StatusCode::NOT_FOUND, "not_found"),
            SessionError::AllProvidersFailed { .. } => (StatusCode::BAD_GATEWAY, "all_providers_failed"),
            SessionError::UnknownEngine(_) => (StatusCode::BAD_REQUEST, "unknown_engine"),
            SessionError::InvalidRequest(_) => (StatusCode::BAD_REQUEST, "invalid_request"),
            SessionError::StoreCorrupt { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "store_corrupt"),
            SessionError::Io { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "io_error"),
        };
        if status.is_server_error() {
            tracing::error!(error = %e, "request failed");
        }
        ApiError::new(status, code, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "code": self.code, "message": self.message } });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Body of `POST /api/search`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRequest {
    pub query: String,
    #[serde(default)]
    pub engines: Option<Vec<Engine>>,
    #[serde(default)]
    pub top_n: Option<usize>,
    #[serde(default)]
    pub expansion: Option<ExpansionConfig>,
    #[serde(default)]
    pub weighting: Option<WeightingConfig>,
    #[serde(default)]
    pub criteria: Option<CriteriaConfig>,
}

async fn search(State(state): State<AppState>, body: Result<Json<SearchRequest>, JsonRejection>) -> ApiResult<RankedSession> {
    let Json(req) = body?;
    let opts = RunOptions {
        engines: req.engines,
        top_n: req.top_n,
        expansion: req.expansion,
        weighting: req.weighting,
        criteria: req.criteria,
    };
    let session = state.pipeline.run_session(&state.store, &req.query, &opts).await?;
    Ok(Json(session))
}

async fn get_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<RankedSession> {
    Ok(Json(state.store.get(&id)?))
}

#[derive(Debug, Deserialize)]
struct ViewParams {
    #[serde(default = "semantic_mode")]
    mode: String,
    engine: Option<String>,
}

fn semantic_mode() -> String {
    "semantic".into()
}

async fn view(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(params): Query<ViewParams>,
) -> ApiResult<RankedView> {
    let mode = ViewMode::parse(&params.mode, params.engine.as_deref().filter(|e| !e.is_empty()))?;
    Ok(Json(state.store.rerank_view(&id, mode)?))
}

#[derive(Debug, Deserialize)]
struct ConceptParams {
    #[serde(default)]
    query: String,
}

async fn concepts(State(state): State<AppState>, Query(params): Query<ConceptParams>) -> ApiResult<ConceptTree> {
    let sv = state.pipeline.expand(&params.query)?;
    Ok(Json(ConceptTree::from(&sv)))
}

#[derive(Debug, Serialize)]
struct Health {
    status: &'static str,
    version: &'static str,
    engines: Vec<Engine>,
    wordnet_synsets: usize,
}

async fn health(State(state): State<AppState>) -> Json<Health> {
    Json(Health {
        status: "ok",
        version: env!("CARGO_PKG_VERSION"),
        engines: state.pipeline.engines(),
        wordnet_synsets: state.pipeline.wordnet().synset_count(),
    })
}

async fn unknown_api() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such API endpoint")
}

/// The API under `/api`, plus the UI bundle under `/` when `ui_dir` exists.
pub fn router(state: AppState, ui_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/search", post(search))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/view", get(view))
        .route("/concepts", get(concepts))
        .route("/health", get(health))
        .route("/{*rest}", any(unknown_api))
        .with_state(state);
    let app = Router::new().nest("/api", api);
    match ui_dir.filter(|d| d.is_dir()) {
        Some(dir) => {
            // Unknown paths fall back to index.html so client-side routes load.
            let index = ServeFile::new(dir.join("index.html"));
            app.fallback_service(ServeDir::new(dir).fallback(index))
        }
        None => app,
    }
}
