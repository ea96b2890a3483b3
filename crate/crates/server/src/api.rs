//! HTTP endpoints. Geometry endpoints are stateless; chat, extract, score and
//! palette edits act on one in-memory session at a time.

use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{FromRequest, Path, Query, Request, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use phemotion_ai::{ExtractionResult, Pipeline, ScoredToken};
use phemotion_core::emotion::ShapeParams;
use phemotion_core::geometry::{legend_layout, LegendCell};
use phemotion_core::{
    generate_mesh, write_obj, Binding, EditEvent, GenSpec, MappingMatrix, Palette,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bundle;
use crate::config::ServerConfig;
use crate::error::ApiError;
use crate::sessions::SessionStore;

/// Largest transcript, in bytes of user text, a session may accumulate.
pub const MAX_TRANSCRIPT_BYTES: usize = 32 * 1024;

pub struct AppState {
    pub config: ServerConfig,
    pub sessions: SessionStore,
    pipeline: Option<Pipeline>,
}

impl AppState {
    /// `pipeline` is `None` in manual mode.
    pub fn new(config: ServerConfig, pipeline: Option<Pipeline>) -> Self {
        let sessions = SessionStore::new(config.max_sessions, config.idle_timeout());
        AppState {
            config,
            sessions,
            pipeline,
        }
    }

    pub fn mode(&self) -> &'static str {
        if self.pipeline.is_some() {
            "ai_assisted"
        } else {
            "manual"
        }
    }

    fn pipeline(&self) -> Result<&Pipeline, ApiError> {
        self.pipeline.as_ref().ok_or(ApiError::ProviderDisabled)
    }
}

/// JSON body whose rejections use the API's error shape.
pub struct ApiJson<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for ApiJson<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        let bytes = Bytes::from_request(req, state)
            .await
            .map_err(|e| ApiError::bad_request("invalid_body", e.body_text()))?;
        serde_json::from_slice(&bytes)
            .map(ApiJson)
            .map_err(|e| ApiError::bad_request("schema_violation", e.to_string()))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/session", post(create_session))
        .route("/api/session/{id}", delete(delete_session))
        .route("/api/chat", post(chat))
        .route("/api/extract", post(extract))
        .route("/api/score", post(score))
        .route("/api/palette/edit", post(edit_palette))
        .route("/api/resolve", post(resolve))
        .route("/api/mesh", post(mesh))
        .route("/api/export", post(export))
        .route("/api/legend", get(legend))
        .layer(middleware::from_fn(log_request))
        .with_state(state)
}

/// Logs method, path, status and time. Bodies and query strings are never
/// logged.
async fn log_request(req: Request, next: Next) -> Response {
    let method = req.method().clone();
    let path = req.uri().path().to_owned();
    let start = Instant::now();
    let response = next.run(req).await;
    tracing::info!(
        %method,
        path,
        status = response.status().as_u16(),
        ms = start.elapsed().as_millis() as u64,
        "request"
    );
    response
}

async fn create_session(State(app): State<Arc<AppState>>) -> Result<Response, ApiError> {
    let id = app.sessions.create()?;
    let body = json!({
        "session_id": id,
        "mode": app.mode(),
        "preview_subdivision": app.config.preview_subdivision,
    });
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn delete_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    if app.sessions.remove(&id).await {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::UnknownSession)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChatRequest {
    session_id: String,
    #[serde(default)]
    message: Option<String>,
    /// Ask for a follow-up after a pause instead of answering a message.
    #[serde(default)]
    nudge: bool,
}

async fn chat(
    State(app): State<Arc<AppState>>,
    ApiJson(req): ApiJson<ChatRequest>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let pipeline = app.pipeline()?;
    let slot = app.sessions.get(&req.session_id)?;
    let mut data = slot.data.lock().await;
    let reply = if req.nudge {
        pipeline.nudge(&mut data.chat).await?
    } else {
        let message = req.message.unwrap_or_default();
        if message.trim().is_empty() {
            return Err(ApiError::bad_request("empty_message", "message is empty"));
        }
        let current = data.chat.transcript().len();
        let bytes = current + usize::from(current > 0) + message.len();
        if bytes > MAX_TRANSCRIPT_BYTES {
            return Err(ApiError::TranscriptTooLarge {
                bytes,
                limit: MAX_TRANSCRIPT_BYTES,
            });
        }
        pipeline.elicit_reply(&mut data.chat, &message).await?
    };
    Ok(Json(json!({ "reply": reply })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionRequest {
    session_id: String,
}

fn require_transcript(transcript: &str) -> Result<(), ApiError> {
    if transcript.trim().is_empty() {
        return Err(ApiError::bad_request(
            "empty_transcript",
            "the session has no user messages yet",
        ));
    }
    Ok(())
}

/// Suggests a palette from the session transcript and makes it the
/// session's palette, with an empty edit log.
async fn extract(
    State(app): State<Arc<AppState>>,
    ApiJson(req): ApiJson<SessionRequest>,
) -> Result<Json<ExtractionResult>, ApiError> {
    let pipeline = app.pipeline()?;
    let slot = app.sessions.get(&req.session_id)?;
    let mut data = slot.data.lock().await;
    let transcript = data.chat.transcript();
    require_transcript(&transcript)?;
    let result = pipeline.extract_tokens(&transcript).await?;
    data.palette = result.clone().into_palette()?;
    Ok(Json(result))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScoreRequest {
    session_id: String,
    labels: Vec<String>,
}

#[derive(Serialize)]
struct ScoreResponse {
    tokens: Vec<ScoredToken>,
    palette: Palette,
}

/// Scores `labels`; labels already in the session palette are rescored
/// through ordinary edit events.
async fn score(
    State(app): State<Arc<AppState>>,
    ApiJson(req): ApiJson<ScoreRequest>,
) -> Result<Json<ScoreResponse>, ApiError> {
    let pipeline = app.pipeline()?;
    let slot = app.sessions.get(&req.session_id)?;
    let mut data = slot.data.lock().await;
    let transcript = data.chat.transcript();
    require_transcript(&transcript)?;
    let tokens = pipeline.score_intensity(&transcript, &req.labels).await?;
    let mut palette = data.palette.clone();
    for t in &tokens {
        if palette
            .get(t.label.as_str())
            .is_some_and(|p| p.intensity != t.intensity)
        {
            palette = palette.rescore(t.label.as_str(), t.intensity.value())?;
        }
    }
    data.palette = palette.clone();
    Ok(Json(ScoreResponse { tokens, palette }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EditRequest {
    session_id: String,
    event: EditEvent,
}

async fn edit_palette(
    State(app): State<Arc<AppState>>,
    ApiJson(req): ApiJson<EditRequest>,
) -> Result<Json<Palette>, ApiError> {
    let slot = app.sessions.get(&req.session_id)?;
    let mut data = slot.data.lock().await;
    let next = data.palette.apply(req.event)?;
    data.palette = next.clone();
    Ok(Json(next))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResolveRequest {
    palette: Palette,
    #[serde(default)]
    bindings: Vec<Binding>,
}

async fn resolve(
    ApiJson(req): ApiJson<ResolveRequest>,
) -> Result<Json<ShapeParams<f64>>, ApiError> {
    let matrix = MappingMatrix::new(req.palette, req.bindings)?;
    Ok(Json(matrix.resolve()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshRequest {
    params: ShapeParams<f64>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    subdivision: Option<u8>,
}

/// Flat arrays, ready to upload as vertex buffers.
#[derive(Serialize, Deserialize)]
pub struct MeshBody {
    pub vertex_count: usize,
    pub face_count: usize,
    pub positions: Vec<f64>,
    pub normals: Vec<f64>,
    pub indices: Vec<u32>,
}

fn wants_obj(headers: &HeaderMap) -> bool {
    headers
        .get_all(header::ACCEPT)
        .iter()
        .filter_map(|v| v.to_str().ok())
        .any(|v| v.split(',').any(|m| m.trim().starts_with("text/plain")))
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn mesh(
    State(app): State<Arc<AppState>>,
    headers: HeaderMap,
    ApiJson(req): ApiJson<MeshRequest>,
) -> Result<Response, ApiError> {
    let spec = GenSpec::new(
        req.params,
        req.seed,
        req.subdivision.unwrap_or(app.config.preview_subdivision),
    );
    spec.validate()?;
    if wants_obj(&headers) {
        let obj = blocking(move || Ok(write_obj(&generate_mesh(&spec)?)?)).await?;
        return Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], obj).into_response());
    }
    let body = blocking(move || {
        let m = generate_mesh(&spec)?;
        Ok(MeshBody {
            vertex_count: m.vertex_count(),
            face_count: m.face_count(),
            positions: m.flat_positions(),
            normals: m.flat_normals(),
            indices: m.flat_indices(),
        })
    })
    .await?;
    Ok(Json(body).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExportRequest {
    palette: Palette,
    #[serde(default)]
    bindings: Vec<Binding>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    subdivision: Option<u8>,
}

async fn export(
    State(app): State<Arc<AppState>>,
    ApiJson(req): ApiJson<ExportRequest>,
) -> Result<Response, ApiError> {
    let matrix = MappingMatrix::new(req.palette, req.bindings)?;
    let subdivision = req.subdivision.unwrap_or(app.config.preview_subdivision);
    let seed = req.seed;
    let archive = blocking(move || {
        let (obj, manifest) = bundle::render(&matrix, seed, subdivision)?;
        bundle::zip_bundle(&obj, &manifest)
    })
    .await?;
    Ok((
        [
            (
                header::CONTENT_TYPE,
                HeaderValue::from_static("application/zip"),
            ),
            (
                header::CONTENT_DISPOSITION,
                HeaderValue::from_static("attachment; filename=\"phemotion.zip\""),
            ),
        ],
        archive,
    )
        .into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LegendQuery {
    rows: u32,
    cols: u32,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    subdivision: Option<u8>,
}

#[derive(Serialize)]
struct LegendResponse {
    rows: u32,
    cols: u32,
    cells: Vec<LegendCell<f64>>,
}

async fn legend(
    State(app): State<Arc<AppState>>,
    query: Result<Query<LegendQuery>, QueryRejection>,
) -> Result<Json<LegendResponse>, ApiError> {
    let Query(q) = query.map_err(|e| ApiError::bad_request("invalid_query", e.body_text()))?;
    let subdivision = q.subdivision.unwrap_or(app.config.preview_subdivision);
    let cells = legend_layout(q.rows, q.cols, q.seed, subdivision)?;
    Ok(Json(LegendResponse {
        rows: q.rows,
        cols: q.cols,
        cells,
    }))
}

/// Periodically evicts idle sessions until the returned handle is aborted.
pub fn spawn_sweeper(state: Arc<AppState>) -> tokio::task::JoinHandle<()> {
    let period =
        (state.sessions.idle_timeout() / 4).clamp(Duration::from_secs(1), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            let evicted = state.sessions.sweep(Instant::now());
            if evicted > 0 {
                tracing::info!(evicted, "idle sessions evicted");
            }
        }
    })
}
