//! HTTP API over a single live recording session, plus a server-sent event
//! stream of tree, highlight and phase updates.

use std::convert::Infallible;
use std::sync::{Arc, Mutex};

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use droidreplay_core::device::{App, DeviceError, DeviceProfile, Gesture, KeyType};
use droidreplay_core::live::{AssertCommit, LiveError, LiveSession, Phase};
use droidreplay_core::oracle::PropertyRegistry;
use futures::stream::{self, Stream, StreamExt};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tokio::sync::broadcast;

pub struct ServiceConfig {
    pub app: Arc<App>,
    pub device: DeviceProfile,
    pub registry: Arc<PropertyRegistry>,
}

struct Shared {
    config: ServiceConfig,
    session: Mutex<Option<LiveSession>>,
    updates: broadcast::Sender<Value>,
}

type AppState = Arc<Shared>;

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<LiveError> for ApiError {
    fn from(e: LiveError) -> Self {
        let status = match &e {
            LiveError::WrongPhase { .. } | LiveError::NoSelection => StatusCode::CONFLICT,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(status, e.to_string())
    }
}

impl From<DeviceError> for ApiError {
    fn from(e: DeviceError) -> Self {
        ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

fn no_session() -> ApiError {
    ApiError(StatusCode::CONFLICT, "no live session".into())
}

fn snapshot(session: &LiveSession) -> Vec<Value> {
    vec![
        json!({ "type": "tree", "payload": **session.tree() }),
        json!({ "type": "highlight", "payload": session.selection().map(|s| s.bounds) }),
        json!({ "type": "phase", "payload": session.phase() }),
    ]
}

impl Shared {
    /// Runs `f` on the live session and broadcasts the resulting state.
    fn with_session<T>(&self, f: impl FnOnce(&mut LiveSession) -> Result<T, ApiError>) -> Result<T, ApiError> {
        let mut guard = self.session.lock().expect("session lock");
        let session = guard.as_mut().ok_or_else(no_session)?;
        let out = f(session);
        for update in snapshot(session) {
            let _ = self.updates.send(update);
        }
        out
    }
}

#[derive(Deserialize)]
struct PointBody {
    x: i32,
    y: i32,
    #[serde(default)]
    timestamp: Option<u64>,
}

#[derive(Deserialize)]
struct KeyBody {
    key: KeyType,
    #[serde(default)]
    timestamp: Option<u64>,
}

async fn start(State(state): State<AppState>) -> ApiResult {
    let mut guard = state.session.lock().expect("session lock");
    if guard.as_ref().is_some_and(|s| s.phase() != Phase::Stopped) {
        return Err(ApiError(StatusCode::CONFLICT, "a session is already live".into()));
    }
    let c = &state.config;
    let session = LiveSession::start(c.app.clone(), c.device.clone(), c.registry.clone())?;
    for update in snapshot(&session) {
        let _ = state.updates.send(update);
    }
    let phase = session.phase();
    *guard = Some(session);
    Ok(Json(json!({ "phase": phase })))
}

async fn status(State(state): State<AppState>) -> ApiResult {
    let guard = state.session.lock().expect("session lock");
    let session = guard.as_ref().ok_or_else(no_session)?;
    Ok(Json(json!({
        "phase": session.phase(),
        "package": state.config.app.package(),
        "device": state.config.device.name,
        "actions": session.trace().actions.len(),
    })))
}

async fn tree(State(state): State<AppState>) -> ApiResult {
    let guard = state.session.lock().expect("session lock");
    let session = guard.as_ref().ok_or_else(no_session)?;
    Ok(Json(json!(**session.tree())))
}

async fn gesture(State(state): State<AppState>, Json(g): Json<Gesture>) -> ApiResult {
    state.with_session(|s| Ok(Json(json!(s.gesture(&g)?))))
}

async fn key(State(state): State<AppState>, Json(k): Json<KeyBody>) -> ApiResult {
    state.with_session(|s| {
        let ts = k.timestamp.unwrap_or_else(|| s.clock());
        Ok(Json(json!(s.key(k.key, ts)?)))
    })
}

async fn assert_begin(State(state): State<AppState>, Json(p): Json<PointBody>) -> ApiResult {
    state.with_session(|s| Ok(Json(json!({ "selection": s.assert_begin(p.x, p.y)? }))))
}

async fn assert_properties(State(state): State<AppState>, Json(p): Json<PointBody>) -> ApiResult {
    state.with_session(|s| Ok(Json(json!({ "selection": s.assert_select(p.x, p.y)? }))))
}

async fn assert_commit(State(state): State<AppState>, Json(c): Json<AssertCommit>) -> ApiResult {
    state.with_session(|s| Ok(Json(json!(s.assert_commit(&c)?))))
}

async fn assert_cancel(State(state): State<AppState>) -> ApiResult {
    state.with_session(|s| {
        s.assert_cancel()?;
        Ok(Json(json!({ "phase": s.phase() })))
    })
}

async fn assert_auto(State(state): State<AppState>, Json(p): Json<PointBody>) -> ApiResult {
    state.with_session(|s| Ok(Json(json!(s.assert_auto(p.x, p.y, p.timestamp)?))))
}

async fn stop(State(state): State<AppState>) -> ApiResult {
    state.with_session(|s| Ok(Json(json!(s.stop()?))))
}

async fn events(State(state): State<AppState>) -> Sse<impl Stream<Item = Result<Event, Infallible>>> {
    let rx = state.updates.subscribe();
    let initial = state.session.lock().expect("session lock").as_ref().map(snapshot).unwrap_or_default();
    let live = stream::unfold(rx, |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(v) => return Some((v, rx)),
                Err(broadcast::error::RecvError::Lagged(_)) => continue,
                Err(broadcast::error::RecvError::Closed) => return None,
            }
        }
    });
    let stream = stream::iter(initial).chain(live).map(|v| Ok(Event::default().data(v.to_string())));
    Sse::new(stream).keep_alive(KeepAlive::default())
}

/// Router with a session already started.
pub fn router(config: ServiceConfig) -> Result<Router, DeviceError> {
    let session = LiveSession::start(config.app.clone(), config.device.clone(), config.registry.clone())?;
    let (updates, _) = broadcast::channel(256);
    let state = Arc::new(Shared { config, session: Mutex::new(Some(session)), updates });
    Ok(Router::new()
        .route("/session", get(status))
        .route("/session/start", post(start))
        .route("/session/tree", get(tree))
        .route("/session/events", get(events))
        .route("/session/gesture", post(gesture))
        .route("/session/key", post(key))
        .route("/session/assert/begin", post(assert_begin))
        .route("/session/assert/properties", post(assert_properties))
        .route("/session/assert/commit", post(assert_commit))
        .route("/session/assert/cancel", post(assert_cancel))
        .route("/session/assert/auto", post(assert_auto))
        .route("/session/stop", post(stop))
        .with_state(state))
}

pub async fn serve(listener: TcpListener, config: ServiceConfig) -> anyhow::Result<()> {
    axum::serve(listener, router(config)?).await?;
    Ok(())
}
