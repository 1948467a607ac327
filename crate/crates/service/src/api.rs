use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use rackconf_core::engine::SolveOptions;
use rackconf_core::model::{parse_configuration, ConfigurationState};
use rackconf_core::strategies::Strategy;
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;
use crate::session::{Session, Snapshot};
use crate::store::SessionStore;

#[derive(Debug, Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    /// Options for autocomplete; a time limit keeps a request bounded.
    pub solve: SolveOptions,
}

#[derive(Debug, Default, Deserialize)]
pub struct CreateSession {
    pub strategy: Option<String>,
    /// Initial configuration in the text fact format.
    pub configuration: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct ImportSession {
    pub strategy: Option<String>,
    /// Initial facts followed by numbered actions, as served by `/trace`.
    pub trace: String,
}

#[derive(Debug, Default, Deserialize)]
pub struct ApplyQuery {
    /// Step the caller's action listing belongs to.
    pub step: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Autocompleted {
    /// Solve status, `solved` when the history was extended.
    pub result: String,
    #[serde(flatten)]
    pub snapshot: Snapshot,
}

type ApiResult<T> = Result<T, ServiceError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/import", post(import_session))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route("/sessions/{id}/actions/{index}", post(apply_action))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/autocomplete", post(autocomplete))
        .route("/sessions/{id}/export", get(export))
        .route("/sessions/{id}/trace", get(trace))
        .with_state(state)
}

fn strategy_named(name: Option<&str>) -> ApiResult<Strategy> {
    match name {
        None => Ok(Strategy::Ui),
        Some(n) => n.parse().map_err(|_| ServiceError::UnknownStrategy(n.to_string())),
    }
}

async fn create_session(
    State(state): State<AppState>,
    body: Option<Json<CreateSession>>,
) -> ApiResult<(StatusCode, Json<Snapshot>)> {
    let Json(req) = body.unwrap_or_default();
    let strategy = strategy_named(req.strategy.as_deref())?;
    let initial = match req.configuration.as_deref() {
        Some(text) => parse_configuration(text).map_err(|e| ServiceError::MalformedConfiguration(e.to_string()))?,
        None => ConfigurationState::new(),
    };
    let session = Session::new(SessionStore::fresh_id(), strategy, initial);
    let snapshot = session.snapshot();
    state.store.insert(session);
    log::info!("created session {} ({})", snapshot.id, snapshot.strategy);
    Ok((StatusCode::CREATED, Json(snapshot)))
}

async fn import_session(
    State(state): State<AppState>,
    Json(req): Json<ImportSession>,
) -> ApiResult<(StatusCode, Json<Snapshot>)> {
    let strategy = strategy_named(req.strategy.as_deref())?;
    let session = Session::from_trace(SessionStore::fresh_id(), strategy, &req.trace)?;
    let snapshot = session.snapshot();
    state.store.insert(session);
    Ok((StatusCode::CREATED, Json(snapshot)))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Snapshot>> {
    let entry = state.store.get(&id)?;
    let session = entry.lock().expect("session lock");
    Ok(Json(session.snapshot()))
}

async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    state.store.remove(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn apply_action(
    State(state): State<AppState>,
    Path((id, index)): Path<(String, usize)>,
    Query(q): Query<ApplyQuery>,
) -> ApiResult<Json<Snapshot>> {
    let entry = state.store.get(&id)?;
    let mut session = entry.lock().expect("session lock");
    session.apply(index, q.step).map(Json)
}

async fn undo(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Snapshot>> {
    let entry = state.store.get(&id)?;
    let mut session = entry.lock().expect("session lock");
    session.undo().map(Json)
}

async fn autocomplete(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Autocompleted>> {
    let entry = state.store.get(&id)?;
    let opts = state.solve.clone();
    let outcome = tokio::task::spawn_blocking(move || {
        let mut session = entry.lock().expect("session lock");
        session.autocomplete(&opts)
    })
    .await
    .map_err(|e| ServiceError::Engine(e.to_string()))??;
    let (result, snapshot) = outcome;
    Ok(Json(Autocompleted { result: result.as_str().to_string(), snapshot }))
}

async fn export(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    let entry = state.store.get(&id)?;
    let text = entry.lock().expect("session lock").export();
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text))
}

async fn trace(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    let entry = state.store.get(&id)?;
    let text = entry.lock().expect("session lock").trace();
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text))
}
