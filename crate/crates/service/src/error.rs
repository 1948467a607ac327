use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("no session '{0}'")]
    UnknownSession(String),
    #[error("unknown strategy '{0}'")]
    UnknownStrategy(String),
    #[error("malformed configuration: {0}")]
    MalformedConfiguration(String),
    #[error("action listing is stale: expected step {expected}, session is at step {current}")]
    StaleActionIndex { expected: u32, current: u32 },
    #[error("action index {index} out of range ({len} actions)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("engine error: {0}")]
    Engine(String),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::UnknownSession(_) => "unknown_session",
            ServiceError::UnknownStrategy(_) => "unknown_strategy",
            ServiceError::MalformedConfiguration(_) => "malformed_configuration",
            ServiceError::StaleActionIndex { .. } => "stale_action_index",
            ServiceError::IndexOutOfRange { .. } => "index_out_of_range",
            ServiceError::NothingToUndo => "nothing_to_undo",
            ServiceError::Engine(_) => "engine_error",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ServiceError::UnknownStrategy(_)
            | ServiceError::MalformedConfiguration(_)
            | ServiceError::IndexOutOfRange { .. } => StatusCode::BAD_REQUEST,
            ServiceError::StaleActionIndex { .. } | ServiceError::NothingToUndo => StatusCode::CONFLICT,
            ServiceError::Engine(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: &'static str,
    message: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let body = ErrorBody { error: self.code(), message: self.to_string() };
        (self.status(), Json(body)).into_response()
    }
}
