use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApiError {
    #[error("no session with id {0:?}")]
    UnknownSession(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("a guess was already made in this session")]
    AlreadyGuessed,
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("procedure did not stop within {0} steps")]
    BudgetExhausted(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
}

impl ApiError {
    pub fn code(&self) -> &'static str {
        match self {
            ApiError::UnknownSession(_) => "unknown-session",
            ApiError::MalformedInput(_) => "malformed-input",
            ApiError::AlreadyGuessed => "already-guessed",
            ApiError::BadRequest(_) => "bad-request",
            ApiError::BudgetExhausted(_) => "budget-exhausted",
            ApiError::Internal(_) => "internal",
        }
    }

    fn status(&self) -> StatusCode {
        match self {
            ApiError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ApiError::MalformedInput(_) | ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::AlreadyGuessed => StatusCode::CONFLICT,
            ApiError::BudgetExhausted(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            code: self.code(),
            message: self.to_string(),
        };
        (self.status(), Json(body)).into_response()
    }
}
