use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;

use roomfinder_core::Error;

/// An error answered as `{"error": code, "detail": text}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub detail: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            detail: detail.into(),
        }
    }

    pub fn invalid_request(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid_request", detail)
    }

    pub fn unknown_building(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "unknown_building", format!("no building {id:?}"))
    }

    pub fn snap_failed(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "snap_failed", detail)
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let (status, code) = match &err {
            Error::UnknownPlace(_) => (StatusCode::NOT_FOUND, "unknown_place"),
            Error::UnknownCharacteristic(_) => (StatusCode::BAD_REQUEST, "unknown_characteristic"),
            Error::UnknownLevel(_) => (StatusCode::BAD_REQUEST, "unknown_level"),
            Error::DegenerateRoute => (StatusCode::BAD_REQUEST, "degenerate_route"),
            Error::AmbiguousRoom { .. } => (StatusCode::CONFLICT, "ambiguous_room"),
            Error::InvalidInput(_) | Error::Json(_) => (StatusCode::BAD_REQUEST, "invalid_request"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        ApiError::new(status, code, err.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.code, "detail": self.detail });
        (self.status, Json(body)).into_response()
    }
}
