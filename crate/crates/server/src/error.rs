use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use phemotion_ai::PipelineError;
use phemotion_core::{ExportError, GeometryError, ModelError};
use serde_json::json;

/// Every failure the HTTP layer reports. The body is
/// `{"error": <code>, "message": <text>}`; messages never quote chat text.
#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{message}")]
    BadRequest { code: &'static str, message: String },
    #[error("unknown session")]
    UnknownSession,
    #[error("AI features are disabled on this server")]
    ProviderDisabled,
    #[error("chat provider unavailable")]
    ProviderUnavailable,
    #[error("chat provider gave an unusable answer: {0}")]
    ProviderOutput(String),
    #[error("too many open sessions")]
    SessionLimit,
    #[error("transcript would be {bytes} bytes, the limit is {limit}")]
    TranscriptTooLarge { bytes: usize, limit: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

impl ApiError {
    pub fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        ApiError::BadRequest {
            code,
            message: message.into(),
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest { .. } => StatusCode::BAD_REQUEST,
            ApiError::UnknownSession => StatusCode::NOT_FOUND,
            ApiError::ProviderDisabled | ApiError::ProviderUnavailable | ApiError::SessionLimit => {
                StatusCode::SERVICE_UNAVAILABLE
            }
            ApiError::ProviderOutput(_) => StatusCode::BAD_GATEWAY,
            ApiError::TranscriptTooLarge { .. } => StatusCode::PAYLOAD_TOO_LARGE,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ApiError::BadRequest { code, .. } => code,
            ApiError::UnknownSession => "unknown_session",
            ApiError::ProviderDisabled => "provider_disabled",
            ApiError::ProviderUnavailable => "provider_unavailable",
            ApiError::ProviderOutput(_) => "malformed_provider_output",
            ApiError::SessionLimit => "session_limit",
            ApiError::TranscriptTooLarge { .. } => "transcript_too_large",
            ApiError::Internal(_) => "internal",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.code(), "message": self.to_string() });
        (self.status(), Json(body)).into_response()
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::UnknownTarget(_) => "unknown_target",
            ModelError::DuplicateLabel(_) => "duplicate_label",
            ModelError::IntensityOutOfRange(_) => "intensity_out_of_range",
            ModelError::SequenceGap { .. } => "sequence_gap",
            ModelError::InvalidLabel(_) => "invalid_label",
            ModelError::MalformedEvent(_) => "malformed_event",
            ModelError::InconsistentPalette => "inconsistent_palette",
            ModelError::InvalidMatrix(_) => "invalid_matrix",
            ModelError::ParameterOutOfRange { .. } => "parameter_out_of_range",
        };
        ApiError::bad_request(code, e.to_string())
    }
}

impl From<GeometryError> for ApiError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::InvalidParams(m) => m.into(),
            other => ApiError::bad_request("invalid_geometry", other.to_string()),
        }
    }
}

impl From<ExportError> for ApiError {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::InvalidMesh(_) => ApiError::Internal(e.to_string()),
            other => ApiError::bad_request("schema_violation", other.to_string()),
        }
    }
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::ProviderUnavailable(_) => ApiError::ProviderUnavailable,
            PipelineError::InvalidInput(m) => ApiError::bad_request("invalid_input", m),
            other => ApiError::ProviderOutput(other.to_string()),
        }
    }
}
