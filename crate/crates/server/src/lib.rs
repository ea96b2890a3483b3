//! HTTP service and CLI for the workbench: chat, extraction, scoring, palette
//! editing, parameter resolution, mesh preview, export and the legend grid.

pub mod api;
pub mod bundle;
pub mod cli;
pub mod config;
pub mod error;
pub mod sessions;

pub use api::{router, AppState, MAX_TRANSCRIPT_BYTES};
pub use config::ServerConfig;
pub use error::ApiError;
