//! OBJ mesh export and the JSON mapping manifest.

mod manifest;
mod obj;

pub use manifest::{
    read_manifest, write_manifest, History, Manifest, TokenEntry, MANIFEST_VERSION,
};
pub use obj::write_obj;

use crate::geometry::MeshDefect;

pub const OBJ_MEDIA_TYPE: &str = "text/plain";
pub const MANIFEST_MEDIA_TYPE: &str = "application/json";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExportError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(#[from] MeshDefect),
    #[error("malformed manifest JSON: {0}")]
    Parse(String),
    #[error("manifest schema violation: {0}")]
    SchemaViolation(String),
    #[error("manifest version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u64, expected: u32 },
}
