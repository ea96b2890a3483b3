//! The downloadable export: a ZIP holding exactly `shape.obj` and
//! `manifest.json`.

use std::io::{Cursor, Write};

use phemotion_core::{generate_mesh, write_manifest, write_obj, GenSpec, MappingMatrix};
use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipWriter};

use crate::error::ApiError;

pub const OBJ_NAME: &str = "shape.obj";
pub const MANIFEST_NAME: &str = "manifest.json";

/// Mesh and manifest bytes for `matrix` rendered with `seed` and
/// `subdivision`.
pub fn render(
    matrix: &MappingMatrix,
    seed: u64,
    subdivision: u8,
) -> Result<(Vec<u8>, Vec<u8>), ApiError> {
    let spec = GenSpec::new(matrix.resolve(), seed, subdivision);
    spec.validate()?;
    let mesh = generate_mesh(&spec)?;
    let obj = write_obj(&mesh)?;
    let manifest = write_manifest(matrix, &spec)?;
    Ok((obj, manifest))
}

/// Zips the two files. Entry timestamps are fixed so equal inputs give
/// byte-equal archives.
pub fn zip_bundle(obj: &[u8], manifest: &[u8]) -> Result<Vec<u8>, ApiError> {
    let fail = |e: &dyn std::fmt::Display| ApiError::Internal(format!("zip: {e}"));
    let options = SimpleFileOptions::default()
        .compression_method(CompressionMethod::Deflated)
        .last_modified_time(DateTime::default())
        .unix_permissions(0o644);
    let mut zip = ZipWriter::new(Cursor::new(Vec::new()));
    for (name, bytes) in [(OBJ_NAME, obj), (MANIFEST_NAME, manifest)] {
        zip.start_file(name, options).map_err(|e| fail(&e))?;
        zip.write_all(bytes).map_err(|e| fail(&e))?;
    }
    Ok(zip.finish().map_err(|e| fail(&e))?.into_inner())
}
