//! Strict JSON manifest describing an exported mapping matrix.
//!
//! ```json
//! {
//!   "version": 1,
//!   "tokens": [{"label": "Nostalgia", "intensity": 4.0, "provenance": "ai_suggested"}],
//!   "bindings": [{"token": "Nostalgia", "parameter": "number_of_waves"}],
//!   "resolved": {"number_of_waves": 11, "global_distortion": 0.0, ...},
//!   "seed": 0,
//!   "subdivision": 4,
//!   "history": {"initial": [...], "edits": [...]}
//! }
//! ```
//!
//! `history` records the starting palette and edit log. It is omitted when the
//! palette is an unedited snapshot and optional on read. Unknown fields are
//! rejected everywhere, and `resolved` must agree with the bindings.

use serde::{Deserialize, Serialize};

use super::ExportError;
use crate::emotion::{
    Binding, EditEvent, EmotionToken, Intensity, Label, MappingMatrix, Palette, Provenance,
    ShapeParams,
};
use crate::geometry::GenSpec;
use crate::scalar::Real;

pub const MANIFEST_VERSION: u32 = 1;

/// Tolerance when checking a parsed `resolved` block against the bindings.
const RESOLVED_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokenEntry {
    pub label: Label,
    pub intensity: Intensity,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct History {
    pub initial: Vec<EmotionToken>,
    pub edits: Vec<EditEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    pub tokens: Vec<TokenEntry>,
    pub bindings: Vec<Binding>,
    pub resolved: ShapeParams<f64>,
    pub seed: u64,
    pub subdivision: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history: Option<History>,
}

impl Manifest {
    pub fn new(matrix: &MappingMatrix, seed: u64, subdivision: u8) -> Self {
        let palette = matrix.palette();
        let snapshot = palette.edit_log().is_empty()
            && palette.initial() == palette.tokens()
            && palette.tokens().iter().all(|t| !t.renamed);
        Manifest {
            version: MANIFEST_VERSION,
            tokens: palette
                .tokens()
                .iter()
                .map(|t| TokenEntry {
                    label: t.label.clone(),
                    intensity: t.intensity,
                    provenance: t.provenance,
                })
                .collect(),
            bindings: matrix.bindings().to_vec(),
            resolved: matrix.resolve(),
            seed,
            subdivision,
            history: (!snapshot).then(|| History {
                initial: palette.initial().to_vec(),
                edits: palette.edit_log().to_vec(),
            }),
        }
    }

    /// Rebuilds the mapping matrix, checking that tokens, history and the
    /// resolved block are mutually consistent.
    pub fn to_matrix(&self) -> Result<MappingMatrix, ExportError> {
        let schema = |e: crate::emotion::ModelError| ExportError::SchemaViolation(e.to_string());
        let palette = match &self.history {
            Some(h) => {
                let p = Palette::replay(h.initial.clone(), h.edits.clone()).map_err(schema)?;
                let listed = p
                    .tokens()
                    .iter()
                    .map(|t| (&t.label, t.intensity, t.provenance))
                    .eq(self
                        .tokens
                        .iter()
                        .map(|t| (&t.label, t.intensity, t.provenance)));
                if !listed {
                    return Err(ExportError::SchemaViolation(
                        "tokens do not match the replayed history".into(),
                    ));
                }
                p
            }
            None => Palette::from_initial(
                self.tokens
                    .iter()
                    .map(|t| EmotionToken::new(t.label.clone(), t.intensity, t.provenance))
                    .collect(),
            )
            .map_err(schema)?,
        };
        let matrix = MappingMatrix::new(palette, self.bindings.clone()).map_err(schema)?;
        let expected: ShapeParams<f64> = matrix.resolve();
        let consistent = expected.waves == self.resolved.waves
            && crate::emotion::ShapeParameterId::ALL
                .into_iter()
                .all(|id| (expected.get(id) - self.resolved.get(id)).abs() <= RESOLVED_TOLERANCE);
        if !consistent {
            return Err(ExportError::SchemaViolation(
                "resolved block does not match the bindings".into(),
            ));
        }
        Ok(matrix)
    }

    pub fn gen_spec<T: Real>(&self, matrix: &MappingMatrix) -> Result<GenSpec<T>, ExportError> {
        let spec = GenSpec::new(matrix.resolve(), self.seed, self.subdivision);
        spec.validate()
            .map_err(|e| ExportError::SchemaViolation(e.to_string()))?;
        Ok(spec)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out =
            serde_json::to_vec_pretty(self).expect("manifest serialization is infallible");
        out.push(b'\n');
        out
    }

    /// Parses a manifest, checking the version before the schema.
    pub fn parse(bytes: &[u8]) -> Result<Self, ExportError> {
        let value: serde_json::Value =
            serde_json::from_slice(bytes).map_err(|e| ExportError::Parse(e.to_string()))?;
        let version = value
            .get("version")
            .ok_or_else(|| ExportError::SchemaViolation("missing field `version`".into()))?;
        match version.as_u64() {
            Some(v) if v == u64::from(MANIFEST_VERSION) => {}
            Some(v) => {
                return Err(ExportError::VersionMismatch {
                    found: v,
                    expected: MANIFEST_VERSION,
                })
            }
            None => {
                return Err(ExportError::SchemaViolation(
                    "`version` must be an integer".into(),
                ))
            }
        }
        serde_json::from_value(value).map_err(|e| ExportError::SchemaViolation(e.to_string()))
    }
}

/// Serializes a matrix and generation spec. The spec's parameters must equal
/// the matrix's resolution.
pub fn write_manifest<T: Real>(
    matrix: &MappingMatrix,
    spec: &GenSpec<T>,
) -> Result<Vec<u8>, ExportError> {
    if spec.params != matrix.resolve::<T>() {
        return Err(ExportError::SchemaViolation(
            "generation parameters differ from the mapping's resolution".into(),
        ));
    }
    spec.validate()
        .map_err(|e| ExportError::SchemaViolation(e.to_string()))?;
    Ok(Manifest::new(matrix, spec.seed, spec.subdivision).to_bytes())
}

pub fn read_manifest<T: Real>(bytes: &[u8]) -> Result<(MappingMatrix, GenSpec<T>), ExportError> {
    let manifest = Manifest::parse(bytes)?;
    let matrix = manifest.to_matrix()?;
    let spec = manifest.gen_spec(&matrix)?;
    Ok((matrix, spec))
}
