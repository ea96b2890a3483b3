//! Affective data model: tokens, palettes with an edit log, and the mapping
//! from tokens onto shape parameters.

mod intensity;
mod mapping;
mod palette;
mod params;
mod token;

pub use intensity::Intensity;
pub use mapping::{resolve_parameters, Binding, MappingMatrix};
pub use palette::{apply_edit, EditEvent, EditKind, EditPayload, Palette};
pub use params::{ParameterGroup, ParameterKind, ShapeParameterId, ShapeParams, MAX_WAVES};
pub use token::{EmotionToken, Label, Provenance, MAX_LABEL_CHARS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("no token labelled {0:?} in the palette")]
    UnknownTarget(String),
    #[error("a token labelled {0:?} already exists")]
    DuplicateLabel(String),
    #[error("intensity {0} is outside 0.0..=4.5 or not a multiple of 0.1")]
    IntensityOutOfRange(f64),
    #[error("edit sequence {found} does not follow log length {expected}")]
    SequenceGap { expected: u64, found: u64 },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("malformed edit event: {0}")]
    MalformedEvent(String),
    #[error("palette tokens do not match the replayed edit log")]
    InconsistentPalette,
    #[error("invalid mapping matrix: {0}")]
    InvalidMatrix(String),
    #[error("shape parameter {parameter} = {value} is outside {lo}..={hi}")]
    ParameterOutOfRange {
        parameter: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
}
