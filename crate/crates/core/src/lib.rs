//! Core of the PhEmotion workbench: the affective palette model, the
//! deformed-sphere geometry kernel and fabrication export.
//!
//! The geometry is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix it to `f64`, which is what the exporters and the server use.
//! Intensities are exact tenths and never go through floating point.

pub mod emotion;
pub mod export;
pub mod geometry;
pub mod scalar;

pub use emotion::{
    apply_edit, resolve_parameters, Binding, EditEvent, EditKind, EmotionToken, Intensity, Label,
    MappingMatrix, ModelError, Palette, Provenance, ShapeParameterId,
};
pub use export::{read_manifest, write_manifest, write_obj, ExportError, Manifest};
pub use geometry::{generate_legend, generate_mesh, legend_layout, noise3, GeometryError};
pub use scalar::Real;

pub type ShapeParams = emotion::ShapeParams<f64>;
pub type GenSpec = geometry::GenSpec<f64>;
pub type Mesh = geometry::Mesh<f64>;
pub type Vec3 = geometry::Vec3<f64>;
pub type LegendCell = geometry::LegendCell<f64>;

pub type ShapeParams32 = emotion::ShapeParams<f32>;
pub type GenSpec32 = geometry::GenSpec<f32>;
pub type Mesh32 = geometry::Mesh<f32>;
