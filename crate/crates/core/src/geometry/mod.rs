//! Deterministic deformed-sphere geometry.

pub mod icosphere;
mod kernel;
mod legend;
mod mesh;
pub mod noise;
mod vec3;

pub use icosphere::{face_count, icosphere, vertex_count, MAX_SUBDIVISION};
pub use kernel::{
    generate_mesh, GenSpec, RadialField, GLOBAL_SEED_MIX, SURFACE_OFFSET, SURFACE_SEED_MIX,
    WAVE_AMPLITUDE,
};
pub use legend::{
    generate_legend, legend_layout, legend_params, LegendCell, LegendEntry, MAX_LEGEND_SIDE,
    MIN_LEGEND_SIDE,
};
pub use mesh::{Mesh, MeshDefect};
pub use noise::{noise3, GradientNoise, SplitMix64};
pub use vec3::Vec3;

use crate::emotion::ModelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("subdivision {0} is outside 0..=6")]
    SubdivisionOutOfRange(u8),
    #[error("legend grid {rows}x{cols} exceeds 9x9")]
    GridTooLarge { rows: u32, cols: u32 },
    #[error("legend grid {rows}x{cols} needs at least 2 rows and 2 columns")]
    GridTooSmall { rows: u32, cols: u32 },
    #[error(transparent)]
    InvalidParams(#[from] ModelError),
}
