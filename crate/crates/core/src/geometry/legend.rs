use serde::Serialize;

use super::{generate_mesh, GenSpec, GeometryError, Mesh};
use crate::emotion::{ParameterGroup, ShapeParameterId, ShapeParams};
use crate::scalar::Real;

pub const MIN_LEGEND_SIDE: u32 = 2;
pub const MAX_LEGEND_SIDE: u32 = 9;

/// One cell of the attribute legend. Rows grade the surface-texture group,
/// columns the overall-shape group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegendCell<T> {
    pub row: u32,
    pub col: u32,
    pub spec: GenSpec<T>,
}

/// Parameters for cell `(row, col)` of a `rows x cols` legend: overall-shape
/// parameters at fraction `col / (cols - 1)` of full scale and surface-texture
/// parameters at `row / (rows - 1)`.
pub fn legend_params<T: Real>(row: u32, col: u32, rows: u32, cols: u32) -> ShapeParams<T> {
    let mut p = ShapeParams::neutral();
    for id in ShapeParameterId::ALL {
        match id.group() {
            ParameterGroup::SurfaceTexture => p.set_fraction(id, row, rows - 1),
            ParameterGroup::OverallShape => p.set_fraction(id, col, cols - 1),
        }
    }
    p
}

fn check_grid(rows: u32, cols: u32) -> Result<(), GeometryError> {
    if rows > MAX_LEGEND_SIDE || cols > MAX_LEGEND_SIDE {
        return Err(GeometryError::GridTooLarge { rows, cols });
    }
    if rows < MIN_LEGEND_SIDE || cols < MIN_LEGEND_SIDE {
        return Err(GeometryError::GridTooSmall { rows, cols });
    }
    Ok(())
}

/// Row-major cell layout without meshes.
pub fn legend_layout<T: Real>(
    rows: u32,
    cols: u32,
    seed: u64,
    subdivision: u8,
) -> Result<Vec<LegendCell<T>>, GeometryError> {
    check_grid(rows, cols)?;
    let cells: Vec<_> = (0..rows)
        .flat_map(|row| (0..cols).map(move |col| (row, col)))
        .map(|(row, col)| LegendCell {
            row,
            col,
            spec: GenSpec::new(legend_params(row, col, rows, cols), seed, subdivision),
        })
        .collect();
    if let Some(c) = cells.first() {
        c.spec.validate()?;
    }
    Ok(cells)
}

/// A legend cell paired with its mesh.
pub type LegendEntry<T> = (LegendCell<T>, Mesh<T>);

/// Full legend grid, every cell meshed with the shared seed.
pub fn generate_legend<T: Real>(
    rows: u32,
    cols: u32,
    seed: u64,
    subdivision: u8,
) -> Result<Vec<LegendEntry<T>>, GeometryError> {
    legend_layout(rows, cols, seed, subdivision)?
        .into_iter()
        .map(|cell| generate_mesh(&cell.spec).map(|m| (cell, m)))
        .collect()
}
