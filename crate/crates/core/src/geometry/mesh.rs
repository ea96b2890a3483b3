use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::scalar::Real;

/// Indexed triangle mesh with one normal per vertex. Faces wind
/// counter-clockwise seen from outside.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Mesh<T> {
    pub vertices: Vec<Vec3<T>>,
    pub normals: Vec<Vec3<T>>,
    pub faces: Vec<[u32; 3]>,
}

/// Reason a mesh fails its structural checks.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeshDefect {
    #[error("{normals} normals for {vertices} vertices")]
    NormalCountMismatch { vertices: usize, normals: usize },
    #[error("face {face} references vertex {index} of {vertices}")]
    IndexOutOfRange {
        face: usize,
        index: u32,
        vertices: usize,
    },
    #[error("vertex {0} has a non-finite coordinate")]
    NonFiniteVertex(usize),
    #[error("normal {0} is not unit length")]
    NonUnitNormal(usize),
}

impl<T: Real> Mesh<T> {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Checks normal count and length, index range and finiteness. Topology
    /// (closedness) is not checked here.
    pub fn check(&self) -> Result<(), MeshDefect> {
        if self.normals.len() != self.vertices.len() {
            return Err(MeshDefect::NormalCountMismatch {
                vertices: self.vertices.len(),
                normals: self.normals.len(),
            });
        }
        if let Some(i) = self.vertices.iter().position(|v| !v.is_finite()) {
            return Err(MeshDefect::NonFiniteVertex(i));
        }
        let tol = T::lit(1e-6).max(T::epsilon() * T::lit(8.0));
        if let Some(i) = self
            .normals
            .iter()
            .position(|n| !n.is_finite() || (n.norm() - T::one()).abs() > tol)
        {
            return Err(MeshDefect::NonUnitNormal(i));
        }
        let n = self.vertices.len();
        for (face, tri) in self.faces.iter().enumerate() {
            if let Some(&index) = tri.iter().find(|&&i| i as usize >= n) {
                return Err(MeshDefect::IndexOutOfRange {
                    face,
                    index,
                    vertices: n,
                });
            }
        }
        Ok(())
    }

    /// Replaces the normals with area-weighted averages of the adjacent face
    /// normals, renormalized.
    pub fn recompute_normals(&mut self) {
        let mut acc = vec![Vec3::zero(); self.vertices.len()];
        for &[a, b, c] in &self.faces {
            let (a, b, c) = (a as usize, b as usize, c as usize);
            let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
            // magnitude is twice the triangle area
            let n = (pb - pa).cross(pc - pa);
            acc[a] += n;
            acc[b] += n;
            acc[c] += n;
        }
        self.normals = acc.into_iter().map(Vec3::normalized).collect();
    }

    /// Flat `[x0, y0, z0, x1, ...]` position buffer.
    pub fn flat_positions(&self) -> Vec<T> {
        self.vertices.iter().flat_map(|v| v.to_array()).collect()
    }

    pub fn flat_normals(&self) -> Vec<T> {
        self.normals.iter().flat_map(|v| v.to_array()).collect()
    }

    pub fn flat_indices(&self) -> Vec<u32> {
        self.faces.iter().flatten().copied().collect()
    }
}
