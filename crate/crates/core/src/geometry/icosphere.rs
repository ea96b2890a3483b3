use std::collections::HashMap;

use super::{Mesh, Vec3};
use crate::scalar::Real;

/// Highest supported subdivision level.
pub const MAX_SUBDIVISION: u8 = 6;

/// Vertex count at subdivision level `s`: `10 * 4^s + 2`.
pub fn vertex_count(s: u8) -> usize {
    10 * 4usize.pow(u32::from(s)) + 2
}

/// Face count at subdivision level `s`: `20 * 4^s`.
pub fn face_count(s: u8) -> usize {
    20 * 4usize.pow(u32::from(s))
}

/// Regular icosahedron on the unit sphere with vertices at both poles.
/// Vertex 0 is `+z`, 1..=5 the upper ring, 6..=10 the lower ring, 11 is `-z`.
fn icosahedron<T: Real>() -> (Vec<Vec3<T>>, Vec<[u32; 3]>) {
    let ring_z = T::one() / T::lit(5.0).sqrt();
    let ring_r = T::lit(2.0) * ring_z;
    let step = T::TAU() / T::lit(5.0);
    let half = step / T::lit(2.0);

    let mut vertices = Vec::with_capacity(12);
    vertices.push(Vec3::new(T::zero(), T::zero(), T::one()));
    for k in 0..5 {
        let a = step * T::lit(f64::from(k));
        vertices.push(Vec3::new(ring_r * a.cos(), ring_r * a.sin(), ring_z));
    }
    for k in 0..5 {
        let a = step * T::lit(f64::from(k)) + half;
        vertices.push(Vec3::new(ring_r * a.cos(), ring_r * a.sin(), -ring_z));
    }
    vertices.push(Vec3::new(T::zero(), T::zero(), -T::one()));

    let mut faces = Vec::with_capacity(20);
    for k in 0..5u32 {
        let (u0, u1) = (1 + k, 1 + (k + 1) % 5);
        let (l0, l1) = (6 + k, 6 + (k + 1) % 5);
        faces.push([0, u0, u1]);
        faces.push([u0, l0, u1]);
        faces.push([u1, l0, l1]);
        faces.push([11, l1, l0]);
    }
    (vertices, faces)
}

/// Unit icosphere: the icosahedron with each triangle split into four,
/// `subdivision` times, new vertices pushed onto the sphere.
pub fn icosphere<T: Real>(subdivision: u8) -> Mesh<T> {
    let (mut vertices, mut faces) = icosahedron::<T>();
    for _ in 0..subdivision {
        let mut midpoints: HashMap<(u32, u32), u32> = HashMap::with_capacity(faces.len() * 3 / 2);
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: u32, b: u32, vertices: &mut Vec<Vec3<T>>| -> u32 {
            let key = if a < b { (a, b) } else { (b, a) };
            *midpoints.entry(key).or_insert_with(|| {
                let m = (vertices[a as usize] + vertices[b as usize]).normalized();
                vertices.push(m);
                (vertices.len() - 1) as u32
            })
        };
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    let normals = vertices.clone();
    Mesh {
        vertices,
        normals,
        faces,
    }
}
