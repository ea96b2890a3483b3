use std::fmt::Write;

use super::ExportError;
use crate::geometry::{Mesh, Vec3};
use crate::scalar::Real;

/// Serializes a mesh as ASCII Wavefront OBJ: a header comment, `v` lines,
/// `vn` lines, then `f a//a b//b c//c` with 1-based indices. Every decimal
/// has exactly six fractional digits; negative zero prints as zero.
pub fn write_obj<T: Real>(mesh: &Mesh<T>) -> Result<Vec<u8>, ExportError> {
    mesh.check()?;
    // ~36 bytes per v/vn line, ~30 per face
    let mut out = String::with_capacity(72 * mesh.vertices.len() + 32 * mesh.faces.len() + 64);
    writeln!(
        out,
        "# phemotion mesh: {} vertices, {} faces",
        mesh.vertices.len(),
        mesh.faces.len()
    )
    .expect("writing to a String cannot fail");
    for v in &mesh.vertices {
        push_triple(&mut out, "v", *v);
    }
    for n in &mesh.normals {
        push_triple(&mut out, "vn", *n);
    }
    for &[a, b, c] in &mesh.faces {
        let (a, b, c) = (a + 1, b + 1, c + 1);
        writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}").expect("writing to a String cannot fail");
    }
    Ok(out.into_bytes())
}

fn push_triple<T: Real>(out: &mut String, tag: &str, v: Vec3<T>) {
    out.push_str(tag);
    for c in v.to_array() {
        out.push(' ');
        push_decimal(out, c);
    }
    out.push('\n');
}

fn push_decimal<T: Real>(out: &mut String, value: T) {
    let start = out.len();
    write!(out, "{value:.6}").expect("writing to a String cannot fail");
    if &out[start..] == "-0.000000" {
        out.replace_range(start..start + 1, "");
    }
}
