use serde::{Deserialize, Serialize};

use super::icosphere::{icosphere, MAX_SUBDIVISION};
use super::{GeometryError, GradientNoise, Mesh, Vec3};
use crate::emotion::ShapeParams;
use crate::scalar::Real;

/// Fixed amplitude of the azimuthal wave lobes, in radius units.
pub const WAVE_AMPLITUDE: f64 = 0.08;
/// XOR applied to the seed for the overall-shape noise field.
pub const GLOBAL_SEED_MIX: u64 = 0x47;
/// XOR applied to the seed for the surface-texture noise field.
pub const SURFACE_SEED_MIX: u64 = 0x53;
/// Domain offset of the surface field, decorrelating it from the global one.
pub const SURFACE_OFFSET: [f64; 3] = [13.7, 7.3, 5.1];

/// Everything needed to generate one mesh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec<T> {
    pub params: ShapeParams<T>,
    pub seed: u64,
    pub subdivision: u8,
}

impl<T: Real> GenSpec<T> {
    pub fn new(params: ShapeParams<T>, seed: u64, subdivision: u8) -> Self {
        GenSpec {
            params,
            seed,
            subdivision,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.subdivision > MAX_SUBDIVISION {
            return Err(GeometryError::SubdivisionOutOfRange(self.subdivision));
        }
        self.params.validate()?;
        Ok(())
    }
}

/// The radius function `r(p)` over unit directions:
///
/// `1 + A_g * n_g(f_g * p) + A_s * n_s(f_s * p + offset) + k_w * sin(w * phi) * sin^2(theta)`
///
/// with `theta` the polar angle from `+z` and `phi` the azimuth.
#[derive(Debug, Clone)]
pub struct RadialField<T> {
    params: ShapeParams<T>,
    global: GradientNoise,
    surface: GradientNoise,
    offset: Vec3<T>,
}

impl<T: Real> RadialField<T> {
    pub fn new(params: ShapeParams<T>, seed: u64) -> Self {
        RadialField {
            params,
            global: GradientNoise::new(seed ^ GLOBAL_SEED_MIX),
            surface: GradientNoise::new(seed ^ SURFACE_SEED_MIX),
            offset: Vec3::from(SURFACE_OFFSET.map(T::lit)),
        }
    }

    /// Noise part of the displacement (everything except the wave term).
    pub fn noise_term(&self, dir: Vec3<T>) -> T {
        let p = &self.params;
        p.global_distortion * self.global.sample(dir * p.global_frequency)
            + p.surface_distortion * self.surface.sample(dir * p.surface_frequency + self.offset)
    }

    /// Azimuthal wave term; zero at the poles.
    pub fn wave_term(&self, dir: Vec3<T>) -> T {
        if self.params.waves == 0 {
            return T::zero();
        }
        let sin2_theta = dir.x * dir.x + dir.y * dir.y;
        let phi = dir.y.atan2(dir.x);
        let w = T::lit(f64::from(self.params.waves));
        T::lit(WAVE_AMPLITUDE) * (w * phi).sin() * sin2_theta
    }

    /// Radius along the unit direction `dir`.
    pub fn radius(&self, dir: Vec3<T>) -> T {
        T::one() + self.noise_term(dir) + self.wave_term(dir)
    }
}

/// Generates the deformed sphere: icosphere at `spec.subdivision`, each unit
/// vertex scaled by the radial field, normals recomputed area-weighted.
pub fn generate_mesh<T: Real>(spec: &GenSpec<T>) -> Result<Mesh<T>, GeometryError> {
    spec.validate()?;
    let field = RadialField::new(spec.params, spec.seed);
    let mut mesh = icosphere::<T>(spec.subdivision);
    for v in &mut mesh.vertices {
        *v = *v * field.radius(*v);
    }
    mesh.recompute_normals();
    Ok(mesh)
}
