use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::scalar::Real;

/// Upper bound of the countable wave parameter.
pub const MAX_WAVES: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParameterGroup {
    SurfaceTexture,
    OverallShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParameterKind {
    Countable,
    Continuous,
}

/// The five geometry parameters a token can drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeParameterId {
    NumberOfWaves,
    GlobalDistortion,
    GlobalFrequency,
    SurfaceDistortion,
    SurfaceFrequency,
}

impl ShapeParameterId {
    pub const ALL: [ShapeParameterId; 5] = [
        ShapeParameterId::NumberOfWaves,
        ShapeParameterId::GlobalDistortion,
        ShapeParameterId::GlobalFrequency,
        ShapeParameterId::SurfaceDistortion,
        ShapeParameterId::SurfaceFrequency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeParameterId::NumberOfWaves => "number_of_waves",
            ShapeParameterId::GlobalDistortion => "global_distortion",
            ShapeParameterId::GlobalFrequency => "global_frequency",
            ShapeParameterId::SurfaceDistortion => "surface_distortion",
            ShapeParameterId::SurfaceFrequency => "surface_frequency",
        }
    }

    pub fn group(self) -> ParameterGroup {
        match self {
            ShapeParameterId::NumberOfWaves
            | ShapeParameterId::SurfaceDistortion
            | ShapeParameterId::SurfaceFrequency => ParameterGroup::SurfaceTexture,
            ShapeParameterId::GlobalDistortion | ShapeParameterId::GlobalFrequency => {
                ParameterGroup::OverallShape
            }
        }
    }

    pub fn kind(self) -> ParameterKind {
        match self {
            ShapeParameterId::NumberOfWaves => ParameterKind::Countable,
            _ => ParameterKind::Continuous,
        }
    }

    /// Closed value range `(min, max)`. Distortions are in model-radius units,
    /// frequencies in cycles per unit length.
    pub fn range(self) -> (f64, f64) {
        match self {
            ShapeParameterId::NumberOfWaves => (0.0, f64::from(MAX_WAVES)),
            ShapeParameterId::GlobalDistortion => (0.0, 0.5),
            ShapeParameterId::GlobalFrequency => (0.5, 4.0),
            ShapeParameterId::SurfaceDistortion => (0.0, 0.25),
            ShapeParameterId::SurfaceFrequency => (2.0, 10.0),
        }
    }
}

impl fmt::Display for ShapeParameterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeParameterId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ModelError::InvalidMatrix(format!("unknown shape parameter {s:?}")))
    }
}

/// Concrete values for the five geometry parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeParams<T> {
    #[serde(rename = "number_of_waves")]
    pub waves: u32,
    pub global_distortion: T,
    pub global_frequency: T,
    pub surface_distortion: T,
    pub surface_frequency: T,
}

impl<T: Real> Default for ShapeParams<T> {
    fn default() -> Self {
        Self::neutral()
    }
}

impl<T: Real> ShapeParams<T> {
    /// Amplitudes at zero, frequencies at their minimum, no waves.
    pub fn neutral() -> Self {
        let mut p = ShapeParams {
            waves: 0,
            global_distortion: T::zero(),
            global_frequency: T::zero(),
            surface_distortion: T::zero(),
            surface_frequency: T::zero(),
        };
        for id in ShapeParameterId::ALL {
            p.set_fraction(id, 0, 1);
        }
        p
    }

    /// Every parameter at its range maximum.
    pub fn full_scale() -> Self {
        let mut p = Self::neutral();
        for id in ShapeParameterId::ALL {
            p.set_fraction(id, 1, 1);
        }
        p
    }

    pub fn get(&self, id: ShapeParameterId) -> f64 {
        match id {
            ShapeParameterId::NumberOfWaves => f64::from(self.waves),
            ShapeParameterId::GlobalDistortion => self.global_distortion.to_f64_lossless(),
            ShapeParameterId::GlobalFrequency => self.global_frequency.to_f64_lossless(),
            ShapeParameterId::SurfaceDistortion => self.surface_distortion.to_f64_lossless(),
            ShapeParameterId::SurfaceFrequency => self.surface_frequency.to_f64_lossless(),
        }
    }

    /// Sets `id` to `min + (num / den) * (max - min)`. The wave count rounds
    /// half-up to the nearest integer, computed exactly in integers.
    pub fn set_fraction(&mut self, id: ShapeParameterId, num: u32, den: u32) {
        debug_assert!(den > 0 && num <= den);
        let (lo, hi) = id.range();
        let continuous = || {
            let (lo, hi) = (T::lit(lo), T::lit(hi));
            lo + T::lit(f64::from(num)) / T::lit(f64::from(den)) * (hi - lo)
        };
        match id {
            ShapeParameterId::NumberOfWaves => {
                self.waves = (2 * MAX_WAVES * num + den) / (2 * den);
            }
            ShapeParameterId::GlobalDistortion => self.global_distortion = continuous(),
            ShapeParameterId::GlobalFrequency => self.global_frequency = continuous(),
            ShapeParameterId::SurfaceDistortion => self.surface_distortion = continuous(),
            ShapeParameterId::SurfaceFrequency => self.surface_frequency = continuous(),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for id in ShapeParameterId::ALL {
            let (lo, hi) = id.range();
            let value = self.get(id);
            // tolerate the f32 rounding of range endpoints
            let slack = 1e-6 * hi.abs().max(1.0);
            if !value.is_finite() || value < lo - slack || value > hi + slack {
                return Err(ModelError::ParameterOutOfRange {
                    parameter: id.name(),
                    value,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> ShapeParams<U> {
        let c = |v: T| U::lit(v.to_f64_lossless());
        ShapeParams {
            waves: self.waves,
            global_distortion: c(self.global_distortion),
            global_frequency: c(self.global_frequency),
            surface_distortion: c(self.surface_distortion),
            surface_frequency: c(self.surface_frequency),
        }
    }
}
