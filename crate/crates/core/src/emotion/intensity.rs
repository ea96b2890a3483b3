use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ModelError;

/// Emotion intensity on the 0.0..=4.5 scale, stored exactly as tenths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Intensity(u8);

/// Slack allowed when deciding whether a decimal already sits on the 0.1 grid.
const GRID_EPSILON: f64 = 1e-9;

impl Intensity {
    pub const ZERO: Intensity = Intensity(0);
    pub const MAX: Intensity = Intensity(45);
    pub const MAX_TENTHS: u8 = 45;

    pub fn from_tenths(tenths: u8) -> Result<Self, ModelError> {
        if tenths > Self::MAX_TENTHS {
            return Err(ModelError::IntensityOutOfRange(f64::from(tenths) / 10.0));
        }
        Ok(Intensity(tenths))
    }

    /// Strict constructor: the value must lie in `[0, 4.5]` and be a multiple of 0.1.
    pub fn new(value: f64) -> Result<Self, ModelError> {
        if !value.is_finite() {
            return Err(ModelError::IntensityOutOfRange(value));
        }
        let scaled = value * 10.0;
        let nearest = scaled.round();
        if (scaled - nearest).abs() > GRID_EPSILON * 10.0
            || nearest < 0.0
            || nearest > f64::from(Self::MAX_TENTHS)
        {
            return Err(ModelError::IntensityOutOfRange(value));
        }
        Ok(Intensity(nearest as u8))
    }

    /// Lenient constructor for untrusted sources: clamps into range and rounds
    /// half-up onto the 0.1 grid. NaN maps to zero.
    pub fn quantize(value: f64) -> Self {
        if value.is_nan() {
            return Self::ZERO;
        }
        let clamped = value.clamp(0.0, f64::from(Self::MAX_TENTHS) / 10.0);
        let tenths = (clamped * 10.0 + 0.5 + GRID_EPSILON).floor();
        Intensity(tenths.min(f64::from(Self::MAX_TENTHS)) as u8)
    }

    pub fn tenths(self) -> u8 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 10.0
    }

    /// Position on the scale as the exact ratio `tenths / 45`.
    pub fn fraction(self) -> (u32, u32) {
        (u32::from(self.0), u32::from(Self::MAX_TENTHS))
    }
}

impl fmt::Display for Intensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

impl Serialize for Intensity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Intensity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = f64::deserialize(deserializer)?;
        Intensity::new(raw).map_err(serde::de::Error::custom)
    }
}
