use serde::{Deserialize, Deserializer, Serialize};

use super::{Label, ModelError, Palette, ShapeParameterId, ShapeParams};
use crate::scalar::Real;

/// One emotion pin dropped onto a parameter slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Binding {
    #[serde(rename = "token")]
    pub token_label: Label,
    pub parameter: ShapeParameterId,
}

impl Binding {
    pub fn new(token: &str, parameter: ShapeParameterId) -> Result<Self, ModelError> {
        Ok(Binding {
            token_label: Label::new(token)?,
            parameter,
        })
    }
}

/// Token-to-parameter bindings over a palette. A parameter is driven by at
/// most one token; a token may drive several parameters.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct MappingMatrix {
    palette: Palette,
    bindings: Vec<Binding>,
}

impl MappingMatrix {
    pub fn new(palette: Palette, bindings: Vec<Binding>) -> Result<Self, ModelError> {
        let mut driven = [false; ShapeParameterId::ALL.len()];
        for b in &bindings {
            if palette.get(b.token_label.as_str()).is_none() {
                return Err(ModelError::InvalidMatrix(format!(
                    "binding references unknown token {:?}",
                    b.token_label.as_str()
                )));
            }
            let slot = &mut driven[b.parameter as usize];
            if *slot {
                return Err(ModelError::InvalidMatrix(format!(
                    "parameter {} is bound more than once",
                    b.parameter
                )));
            }
            *slot = true;
        }
        Ok(MappingMatrix { palette, bindings })
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn into_parts(self) -> (Palette, Vec<Binding>) {
        (self.palette, self.bindings)
    }

    pub fn binding_for(&self, parameter: ShapeParameterId) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.parameter == parameter)
    }

    /// Linear intensity-to-range resolution; unbound parameters stay neutral.
    pub fn resolve<T: Real>(&self) -> ShapeParams<T> {
        let mut params = ShapeParams::neutral();
        for b in &self.bindings {
            // MappingMatrix::new guarantees the token exists
            if let Some(token) = self.palette.get(b.token_label.as_str()) {
                let (num, den) = token.intensity.fraction();
                params.set_fraction(b.parameter, num, den);
            }
        }
        params
    }
}

/// Validates a palette and bindings as a mapping matrix and resolves it.
pub fn resolve_parameters<T: Real>(
    palette: Palette,
    bindings: Vec<Binding>,
) -> Result<ShapeParams<T>, ModelError> {
    MappingMatrix::new(palette, bindings).map(|m| m.resolve())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixWire {
    palette: Palette,
    #[serde(default)]
    bindings: Vec<Binding>,
}

impl<'de> Deserialize<'de> for MappingMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        MappingMatrix::new(wire.palette, wire.bindings).map_err(serde::de::Error::custom)
    }
}
