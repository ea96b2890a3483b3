use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use super::{Intensity, ModelError};

/// Longest label accepted, counted in characters after trimming.
pub const MAX_LABEL_CHARS: usize = 40;

/// A trimmed, non-empty emotion name of at most 40 characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn new(raw: &str) -> Result<Self, ModelError> {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return Err(ModelError::InvalidLabel("label is empty".into()));
        }
        let chars = trimmed.chars().count();
        if chars > MAX_LABEL_CHARS {
            return Err(ModelError::InvalidLabel(format!(
                "label has {chars} characters, limit is {MAX_LABEL_CHARS}"
            )));
        }
        Ok(Label(trimmed.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Case-insensitive comparison used for palette uniqueness.
    pub fn matches(&self, other: &str) -> bool {
        fold(&self.0) == fold(other.trim())
    }

    pub(crate) fn key(&self) -> String {
        fold(&self.0)
    }
}

fn fold(s: &str) -> String {
    s.chars().flat_map(char::to_lowercase).collect()
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Label {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Label::new(&raw).map_err(serde::de::Error::custom)
    }
}

/// Where a token came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    AiSuggested,
    UserAdded,
}

/// One entry of the affective palette.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmotionToken {
    pub label: Label,
    pub intensity: Intensity,
    pub provenance: Provenance,
    #[serde(default)]
    pub renamed: bool,
}

impl EmotionToken {
    pub fn new(label: Label, intensity: Intensity, provenance: Provenance) -> Self {
        EmotionToken {
            label,
            intensity,
            provenance,
            renamed: false,
        }
    }

    pub fn suggested(label: &str, intensity: f64) -> Result<Self, ModelError> {
        Ok(Self::new(
            Label::new(label)?,
            Intensity::new(intensity)?,
            Provenance::AiSuggested,
        ))
    }

    pub fn user(label: &str, intensity: f64) -> Result<Self, ModelError> {
        Ok(Self::new(
            Label::new(label)?,
            Intensity::new(intensity)?,
            Provenance::UserAdded,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_is_trimmed_and_bounded() {
        assert_eq!(Label::new("  joy ").unwrap().as_str(), "joy");
        assert!(Label::new("   ").is_err());
        assert!(Label::new(&"x".repeat(40)).is_ok());
        assert!(Label::new(&"x".repeat(41)).is_err());
        // characters, not bytes
        assert!(Label::new(&"é".repeat(40)).is_ok());
    }

    #[test]
    fn label_matching_ignores_case() {
        let l = Label::new("Nostalgia").unwrap();
        assert!(l.matches("nostalgia"));
        assert!(l.matches(" NOSTALGIA "));
        assert!(!l.matches("nostalgic"));
    }
}
