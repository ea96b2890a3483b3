use serde::{Deserialize, Deserializer, Serialize};

use super::{EmotionToken, Intensity, Label, ModelError, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditKind {
    Add,
    Delete,
    Rename,
    Rescore,
}

/// New label (rename) or new intensity (add, rescore).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EditPayload {
    Intensity(f64),
    Label(String),
}

/// One logged user edit. Values are kept exactly as submitted and validated
/// when the event is applied, so replaying a log re-runs the same checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EditEvent {
    pub sequence: u64,
    pub kind: EditKind,
    pub target_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<EditPayload>,
}

impl EditEvent {
    pub fn add(sequence: u64, label: &str, intensity: f64) -> Self {
        Self::with(
            sequence,
            EditKind::Add,
            label,
            Some(EditPayload::Intensity(intensity)),
        )
    }

    pub fn delete(sequence: u64, label: &str) -> Self {
        Self::with(sequence, EditKind::Delete, label, None)
    }

    pub fn rename(sequence: u64, from: &str, to: &str) -> Self {
        Self::with(
            sequence,
            EditKind::Rename,
            from,
            Some(EditPayload::Label(to.to_owned())),
        )
    }

    pub fn rescore(sequence: u64, label: &str, intensity: f64) -> Self {
        Self::with(
            sequence,
            EditKind::Rescore,
            label,
            Some(EditPayload::Intensity(intensity)),
        )
    }

    fn with(sequence: u64, kind: EditKind, target: &str, payload: Option<EditPayload>) -> Self {
        EditEvent {
            sequence,
            kind,
            target_label: target.to_owned(),
            payload,
        }
    }

    fn intensity_payload(&self) -> Result<Intensity, ModelError> {
        match &self.payload {
            Some(EditPayload::Intensity(v)) => Intensity::new(*v),
            _ => Err(ModelError::MalformedEvent(format!(
                "{:?} requires a numeric intensity payload",
                self.kind
            ))),
        }
    }

    fn label_payload(&self) -> Result<Label, ModelError> {
        match &self.payload {
            Some(EditPayload::Label(l)) => Label::new(l),
            _ => Err(ModelError::MalformedEvent(
                "rename requires a label payload".into(),
            )),
        }
    }
}

/// The affective palette: current tokens plus the log of every edit made
/// since the initial suggestion (empty in manual mode).
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Palette {
    initial: Vec<EmotionToken>,
    tokens: Vec<EmotionToken>,
    edit_log: Vec<EditEvent>,
}

impl Palette {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts a palette from a suggested token list. Later edits are logged
    /// against this starting point.
    pub fn from_initial(tokens: Vec<EmotionToken>) -> Result<Self, ModelError> {
        check_unique(&tokens)?;
        Ok(Palette {
            initial: tokens.clone(),
            tokens,
            edit_log: Vec::new(),
        })
    }

    /// Rebuilds a palette by folding `events` over `initial`.
    pub fn replay(
        initial: Vec<EmotionToken>,
        events: impl IntoIterator<Item = EditEvent>,
    ) -> Result<Self, ModelError> {
        events
            .into_iter()
            .try_fold(Self::from_initial(initial)?, |p, e| apply_edit(&p, e))
    }

    pub fn tokens(&self) -> &[EmotionToken] {
        &self.tokens
    }

    pub fn initial(&self) -> &[EmotionToken] {
        &self.initial
    }

    pub fn edit_log(&self) -> &[EditEvent] {
        &self.edit_log
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn next_sequence(&self) -> u64 {
        self.edit_log.len() as u64
    }

    pub fn get(&self, label: &str) -> Option<&EmotionToken> {
        self.position(label).map(|i| &self.tokens[i])
    }

    fn position(&self, label: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t.label.matches(label))
    }

    pub fn apply(&self, event: EditEvent) -> Result<Self, ModelError> {
        apply_edit(self, event)
    }

    pub fn add(&self, label: &str, intensity: f64) -> Result<Self, ModelError> {
        self.apply(EditEvent::add(self.next_sequence(), label, intensity))
    }

    pub fn delete(&self, label: &str) -> Result<Self, ModelError> {
        self.apply(EditEvent::delete(self.next_sequence(), label))
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<Self, ModelError> {
        self.apply(EditEvent::rename(self.next_sequence(), from, to))
    }

    pub fn rescore(&self, label: &str, intensity: f64) -> Result<Self, ModelError> {
        self.apply(EditEvent::rescore(self.next_sequence(), label, intensity))
    }
}

fn check_unique(tokens: &[EmotionToken]) -> Result<(), ModelError> {
    let mut seen = std::collections::HashSet::new();
    for t in tokens {
        if !seen.insert(t.label.key()) {
            return Err(ModelError::DuplicateLabel(t.label.to_string()));
        }
    }
    Ok(())
}

/// Applies one edit, returning the new palette with the event appended to its log.
pub fn apply_edit(palette: &Palette, event: EditEvent) -> Result<Palette, ModelError> {
    let expected = palette.next_sequence();
    if event.sequence != expected {
        return Err(ModelError::SequenceGap {
            expected,
            found: event.sequence,
        });
    }

    let mut tokens = palette.tokens.clone();
    let target = || ModelError::UnknownTarget(event.target_label.clone());
    match event.kind {
        EditKind::Add => {
            let label = Label::new(&event.target_label)?;
            let intensity = event.intensity_payload()?;
            if palette.position(label.as_str()).is_some() {
                return Err(ModelError::DuplicateLabel(label.to_string()));
            }
            tokens.push(EmotionToken::new(label, intensity, Provenance::UserAdded));
        }
        EditKind::Delete => {
            let i = palette.position(&event.target_label).ok_or_else(target)?;
            tokens.remove(i);
        }
        EditKind::Rename => {
            let i = palette.position(&event.target_label).ok_or_else(target)?;
            let label = event.label_payload()?;
            if let Some(j) = palette.position(label.as_str()) {
                if j != i {
                    return Err(ModelError::DuplicateLabel(label.to_string()));
                }
            }
            tokens[i].label = label;
            tokens[i].renamed = true;
        }
        EditKind::Rescore => {
            let i = palette.position(&event.target_label).ok_or_else(target)?;
            tokens[i].intensity = event.intensity_payload()?;
        }
    }

    let mut edit_log = palette.edit_log.clone();
    edit_log.push(event);
    Ok(Palette {
        initial: palette.initial.clone(),
        tokens,
        edit_log,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PaletteWire {
    #[serde(default)]
    initial: Vec<EmotionToken>,
    tokens: Vec<EmotionToken>,
    #[serde(default)]
    edit_log: Vec<EditEvent>,
}

impl TryFrom<PaletteWire> for Palette {
    type Error = ModelError;

    fn try_from(wire: PaletteWire) -> Result<Self, Self::Error> {
        if wire.initial.is_empty() && wire.edit_log.is_empty() {
            // a bare token list is taken as a finalized snapshot
            return Palette::from_initial(wire.tokens);
        }
        let replayed = Palette::replay(wire.initial, wire.edit_log)?;
        if replayed.tokens != wire.tokens {
            return Err(ModelError::InconsistentPalette);
        }
        Ok(replayed)
    }
}

impl<'de> Deserialize<'de> for Palette {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PaletteWire::deserialize(deserializer)?;
        Palette::try_from(wire).map_err(serde::de::Error::custom)
    }
}
