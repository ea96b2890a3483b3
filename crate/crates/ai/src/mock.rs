//! Offline provider with fully published behavior, used as the test oracle.
//!
//! * Extraction: every lexicon word in the transcript, in order of first
//!   appearance, each at `min(4.5, 1.0 + 0.5 * occurrences)`. When fewer than
//!   four are found the list is padded from [`FILLERS`] (skipping words
//!   already present), at 1.0 each.
//! * Scoring: the same occurrence rule applied to each requested label;
//!   matching is case-insensitive on whole words.
//! * Elicitation: a template naming the first lexicon word of the latest
//!   user message, picked by the seed; a generic template when none occurs.
//! * Nudge: [`NUDGE_PROBE`].

use async_trait::async_trait;
use phemotion_core::geometry::SplitMix64;
use serde_json::json;

use crate::provider::{ChatProvider, ProviderError, Task};
use crate::session::{Message, Role};

pub const LEXICON: [&str; 60] = [
    "joy",
    "fear",
    "calm",
    "curiosity",
    "hope",
    "unease",
    "nostalgic",
    "nostalgia",
    "happiness",
    "happy",
    "sadness",
    "sad",
    "anger",
    "angry",
    "worry",
    "worried",
    "anxiety",
    "anxious",
    "grief",
    "love",
    "gratitude",
    "grateful",
    "pride",
    "proud",
    "shame",
    "guilt",
    "relief",
    "surprise",
    "awe",
    "wonder",
    "excitement",
    "excited",
    "anticipation",
    "satisfaction",
    "contentment",
    "peace",
    "loneliness",
    "lonely",
    "regret",
    "envy",
    "jealousy",
    "frustration",
    "disappointment",
    "embarrassment",
    "confusion",
    "boredom",
    "trust",
    "disgust",
    "tenderness",
    "longing",
    "melancholy",
    "serenity",
    "delight",
    "dread",
    "panic",
    "admiration",
    "affection",
    "bitterness",
    "comfort",
    "despair",
];

pub const FILLERS: [&str; 4] = ["calm", "curiosity", "hope", "unease"];

pub const NUDGE_PROBE: &str =
    "Take your time. Is there a part of this you would like to say a little more about?";

const NAMED_TEMPLATES: [&str; 3] = [
    "You mentioned {w}, and that sounds important. What was happening around you at that moment?",
    "I hear {w} in what you wrote. Where were you when that feeling first showed up?",
    "Thank you for naming {w}. What detail of that moment stays with you the most?",
];

const PLAIN_TEMPLATES: [&str; 2] = [
    "Thank you for telling me about that. What do you remember most clearly about it?",
    "That sounds like it mattered to you. How did your body feel in that moment?",
];

/// Lowercased alphabetic words.
fn words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn occurrences(haystack: &[String], phrase: &str) -> usize {
    let needle = words(phrase);
    if needle.is_empty() || needle.len() > haystack.len() {
        return 0;
    }
    haystack
        .windows(needle.len())
        .filter(|w| *w == needle.as_slice())
        .count()
}

fn occurrence_score(n: usize) -> f64 {
    (1.0 + 0.5 * n as f64).min(4.5)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf29ce484222325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x100000001b3)
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MockProvider {
    seed: u64,
}

impl MockProvider {
    pub fn new(seed: u64) -> Self {
        MockProvider { seed }
    }

    /// Lexicon hits and padding as `(label, intensity)`, before any contract.
    pub fn extract(&self, transcript: &str) -> Vec<(String, f64)> {
        let ws = words(transcript);
        let mut out: Vec<(String, f64)> = Vec::new();
        for w in &ws {
            if LEXICON.contains(&w.as_str()) && !out.iter().any(|(l, _)| l == w) {
                out.push((w.clone(), occurrence_score(occurrences(&ws, w))));
            }
        }
        for f in FILLERS {
            if out.len() >= 4 {
                break;
            }
            if !out.iter().any(|(l, _)| l == f) {
                out.push((f.to_owned(), 1.0));
            }
        }
        out
    }

    pub fn score(&self, transcript: &str, labels: &[String]) -> Vec<(String, f64)> {
        let ws = words(transcript);
        labels
            .iter()
            .map(|l| (l.clone(), occurrence_score(occurrences(&ws, l))))
            .collect()
    }

    pub fn elicit(&self, latest: &str) -> String {
        let mut rng = SplitMix64::new(self.seed ^ fnv1a(latest));
        let pick = rng.next_u64();
        match words(latest)
            .into_iter()
            .find(|w| LEXICON.contains(&w.as_str()))
        {
            Some(w) => {
                NAMED_TEMPLATES[(pick % NAMED_TEMPLATES.len() as u64) as usize].replace("{w}", &w)
            }
            None => PLAIN_TEMPLATES[(pick % PLAIN_TEMPLATES.len() as u64) as usize].to_owned(),
        }
    }
}

fn latest_user(history: &[Message]) -> &str {
    history
        .iter()
        .rev()
        .find(|m| m.role == Role::User)
        .map_or("", |m| m.text.as_str())
}

fn as_json(key: &str, items: Vec<(String, f64)>) -> String {
    let list: Vec<_> = items
        .into_iter()
        .map(|(label, intensity)| json!({ "label": label, "intensity": intensity }))
        .collect();
    json!({ key: list }).to_string()
}

#[async_trait]
impl ChatProvider for MockProvider {
    async fn complete(&self, task: &Task<'_>) -> Result<String, ProviderError> {
        Ok(match *task {
            Task::Elicit { history } => self.elicit(latest_user(history)),
            Task::Nudge { .. } => NUDGE_PROBE.to_owned(),
            Task::Extract { transcript, .. } => as_json("emotions", self.extract(transcript)),
            Task::Score {
                transcript, labels, ..
            } => as_json("scores", self.score(transcript, labels)),
        })
    }
}
