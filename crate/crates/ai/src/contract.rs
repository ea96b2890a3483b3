//! Enforcement of the output contract on whatever a provider sends back.
//!
//! Chat replies are stripped of markdown and forced to end in exactly one
//! question. Structured answers are dug out of surrounding prose or code
//! fences, parsed leniently, and then clamped onto the intensity grid.

use phemotion_core::{Intensity, Label};
use serde_json::Value;

/// Appended when a chat reply does not ask anything.
pub const FALLBACK_PROBE: &str = "What else comes back to you when you think about that moment?";

/// Upper bound on suggested tokens.
pub const MAX_TOKENS: usize = 7;
/// Lower bound on suggested tokens.
pub const MIN_TOKENS: usize = 4;

/// Cleans a chat reply. Returns `None` when nothing is left.
pub fn sanitize_reply(raw: &str) -> Option<String> {
    let stripped: Vec<String> = raw
        .lines()
        .map(|line| {
            let plain: String = line.chars().filter(|c| *c != '*' && *c != '`').collect();
            let mut rest = plain.as_str();
            while let Some(r) = rest.trim_start().strip_prefix('#') {
                rest = r;
            }
            rest.to_owned()
        })
        .collect();
    let mut text = stripped
        .join(" ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ");
    while text.contains("??") {
        text = text.replace("??", "?");
    }
    if text.is_empty() {
        return None;
    }
    match text.rfind('?') {
        Some(last) => {
            let (head, _) = text.split_at(last);
            let head = head.replace('?', ".");
            Some(format!("{head}?"))
        }
        None => {
            let sep = if text.ends_with(['.', '!']) { "" } else { "." };
            Some(format!("{text}{sep} {FALLBACK_PROBE}"))
        }
    }
}

/// Checks the shape enforced by [`sanitize_reply`].
pub fn reply_is_well_formed(reply: &str) -> bool {
    reply.ends_with('?')
        && reply.matches('?').count() == 1
        && !reply.contains(['*', '`'])
        && !reply.lines().any(|l| l.trim_start().starts_with('#'))
}

/// One `{label, intensity}` pair as found in a provider answer, before any
/// validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawItem {
    pub label: String,
    pub intensity: Option<f64>,
}

const LIST_KEYS: [&str; 6] = ["emotions", "tokens", "scores", "items", "results", "words"];
const LABEL_KEYS: [&str; 5] = ["label", "emotion", "name", "word", "token"];
const VALUE_KEYS: [&str; 4] = ["intensity", "score", "value", "rating"];

fn number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn item(v: &Value) -> Option<RawItem> {
    match v {
        Value::String(s) => Some(RawItem {
            label: s.clone(),
            intensity: None,
        }),
        Value::Object(map) => {
            let label = LABEL_KEYS
                .iter()
                .find_map(|k| map.get(*k).and_then(Value::as_str))?;
            let intensity = VALUE_KEYS.iter().find_map(|k| map.get(*k).and_then(number));
            Some(RawItem {
                label: label.to_owned(),
                intensity,
            })
        }
        _ => None,
    }
}

fn items_in(v: &Value) -> Option<Vec<RawItem>> {
    match v {
        Value::Array(xs) => Some(xs.iter().filter_map(item).collect()),
        Value::Object(map) => {
            if let Some(list) = LIST_KEYS.iter().find_map(|k| map.get(*k)) {
                return items_in(list);
            }
            if let Some(single) = item(v) {
                return Some(vec![single]);
            }
            // {"joy": 3.1, "fear": 0.4}
            if !map.is_empty() && map.values().all(|x| number(x).is_some()) {
                return Some(
                    map.iter()
                        .map(|(k, x)| RawItem {
                            label: k.clone(),
                            intensity: number(x),
                        })
                        .collect(),
                );
            }
            None
        }
        _ => None,
    }
}

/// Finds the first JSON value in `text` that carries a list of items.
pub fn find_items(text: &str) -> Result<Vec<RawItem>, String> {
    let mut saw_json = false;
    for (i, c) in text.char_indices() {
        if c != '{' && c != '[' {
            continue;
        }
        let mut stream = serde_json::Deserializer::from_str(&text[i..]).into_iter::<Value>();
        if let Some(Ok(value)) = stream.next() {
            saw_json = true;
            if let Some(items) = items_in(&value) {
                return Ok(items);
            }
        }
    }
    Err(if saw_json {
        "the JSON did not contain a list of emotions".to_owned()
    } else {
        "no JSON object was found".to_owned()
    })
}

/// Validated, distinct, on-grid suggestions in provider order, at most
/// [`MAX_TOKENS`]. Items with unusable labels are dropped; a missing
/// intensity counts as 0.
pub fn extraction_items(text: &str) -> Result<Vec<(Label, Intensity)>, String> {
    let mut out: Vec<(Label, Intensity)> = Vec::new();
    for raw in find_items(text)? {
        let Ok(label) = Label::new(&raw.label) else {
            continue;
        };
        if out.iter().any(|(l, _)| l.matches(label.as_str())) {
            continue;
        }
        out.push((label, Intensity::quantize(raw.intensity.unwrap_or(0.0))));
        if out.len() == MAX_TOKENS {
            break;
        }
    }
    Ok(out)
}

/// One on-grid intensity per requested label, in request order.
pub fn score_items(text: &str, labels: &[String]) -> Result<Vec<Intensity>, String> {
    let items = find_items(text)?;
    labels
        .iter()
        .map(|want| {
            items
                .iter()
                .find(|it| it.label.trim().to_lowercase() == want.trim().to_lowercase())
                .ok_or_else(|| format!("no score was given for \"{}\"", want.trim()))
                .and_then(|it| {
                    it.intensity
                        .map(Intensity::quantize)
                        .ok_or_else(|| format!("the score for \"{}\" is not a number", want.trim()))
                })
        })
        .collect()
}
