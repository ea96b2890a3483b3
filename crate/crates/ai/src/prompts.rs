//! Prompt texts, shipped as versioned resource files under `prompts/`.

pub const VERSION: &str = "v1";

pub const ELICIT: &str = include_str!("../prompts/v1/elicit.txt");
pub const NUDGE: &str = include_str!("../prompts/v1/nudge.txt");
pub const EXTRACT: &str = include_str!("../prompts/v1/extract.txt");
pub const SCORE: &str = include_str!("../prompts/v1/score.txt");
pub const REPROMPT: &str = include_str!("../prompts/v1/reprompt.txt");

pub fn score(labels: &[String]) -> String {
    SCORE.replace("{labels}", &labels.join(", "))
}

pub fn reprompt(problem: &str) -> String {
    REPROMPT.replace("{problem}", problem)
}
