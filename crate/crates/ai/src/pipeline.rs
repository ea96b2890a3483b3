use std::sync::Arc;
use std::time::Duration;

use phemotion_core::{EmotionToken, Intensity, Label, ModelError, Palette, Provenance};
use serde::{Deserialize, Serialize};

use crate::contract::{self, MIN_TOKENS};
use crate::mock::MockProvider;
use crate::provider::{ChatProvider, ProviderError, Task};
use crate::session::{ChatSession, Message, Role};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("chat provider unavailable: {0}")]
    ProviderUnavailable(ProviderError),
    #[error("provider returned an empty reply")]
    EmptyReply,
    #[error("provider output unusable: {0}")]
    MalformedProviderOutput(String),
    #[error("provider suggested {found} emotions, at least 4 are needed")]
    TooFewTokens { found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoredToken {
    pub label: Label,
    pub intensity: Intensity,
}

/// Suggested palette: 4 to 7 distinct labels with on-grid intensities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub tokens: Vec<ScoredToken>,
}

impl ExtractionResult {
    pub fn into_palette(self) -> Result<Palette, ModelError> {
        Palette::from_initial(
            self.tokens
                .into_iter()
                .map(|t| EmotionToken::new(t.label, t.intensity, Provenance::AiSuggested))
                .collect(),
        )
    }
}

pub struct Pipeline {
    provider: Arc<dyn ChatProvider>,
    max_retries: u32,
    backoff: Duration,
}

impl Pipeline {
    pub fn new(provider: Arc<dyn ChatProvider>, max_retries: u32) -> Self {
        Pipeline {
            provider,
            max_retries,
            backoff: Duration::from_millis(200),
        }
    }

    pub fn mock(seed: u64) -> Self {
        Self::new(Arc::new(MockProvider::new(seed)), 0)
    }

    /// Base delay between retries; doubled after each failed attempt.
    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    async fn call(&self, task: Task<'_>) -> Result<String, PipelineError> {
        let mut delay = self.backoff;
        let mut attempt = 0;
        loop {
            match self.provider.complete(&task).await {
                Ok(text) => return Ok(text),
                Err(e) if e.is_transient() && attempt < self.max_retries => {
                    tracing::warn!(task = task.kind(), attempt, error = %e, "retrying provider call");
                    attempt += 1;
                    if !delay.is_zero() {
                        tokio::time::sleep(delay).await;
                    }
                    delay *= 2;
                }
                Err(e) => return Err(PipelineError::ProviderUnavailable(e)),
            }
        }
    }

    /// Sends `user_message`, returns the cleaned reply. The session only
    /// changes when a reply was produced.
    pub async fn elicit_reply(
        &self,
        session: &mut ChatSession,
        user_message: &str,
    ) -> Result<String, PipelineError> {
        if user_message.trim().is_empty() {
            return Err(PipelineError::InvalidInput("message is empty".into()));
        }
        let mut history = session.messages().to_vec();
        history.push(Message::new(Role::User, user_message));
        let raw = self.call(Task::Elicit { history: &history }).await?;
        let reply = contract::sanitize_reply(&raw).ok_or(PipelineError::EmptyReply)?;
        session.push(Role::User, user_message);
        session.push(Role::Assistant, reply.clone());
        Ok(reply)
    }

    /// Follow-up after the user paused; appends only the assistant turn.
    pub async fn nudge(&self, session: &mut ChatSession) -> Result<String, PipelineError> {
        let raw = self
            .call(Task::Nudge {
                history: session.messages(),
            })
            .await?;
        let reply = contract::sanitize_reply(&raw).ok_or(PipelineError::EmptyReply)?;
        session.push(Role::Assistant, reply.clone());
        Ok(reply)
    }

    pub async fn extract_tokens(
        &self,
        transcript: &str,
    ) -> Result<ExtractionResult, PipelineError> {
        if transcript.trim().is_empty() {
            return Err(PipelineError::InvalidInput("transcript is empty".into()));
        }
        let mut correction: Option<String> = None;
        loop {
            let raw = self
                .call(Task::Extract {
                    transcript,
                    correction: correction.as_deref(),
                })
                .await?;
            let outcome = contract::extraction_items(&raw);
            let problem = match &outcome {
                Ok(items) if items.len() >= MIN_TOKENS => {
                    let tokens = outcome
                        .unwrap()
                        .into_iter()
                        .map(|(label, intensity)| ScoredToken { label, intensity })
                        .collect();
                    return Ok(ExtractionResult { tokens });
                }
                Ok(items) => format!(
                    "it listed {} distinct emotions but at least {MIN_TOKENS} are required",
                    items.len()
                ),
                Err(p) => p.clone(),
            };
            if correction.is_some() {
                return Err(match outcome {
                    Ok(items) => PipelineError::TooFewTokens { found: items.len() },
                    Err(p) => PipelineError::MalformedProviderOutput(p),
                });
            }
            tracing::info!("extraction answer rejected, reprompting once");
            correction = Some(problem);
        }
    }

    pub async fn score_intensity(
        &self,
        transcript: &str,
        labels: &[String],
    ) -> Result<Vec<ScoredToken>, PipelineError> {
        if labels.is_empty() {
            return Err(PipelineError::InvalidInput("no labels to score".into()));
        }
        let mut parsed = Vec::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            let label = Label::new(l).map_err(|e| PipelineError::InvalidInput(e.to_string()))?;
            if parsed.iter().any(|p: &Label| p.matches(label.as_str())) {
                return Err(PipelineError::InvalidInput(format!(
                    "label {i} is a duplicate"
                )));
            }
            parsed.push(label);
        }
        let mut correction: Option<String> = None;
        loop {
            let raw = self
                .call(Task::Score {
                    transcript,
                    labels,
                    correction: correction.as_deref(),
                })
                .await?;
            match contract::score_items(&raw, labels) {
                Ok(values) => {
                    return Ok(parsed
                        .into_iter()
                        .zip(values)
                        .map(|(label, intensity)| ScoredToken { label, intensity })
                        .collect())
                }
                Err(p) if correction.is_some() => {
                    return Err(PipelineError::MalformedProviderOutput(p))
                }
                Err(p) => {
                    tracing::info!("score answer rejected, reprompting once");
                    correction = Some(p);
                }
            }
        }
    }
}
