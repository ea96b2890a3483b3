use async_trait::async_trait;

use crate::session::Message;

/// One request to a chat model. Each variant corresponds to one shipped
/// prompt; `correction` carries the reason a previous answer was rejected.
#[derive(Debug, Clone, Copy)]
pub enum Task<'a> {
    Elicit {
        history: &'a [Message],
    },
    Nudge {
        history: &'a [Message],
    },
    Extract {
        transcript: &'a str,
        correction: Option<&'a str>,
    },
    Score {
        transcript: &'a str,
        labels: &'a [String],
        correction: Option<&'a str>,
    },
}

impl Task<'_> {
    /// Short name used in logs; never includes any text.
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Elicit { .. } => "elicit",
            Task::Nudge { .. } => "nudge",
            Task::Extract { .. } => "extract",
            Task::Score { .. } => "score",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProviderError {
    #[error("provider did not answer in time")]
    Timeout,
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("provider answered with HTTP status {0}")]
    Status(u16),
    #[error("provider response could not be read: {0}")]
    BadResponse(String),
}

impl ProviderError {
    /// Whether another attempt could plausibly succeed.
    pub fn is_transient(&self) -> bool {
        match self {
            ProviderError::Timeout | ProviderError::Transport(_) => true,
            ProviderError::Status(code) => *code == 429 || *code >= 500,
            ProviderError::BadResponse(_) => false,
        }
    }
}

#[async_trait]
pub trait ChatProvider: Send + Sync {
    /// Returns the raw assistant text for `task`.
    async fn complete(&self, task: &Task<'_>) -> Result<String, ProviderError>;
}
