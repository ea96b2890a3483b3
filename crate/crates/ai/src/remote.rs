use std::fmt;
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};

use crate::prompts;
use crate::provider::{ChatProvider, ProviderError, Task};
use crate::session::{Message, Role};

/// Client for an OpenAI-style chat-completion endpoint.
pub struct RemoteProvider {
    client: reqwest::Client,
    endpoint: String,
    api_key: String,
    model: String,
}

impl fmt::Debug for RemoteProvider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RemoteProvider")
            .field("endpoint", &self.endpoint)
            .field("model", &self.model)
            .finish_non_exhaustive()
    }
}

#[derive(Serialize)]
struct WireMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Serialize)]
struct Request<'a> {
    model: &'a str,
    messages: Vec<WireMessage<'a>>,
}

#[derive(Deserialize)]
struct Response {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChoiceMessage,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    content: Option<String>,
}

fn wire(m: &Message) -> WireMessage<'_> {
    WireMessage {
        role: match m.role {
            Role::User => "user",
            Role::Assistant => "assistant",
        },
        content: &m.text,
    }
}

/// Message list sent for `task`. Owned strings live in `scratch`.
fn conversation<'a>(task: &Task<'a>, scratch: &'a mut Vec<String>) -> Vec<WireMessage<'a>> {
    let system = |content: &'a str| WireMessage {
        role: "system",
        content,
    };
    let user = |content: &'a str| WireMessage {
        role: "user",
        content,
    };
    match *task {
        Task::Elicit { history } => std::iter::once(system(prompts::ELICIT))
            .chain(history.iter().map(wire))
            .collect(),
        Task::Nudge { history } => std::iter::once(system(prompts::NUDGE))
            .chain(history.iter().map(wire))
            .collect(),
        Task::Extract {
            transcript,
            correction,
        } => {
            scratch.extend(correction.map(prompts::reprompt));
            let mut out = vec![system(prompts::EXTRACT), user(transcript)];
            out.extend(scratch.iter().map(|s| user(s.as_str())));
            out
        }
        Task::Score {
            transcript,
            labels,
            correction,
        } => {
            scratch.push(prompts::score(labels));
            scratch.extend(correction.map(prompts::reprompt));
            let (head, tail) = scratch.split_at(1);
            let mut out = vec![system(head[0].as_str()), user(transcript)];
            out.extend(tail.iter().map(|s| user(s.as_str())));
            out
        }
    }
}

impl RemoteProvider {
    pub fn new(
        endpoint: impl Into<String>,
        api_key: impl Into<String>,
        model: impl Into<String>,
        timeout: Duration,
    ) -> Result<Self, ProviderError> {
        let client = reqwest::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| ProviderError::Transport(e.to_string()))?;
        Ok(RemoteProvider {
            client,
            endpoint: endpoint.into(),
            api_key: api_key.into(),
            model: model.into(),
        })
    }
}

#[async_trait]
impl ChatProvider for RemoteProvider {
    async fn complete(&self, task: &Task<'_>) -> Result<String, ProviderError> {
        let mut scratch = Vec::new();
        let body = Request {
            model: &self.model,
            messages: conversation(task, &mut scratch),
        };
        let response = self
            .client
            .post(&self.endpoint)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .await
            .map_err(|e| {
                if e.is_timeout() {
                    ProviderError::Timeout
                } else {
                    ProviderError::Transport(e.without_url().to_string())
                }
            })?;
        let status = response.status();
        tracing::debug!(
            task = task.kind(),
            status = status.as_u16(),
            "provider call"
        );
        if !status.is_success() {
            return Err(ProviderError::Status(status.as_u16()));
        }
        let parsed: Response = response.json().await.map_err(|e| {
            if e.is_timeout() {
                ProviderError::Timeout
            } else {
                ProviderError::BadResponse("unexpected response body".to_owned())
            }
        })?;
        parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| ProviderError::BadResponse("no message content".to_owned()))
    }
}
