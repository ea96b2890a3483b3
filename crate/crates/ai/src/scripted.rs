use std::collections::VecDeque;
use std::sync::Mutex;

use async_trait::async_trait;

use crate::provider::{ChatProvider, ProviderError, Task};

/// Replays canned answers in order, then keeps repeating the last one.
/// Meant for exercising the contract with hostile or broken providers.
#[derive(Debug, Default)]
pub struct ScriptedProvider {
    queue: Mutex<VecDeque<Result<String, ProviderError>>>,
    last: Mutex<Option<Result<String, ProviderError>>>,
    calls: Mutex<Vec<(&'static str, bool)>>,
}

impl ScriptedProvider {
    pub fn new(answers: impl IntoIterator<Item = Result<String, ProviderError>>) -> Self {
        ScriptedProvider {
            queue: Mutex::new(answers.into_iter().collect()),
            ..Default::default()
        }
    }

    pub fn texts<S: Into<String>>(answers: impl IntoIterator<Item = S>) -> Self {
        Self::new(answers.into_iter().map(|s| Ok(s.into())))
    }

    /// `(task kind, carried a correction)` for every call so far.
    pub fn calls(&self) -> Vec<(&'static str, bool)> {
        self.calls.lock().unwrap().clone()
    }
}

#[async_trait]
impl ChatProvider for ScriptedProvider {
    async fn complete(&self, task: &Task<'_>) -> Result<String, ProviderError> {
        let corrected = matches!(
            task,
            Task::Extract {
                correction: Some(_),
                ..
            } | Task::Score {
                correction: Some(_),
                ..
            }
        );
        self.calls.lock().unwrap().push((task.kind(), corrected));
        let next = self.queue.lock().unwrap().pop_front();
        let mut last = self.last.lock().unwrap();
        if let Some(answer) = next {
            *last = Some(answer);
        }
        last.clone()
            .unwrap_or(Err(ProviderError::BadResponse("script is empty".into())))
    }
}
