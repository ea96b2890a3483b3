use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::mock::MockProvider;
use crate::provider::ChatProvider;
use crate::remote::RemoteProvider;

pub const ENV_API_KEY: &str = "PHEMOTION_API_KEY";
pub const ENV_API_URL: &str = "PHEMOTION_API_URL";
pub const ENV_MODEL: &str = "PHEMOTION_MODEL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    Remote,
    Mock,
}

/// How to reach the chat model. The key itself never appears here, only the
/// name of the environment variable holding it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<String>,
    #[serde(default = "default_key_env")]
    pub api_key_env: String,
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    /// Only used by the mock provider.
    #[serde(default)]
    pub seed: u64,
}

fn default_key_env() -> String {
    ENV_API_KEY.to_owned()
}

fn default_model() -> String {
    "gpt-4o-mini".to_owned()
}

fn default_timeout() -> u64 {
    30
}

fn default_retries() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("remote provider needs an endpoint (config `endpoint` or {ENV_API_URL})")]
    MissingEndpoint,
    #[error("remote provider needs an API key in ${0}")]
    MissingKey(String),
    #[error("could not build HTTP client: {0}")]
    Client(String),
}

impl ProviderConfig {
    pub fn mock(seed: u64) -> Self {
        ProviderConfig {
            kind: ProviderKind::Mock,
            endpoint: None,
            api_key_env: default_key_env(),
            model: default_model(),
            timeout_secs: default_timeout(),
            max_retries: default_retries(),
            seed,
        }
    }

    pub fn remote(endpoint: impl Into<String>) -> Self {
        ProviderConfig {
            kind: ProviderKind::Remote,
            endpoint: Some(endpoint.into()),
            ..Self::mock(0)
        }
    }

    /// Applies `PHEMOTION_API_URL` and `PHEMOTION_MODEL` from `env`.
    pub fn with_overrides(mut self, env: impl Fn(&str) -> Option<String>) -> Self {
        if let Some(url) = env(ENV_API_URL).filter(|s| !s.trim().is_empty()) {
            self.endpoint = Some(url);
        }
        if let Some(model) = env(ENV_MODEL).filter(|s| !s.trim().is_empty()) {
            self.model = model;
        }
        self
    }

    /// Builds the provider, reading the key through `env`.
    pub fn build_with(
        &self,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<Arc<dyn ChatProvider>, ConfigError> {
        match self.kind {
            ProviderKind::Mock => Ok(Arc::new(MockProvider::new(self.seed))),
            ProviderKind::Remote => {
                let endpoint = self
                    .endpoint
                    .clone()
                    .filter(|s| !s.trim().is_empty())
                    .ok_or(ConfigError::MissingEndpoint)?;
                let key = env(&self.api_key_env)
                    .filter(|s| !s.trim().is_empty())
                    .ok_or_else(|| ConfigError::MissingKey(self.api_key_env.clone()))?;
                let provider = RemoteProvider::new(
                    endpoint,
                    key,
                    self.model.clone(),
                    Duration::from_secs(self.timeout_secs.max(1)),
                )
                .map_err(|e| ConfigError::Client(e.to_string()))?;
                Ok(Arc::new(provider))
            }
        }
    }

    /// [`with_overrides`](Self::with_overrides) plus
    /// [`build_with`](Self::build_with) against the process environment.
    pub fn build_from_env(&self) -> Result<Arc<dyn ChatProvider>, ConfigError> {
        let env = |k: &str| std::env::var(k).ok();
        self.clone().with_overrides(env).build_with(env)
    }
}
