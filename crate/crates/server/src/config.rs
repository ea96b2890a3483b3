use std::path::Path;
use std::time::Duration;

use phemotion_ai::ProviderConfig;
use serde::{Deserialize, Serialize};

/// Server settings, read from a JSON file. Every field has a default, so `{}`
/// is a valid config: it runs in manual mode with no chat provider.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServerConfig {
    #[serde(default = "default_bind")]
    pub bind: String,
    /// `None` disables every AI endpoint.
    #[serde(default)]
    pub provider: Option<ProviderConfig>,
    #[serde(default = "default_max_sessions")]
    pub max_sessions: usize,
    #[serde(default = "default_preview_subdivision")]
    pub preview_subdivision: u8,
    #[serde(default = "default_idle")]
    pub session_idle_secs: u64,
}

fn default_bind() -> String {
    "127.0.0.1:8080".to_owned()
}

fn default_max_sessions() -> usize {
    64
}

fn default_preview_subdivision() -> u8 {
    4
}

fn default_idle() -> u64 {
    30 * 60
}

impl Default for ServerConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ServerConfig {
    pub fn load(path: &Path) -> Result<Self, crate::cli::CliError> {
        let bytes = std::fs::read(path).map_err(|e| crate::cli::CliError::io(path, e))?;
        serde_json::from_slice(&bytes)
            .map_err(|e| crate::cli::CliError::schema(format!("{}: {e}", path.display())))
    }

    pub fn idle_timeout(&self) -> Duration {
        Duration::from_secs(self.session_idle_secs.max(1))
    }
}
