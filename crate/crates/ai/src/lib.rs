//! Conversational elicitation, emotion extraction and intensity scoring on
//! top of a pluggable chat model, with the output contract enforced locally.
//!
//! ```
//! # tokio::runtime::Builder::new_current_thread().build().unwrap().block_on(async {
//! let pipeline = phemotion_ai::Pipeline::mock(0);
//! let result = pipeline.extract_tokens("so much joy, and a little fear").await.unwrap();
//! assert_eq!(result.tokens[0].label.as_str(), "joy");
//! # });
//! ```

pub mod config;
pub mod contract;
pub mod mock;
pub mod pipeline;
pub mod prompts;
pub mod provider;
pub mod remote;
pub mod scripted;
pub mod session;

pub use config::{ConfigError, ProviderConfig, ProviderKind};
pub use mock::MockProvider;
pub use pipeline::{ExtractionResult, Pipeline, PipelineError, ScoredToken};
pub use provider::{ChatProvider, ProviderError, Task};
pub use remote::RemoteProvider;
pub use scripted::ScriptedProvider;
pub use session::{ChatSession, Message, Role};
