use std::fmt;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    User,
    Assistant,
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub text: String,
    /// Milliseconds since the Unix epoch.
    pub timestamp: u64,
}

impl Message {
    pub fn new(role: Role, text: impl Into<String>) -> Self {
        Message {
            role,
            text: text.into(),
            timestamp: now_millis(),
        }
    }
}

// Debug output never includes message text, so sessions can be logged safely.
impl fmt::Debug for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Message")
            .field("role", &self.role)
            .field("chars", &self.text.chars().count())
            .field("timestamp", &self.timestamp)
            .finish()
    }
}

fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// In-memory conversation. Nothing here is written anywhere unless
/// `persisted` is set by the owner, and nothing in this crate sets it.
#[derive(Debug, Clone)]
pub struct ChatSession {
    session_id: String,
    messages: Vec<Message>,
    pub persisted: bool,
}

impl Default for ChatSession {
    fn default() -> Self {
        Self::new()
    }
}

impl ChatSession {
    pub fn new() -> Self {
        Self::with_id(uuid::Uuid::new_v4().to_string())
    }

    pub fn with_id(session_id: impl Into<String>) -> Self {
        ChatSession {
            session_id: session_id.into(),
            messages: Vec::new(),
            persisted: false,
        }
    }

    pub fn id(&self) -> &str {
        &self.session_id
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn push(&mut self, role: Role, text: impl Into<String>) {
        self.messages.push(Message::new(role, text));
    }

    pub fn has_user_messages(&self) -> bool {
        self.messages.iter().any(|m| m.role == Role::User)
    }

    /// The narrative to analyse: the user's messages, in order, one per line.
    pub fn transcript(&self) -> String {
        self.messages
            .iter()
            .filter(|m| m.role == Role::User)
            .map(|m| m.text.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Total UTF-8 size of every message in the session.
    pub fn text_bytes(&self) -> usize {
        self.messages.iter().map(|m| m.text.len()).sum()
    }

    /// Drops all message text.
    pub fn clear(&mut self) {
        self.messages.clear();
    }
}
