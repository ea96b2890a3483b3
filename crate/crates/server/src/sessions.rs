//! In-memory session table. Nothing here is ever written to disk.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use phemotion_ai::ChatSession;
use phemotion_core::Palette;

use crate::error::ApiError;

#[derive(Debug, Default)]
pub struct SessionData {
    pub chat: ChatSession,
    pub palette: Palette,
}

/// One session: the data behind an async lock, so every operation on a
/// session runs to completion before the next one starts.
#[derive(Debug)]
pub struct SessionSlot {
    touched: Mutex<Instant>,
    pub data: tokio::sync::Mutex<SessionData>,
}

impl SessionSlot {
    fn touch(&self, now: Instant) {
        *self.touched.lock().unwrap() = now;
    }

    fn idle_since(&self) -> Instant {
        *self.touched.lock().unwrap()
    }
}

#[derive(Debug)]
pub struct SessionStore {
    slots: Mutex<HashMap<String, Arc<SessionSlot>>>,
    capacity: usize,
    idle: Duration,
}

impl SessionStore {
    pub fn new(capacity: usize, idle: Duration) -> Self {
        SessionStore {
            slots: Mutex::new(HashMap::new()),
            capacity,
            idle,
        }
    }

    pub fn create(&self) -> Result<String, ApiError> {
        let now = Instant::now();
        self.sweep(now);
        let chat = ChatSession::new();
        let id = chat.id().to_owned();
        let mut slots = self.slots.lock().unwrap();
        if slots.len() >= self.capacity {
            return Err(ApiError::SessionLimit);
        }
        slots.insert(
            id.clone(),
            Arc::new(SessionSlot {
                touched: Mutex::new(now),
                data: tokio::sync::Mutex::new(SessionData {
                    chat,
                    palette: Palette::new(),
                }),
            }),
        );
        Ok(id)
    }

    pub fn get(&self, id: &str) -> Result<Arc<SessionSlot>, ApiError> {
        let now = Instant::now();
        let mut slots = self.slots.lock().unwrap();
        let slot = slots.get(id).cloned().ok_or(ApiError::UnknownSession)?;
        if now.duration_since(slot.idle_since()) > self.idle {
            slots.remove(id);
            return Err(ApiError::UnknownSession);
        }
        slot.touch(now);
        Ok(slot)
    }

    /// Drops the session and wipes its text. Returns whether it existed.
    pub async fn remove(&self, id: &str) -> bool {
        let slot = self.slots.lock().unwrap().remove(id);
        match slot {
            Some(slot) => {
                let mut data = slot.data.lock().await;
                data.chat.clear();
                data.palette = Palette::new();
                true
            }
            None => false,
        }
    }

    /// Evicts sessions idle for longer than the timeout; returns how many.
    pub fn sweep(&self, now: Instant) -> usize {
        let mut slots = self.slots.lock().unwrap();
        let before = slots.len();
        slots.retain(|_, s| now.saturating_duration_since(s.idle_since()) <= self.idle);
        before - slots.len()
    }

    pub fn len(&self) -> usize {
        self.slots.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idle_timeout(&self) -> Duration {
        self.idle
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[tokio::test]
    async fn capacity_and_removal() {
        let store = SessionStore::new(2, Duration::from_secs(60));
        let a = store.create().unwrap();
        let _b = store.create().unwrap();
        assert!(matches!(store.create(), Err(ApiError::SessionLimit)));
        assert!(store.remove(&a).await);
        assert!(!store.remove(&a).await);
        assert!(matches!(store.get(&a), Err(ApiError::UnknownSession)));
        assert_eq!(store.len(), 1);
    }

    #[test]
    fn sweep_evicts_idle() {
        let store = SessionStore::new(4, Duration::from_secs(5));
        store.create().unwrap();
        assert_eq!(store.sweep(Instant::now()), 0);
        assert_eq!(store.sweep(Instant::now() + Duration::from_secs(6)), 1);
        assert!(store.is_empty());
    }
}
