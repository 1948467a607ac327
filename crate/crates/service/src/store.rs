use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use crate::error::ServiceError;
use crate::session::Session;

/// In-memory sessions. The map lock is held only to look a session up;
/// each session has its own lock, so requests on one session run one at a
/// time while different sessions proceed in parallel.
#[derive(Debug)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    ttl: Duration,
}

impl SessionStore {
    /// Sessions idle for longer than `ttl` are dropped.
    pub fn new(ttl: Duration) -> Self {
        SessionStore { sessions: RwLock::new(HashMap::new()), ttl }
    }

    pub fn fresh_id() -> String {
        uuid::Uuid::new_v4().to_string()
    }

    pub fn insert(&self, session: Session) -> Arc<Mutex<Session>> {
        let id = session.id.clone();
        let entry = Arc::new(Mutex::new(session));
        self.sessions.write().expect("session map lock").insert(id, entry.clone());
        entry
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        let entry = self
            .sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(id.to_string()))?;
        {
            let mut session = entry.lock().expect("session lock");
            if session.touched.elapsed() > self.ttl {
                drop(session);
                self.sessions.write().expect("session map lock").remove(id);
                return Err(ServiceError::UnknownSession(id.to_string()));
            }
            session.touched = Instant::now();
        }
        Ok(entry)
    }

    pub fn remove(&self, id: &str) -> Result<(), ServiceError> {
        self.sessions
            .write()
            .expect("session map lock")
            .remove(id)
            .map(|_| ())
            .ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    /// Removes idle sessions and returns how many were dropped. Sessions
    /// busy in another request are skipped.
    pub fn evict_expired(&self) -> usize {
        let mut map = self.sessions.write().expect("session map lock");
        let before = map.len();
        map.retain(|_, s| match s.try_lock() {
            Ok(session) => session.touched.elapsed() <= self.ttl,
            Err(_) => true,
        });
        before - map.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rackconf_core::model::ConfigurationState;
    use rackconf_core::strategies::Strategy;

    #[test]
    fn expired_sessions_disappear() {
        let store = SessionStore::new(Duration::from_millis(20));
        let id = SessionStore::fresh_id();
        store.insert(Session::new(id.clone(), Strategy::Ui, ConfigurationState::new()));
        assert!(store.get(&id).is_ok());
        std::thread::sleep(Duration::from_millis(40));
        assert_eq!(store.evict_expired(), 1);
        assert!(matches!(store.get(&id), Err(ServiceError::UnknownSession(_))));
    }

    #[test]
    fn lookup_of_expired_session_fails() {
        let store = SessionStore::new(Duration::from_millis(10));
        let id = SessionStore::fresh_id();
        store.insert(Session::new(id.clone(), Strategy::Ui, ConfigurationState::new()));
        std::thread::sleep(Duration::from_millis(30));
        assert!(store.get(&id).is_err());
        assert!(store.is_empty());
    }
}
