//! HTTP+JSON session API for interactive configuration.
//!
//! A session holds a starting configuration and the actions applied to it.
//! Clients list the possible actions of the session's strategy, apply one
//! by index, undo, let the engine finish the job, and export the result.

mod api;
mod error;
mod session;
mod store;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use rackconf_core::engine::SolveOptions;

pub use api::{router, AppState, Autocompleted, CreateSession, ImportSession};
pub use error::ServiceError;
pub use session::{ActionView, Session, Snapshot, ViolationView};
pub use store::SessionStore;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub bind: SocketAddr,
    /// Idle time after which a session is dropped.
    pub session_ttl: Duration,
    pub autocomplete_time_limit: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: SocketAddr::from(([127, 0, 0, 1], 8080)),
            session_ttl: Duration::from_secs(30 * 60),
            autocomplete_time_limit: Duration::from_secs(30),
        }
    }
}

impl AppState {
    pub fn new(config: &ServiceConfig) -> Self {
        AppState {
            store: Arc::new(SessionStore::new(config.session_ttl)),
            solve: SolveOptions { time_limit: Some(config.autocomplete_time_limit), ..Default::default() },
        }
    }
}

/// Serves the API until interrupted.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let state = AppState::new(&config);
    let store = state.store.clone();
    let sweep = (config.session_ttl / 4).max(Duration::from_secs(1));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(sweep);
        loop {
            tick.tick().await;
            let dropped = store.evict_expired();
            if dropped > 0 {
                log::info!("evicted {dropped} idle sessions");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
