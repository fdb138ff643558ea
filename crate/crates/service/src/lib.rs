//! HTTP API and command-line front end for the perceptual retrieval engine.

pub mod api;
pub mod cli;
pub mod config;
pub mod report;
pub mod state;

use std::sync::Arc;

use anyhow::Context;

pub use config::ServiceConfig;
pub use state::AppState;

/// Bind `listen_address` and serve until Ctrl-C.
pub async fn serve(state: Arc<AppState>, listen_address: &str) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(listen_address)
        .await
        .with_context(|| format!("cannot bind {listen_address}"))?;
    tracing::info!(
        address = %listener.local_addr()?,
        videos = state.dataset.videos().len(),
        profiled = state.dataset.profiles().len(),
        "listening"
    );
    axum::serve(listener, api::router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
