//! HTTP front door for a single task session.
//!
//! Routes:
//!
//! | route               | response                                   |
//! |---------------------|--------------------------------------------|
//! | `GET /initial-task` | description of the current task            |
//! | `POST /interact`    | applies a concrete input, new description  |
//! | `GET /reset`        | restarts the program, fresh description    |
//! | `GET /`             | `index.html` from the assets directory     |
//! | `GET /assets/*`     | files under `<assets-dir>/assets`          |
//!
//! Rejected inputs answer `400` (unreadable body) or `422` (valid input the
//! task does not accept) with `{"error": <code>, "detail": <text>}` and
//! leave the session as it was.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard, PoisonError};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;
use tokio::net::TcpListener;
use tokio::sync::oneshot;
use tokio::task::JoinHandle;
use tower_http::services::{ServeDir, ServeFile};

use toprt_core::protocol::{self, ProtocolError, TaskDescription};
use toprt_core::{EngineError, Program, Session};

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub host: String,
    pub port: u16,
    pub assets_dir: PathBuf,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            host: "127.0.0.1".into(),
            port: 3000,
            assets_dir: PathBuf::from("web/dist"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone)]
struct AppState {
    session: Arc<Mutex<Session>>,
}

impl AppState {
    // Sessions only change after a fully successful step, so a panic in a
    // continuation cannot leave a torn state behind.
    fn lock(&self) -> MutexGuard<'_, Session> {
        self.session.lock().unwrap_or_else(PoisonError::into_inner)
    }
}

fn status_of(error: &ProtocolError) -> StatusCode {
    match error {
        e if e.is_syntactic() => StatusCode::BAD_REQUEST,
        ProtocolError::Engine(
            EngineError::UnknownId(_)
            | EngineError::TypeMismatch { .. }
            | EngineError::LabelDisabled { .. },
        ) => StatusCode::UNPROCESSABLE_ENTITY,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

fn respond(result: Result<TaskDescription, ProtocolError>) -> Response {
    match result {
        Ok(description) => Json(description).into_response(),
        Err(error) => {
            let status = status_of(&error);
            if status.is_server_error() {
                tracing::error!(code = error.code(), "{error}");
            }
            let body = json!({ "error": error.code(), "detail": error.to_string() });
            (status, Json(body)).into_response()
        }
    }
}

async fn initial_task(State(state): State<AppState>) -> Response {
    respond(state.lock().initial())
}

async fn interact(State(state): State<AppState>, body: Bytes) -> Response {
    let input = std::str::from_utf8(&body)
        .map_err(|e| ProtocolError::MalformedJson(e.to_string()))
        .and_then(protocol::decode_input);
    match input {
        Ok(input) => respond(state.lock().interact(&input)),
        Err(error) => respond(Err(error)),
    }
}

async fn reset(State(state): State<AppState>) -> Response {
    respond(state.lock().reset())
}

/// Builds the application for `program`, serving the UI from `assets_dir`.
pub fn router(program: Program, assets_dir: impl AsRef<Path>) -> Router {
    let assets_dir = assets_dir.as_ref();
    let state = AppState {
        session: Arc::new(Mutex::new(Session::new(program))),
    };
    Router::new()
        .route("/initial-task", get(initial_task))
        .route("/interact", post(interact))
        .route("/reset", get(reset))
        .route_service("/", ServeFile::new(assets_dir.join("index.html")))
        .nest_service("/assets", ServeDir::new(assets_dir.join("assets")))
        .with_state(state)
}

/// A server running in the background.
pub struct RunningServer {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    handle: JoinHandle<std::io::Result<()>>,
}

impl RunningServer {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Stops accepting connections and waits for in-flight requests.
    pub async fn shutdown(mut self) -> std::io::Result<()> {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        self.handle.await.map_err(std::io::Error::other)?
    }
}

async fn listen(config: &ServerConfig) -> Result<TcpListener, ServerError> {
    let addr = format!("{}:{}", config.host, config.port);
    TcpListener::bind(&addr)
        .await
        .map_err(|source| ServerError::Bind { addr, source })
}

/// Binds `config.host:config.port` and serves `program` on a background task.
/// Port 0 picks a free port; see [`RunningServer::addr`].
pub async fn spawn(program: Program, config: &ServerConfig) -> Result<RunningServer, ServerError> {
    let listener = listen(config).await?;
    let addr = listener.local_addr()?;
    let app = router(program, &config.assets_dir);
    let (tx, rx) = oneshot::channel::<()>();
    let handle = tokio::spawn(async move {
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = rx.await;
            })
            .await
    });
    Ok(RunningServer {
        addr,
        shutdown: Some(tx),
        handle,
    })
}

/// Serves `program` until interrupted.
pub async fn visualize_task(program: Program, config: ServerConfig) -> Result<(), ServerError> {
    let listener = listen(&config).await?;
    let addr = listener.local_addr()?;
    tracing::info!("serving on http://{addr}");
    println!("listening on http://{addr}");
    let app = router(program, &config.assets_dir);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
