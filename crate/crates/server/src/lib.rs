//! HTTP facade for black-box query sessions.
//!
//! Each session hides either the static or the evolutionary backend behind
//! the same interface. Clients query bit strings, then guess which backend
//! they were talking to; the reveal includes one machine of each kind that
//! reproduces the whole transcript.

mod error;
mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use evoverse_core::uc::{Answer, Backend, Procedure};

pub use error::ApiError;
pub use session::{backend_for_seed, Exchange, Phase, Reveal, Session, MAX_INPUT_LEN};

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub port: u16,
    /// Base seed; session `i` created without a seed uses `base + i`.
    pub seed: Option<u64>,
    pub procedure: Procedure,
    /// Step budget per query; `None` gives `|x| + 1`, enough for the
    /// scanning procedure.
    pub budget: Option<usize>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            port: DEFAULT_PORT,
            seed: None,
            procedure: Procedure::scan(),
            budget: None,
        }
    }
}

impl ServerConfig {
    /// Reads `EVOVERSE_PORT` and `EVOVERSE_SEED` through `lookup`.
    pub fn from_env_with(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        let mut config = Self::default();
        if let Some(port) = lookup("EVOVERSE_PORT") {
            config.port = port
                .parse()
                .map_err(|_| format!("EVOVERSE_PORT={port:?} is not a port"))?;
        }
        if let Some(seed) = lookup("EVOVERSE_SEED") {
            config.seed = Some(
                seed.parse()
                    .map_err(|_| format!("EVOVERSE_SEED={seed:?} is not a u64"))?,
            );
        }
        Ok(config)
    }

    pub fn from_env() -> Result<Self, String> {
        Self::from_env_with(|k| std::env::var(k).ok())
    }
}

#[derive(Debug)]
struct Registry {
    sessions: HashMap<String, Session>,
    created: u64,
}

#[derive(Debug, Clone)]
pub struct AppState {
    registry: Arc<Mutex<Registry>>,
    config: Arc<ServerConfig>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> Self {
        Self {
            registry: Arc::new(Mutex::new(Registry {
                sessions: HashMap::new(),
                created: 0,
            })),
            config: Arc::new(config),
        }
    }

    fn lock(&self) -> MutexGuard<'_, Registry> {
        self.registry.lock().unwrap_or_else(|p| p.into_inner())
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    seed: Option<u64>,
}

#[derive(Debug, Serialize)]
struct CreateResponse {
    id: String,
    phase: Phase,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryRequest {
    input: String,
}

#[derive(Debug, Serialize)]
struct QueryResponse {
    input: String,
    answer: Answer,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GuessRequest {
    claim: Backend,
}

#[derive(Debug, Serialize)]
struct LogResponse {
    id: String,
    phase: Phase,
    transcript: Vec<Exchange>,
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    payload
        .map(|Json(v)| v)
        .map_err(|e| ApiError::BadRequest(e.body_text()))
}

async fn create_session(
    State(state): State<AppState>,
    raw: Bytes,
) -> Result<(StatusCode, Json<CreateResponse>), ApiError> {
    let req: CreateRequest = if raw.iter().all(u8::is_ascii_whitespace) {
        CreateRequest::default()
    } else {
        serde_json::from_slice(&raw).map_err(|e| ApiError::BadRequest(e.to_string()))?
    };
    let mut registry = state.lock();
    let seed = req
        .seed
        .or_else(|| {
            state
                .config
                .seed
                .map(|base| base.wrapping_add(registry.created))
        })
        .unwrap_or_else(rand::random);
    registry.created += 1;
    let id = Uuid::new_v4().simple().to_string();
    registry
        .sessions
        .insert(id.clone(), Session::new(id.clone(), seed));
    Ok((
        StatusCode::CREATED,
        Json(CreateResponse {
            id,
            phase: Phase::Querying,
        }),
    ))
}

async fn query(
    State(state): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<QueryRequest>, JsonRejection>,
) -> Result<Json<QueryResponse>, ApiError> {
    let req = body(payload)?;
    let budget = state.config.budget.unwrap_or(req.input.len() + 1);
    let mut registry = state.lock();
    let session = registry
        .sessions
        .get_mut(&id)
        .ok_or_else(|| ApiError::UnknownSession(id.clone()))?;
    let answer = session.query(&state.config.procedure, &req.input, budget)?;
    Ok(Json(QueryResponse {
        input: req.input,
        answer,
    }))
}

async fn guess(
    State(state): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<GuessRequest>, JsonRejection>,
) -> Result<Json<Reveal>, ApiError> {
    let req = body(payload)?;
    let mut registry = state.lock();
    let session = registry
        .sessions
        .get_mut(&id)
        .ok_or_else(|| ApiError::UnknownSession(id.clone()))?;
    Ok(Json(session.guess(req.claim)?))
}

async fn log(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<LogResponse>, ApiError> {
    let registry = state.lock();
    let session = registry
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::UnknownSession(id.clone()))?;
    Ok(Json(LogResponse {
        id,
        phase: session.phase(),
        transcript: session.transcript().to_vec(),
    }))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/query", post(query))
        .route("/sessions/{id}/guess", post(guess))
        .route("/sessions/{id}/log", get(log))
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(config: ServerConfig) -> std::io::Result<()> {
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(config))).await
}
