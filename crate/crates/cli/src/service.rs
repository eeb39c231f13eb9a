//! Local HTTP/JSON session service under `/api`.
//!
//! Sessions live in memory behind one mutex each, so presses on the same
//! session are serialized while distinct sessions proceed independently.
//! The inferred digit is only disclosed on completion, or on every press
//! when the session was created with `debug: true`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ifttpin_core::inference::DashboardRow;
use ifttpin_core::sim::default_buttons;
use ifttpin_core::{ButtonId, Color, Mode, PinError, PressOutcome, Session, SessionConfig, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Longest PIN a client may request.
pub const MAX_PIN_LENGTH: usize = 64;
pub const DEFAULT_TTL: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Seeds sessions created without an explicit seed.
    pub seed: u64,
    /// Idle time after which a session is expired.
    pub ttl: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            seed: 0,
            ttl: DEFAULT_TTL,
        }
    }
}

struct Handle {
    id: String,
    created_at: u64,
    last_used: Instant,
    debug: bool,
    last_resolved: Option<u8>,
    session: Session,
}

pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<Mutex<Handle>>>>,
    seeds: Mutex<ChaCha8Rng>,
    ttl: Duration,
}

impl AppState {
    pub fn new(cfg: &ServiceConfig) -> Self {
        AppState {
            sessions: RwLock::new(HashMap::new()),
            seeds: Mutex::new(ChaCha8Rng::seed_from_u64(cfg.seed)),
            ttl: cfg.ttl,
        }
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sweep(&self) {
        let ttl = self.ttl;
        self.sessions
            .write()
            .expect("session table poisoned")
            .retain(|_, h| {
                h.lock()
                    .map(|h| h.last_used.elapsed() <= ttl)
                    .unwrap_or(false)
            });
    }

    fn handle(&self, id: &str) -> Result<Arc<Mutex<Handle>>, ApiError> {
        let h = self
            .sessions
            .read()
            .expect("session table poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))?;
        let expired = h.lock().expect("session poisoned").last_used.elapsed() > self.ttl;
        if expired {
            self.sessions
                .write()
                .expect("session table poisoned")
                .remove(id);
            return Err(ApiError::new(
                StatusCode::GONE,
                format!("session {id} expired"),
            ));
        }
        Ok(h)
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, format!("no session {id}"))
    }
}

impl From<PinError> for ApiError {
    fn from(e: PinError) -> Self {
        let status = match e {
            PinError::SessionFinished => StatusCode::CONFLICT,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(serde_json::json!({ "error": self.message })),
        )
            .into_response()
    }
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub mode: Mode,
    #[serde(default)]
    pub pin_length: Option<usize>,
    #[serde(default)]
    pub button_count: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub debug: bool,
}

#[derive(Debug, Deserialize)]
pub struct PressRequest {
    pub button: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ButtonView {
    pub index: u8,
    /// "Y", "G" or "unknown".
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionView {
    pub id: String,
    pub created_at: u64,
    pub mode: Mode,
    pub pin_length: usize,
    pub button_count: usize,
    pub seed: u64,
    pub debug: bool,
    /// Current pattern; absent for TRAD and finished sessions.
    pub pattern: Option<String>,
    pub buttons: Vec<ButtonView>,
    pub resolved_count: usize,
    pub click_count: u32,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_resolved_digit: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dashboard: Option<Vec<DashboardRow>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressView {
    /// pending | digit_resolved | digit_restarted | completed | aborted
    pub event: &'static str,
    #[serde(flatten)]
    pub state: SessionView,
}

fn buttons_of(s: &Session) -> Vec<ButtonView> {
    let Some(m) = s.mapping() else {
        return Vec::new();
    };
    m.as_slice()
        .iter()
        .enumerate()
        .map(|(i, c)| ButtonView {
            index: i as u8,
            color: match c {
                Some(Color::Yellow) => "Y".into(),
                Some(Color::Gray) => "G".into(),
                None => "unknown".into(),
            },
        })
        .collect()
}

fn view(h: &Handle) -> SessionView {
    let s = &h.session;
    let cfg = s.config();
    let (status, reason) = match s.status() {
        Status::Active => ("active", None),
        Status::Completed => ("completed", None),
        Status::Aborted(r) => ("aborted", Some(r.to_string())),
    };
    SessionView {
        id: h.id.clone(),
        created_at: h.created_at,
        mode: cfg.mode,
        pin_length: cfg.pin_length,
        button_count: cfg.pad_size(),
        seed: cfg.seed,
        debug: h.debug,
        pattern: s.current_pattern().map(|p| p.to_string()),
        buttons: buttons_of(s),
        resolved_count: s.resolved_digits().len(),
        click_count: s.click_count(),
        status,
        reason,
        pin: s.pin(),
        last_resolved_digit: if h.debug { h.last_resolved } else { None },
        dashboard: if h.debug { s.dashboard() } else { None },
    }
}

async fn create(
    State(state): State<Arc<AppState>>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let Json(req) = body?;
    let pin_length = req
        .pin_length
        .unwrap_or(ifttpin_core::session::DEFAULT_PIN_LENGTH);
    if pin_length > MAX_PIN_LENGTH {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("pin_length above {MAX_PIN_LENGTH}"),
        ));
    }
    let seed = match req.seed {
        Some(s) => s,
        None => state
            .seeds
            .lock()
            .expect("seed generator poisoned")
            .random(),
    };
    let buttons = req
        .button_count
        .unwrap_or_else(|| default_buttons(req.mode));
    let session = Session::start(SessionConfig::new(req.mode, pin_length, buttons, seed))?;
    state.sweep();
    let handle = Handle {
        id: uuid::Uuid::new_v4().to_string(),
        created_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        last_used: Instant::now(),
        debug: req.debug,
        last_resolved: None,
        session,
    };
    let body = view(&handle);
    state
        .sessions
        .write()
        .expect("session table poisoned")
        .insert(handle.id.clone(), Arc::new(Mutex::new(handle)));
    Ok((StatusCode::CREATED, Json(body)))
}

async fn press(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<PressRequest>, JsonRejection>,
) -> Result<Json<PressView>, ApiError> {
    let h = state.handle(&id)?;
    let Json(req) = body?;
    let mut h = h.lock().expect("session poisoned");
    h.last_used = Instant::now();
    let outcome = h.session.press(ButtonId(req.button))?;
    let event = match &outcome {
        PressOutcome::Pending => "pending",
        PressOutcome::DigitResolved(d) => {
            h.last_resolved = Some(d.0);
            "digit_resolved"
        }
        PressOutcome::DigitRestarted => "digit_restarted",
        PressOutcome::Completed(digits) => {
            h.last_resolved = digits.last().map(|d| d.0);
            "completed"
        }
        PressOutcome::Aborted(_) => "aborted",
    };
    Ok(Json(PressView {
        event,
        state: view(&h),
    }))
}

async fn show(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    let h = state.handle(&id)?;
    let h = h.lock().expect("session poisoned");
    Ok(Json(view(&h)))
}

async fn transcript(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<ifttpin_core::Transcript>, ApiError> {
    let h = state.handle(&id)?;
    let h = h.lock().expect("session poisoned");
    Ok(Json(h.session.transcript()))
}

async fn remove(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    state
        .sessions
        .write()
        .expect("session table poisoned")
        .remove(&id)
        .map(|_| StatusCode::NO_CONTENT)
        .ok_or_else(|| ApiError::not_found(&id))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/sessions", post(create))
        .route("/api/sessions/{id}", get(show).delete(remove))
        .route("/api/sessions/{id}/press", post(press))
        .route("/api/sessions/{id}/transcript", get(transcript))
        .with_state(state)
}

/// Binds `addr` and serves until Ctrl-C.
pub async fn serve(addr: &str, cfg: ServiceConfig) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    let app = router(Arc::new(AppState::new(&cfg)));
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
