//! Session-based JSON API over HTTP.
//!
//! Each session holds a stack of seed snapshots (the top is current) and,
//! when a ledger was uploaded, the ledger mutated in lockstep. Requests for
//! one session are serialized by its own lock; sessions never share state.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};
use uuid::Uuid;

use qcluster::explore::{audit_graph, mutation_graph, AuditReport, ExploreOptions};
use qcluster::mutation::check_compatible;
use qcluster::wire::{SeedFile, SeedState};
use qcluster::{Error, MonoidalLedger, QuantumSeed};

#[derive(Clone, Debug)]
pub struct ServerConfig {
    /// Idle sessions older than this are dropped.
    pub ttl: Duration,
    /// Upper bound on live sessions.
    pub max_sessions: usize,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            ttl: Duration::from_secs(60 * 60),
            max_sessions: 1024,
        }
    }
}

#[derive(Clone)]
struct Frame {
    seed: QuantumSeed,
    ledger: Option<MonoidalLedger>,
}

struct Session {
    stack: Vec<Frame>,
    last_used: Instant,
}

impl Session {
    fn top(&self) -> &Frame {
        self.stack.last().expect("session stack is never empty")
    }
}

type Shared = Arc<Mutex<Session>>;

#[derive(Clone)]
struct AppState {
    sessions: Arc<Mutex<HashMap<Uuid, Shared>>>,
    config: ServerConfig,
}

impl AppState {
    fn insert(&self, session: Session) -> Uuid {
        let mut map = self.sessions.lock().expect("session map lock");
        self.evict(&mut map);
        let id = Uuid::new_v4();
        map.insert(id, Arc::new(Mutex::new(session)));
        id
    }

    fn evict(&self, map: &mut HashMap<Uuid, Shared>) {
        let ttl = self.config.ttl;
        map.retain(|_, s| s.lock().map(|s| s.last_used.elapsed() < ttl).unwrap_or(false));
        while map.len() >= self.config.max_sessions {
            let oldest = map
                .iter()
                .min_by_key(|(_, s)| s.lock().map(|s| s.last_used).ok())
                .map(|(id, _)| *id);
            match oldest {
                Some(id) => {
                    map.remove(&id);
                }
                None => break,
            }
        }
    }

    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        let id = Uuid::parse_str(id).map_err(|_| ApiError::not_found(id))?;
        let mut map = self.sessions.lock().expect("session map lock");
        self.evict(&mut map);
        map.get(&id).cloned().ok_or_else(|| ApiError::not_found(&id.to_string()))
    }
}

/// The API router with CORS open to local origins.
pub fn router(config: ServerConfig) -> Router {
    let state = AppState {
        sessions: Arc::new(Mutex::new(HashMap::new())),
        config,
    };
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin: &HeaderValue, _| is_local(origin)))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([axum::http::header::CONTENT_TYPE]);
    Router::new()
        .route("/api/session", post(create))
        .route("/api/session/{id}/state", get(state_of))
        .route("/api/session/{id}/mutate", post(mutate))
        .route("/api/session/{id}/undo", post(undo))
        .route("/api/session/{id}/audit", get(audit))
        .route("/api/session/{id}/decat", post(decat))
        .layer(cors)
        .with_state(state)
}

fn is_local(origin: &HeaderValue) -> bool {
    let Ok(s) = origin.to_str() else { return false };
    let rest = s
        .strip_prefix("http://")
        .or_else(|| s.strip_prefix("https://"))
        .unwrap_or("");
    let host = rest.rsplit_once(':').map_or(rest, |(h, port)| {
        if port.chars().all(|c| c.is_ascii_digit()) {
            h
        } else {
            rest
        }
    });
    matches!(host, "localhost" | "127.0.0.1" | "[::1]")
}

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            body: json!({ "error": message.into() }),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("unknown session {id}"))
    }

    fn invalid(message: impl Into<String>, violations: Vec<String>) -> Self {
        Self {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: json!({ "error": message.into(), "violations": violations }),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotExchangeable(k) => Self::bad_request(format!("index {k} is frozen")),
            Error::UnknownIndex(k) => Self::bad_request(format!("unknown index {k}")),
            Error::Parse(msg) => Self::bad_request(msg),
            Error::InvalidLedger(vs) => {
                Self::invalid("invalid ledger", vs.iter().map(ToString::to_string).collect())
            }
            other => Self::invalid(other.to_string(), Vec::new()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Badges {
    bar_invariant: bool,
    positive: bool,
    term_count: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StatePayload {
    #[serde(flatten)]
    seed: SeedState,
    /// Per-variable rendering with `q^{m/2}` coefficients.
    pretty: Vec<String>,
    badges: Vec<Badges>,
    frozen: Vec<usize>,
    has_ledger: bool,
    can_undo: bool,
}

fn payload(session: &Session) -> Value {
    let top = session.top();
    let seed = &top.seed;
    let state = StatePayload {
        seed: SeedState::of(seed),
        pretty: seed.vars().iter().map(ToString::to_string).collect(),
        badges: seed
            .vars()
            .iter()
            .map(|x| Badges {
                bar_invariant: x.is_bar_invariant(),
                positive: x.has_nonneg_coefficients(),
                term_count: x.term_count(),
            })
            .collect(),
        frozen: seed.indices().fr_labels(),
        has_ledger: top.ledger.is_some(),
        can_undo: session.stack.len() > 1,
    };
    serde_json::to_value(state).expect("state serializes")
}

fn parse_body(body: &Bytes) -> Result<Value, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed JSON: {e}")))
}

fn direction(body: &Bytes) -> Result<usize, ApiError> {
    let v = parse_body(body)?;
    v.get("k")
        .and_then(Value::as_u64)
        .map(|k| k as usize)
        .ok_or_else(|| ApiError::bad_request("body must be {\"k\": <nonnegative integer>}"))
}

/// Runs `f` on a blocking thread with the session locked.
async fn with_session<F>(app: &AppState, id: &str, f: F) -> ApiResult
where
    F: FnOnce(&mut Session) -> ApiResult + Send + 'static,
{
    let shared = app.get(id)?;
    tokio::task::spawn_blocking(move || {
        let mut session = shared.lock().map_err(|_| {
            ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "session poisoned by an earlier failure")
        })?;
        session.last_used = Instant::now();
        f(&mut session)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

async fn create(State(app): State<AppState>, body: Bytes) -> ApiResult {
    let mut value = parse_body(&body)?;
    if let Some(inner) = value.get_mut("seed") {
        value = inner.take();
    }
    let file: SeedFile = serde_json::from_value(value)
        .map_err(|e| ApiError::bad_request(format!("invalid seed: {e}")))?;
    let frame = tokio::task::spawn_blocking(move || load(&file))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let session = Session {
        stack: vec![frame],
        last_used: Instant::now(),
    };
    let state = payload(&session);
    let id = app.insert(session);
    Ok(Json(json!({ "id": id.to_string(), "state": state })))
}

fn load(file: &SeedFile) -> Result<Frame, ApiError> {
    let l = file.l_matrix().map_err(|e| ApiError::invalid(e.to_string(), Vec::new()))?;
    let mut violations = Vec::new();
    if let Err(e) = check_compatible(&file.indices, &l, &file.b) {
        violations.push(e.to_string());
    }
    let ledger = match file.ledger() {
        Ok(ledger) => ledger,
        Err(e) => return Err(ApiError::invalid(e.to_string(), violations)),
    };
    if let Some(ledger) = &ledger {
        violations.extend(ledger.check().violations.iter().map(ToString::to_string));
    }
    if !violations.is_empty() {
        return Err(ApiError::invalid("seed is not valid", violations));
    }
    let pair = file.pair()?;
    Ok(Frame {
        seed: QuantumSeed::initial(pair),
        ledger,
    })
}

async fn state_of(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    with_session(&app, &id, |s| Ok(Json(payload(s)))).await
}

async fn mutate(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let k = direction(&body)?;
    with_session(&app, &id, move |s| {
        let top = s.top();
        let seed = top.seed.mutate(k)?;
        let ledger = match &top.ledger {
            Some(l) => Some(l.mutate(k)?.0),
            None => None,
        };
        s.stack.push(Frame { seed, ledger });
        Ok(Json(payload(s)))
    })
    .await
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    with_session(&app, &id, |s| {
        if s.stack.len() == 1 {
            return Err(ApiError::bad_request("nothing to undo"));
        }
        s.stack.pop();
        Ok(Json(payload(s)))
    })
    .await
}

async fn audit(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult {
    with_session(&app, &id, |s| {
        let graph = mutation_graph(&s.top().seed, &ExploreOptions::depth(0))?;
        let report: AuditReport = audit_graph(&graph)?;
        Ok(Json(json!({ "passed": report.passed(), "report": report })))
    })
    .await
}

async fn decat(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let k = direction(&body)?;
    with_session(&app, &id, move |s| {
        let ledger = s
            .top()
            .ledger
            .as_ref()
            .ok_or_else(|| ApiError::bad_request("no ledger loaded in this session"))?;
        let w = ledger.decat_verify(k)?;
        Ok(Json(json!({
            "k": w.k,
            "m": w.m,
            "mPrime": w.m_prime,
            "zeta": w.zeta,
            "delta": w.delta,
            "identities": [
                { "lhs": w.lhs1.to_string(), "rhs": w.rhs1.to_string(), "holds": true },
                { "lhs": w.lhs2.to_string(), "rhs": w.rhs2.to_string(), "holds": true },
            ],
        })))
    })
    .await
}
