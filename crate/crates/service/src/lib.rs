//! Interactive proof sessions over JSON/HTTP.
//!
//! Each session holds a target formula, the current sequent and the history of
//! applied tactics. Every transition goes through the kernel's `apply_tactic`.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use diagchase::comcut::comcut;
use diagchase::commerge::{commerge_report, Assumption, CommergeReport};
use diagchase::corpus;
use diagchase::formula::Formula;
use diagchase::kernel::{Kernel, LemmaRegistry, Proof, Sequent, Tactic};
use diagchase::paths::Bipath;
use diagchase::syntax::{parse_formula, parse_proof, parse_quiver, print_formula, print_proof, print_tactic, ParseError};
use diagchase::Quiver;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("tactic `{tactic}` failed: {reason}")]
    TacticFailed { tactic: String, reason: String },
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("session is closed")]
    Closed,
    #[error("{0}")]
    BadRequest(String),
}

impl ServiceError {
    fn kind(&self) -> &'static str {
        match self {
            ServiceError::UnknownSession(_) => "UnknownSession",
            ServiceError::Parse(_) => "ParseError",
            ServiceError::TacticFailed { .. } => "TacticFailed",
            ServiceError::NothingToUndo => "NothingToUndo",
            ServiceError::Closed => "SessionClosed",
            ServiceError::BadRequest(_) => "BadRequest",
        }
    }

    fn status(&self) -> StatusCode {
        match self {
            ServiceError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ServiceError::Parse(_) | ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::TacticFailed { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::NothingToUndo | ServiceError::Closed => StatusCode::CONFLICT,
        }
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: &'static str,
    message: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let body = ErrorBody { error: self.kind(), message: self.to_string() };
        (self.status(), Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ServiceError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Open,
    Closed,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub id: String,
    pub target: Formula,
    pub sequent: Sequent,
    pub history: Vec<(Tactic, Sequent)>,
}

impl Session {
    pub fn new(id: String, target: Formula) -> Self {
        let sequent = Sequent::of_formula(target.clone());
        Session { id, target, sequent, history: Vec::new() }
    }

    pub fn status(&self) -> Status {
        if self.sequent.is_closed() {
            Status::Closed
        } else {
            Status::Open
        }
    }

    pub fn proof(&self) -> Proof {
        Proof(self.history.iter().map(|(t, _)| t.clone()).collect())
    }

    /// Applies `tactics` in order; on failure nothing changes.
    pub fn apply(&mut self, kernel: &Kernel, tactics: &[Tactic]) -> Result<(), ServiceError> {
        let mut cur = self.sequent.clone();
        let mut added = Vec::new();
        for t in tactics {
            if cur.is_closed() {
                return Err(ServiceError::Closed);
            }
            cur = kernel
                .apply_tactic(t, &cur)
                .map_err(|e| ServiceError::TacticFailed { tactic: print_tactic(t), reason: e.to_string() })?;
            added.push((t.clone(), cur.clone()));
        }
        self.history.extend(added);
        self.sequent = cur;
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), ServiceError> {
        self.history.pop().ok_or(ServiceError::NothingToUndo)?;
        self.sequent = match self.history.last() {
            Some((_, s)) => s.clone(),
            None => Sequent::of_formula(self.target.clone()),
        };
        Ok(())
    }
}

/// Structural JSON of a quiver together with its DOT rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverView {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
    pub dot: String,
}

impl QuiverView {
    pub fn of(q: &Quiver, name: &str) -> Self {
        QuiverView { n: q.n, arcs: q.arcs.clone(), dot: q.to_dot(name) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionState {
    pub id: String,
    pub status: Status,
    pub target: String,
    /// `$0` first.
    pub context: Vec<QuiverView>,
    pub premises: Vec<String>,
    pub goal: String,
    pub hints: Vec<String>,
    pub history: Vec<String>,
}

#[derive(Clone)]
pub struct AppState {
    registry: Arc<LemmaRegistry>,
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
    next_id: Arc<AtomicU64>,
}

impl AppState {
    pub fn new(registry: LemmaRegistry) -> Self {
        AppState {
            registry: Arc::new(registry),
            sessions: Arc::default(),
            next_id: Arc::new(AtomicU64::new(1)),
        }
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        let map = self.sessions.read().expect("session map lock");
        map.get(id).cloned().ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    fn render(&self, s: &Session) -> SessionState {
        let kernel = Kernel::new(&self.registry);
        SessionState {
            id: s.id.clone(),
            status: s.status(),
            target: print_formula(&s.target),
            context: s.sequent.context.iter().enumerate().map(|(i, q)| QuiverView::of(q, &format!("ctx{i}"))).collect(),
            premises: s.sequent.premises.iter().map(print_formula).collect(),
            goal: print_formula(&s.sequent.goal),
            hints: kernel.hints(&s.sequent),
            history: s.history.iter().map(|(t, _)| print_tactic(t)).collect(),
        }
    }
}

impl Default for AppState {
    fn default() -> Self {
        AppState::new(corpus::builtin_registry())
    }
}

/// Formula text, or the name of a corpus statement.
pub fn resolve_formula(text: &str) -> Result<Formula, ParseError> {
    match corpus::formulas().get(text.trim()) {
        Some(f) => Ok(f.clone()),
        None => parse_formula(text, &[]),
    }
}

#[derive(Deserialize)]
struct CreateRequest {
    formula: String,
}

#[derive(Deserialize)]
struct TacticRequest {
    tactic: String,
}

#[derive(Serialize, Deserialize)]
pub struct ScriptResponse {
    pub id: String,
    pub status: Status,
    pub script: String,
}

/// A quiver as `{n, arcs}` JSON or as formula-language text.
#[derive(Deserialize)]
#[serde(untagged)]
enum QuiverInput {
    Json { n: usize, arcs: Vec<(usize, usize)> },
    Text(String),
}

impl QuiverInput {
    fn resolve(self) -> Result<Quiver, ServiceError> {
        let q = match self {
            QuiverInput::Json { n, arcs } => Quiver::new(n, arcs),
            QuiverInput::Text(t) => parse_quiver(&t)?,
        };
        q.check_wf().map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        Ok(q)
    }
}

#[derive(Deserialize)]
struct CommergeRequest {
    quiver: Option<QuiverInput>,
    /// Alternatively, a context variable of a session.
    session: Option<String>,
    var: Option<usize>,
    #[serde(default)]
    assumptions: Vec<Assumption>,
}

#[derive(Serialize, Deserialize)]
pub struct CommergeResponse {
    pub quiver: QuiverView,
    #[serde(flatten)]
    pub report: CommergeReport,
}

#[derive(Deserialize)]
struct ComcutRequest {
    quiver: QuiverInput,
}

#[derive(Serialize, Deserialize)]
pub struct ComcutResponse {
    pub quiver: QuiverView,
    pub bipaths: Vec<Bipath>,
    pub equations: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct LemmaView {
    pub name: String,
    pub formula: String,
    pub has_dual_proof: bool,
}

async fn create_session(State(app): State<AppState>, Json(req): Json<CreateRequest>) -> Result<(StatusCode, Json<SessionState>), ServiceError> {
    let target = resolve_formula(&req.formula)?;
    diagchase::formula::check_formula(&[], &target).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
    let id = format!("s{}", app.next_id.fetch_add(1, Ordering::Relaxed));
    let session = Session::new(id.clone(), target);
    let state = app.render(&session);
    app.sessions.write().expect("session map lock").insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(state)))
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<SessionState> {
    let s = app.session(&id)?;
    let s = s.lock().expect("session lock");
    Ok(Json(app.render(&s)))
}

async fn post_tactic(State(app): State<AppState>, Path(id): Path<String>, Json(req): Json<TacticRequest>) -> ApiResult<SessionState> {
    let pf = parse_proof(&req.tactic)?;
    if pf.is_empty() {
        return Err(ServiceError::BadRequest("no tactic given".into()));
    }
    let s = app.session(&id)?;
    let mut s = s.lock().expect("session lock");
    s.apply(&Kernel::new(&app.registry), &pf.0)?;
    Ok(Json(app.render(&s)))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<SessionState> {
    let s = app.session(&id)?;
    let mut s = s.lock().expect("session lock");
    s.undo()?;
    Ok(Json(app.render(&s)))
}

async fn script(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<ScriptResponse> {
    let s = app.session(&id)?;
    let s = s.lock().expect("session lock");
    Ok(Json(ScriptResponse { id: s.id.clone(), status: s.status(), script: print_proof(&s.proof()) }))
}

async fn tool_commerge(State(app): State<AppState>, Json(req): Json<CommergeRequest>) -> ApiResult<CommergeResponse> {
    let q = match (req.quiver, req.session) {
        (Some(q), None) => q.resolve()?,
        (None, Some(id)) => {
            let s = app.session(&id)?;
            let s = s.lock().expect("session lock");
            let k = req.var.unwrap_or(0);
            s.sequent.context.get(k).cloned().ok_or_else(|| ServiceError::BadRequest(format!("no context variable ${k}")))?
        }
        _ => return Err(ServiceError::BadRequest("give either `quiver` or `session`".into())),
    };
    let report = commerge_report(&q, &req.assumptions).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
    Ok(Json(CommergeResponse { quiver: QuiverView::of(&q, "Q"), report }))
}

async fn tool_comcut(Json(req): Json<ComcutRequest>) -> ApiResult<ComcutResponse> {
    let q = req.quiver.resolve()?;
    let bipaths = comcut(&q).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
    let equations = bipaths.iter().map(Bipath::equation).collect();
    Ok(Json(ComcutResponse { quiver: QuiverView::of(&q, "Q"), bipaths, equations }))
}

async fn lemmas(State(app): State<AppState>) -> Json<Vec<LemmaView>> {
    Json(
        app.registry
            .iter()
            .map(|(name, l)| LemmaView { name: name.to_string(), formula: print_formula(&l.formula), has_dual_proof: l.dual_proof.is_some() })
            .collect(),
    )
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/tactic", post(post_tactic))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/script", get(script))
        .route("/tools/commerge", post(tool_commerge))
        .route("/tools/comcut", post(tool_comcut))
        .route("/lemmas", get(lemmas))
        .with_state(app)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, app: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(app)).await
}
