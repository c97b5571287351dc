//! HTTP/JSON API. Sessions live in memory and vanish with the process;
//! branch files under the root directory are the durable record.
//!
//! Each session is behind its own mutex. Mutating requests take it with
//! `try_lock` and answer 409 when another request holds it, rather than
//! queueing behind a run the operator may no longer want.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use rv_core::dsl::ParseError;
use rv_core::engine::EngineError;
use rv_core::store::{BranchRecord, BranchStore, DiffEntry, StoreError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as JsonValue};
use tokio::sync::{Mutex, OwnedMutexGuard};
use tower_http::services::ServeDir;

use crate::session::{
    open_script, open_text, AdvisoryView, LineView, OpenError, RunRequest, Session,
};

pub type SessionSlot = Arc<Mutex<Session>>;

pub struct AppState {
    root: PathBuf,
    store: BranchStore,
    sessions: RwLock<HashMap<String, SessionSlot>>,
}

impl AppState {
    pub fn new(root: impl Into<PathBuf>) -> Arc<Self> {
        let root = root.into();
        Arc::new(Self {
            store: BranchStore::new(&root),
            root,
            sessions: RwLock::default(),
        })
    }

    pub fn session(&self, id: &str) -> Option<SessionSlot> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
    }

    fn insert(&self, session: Session) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        self.sessions
            .write()
            .expect("session map poisoned")
            .insert(id.clone(), Arc::new(Mutex::new(session)));
        id
    }
}

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/run", post(run_session))
        .route("/sessions/{id}/lines/{n}", put(edit_line))
        .route("/sessions/{id}/reset", post(reset_session))
        .route("/sessions/{id}/branches", post(save_branch))
        .route("/branches", get(list_branches))
        .route("/branches/diff", get(diff_branches))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(
    addr: SocketAddr,
    root: PathBuf,
    static_dir: Option<PathBuf>,
) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!(
        "rv: serving {} on http://{}",
        root.display(),
        listener.local_addr()?
    );
    let app = router(AppState::new(root), static_dir);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

/// `{"error": {"code", "message", "line"?, "column"?}}` plus any extra
/// top-level fields (a failed run still reports its partial output).
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    line: Option<usize>,
    column: Option<usize>,
    extra: Option<JsonValue>,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
            line: None,
            column: None,
            extra: None,
        }
    }

    fn at(mut self, line: Option<usize>) -> Self {
        self.line = line;
        self
    }

    fn not_found(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "not_found",
            format!("no session {id}"),
        )
    }

    fn busy() -> Self {
        Self::new(
            StatusCode::CONFLICT,
            "busy",
            "session is busy with another request",
        )
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut err = json!({ "code": self.code, "message": self.message });
        if let Some(l) = self.line {
            err["line"] = l.into();
        }
        if let Some(c) = self.column {
            err["column"] = c.into();
        }
        let mut body = json!({ "error": err });
        if let Some(JsonValue::Object(extra)) = self.extra {
            body.as_object_mut().expect("object").extend(extra);
        }
        (self.status, Json(body)).into_response()
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> Self {
        let mut err = Self::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "parse_error",
            e.to_string(),
        )
        .at(Some(e.line));
        err.column = Some(e.column);
        err
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let code = match &e {
            EngineError::Parse(p) => return p.clone().into(),
            EngineError::Run(_) => "run_error",
            EngineError::NothingToRun => "nothing_to_run",
            EngineError::LineOutOfRange { .. } => "line_out_of_range",
            EngineError::AlreadyRun { .. } => "already_run",
        };
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, code, e.to_string()).at(e.line())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match &e {
            StoreError::NotFound(_) => {
                Self::new(StatusCode::NOT_FOUND, "branch_not_found", e.to_string())
            }
            StoreError::BadBase(_) | StoreError::BadDescription => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "bad_request",
                e.to_string(),
            ),
            StoreError::Parse { source, .. } => {
                let mut err = ApiError::from(source.clone());
                err.code = "bad_branch";
                err.message = e.to_string();
                err
            }
            StoreError::Integrity { .. } | StoreError::BadHeader { .. } => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "bad_branch",
                e.to_string(),
            ),
            StoreError::Io { .. } | StoreError::Exhausted(_) => Self::internal(e),
        }
    }
}

fn parse_body<T: serde::de::DeserializeOwned + Default>(body: &Bytes) -> Result<T, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", e.to_string()))
}

fn lock(state: &AppState, id: &str) -> Result<OwnedMutexGuard<Session>, ApiError> {
    state
        .session(id)
        .ok_or_else(|| ApiError::not_found(id))?
        .try_lock_owned()
        .map_err(|_| ApiError::busy())
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(ApiError::internal)
}

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct CreateRequest {
    script_text: Option<String>,
    script_path: Option<String>,
    /// File name for pasted text, e.g. `pima.rvl` (sets the branch base).
    name: Option<String>,
}

#[derive(Debug, Serialize)]
struct Created {
    id: String,
    base: String,
    parent: u32,
    lines: Vec<LineView>,
    next_line: usize,
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: CreateRequest = parse_body(&body)?;
    let app2 = Arc::clone(&app);
    let session = blocking(move || -> Result<Session, ApiError> {
        match (req.script_text, req.script_path) {
            (Some(text), None) => open_text(&text, req.name.as_deref(), &app2.root, &app2.store)
                .map_err(|e| match e {
                    OpenError::Parse(p) => p.into(),
                    OpenError::Other(e) => ApiError::internal(format!("{e:#}")),
                }),
            (None, Some(path)) => open_path(&app2.root.join(path), &app2.store),
            _ => Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "bad_request",
                "give exactly one of script_text and script_path",
            )),
        }
    })
    .await??;
    let created = Created {
        base: session.base.clone(),
        parent: session.parent,
        lines: session.lines(),
        next_line: session.state.next_line(),
        id: app.insert(session),
    };
    Ok((StatusCode::CREATED, Json(created)).into_response())
}

fn open_path(path: &FsPath, store: &BranchStore) -> Result<Session, ApiError> {
    if !path.is_file() {
        return Err(ApiError::new(
            StatusCode::NOT_FOUND,
            "file_not_found",
            format!("no file {}", path.display()),
        ));
    }
    open_script(path, store).map_err(|e| {
        if let Some(p) = e.downcast_ref::<ParseError>() {
            let mut err = ApiError::from(p.clone());
            err.message = format!("{e:#}");
            return err;
        }
        match e.downcast::<StoreError>() {
            Ok(s) => s.into(),
            Err(e) => ApiError::internal(format!("{e:#}")),
        }
    })
}

#[derive(Debug, Serialize)]
struct SessionView {
    id: String,
    base: String,
    parent: u32,
    lines: Vec<LineView>,
    outputs: Vec<LineView>,
    advisories: Vec<AdvisoryView>,
    next_line: usize,
    finished: bool,
    branches: Vec<BranchRecord>,
}

async fn get_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    let slot = app.session(&id).ok_or_else(|| ApiError::not_found(&id))?;
    let s = slot.lock().await;
    let branches = app.store.list_branches(&s.base)?;
    Ok(Json(SessionView {
        base: s.base.clone(),
        parent: s.parent,
        lines: s.lines(),
        outputs: s.state.output_log().iter().map(LineView::from).collect(),
        advisories: s.advisories.clone(),
        next_line: s.state.next_line(),
        finished: s.state.is_finished(),
        branches,
        id,
    }))
}

#[derive(Debug, Serialize)]
struct RunResponse {
    outputs: Vec<LineView>,
    advisories: Vec<AdvisoryView>,
    next_line: usize,
}

async fn run_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<RunResponse>, ApiError> {
    let req: RunRequest = parse_body(&body)?;
    let mut guard = lock(&app, &id)?;
    let report = blocking(move || guard.run(req)).await?;
    let resp = RunResponse {
        outputs: report.outputs,
        advisories: report.advisories,
        next_line: report.next_line,
    };
    match report.error {
        None => Ok(Json(resp)),
        Some(e) => {
            let mut err = ApiError::from(e);
            err.extra = Some(json!({ "outputs": resp.outputs, "next_line": resp.next_line }));
            Err(err)
        }
    }
}

#[derive(Debug, Default, Deserialize)]
struct EditRequest {
    text: String,
}

#[derive(Debug, Serialize)]
struct LinesResponse {
    lines: Vec<LineView>,
    next_line: usize,
}

async fn edit_line(
    State(app): State<Arc<AppState>>,
    Path((id, n)): Path<(String, usize)>,
    body: Bytes,
) -> Result<Json<LinesResponse>, ApiError> {
    let req: EditRequest = parse_body(&body)?;
    let mut guard = lock(&app, &id)?;
    blocking(move || {
        guard.state.edit_line(n, &req.text)?;
        guard.advisories.clear();
        Ok(Json(LinesResponse {
            lines: guard.lines(),
            next_line: guard.state.next_line(),
        }))
    })
    .await?
}

async fn reset_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<LinesResponse>, ApiError> {
    let mut guard = lock(&app, &id)?;
    guard.state.reset();
    guard.advisories.clear();
    Ok(Json(LinesResponse {
        lines: guard.lines(),
        next_line: guard.state.next_line(),
    }))
}

#[derive(Debug, Default, Deserialize)]
struct SaveRequest {
    description: String,
}

async fn save_branch(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: SaveRequest = parse_body(&body)?;
    let guard = lock(&app, &id)?;
    let app2 = Arc::clone(&app);
    let rec = blocking(move || guard.save_branch(&app2.store, &req.description)).await??;
    Ok((StatusCode::CREATED, Json(rec)).into_response())
}

#[derive(Debug, Deserialize)]
struct BaseQuery {
    base: Option<String>,
}

async fn list_branches(
    State(app): State<Arc<AppState>>,
    Query(q): Query<BaseQuery>,
) -> Result<Json<Vec<BranchRecord>>, ApiError> {
    let base = q
        .base
        .ok_or_else(|| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", "missing `base`"))?;
    Ok(Json(
        blocking(move || app.store.list_branches(&base)).await??,
    ))
}

#[derive(Debug, Deserialize)]
struct DiffQuery {
    base: String,
    a: u32,
    b: u32,
}

async fn diff_branches(
    State(app): State<Arc<AppState>>,
    Query(q): Query<DiffQuery>,
) -> Result<Json<Vec<DiffEntry>>, ApiError> {
    Ok(Json(
        blocking(move || app.store.diff_branches(&q.base, q.a, q.b)).await??,
    ))
}
