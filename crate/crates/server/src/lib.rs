//! HTTP study service.
//!
//! Serves stimuli in plan order and records accept/reset events to the
//! append-only session log in the data directory. State is rebuilt from the
//! log on startup, so a crash loses at most the event being written.
//!
//! | method | path | body / reply |
//! |---|---|---|
//! | POST | `/api/sessions` | → `{id, participant}` |
//! | GET | `/api/sessions/{id}` | → progress |
//! | GET | `/api/sessions/{id}/stimulus` | → `{index, total, stimulus, series, svg, canvas}` |
//! | POST | `/api/sessions/{id}/sketch` | `{stimulus?, stroke?, action}` → progress |
//! | GET | `/api/sessions/{id}/report` | → preservation reports |

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::{Arc, Mutex as StdMutex};

use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;

use steno_core::catalog::Catalog;
use steno_core::plan::{build_stimulus_plan_with, PlanOptions};
use steno_core::render::{stimulus_svg, to_canvas};
use steno_core::session::{Session, SketchAction, StimulusStatus};
use steno_core::store::{SessionEvent, SessionStore};
use steno_core::stroke::{CanvasSpec, StrokeRecord};
use steno_core::{Analyzer, PreservationReport, StenoError, TimeSeries};

/// Environment variable naming the data directory.
pub const DATA_DIR_ENV: &str = "STENO_DATA_DIR";

pub struct AppState {
    catalog: Catalog,
    analyzer: Analyzer,
    store: StdMutex<SessionStore>,
    sessions: StdMutex<Sessions>,
}

#[derive(Default)]
struct Sessions {
    by_id: BTreeMap<String, Arc<Mutex<Session>>>,
    next_participant: usize,
}

impl AppState {
    /// Loads the catalog in `dir` and replays its session log.
    pub fn open(dir: &Path, analyzer: Analyzer) -> Result<Self, StenoError> {
        let catalog = Catalog::load(dir)?;
        let store = SessionStore::in_dir(dir);
        let replayed = store.replay(&catalog.dataset_ids())?;
        let next_participant = replayed.values().map(|s| s.participant() + 1).max().unwrap_or(0);
        tracing::info!(sessions = replayed.len(), "replayed session log");
        let analyzer = Analyzer {
            canvas: catalog.canvas,
            ..analyzer
        };
        Ok(Self {
            catalog,
            analyzer,
            store: StdMutex::new(store),
            sessions: StdMutex::new(Sessions {
                by_id: replayed.into_iter().map(|(k, v)| (k, Arc::new(Mutex::new(v)))).collect(),
                next_participant,
            }),
        })
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .lock()
            .expect("session map poisoned")
            .by_id
            .get(id)
            .cloned()
            .ok_or_else(|| StenoError::UnknownSession(id.to_string()).into())
    }

    fn append(&self, event: &SessionEvent) -> Result<(), StenoError> {
        self.store.lock().expect("store poisoned").append(event)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(progress))
        .route("/api/sessions/{id}/stimulus", get(stimulus))
        .route("/api/sessions/{id}/sketch", post(sketch))
        .route("/api/sessions/{id}/report", get(report))
        .with_state(state)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "study service listening");
    axum::serve(listener, router(state)).await
}

pub struct ApiError(StatusCode, String);

impl From<StenoError> for ApiError {
    fn from(e: StenoError) -> Self {
        let code = match &e {
            StenoError::UnknownSession(_) => StatusCode::NOT_FOUND,
            StenoError::Sequencing(_) => StatusCode::CONFLICT,
            StenoError::InvalidStroke(_) | StenoError::InvalidSeries(_) | StenoError::Parameter(_) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.0.is_server_error() {
            tracing::error!(error = %self.1, "request failed");
        }
        (self.0, Json(serde_json::json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    pub id: String,
    pub participant: usize,
}

async fn create_session(State(app): State<Arc<AppState>>) -> Result<(StatusCode, Json<Created>), ApiError> {
    let datasets = app.catalog.dataset_ids();
    let opts = PlanOptions {
        allow_any_dataset_count: true,
    };
    let mut sessions = app.sessions.lock().expect("session map poisoned");
    let participant = sessions.next_participant;
    let id = format!("p{participant:04}");
    let plan = build_stimulus_plan_with(&datasets, participant, app.catalog.seed, opts)?;
    app.append(&SessionEvent::Created {
        session: id.clone(),
        participant,
        seed: app.catalog.seed,
    })?;
    sessions.next_participant += 1;
    sessions.by_id.insert(id.clone(), Arc::new(Mutex::new(Session::new(id.clone(), plan))));
    tracing::info!(session = %id, participant, "session created");
    Ok((StatusCode::CREATED, Json(Created { id, participant })))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Progress {
    pub id: String,
    pub participant: usize,
    /// Next pending stimulus, absent once complete.
    pub current: Option<usize>,
    pub total: usize,
    pub accepted: usize,
    pub complete: bool,
    pub status: Vec<StimulusStatus>,
}

fn progress_of(s: &Session) -> Progress {
    Progress {
        id: s.id.clone(),
        participant: s.participant(),
        current: s.current(),
        total: s.plan.assignments.len(),
        accepted: s.accepted_count(),
        complete: s.is_complete(),
        status: s.status().to_vec(),
    }
}

async fn progress(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<Progress> {
    let session = app.session(&id)?;
    let s = session.lock().await;
    Ok(Json(progress_of(&s)))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StimulusView {
    pub index: usize,
    pub total: usize,
    /// Id to echo back when posting the sketch.
    pub stimulus: String,
    /// The plotted series in data units.
    pub series: TimeSeries,
    pub svg: String,
    pub canvas: CanvasSpec,
}

async fn stimulus(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<StimulusView> {
    let session = app.session(&id)?;
    let s = session.lock().await;
    let (index, a) = match (s.current(), s.current_assignment()) {
        (Some(i), Some(a)) => (i, a),
        _ => return Err(StenoError::Sequencing(format!("session {id} is complete")).into()),
    };
    let series = app.catalog.stimulus(&a.dataset, a.level)?;
    let px = to_canvas(&series, &app.catalog.canvas)?;
    Ok(Json(StimulusView {
        index,
        total: s.plan.assignments.len(),
        stimulus: a.dataset.clone(),
        svg: stimulus_svg(&px, &app.catalog.canvas),
        series,
        canvas: app.catalog.canvas,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SketchRequest {
    /// Defaults to the stroke's own stimulus tag, then the current stimulus.
    #[serde(default)]
    pub stimulus: Option<String>,
    #[serde(default)]
    pub stroke: Option<StrokeRecord>,
    pub action: SketchAction,
}

async fn sketch(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Json(req): Json<SketchRequest>,
) -> ApiResult<Progress> {
    let session = app.session(&id)?;
    let mut s = session.lock().await;
    let stimulus = req
        .stimulus
        .or_else(|| req.stroke.as_ref().map(|k| k.stimulus.clone()))
        .or_else(|| s.current_assignment().map(|a| a.dataset.clone()))
        .ok_or_else(|| StenoError::Sequencing(format!("session {id} is complete")))?;
    // validate on a copy, log, then commit
    let next = s.clone().record_sketch(&stimulus, req.stroke.clone(), req.action)?;
    app.append(&SessionEvent::Sketch {
        session: id.clone(),
        stimulus,
        action: req.action,
        stroke: req.stroke,
    })?;
    *s = next;
    Ok(Json(progress_of(&s)))
}

async fn report(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Vec<PreservationReport>> {
    let session = app.session(&id)?;
    let snapshot = session.lock().await.clone();
    let reports = tokio::task::spawn_blocking(move || {
        app.analyzer.session_reports(&app.catalog, [&snapshot])
    })
    .await
    .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(reports))
}
