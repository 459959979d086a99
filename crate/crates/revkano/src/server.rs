//! HTTP service for the Kano survey.
//!
//! Votes go to an append-only JSONL log before they are acknowledged, and the
//! log is replayed on start, so the in-memory tally always equals the
//! majority over the persisted votes. A single mutex serializes appends.

use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use revkano_core::kano::{majority_of, KanoBucket, SurveyVote, Tally, VoteBook, VoteRejection};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::error::{Error, Result};
use crate::io;
use crate::stages::{SurveyCategory, SurveyConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum LogEntry {
    Vote(SurveyVote),
    Close,
}

#[derive(Debug, Clone, Default)]
pub struct ServerOptions {
    pub survey: Option<SurveyConfig>,
    pub votes_log: PathBuf,
    /// Static survey UI bundle served at `/`.
    pub ui_dir: Option<PathBuf>,
    /// Directory holding `report.html`, served at `/report/`.
    pub report_dir: Option<PathBuf>,
}

struct Survey {
    config: SurveyConfig,
    book: VoteBook,
    open: bool,
    log: File,
    log_path: PathBuf,
}

pub struct AppState {
    survey: Option<Mutex<Survey>>,
    report_dir: Option<PathBuf>,
}

/// Reads a vote log. A final line without its newline is a torn write and
/// is ignored; any other bad line is an error.
pub fn read_log(path: &Path) -> Result<Vec<LogEntry>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = io::read_text(path)?;
    let complete = text.ends_with('\n');
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(e) => out.push(e),
            Err(_) if i + 1 == lines.len() && !complete => break,
            Err(e) => return Err(Error::parse(path, i + 1, e.to_string())),
        }
    }
    Ok(out)
}

impl AppState {
    pub fn open(options: ServerOptions) -> Result<Self> {
        let survey = match options.survey {
            None => None,
            Some(config) => {
                let mut book = VoteBook::for_categories(config.categories.iter().map(|c| c.category_id.clone()));
                let mut open = true;
                for entry in read_log(&options.votes_log)? {
                    match entry {
                        // Entries were validated before they were written.
                        LogEntry::Vote(v) => {
                            let _ = book.add(v);
                        }
                        LogEntry::Close => open = false,
                    }
                }
                if let Some(dir) = options.votes_log.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                }
                let log = OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&options.votes_log)
                    .map_err(|e| Error::io(&options.votes_log, e))?;
                Some(Mutex::new(Survey {
                    config,
                    book,
                    open,
                    log,
                    log_path: options.votes_log,
                }))
            }
        };
        Ok(AppState {
            survey,
            report_dir: options.report_dir,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketCounts {
    pub must_have: u32,
    pub one_dimensional: u32,
    pub delighter: u32,
    pub indifferent: u32,
    pub reverse: u32,
}

impl From<Tally> for BucketCounts {
    fn from(t: Tally) -> Self {
        BucketCounts {
            must_have: t[0],
            one_dimensional: t[1],
            delighter: t[2],
            indifferent: t[3],
            reverse: t[4],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryTally {
    pub category_id: String,
    pub label: String,
    pub tally: BucketCounts,
    pub total_votes: u32,
    /// `None` until the category has a vote.
    pub bucket: Option<KanoBucket>,
    pub tied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyResponse {
    pub survey_id: String,
    pub open: bool,
    pub total_votes: usize,
    pub categories: Vec<CategoryTally>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VoteRequest {
    pub subject_id: String,
    pub category_id: String,
    pub bucket: String,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
}

fn error(status: StatusCode, msg: impl Into<String>) -> Response {
    (status, Json(ErrorBody { error: msg.into() })).into_response()
}

fn no_survey() -> Response {
    error(StatusCode::NOT_FOUND, "no survey configured")
}

fn tally_of(s: &Survey) -> TallyResponse {
    let mut per: std::collections::BTreeMap<&str, Tally> = std::collections::BTreeMap::new();
    for v in s.book.votes() {
        per.entry(v.category_id.as_str()).or_insert([0; 5])[v.bucket.index()] += 1;
    }
    let categories = s
        .config
        .categories
        .iter()
        .map(|c| {
            let t = per.get(c.category_id.as_str()).copied().unwrap_or([0; 5]);
            let m = majority_of(&c.category_id, t);
            CategoryTally {
                category_id: c.category_id.clone(),
                label: c.label.clone(),
                tally: t.into(),
                total_votes: t.iter().sum(),
                bucket: m.as_ref().map(|a| a.bucket),
                tied: m.is_some_and(|a| a.tied),
            }
        })
        .collect();
    TallyResponse {
        survey_id: s.config.survey_id.clone(),
        open: s.open,
        total_votes: s.book.len(),
        categories,
    }
}

async fn categories(State(state): State<Arc<AppState>>) -> Response {
    match &state.survey {
        None => no_survey(),
        Some(s) => {
            let s = s.lock().expect("survey lock");
            Json::<Vec<SurveyCategory>>(s.config.categories.clone()).into_response()
        }
    }
}

async fn tally(State(state): State<Arc<AppState>>) -> Response {
    match &state.survey {
        None => no_survey(),
        Some(s) => Json(tally_of(&s.lock().expect("survey lock"))).into_response(),
    }
}

fn record_vote(state: &AppState, req: VoteRequest) -> Response {
    let Some(survey) = &state.survey else {
        return no_survey();
    };
    let bucket = match req.bucket.parse::<KanoBucket>() {
        Ok(b) => b,
        Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    };
    if req.subject_id.trim().is_empty() {
        return error(StatusCode::UNPROCESSABLE_ENTITY, "empty subject_id");
    }
    let vote = SurveyVote {
        subject_id: req.subject_id,
        category_id: req.category_id,
        bucket,
    };
    let mut s = survey.lock().expect("survey lock");
    if !s.open {
        return error(StatusCode::FORBIDDEN, "survey is closed");
    }
    match s.book.check(&vote) {
        Err(VoteRejection::Duplicate) => return error(StatusCode::CONFLICT, VoteRejection::Duplicate.to_string()),
        Err(VoteRejection::UnknownCategory) => {
            return error(
                StatusCode::UNPROCESSABLE_ENTITY,
                format!("unknown category `{}`", vote.category_id),
            )
        }
        Ok(()) => {}
    }
    let entry = LogEntry::Vote(vote.clone());
    let Survey { log, log_path, .. } = &mut *s;
    if let Err(e) = io::append_jsonl(log, log_path, &entry) {
        return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string());
    }
    s.book.add(vote.clone()).expect("checked under the same lock");
    (StatusCode::CREATED, Json(vote)).into_response()
}

async fn post_vote(State(state): State<Arc<AppState>>, Json(req): Json<VoteRequest>) -> Response {
    tokio::task::spawn_blocking(move || record_vote(&state, req))
        .await
        .unwrap_or_else(|e| error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

fn close_survey(state: &AppState) -> Response {
    let Some(survey) = &state.survey else {
        return no_survey();
    };
    let mut s = survey.lock().expect("survey lock");
    if s.open {
        let Survey { log, log_path, .. } = &mut *s;
        if let Err(e) = io::append_jsonl(log, log_path, &LogEntry::Close) {
            return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string());
        }
        s.open = false;
    }
    Json(tally_of(&s)).into_response()
}

async fn close(State(state): State<Arc<AppState>>) -> Response {
    tokio::task::spawn_blocking(move || close_survey(&state))
        .await
        .unwrap_or_else(|e| error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

async fn report(State(state): State<Arc<AppState>>) -> Response {
    let Some(dir) = &state.report_dir else {
        return error(StatusCode::NOT_FOUND, "no report directory configured");
    };
    match tokio::fs::read_to_string(dir.join("report.html")).await {
        Ok(html) => Html(html).into_response(),
        Err(_) => error(StatusCode::NOT_FOUND, "report.html not rendered yet; run `revkano report`"),
    }
}

const PLACEHOLDER_UI: &str = "<!DOCTYPE html>\n<html lang=\"en\">\n<head><meta charset=\"utf-8\"><title>Kano survey</title></head>\n\
<body>\n<h1>Kano survey</h1>\n<p>No survey UI bundle is installed. Start the server with <code>--ui-dir</code> \
pointing at a built bundle, or use the JSON API directly:</p>\n<ul>\n\
<li><a href=\"/api/categories\">GET /api/categories</a></li>\n\
<li>POST /api/votes <code>{\"subject_id\", \"category_id\", \"bucket\"}</code></li>\n\
<li><a href=\"/api/tally\">GET /api/tally</a></li>\n\
<li>POST /api/close</li>\n<li><a href=\"/report/\">Rendered report</a></li>\n</ul>\n</body>\n</html>\n";

async fn placeholder() -> Html<&'static str> {
    Html(PLACEHOLDER_UI)
}

pub fn router(state: Arc<AppState>, ui_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/categories", get(categories))
        .route("/api/votes", post(post_vote))
        .route("/api/tally", get(tally))
        .route("/api/close", post(close))
        .route("/report/", get(report))
        .route("/report", get(report))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder)),
    }
}

/// Runs the service on `listener` until the process is interrupted.
pub async fn serve(listener: tokio::net::TcpListener, options: ServerOptions) -> Result<()> {
    let ui_dir = options.ui_dir.clone();
    let state = Arc::new(AppState::open(options)?);
    let app = router(state, ui_dir.as_deref());
    let addr = listener.local_addr().ok();
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io(addr.map(|a| a.to_string()).unwrap_or_default(), e))
}
