//! HTTP facade over the pipeline and editing sessions.

mod journal;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::edit::{apply_post_edit, apply_pre_edit, check_pre_edit, EditCommand, EditError, EditVerb, PreEditIssue};
use crate::lexicon::{Category, FeatureBundle, FeatureKey, GroupKind, Lexicon, Side};
use crate::pipeline::run_pipeline;
use crate::render::{render, render_group, DetailLevel, Document};

pub use journal::{read_journal, Journal, JournalError, JournalOp, JournalRecord};

/// Structured error body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: String,
    pub message: String,
    pub position: Option<String>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError {
            status: status.as_u16(),
            code: code.to_owned(),
            message: message.into(),
            position: None,
        }
    }

    fn no_session(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session `{id}`"))
    }
}

impl From<EditError> for ApiError {
    fn from(e: EditError) -> ApiError {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY.as_u16(),
            code: e.code().to_owned(),
            message: e.to_string(),
            position: e.position().map(ToString::to_string),
        }
    }
}

impl From<JournalError> for ApiError {
    fn from(e: JournalError) -> ApiError {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "journal", e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "malformed_body", e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

/// One word group as sent on the wire, parallel to the notation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupView {
    pub position: String,
    pub kind: GroupKind,
    /// Source tokens the group covers.
    pub source: Vec<String>,
    pub notation: String,
    pub has_placeholder: bool,
    pub has_alternatives: bool,
    pub has_agreement: bool,
    pub manual: bool,
    pub suppresses_ne: bool,
    pub ergative: bool,
    pub tam: Option<String>,
    pub punct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentView {
    /// Level-2 notation.
    pub notation: String,
    /// Notation at the requested detail level.
    pub rendered: String,
    pub detail: DetailLevel,
    pub provenance: Vec<GroupView>,
}

impl DocumentView {
    pub fn new(doc: &Document, detail: DetailLevel) -> DocumentView {
        let mut provenance = Vec::new();
        for (si, s) in doc.sentences.iter().enumerate() {
            for (gi, g) in s.groups.iter().enumerate() {
                let (mut placeholder, mut alternatives, mut agreement, mut manual) = (false, false, false, false);
                g.walk(&mut |n| {
                    placeholder |= n.is_placeholder();
                    alternatives |= !n.alternatives.is_empty();
                    agreement |= n.lemma.as_ref().is_some_and(|l| l.features.contains(FeatureKey::Gnp));
                    manual |= n.manual;
                });
                provenance.push(GroupView {
                    position: format!("{si}/{gi}"),
                    kind: g.kind,
                    source: s.tokens.get(g.span.clone()).map(<[String]>::to_vec).unwrap_or_default(),
                    notation: render_group(g, DetailLevel::Full),
                    has_placeholder: placeholder,
                    has_alternatives: alternatives,
                    has_agreement: agreement,
                    manual,
                    suppresses_ne: g.suppresses_ne,
                    ergative: g.ergative,
                    tam: g.tam.clone(),
                    punct: g.punct,
                });
            }
        }
        DocumentView {
            notation: render(doc, DetailLevel::Full),
            rendered: render(doc, detail),
            detail,
            provenance,
        }
    }
}

/// Source text, its pre-edit issues and the document made from it.
#[derive(Debug, Clone)]
pub struct Version {
    pub text: String,
    pub issues: Vec<PreEditIssue>,
    pub document: Document,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub versions: Vec<Version>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub version: usize,
    /// Number of versions in the history.
    pub versions: usize,
    pub text: String,
    pub issues: Vec<PreEditIssue>,
    pub document: DocumentView,
}

impl Session {
    pub fn view(&self, version: Option<usize>, detail: DetailLevel) -> Result<SessionView, ApiError> {
        let latest = self.versions.len() - 1;
        let v = version.unwrap_or(latest);
        let ver = self.versions.get(v).ok_or_else(|| {
            ApiError::new(
                StatusCode::NOT_FOUND,
                "unknown_version",
                format!("session `{}` has versions 0..={latest}", self.id),
            )
        })?;
        Ok(SessionView {
            id: self.id.clone(),
            version: v,
            versions: self.versions.len(),
            text: ver.text.clone(),
            issues: ver.issues.clone(),
            document: DocumentView::new(&ver.document, detail),
        })
    }
}

/// Sessions held in memory, optionally journaled. Commands on one session
/// are applied one at a time; distinct sessions proceed independently.
pub struct SessionStore {
    lex: Arc<Lexicon>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    journal: Option<Mutex<Journal>>,
}

impl SessionStore {
    pub fn new(lex: Arc<Lexicon>) -> SessionStore {
        SessionStore {
            lex,
            sessions: RwLock::default(),
            journal: None,
        }
    }

    /// Replays the journal at `path`, then appends new versions to it.
    pub fn with_journal(lex: Arc<Lexicon>, path: &Path) -> Result<SessionStore, JournalError> {
        let mut store = SessionStore::new(lex);
        for (line, record) in read_journal(path)? {
            store.replay(&record).map_err(|message| JournalError::Record {
                path: path.to_owned(),
                line,
                message,
            })?;
        }
        store.journal = Some(Mutex::new(Journal::open(path)?));
        Ok(store)
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lex
    }

    fn replay(&mut self, r: &JournalRecord) -> Result<(), String> {
        let sessions = self.sessions.get_mut().unwrap();
        let doc = match &r.op {
            JournalOp::Create { text } => {
                if sessions.contains_key(&r.session) || r.version != 0 {
                    return Err(format!("session `{}` created twice", r.session));
                }
                let s = new_session(r.session.clone(), text.clone(), &self.lex);
                let doc = s.versions[0].document.clone();
                sessions.insert(r.session.clone(), Arc::new(Mutex::new(s)));
                doc
            }
            op => {
                let s = sessions
                    .get(&r.session)
                    .ok_or_else(|| format!("no session `{}`", r.session))?;
                let mut s = s.lock().unwrap();
                if r.version != s.versions.len() {
                    return Err(format!("expected version {}, found {}", s.versions.len(), r.version));
                }
                let next = step(&s, op, &self.lex).map_err(|e| e.message)?;
                let doc = next.document.clone();
                s.versions.push(next);
                doc
            }
        };
        if render(&doc, DetailLevel::Full) != r.notation {
            return Err(format!(
                "version {} of session `{}` no longer renders as journaled",
                r.version, r.session
            ));
        }
        Ok(())
    }

    fn log(&self, session: &str, version: usize, op: JournalOp, doc: &Document) -> Result<(), ApiError> {
        if let Some(j) = &self.journal {
            j.lock().unwrap().append(&JournalRecord {
                session: session.to_owned(),
                version,
                op,
                notation: render(doc, DetailLevel::Full),
            })?;
        }
        Ok(())
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::no_session(id))
    }

    pub fn create(&self, text: &str, detail: DetailLevel) -> Result<SessionView, ApiError> {
        let id = uuid::Uuid::new_v4().to_string();
        let s = new_session(id.clone(), text.to_owned(), &self.lex);
        self.log(&id, 0, JournalOp::Create { text: text.to_owned() }, &s.versions[0].document)?;
        let view = s.view(None, detail)?;
        self.sessions.write().unwrap().insert(id, Arc::new(Mutex::new(s)));
        Ok(view)
    }

    pub fn view(&self, id: &str, version: Option<usize>, detail: DetailLevel) -> Result<SessionView, ApiError> {
        self.get(id)?.lock().unwrap().view(version, detail)
    }

    pub fn apply(&self, id: &str, op: JournalOp, detail: DetailLevel) -> Result<SessionView, ApiError> {
        let session = self.get(id)?;
        let mut s = session.lock().unwrap();
        let next = step(&s, &op, &self.lex)?;
        self.log(id, s.versions.len(), op, &next.document)?;
        s.versions.push(next);
        s.view(None, detail)
    }
}

fn translated(text: String, lex: &Lexicon) -> Version {
    Version {
        issues: check_pre_edit(&text, lex),
        document: run_pipeline(&text, lex),
        text,
    }
}

fn new_session(id: String, text: String, lex: &Lexicon) -> Session {
    Session {
        id,
        versions: vec![translated(text, lex)],
    }
}

/// Computes the version `op` produces without changing `s`.
fn step(s: &Session, op: &JournalOp, lex: &Lexicon) -> Result<Version, ApiError> {
    let latest = s.versions.last().expect("sessions have a version");
    match op {
        JournalOp::Create { .. } => Err(ApiError::new(StatusCode::CONFLICT, "exists", "session exists")),
        JournalOp::Preedit {
            token_index,
            replacement,
            covers,
        } => {
            let text = apply_pre_edit(&latest.text, *token_index, replacement, *covers)?;
            Ok(translated(text, lex))
        }
        JournalOp::Command { command } => {
            let cmd: EditCommand = command.parse()?;
            Ok(Version {
                document: apply_post_edit(&latest.document, &cmd, lex)?,
                ..latest.clone()
            })
        }
    }
}

#[derive(Debug, Deserialize)]
struct TranslateBody {
    text: String,
    #[serde(default = "full")]
    detail: DetailLevel,
}

fn full() -> DetailLevel {
    DetailLevel::Full
}

#[derive(Debug, Serialize)]
struct TranslateReply {
    notation: String,
    document: DocumentView,
}

#[derive(Debug, Deserialize)]
struct TextBody {
    text: String,
    #[serde(default = "full")]
    detail: DetailLevel,
}

#[derive(Debug, Serialize)]
struct IssuesReply {
    issues: Vec<PreEditIssue>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct PreeditBody {
    token_index: usize,
    replacement: String,
    #[serde(default = "one")]
    covers: usize,
    #[serde(default = "full")]
    detail: DetailLevel,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
struct CommandBody {
    position: String,
    verb: String,
    #[serde(default)]
    args: Vec<String>,
    #[serde(default = "full")]
    detail: DetailLevel,
}

#[derive(Debug, Deserialize)]
struct ViewQuery {
    version: Option<usize>,
    #[serde(default = "full")]
    detail: DetailLevel,
}

#[derive(Debug, Deserialize)]
struct EntryQuery {
    root: String,
    side: Option<Side>,
}

#[derive(Debug, Serialize)]
struct EntryView {
    side: Side,
    root: String,
    category: Category,
    paradigm: String,
    inherent: FeatureBundle,
    gloss: Option<String>,
}

type Body<T> = Result<Json<T>, JsonRejection>;
type Reply<T> = Result<Json<T>, ApiError>;

async fn translate(State(store): State<Arc<SessionStore>>, body: Body<TranslateBody>) -> Reply<TranslateReply> {
    let Json(b) = body?;
    let doc = run_pipeline(&b.text, store.lexicon());
    Ok(Json(TranslateReply {
        notation: render(&doc, b.detail),
        document: DocumentView::new(&doc, b.detail),
    }))
}

async fn check(State(store): State<Arc<SessionStore>>, body: Body<TextBody>) -> Reply<IssuesReply> {
    let Json(b) = body?;
    Ok(Json(IssuesReply {
        issues: check_pre_edit(&b.text, store.lexicon()),
    }))
}

async fn create(State(store): State<Arc<SessionStore>>, body: Body<TextBody>) -> Reply<SessionView> {
    let Json(b) = body?;
    store.create(&b.text, b.detail).map(Json)
}

async fn preedit(
    State(store): State<Arc<SessionStore>>,
    UrlPath(id): UrlPath<String>,
    body: Body<PreeditBody>,
) -> Reply<SessionView> {
    let Json(b) = body?;
    let op = JournalOp::Preedit {
        token_index: b.token_index,
        replacement: b.replacement,
        covers: b.covers,
    };
    store.apply(&id, op, b.detail).map(Json)
}

async fn command(
    State(store): State<Arc<SessionStore>>,
    UrlPath(id): UrlPath<String>,
    body: Body<CommandBody>,
) -> Reply<SessionView> {
    let Json(b) = body?;
    store.get(&id)?;
    let cmd = EditCommand {
        position: b.position.parse().map_err(ApiError::from)?,
        verb: EditVerb::from_parts(&b.verb, &b.args)?,
    };
    let op = JournalOp::Command {
        command: cmd.to_string(),
    };
    store.apply(&id, op, b.detail).map(Json)
}

async fn session(
    State(store): State<Arc<SessionStore>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<ViewQuery>,
) -> Reply<SessionView> {
    store.view(&id, q.version, q.detail).map(Json)
}

async fn entry(State(store): State<Arc<SessionStore>>, Query(q): Query<EntryQuery>) -> Reply<Vec<EntryView>> {
    let lex = store.lexicon();
    let sides = match q.side {
        Some(s) => vec![s],
        None => vec![Side::Source, Side::Target],
    };
    let mut out = Vec::new();
    for side in sides {
        for e in lex.language(side).roots().iter().filter(|e| e.root == q.root) {
            out.push(EntryView {
                side,
                root: e.root.clone(),
                category: e.category,
                paradigm: e.paradigm.clone(),
                inherent: e.inherent.clone(),
                gloss: e.gloss.clone(),
            });
        }
    }
    if out.is_empty() {
        return Err(ApiError::new(
            StatusCode::NOT_FOUND,
            "unknown_root",
            format!("`{}` is not in the dictionary", q.root),
        ));
    }
    Ok(Json(out))
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/v1/translate", post(translate))
        .route("/v1/check", post(check))
        .route("/v1/sessions", post(create))
        .route("/v1/sessions/{id}", get(session))
        .route("/v1/sessions/{id}/preedit", post(preedit))
        .route("/v1/sessions/{id}/command", post(command))
        .route("/v1/lexicon/entry", get(entry))
        .with_state(store)
}

/// Serves until the process is stopped.
pub async fn serve(store: Arc<SessionStore>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await
}
