use std::path::Path;
use std::sync::Arc;

use anusaaraka::lexicon::Lexicon;
use anusaaraka::pipeline::translate_text;
use anusaaraka::render::DetailLevel;
use anusaaraka::service::{router, SessionStore};
use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn store(pair: &str) -> Arc<SessionStore> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(pair);
    Arc::new(SessionStore::new(Arc::new(Lexicon::load_dir(dir).unwrap())))
}

async fn call(store: &Arc<SessionStore>, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = router(store.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

#[tokio::test]
async fn translate_returns_notation() {
    let s = store("sample-tel-hin");
    let (status, body) = call(&s, "POST", "/v1/translate", Some(json!({"text": "mlru pustakaM caduvutunnArA?"}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["notation"], "Apa pustaka paDha_raHA_[HE|thA]_kyA{23_ba.}?");
    assert_eq!(body["document"]["provenance"][2]["source"], json!(["caduvutunnArA"]));

    let (_, body) = call(&s, "POST", "/v1/translate", Some(json!({"text": "mlru pustakaM caduvutunnArA?", "detail": 0}))).await;
    assert_eq!(body["notation"], "Apa pustaka paDha_raHA_HE_kyA?");
}

#[tokio::test]
async fn translate_matches_library_on_the_golden_corpus() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for pair in ["sample-tel-hin", "sample-kan-hin"] {
        let s = store(pair);
        for f in std::fs::read_dir(root.join(pair)).unwrap() {
            let f = f.unwrap().path();
            if f.extension().is_none_or(|e| e != "in") {
                continue;
            }
            let text = std::fs::read_to_string(&f).unwrap();
            for level in [0u8, 1, 2] {
                let (_, body) = call(&s, "POST", "/v1/translate", Some(json!({"text": text, "detail": level}))).await;
                let want = translate_text(&text, s.lexicon(), DetailLevel::try_from(level).unwrap());
                assert_eq!(body["notation"], want.as_str());
            }
        }
    }
}

#[tokio::test]
async fn session_editing_flow() {
    let s = store("sample-tel-hin");
    let (status, created) = call(&s, "POST", "/v1/sessions", Some(json!({"text": "rAmuDu winina pleTu veVMdixi"}))).await;
    assert_eq!(status, StatusCode::OK);
    let id = created["id"].as_str().unwrap().to_owned();
    assert_eq!(created["version"], 0);
    assert_eq!(created["document"]["provenance"][1]["hasPlaceholder"], true);

    let cmd = json!({"position": "0/1", "verb": "resolve_vibhakti", "args": ["meM"]});
    let (status, v1) = call(&s, "POST", &format!("/v1/sessions/{id}/command"), Some(cmd)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v1["version"], 1);
    assert!(v1["document"]["rendered"].as_str().unwrap().contains("jisa_meM_vaHa"));

    let (_, old) = call(&s, "GET", &format!("/v1/sessions/{id}?version=0"), None).await;
    assert_eq!(old["document"], created["document"]);
    let (_, latest) = call(&s, "GET", &format!("/v1/sessions/{id}"), None).await;
    assert_eq!(latest["document"], v1["document"]);

    let bad = json!({"position": "0/1", "verb": "resolve_vibhakti", "args": ["se"]});
    let (status, err) = call(&s, "POST", &format!("/v1/sessions/{id}/command"), Some(bad)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["code"], "not_a_placeholder");
    assert_eq!(err["position"], "0/1");

    let (status, err) = call(&s, "POST", &format!("/v1/sessions/{id}/command"), Some(json!({"position": "9/9", "verb": "insert_ne"}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["code"], "invalid_position");
}

#[tokio::test]
async fn preedit_flow() {
    let s = store("sample-tel-hin");
    let (_, created) = call(&s, "POST", "/v1/sessions", Some(json!({"text": "mIru pustakaM caduvutunnArA?"}))).await;
    let id = created["id"].as_str().unwrap();
    assert_eq!(created["issues"][0]["kind"], "nonstandard_spelling");
    let (status, v1) = call(
        &s,
        "POST",
        &format!("/v1/sessions/{id}/preedit"),
        Some(json!({"tokenIndex": 0, "replacement": "mlru"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v1["issues"], json!([]));
    assert_eq!(v1["text"], "mlru pustakaM caduvutunnArA?");
    assert_eq!(v1["document"]["notation"], "Apa pustaka paDha_raHA_[HE|thA]_kyA{23_ba.}?");

    let (_, issues) = call(&s, "POST", "/v1/check", Some(json!({"text": "mIru"}))).await;
    assert_eq!(issues["issues"][0]["suggestions"][0]["replacement"], "mlru");
}

#[tokio::test]
async fn errors_are_structured() {
    let s = store("sample-tel-hin");
    let (status, err) = call(&s, "GET", "/v1/sessions/missing", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["code"], "unknown_session");

    let (status, err) = call(&s, "POST", "/v1/translate", Some(json!({"txt": 1}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["code"], "malformed_body");

    let (status, err) = call(&s, "POST", "/v1/sessions/missing/command", Some(json!({"position": "0/0", "verb": "insert_ne"}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["code"], "unknown_session");
}

#[tokio::test]
async fn lexicon_entries_for_tooltips() {
    let s = store("sample-tel-hin");
    let (status, body) = call(&s, "GET", "/v1/lexicon/entry?root=vaHa", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body[0]["side"], "target");
    assert_eq!(body[0]["category"], "pronoun");
    let (status, _) = call(&s, "GET", "/v1/lexicon/entry?root=zzz", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}
