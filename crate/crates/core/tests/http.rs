mod common;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use bibops::interface::cli::{execute, Cli};
use bibops::interface::{router, Config, Engine};
use bibops::RankedList;
use clap::Parser;
use common::*;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn engine(dir: &tempfile::TempDir) -> Arc<Engine> {
    Arc::new(Engine::open(dir.path(), Config::default()).unwrap())
}

async fn call(
    engine: &Arc<Engine>,
    method: Method,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(match body {
            Some(v) => Body::from(v.to_string()),
            None => Body::empty(),
        })
        .unwrap();
    let resp = router(Arc::clone(engine)).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value: Value = serde_json::from_slice(&bytes).expect("every response is JSON");
    (status, value)
}

fn assert_api_error(body: &Value, code: &str) {
    assert_eq!(body["code"], code, "{body}");
    assert!(body["message"].is_string());
    assert!(body.get("detail").is_some());
}

#[tokio::test]
async fn health_reports_first_generation() {
    let dir = fixture_data_dir();
    let (status, body) = call(&engine(&dir), Method::GET, "/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({ "status": "ok", "generation": 1 }));
}

#[tokio::test]
async fn empty_search_is_invalid_query() {
    let dir = fixture_data_dir();
    let e = engine(&dir);
    let (status, body) = call(&e, Method::POST, "/search", Some(json!({}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_api_error(&body, "invalid_query");

    let (status, body) = call(
        &e,
        Method::POST,
        "/search",
        Some(json!({ "title": "x", "nonsense": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_api_error(&body, "parse_error");
}

#[tokio::test]
async fn canonical_chain_has_four_stages() {
    let dir = fixture_data_dir();
    let spec = json!({
        "seed": [SEED_DOC],
        "steps": [
            { "kind": "similar", "limit": 500 },
            { "kind": "alsoread", "limit": 500 },
            { "kind": "references", "limit": 500 },
            { "kind": "citations", "limit": 500 }
        ],
        "year_min": 2002
    });
    let (status, body) = call(&engine(&dir), Method::POST, "/chain", Some(spec)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["generation"], 1);
    let stages = body["chain"]["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 4);
    for stage in stages {
        assert!(!stage["output"]["entries"].as_array().unwrap().is_empty());
        assert!(stage["output"]["provenance"].is_string());
        assert!(stage["output"]["truncated"].is_boolean());
    }
}

#[tokio::test]
async fn errors_are_api_errors() {
    let dir = fixture_data_dir();
    let e = engine(&dir);
    let (status, body) = call(&e, Method::GET, "/docs/NOPE", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(&body, "not_found");
    assert_eq!(body["detail"]["id"], "NOPE");

    let (status, body) = call(&e, Method::GET, "/no/such/path", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(&body, "not_found");

    let (status, body) = call(&e, Method::DELETE, "/search", None).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
    assert_api_error(&body, "invalid_query");

    let (status, body) = call(
        &e,
        Method::POST,
        "/op/bogus",
        Some(json!({ "ids": [SEED_DOC] })),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(&body, "not_found");

    let (status, body) = call(&e, Method::GET, "/analytics/readership?month=2002-13", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_api_error(&body, "invalid_query");
}

#[tokio::test]
async fn document_and_graph_endpoints() {
    let dir = fixture_data_dir();
    let e = engine(&dir);
    let (status, body) = call(&e, Method::GET, &format!("/docs/{SEED_DOC}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["document"]["year"], 1998);
    let (_, body) = call(
        &e,
        Method::GET,
        &format!("/docs/{SEED_DOC}/references"),
        None,
    )
    .await;
    let refs = body["references"].as_array().unwrap();
    assert!(refs.iter().any(|r| r["external"] == true));
    let (_, body) = call(
        &e,
        Method::GET,
        &format!("/docs/{SEED_DOC}/citations"),
        None,
    )
    .await;
    assert_eq!(body["citations"].as_array().unwrap().len(), 8);
    let (status, body) = call(
        &e,
        Method::GET,
        "/docs/2002ApJ...577L...1A/alsoread?limit=3",
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["results"]["entries"].as_array().unwrap().len() <= 3);
}

#[tokio::test]
async fn analytics_endpoints_answer() {
    let dir = fixture_data_dir();
    let e = engine(&dir);
    let (status, body) = call(&e, Method::GET, "/analytics/utility", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["report"]["rows"].is_array());
    let (status, body) = call(&e, Method::GET, "/analytics/countries", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["countries"]["threshold"], 1737);
    let (status, body) = call(&e, Method::GET, "/analytics/readership?month=2002-09", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["readership"]["unique_reads"].as_u64().unwrap() > 0);
}

fn cli_list(dir: &tempfile::TempDir, args: &[&str]) -> RankedList {
    let mut argv = vec![
        "bibops",
        "--data",
        dir.path().to_str().unwrap(),
        "--format",
        "json",
    ];
    argv.extend_from_slice(args);
    let out = execute(&Cli::try_parse_from(argv).unwrap()).unwrap();
    serde_json::from_str(&out).unwrap()
}

#[tokio::test]
async fn cli_and_http_return_identical_lists() {
    let dir = fixture_data_dir();
    let e = engine(&dir);

    let cli = cli_list(
        &dir,
        &[
            "search",
            "--title",
            "supernovae accelerating",
            "--year-min",
            "1999",
        ],
    );
    let (_, body) = call(
        &e,
        Method::POST,
        "/search",
        Some(json!({ "title": "supernovae accelerating", "year_min": 1999 })),
    )
    .await;
    let http: RankedList = serde_json::from_value(body["results"].clone()).unwrap();
    assert!(!cli.is_empty());
    assert_eq!(cli, http);

    let cli = cli_list(
        &dir,
        &[
            "op",
            "references",
            SEED_DOC,
            "2002PhR...367....1V",
            "--include-external",
        ],
    );
    let (_, body) = call(
        &e,
        Method::POST,
        "/op/references",
        Some(json!({ "ids": [SEED_DOC, "2002PhR...367....1V"], "include_external": true })),
    )
    .await;
    let http: RankedList = serde_json::from_value(body["results"].clone()).unwrap();
    assert!(!cli.is_empty());
    assert_eq!(cli, http);

    let cli = cli_list(
        &dir,
        &["similar", SEED_DOC, "--year-min", "2002", "--limit", "5"],
    );
    let (_, body) = call(
        &e,
        Method::POST,
        "/similar",
        Some(json!({ "seeds": [SEED_DOC], "year_min": 2002, "limit": 5 })),
    )
    .await;
    let http: RankedList = serde_json::from_value(body["results"].clone()).unwrap();
    assert_eq!(cli, http);
}

#[tokio::test]
async fn reingest_and_reload_swap_generation() {
    let dir = fixture_data_dir();
    let e = engine(&dir);
    let before = e.current();

    let sources = bibops::interface::IngestSources {
        documents: fixture("corpus/documents.jsonl"),
        citations: fixture("corpus/citations.csv"),
        reads: fixture("corpus/reads.csv"),
        ..Default::default()
    };
    let summary = bibops::interface::ingest(&sources, dir.path()).unwrap();
    assert_eq!(summary.generation, 2);

    let (status, body) = call(&e, Method::POST, "/admin/reload", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["generation"], 2);
    let (_, body) = call(&e, Method::GET, "/health", None).await;
    assert_eq!(body["generation"], 2);
    // a holder of the old state keeps a consistent view
    assert_eq!(before.generation, 1);
    assert!(before.countries.is_some());
    assert_eq!(e.current().generation, 2);
    assert!(e.current().countries.is_none());
}
