//! JSON-over-HTTP front end.
//!
//! | method | path                        | body / query                      |
//! |--------|-----------------------------|-----------------------------------|
//! | GET    | `/health`                   |                                   |
//! | GET    | `/docs/{id}`                |                                   |
//! | GET    | `/docs/{id}/references`     |                                   |
//! | GET    | `/docs/{id}/citations`      |                                   |
//! | GET    | `/docs/{id}/alsoread`       | `?limit=`                         |
//! | POST   | `/search`                   | [`Query`]                         |
//! | POST   | `/similar`                  | [`SimilarRequest`]                |
//! | POST   | `/op/{kind}`                | [`OpRequest`]                     |
//! | POST   | `/chain`                    | [`ChainSpec`]                     |
//! | GET    | `/analytics/utility`        |                                   |
//! | GET    | `/analytics/countries`      | `?threshold=`                     |
//! | GET    | `/analytics/readership`     | `?month=YYYY-MM&threshold=`       |
//! | POST   | `/admin/reload`             |                                   |
//!
//! Successful responses carry the serving `generation`. Every error response
//! is an [`ApiError`] body.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query as UrlQuery, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::net::TcpListener;

use super::engine::{Engine, OpRequest, SimilarRequest};
use crate::analytics::{YearMonth, ACTIVE_USAGE_THRESHOLD};
use crate::error::Error;
use crate::retrieval::Query;
use crate::secondorder::{ChainSpec, OperatorKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default)]
    pub detail: Value,
}

impl ApiError {
    fn new(code: &str, message: impl Into<String>) -> Self {
        ApiError {
            code: code.to_owned(),
            message: message.into(),
            detail: Value::Null,
        }
    }

    fn status(&self) -> StatusCode {
        match self.code.as_str() {
            "not_found" => StatusCode::NOT_FOUND,
            "conflict" => StatusCode::CONFLICT,
            _ => StatusCode::BAD_REQUEST,
        }
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let detail = match &err {
            Error::NotFound { what, id } => json!({ "kind": what, "id": id }),
            Error::Parse {
                source_name, line, ..
            } => json!({ "source": source_name, "line": line }),
            Error::MissingData { missing, .. } => json!({ "missing": missing }),
            _ => Value::Null,
        };
        ApiError {
            code: err.code().to_owned(),
            message: err.to_string(),
            detail,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;
type Shared = Arc<Engine>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    let bytes: &[u8] = if bytes.iter().all(u8::is_ascii_whitespace) {
        b"{}"
    } else {
        bytes
    };
    serde_json::from_slice(bytes)
        .map_err(|e| ApiError::new("parse_error", format!("request body: {e}")))
}

fn reply(generation: u64, key: &str, value: impl Serialize) -> ApiResult {
    let mut out = serde_json::Map::new();
    out.insert("generation".into(), json!(generation));
    out.insert(
        key.into(),
        serde_json::to_value(value).map_err(|e| ApiError::new("parse_error", e.to_string()))?,
    );
    Ok(Json(Value::Object(out)))
}

fn param<T: std::str::FromStr>(
    params: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, ApiError> {
    params
        .get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| ApiError::new("invalid_query", format!("bad value {v:?} for {key}")))
        })
        .transpose()
}

async fn health(State(engine): State<Shared>) -> Json<Value> {
    Json(json!({ "status": "ok", "generation": engine.current().generation }))
}

async fn document(State(engine): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let s = engine.current();
    reply(s.generation, "document", s.document(&id)?)
}

async fn references(State(engine): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let s = engine.current();
    reply(s.generation, "references", s.references(&id)?)
}

async fn citations(State(engine): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let s = engine.current();
    reply(s.generation, "citations", s.citations(&id)?)
}

async fn also_read(
    State(engine): State<Shared>,
    Path(id): Path<String>,
    UrlQuery(params): UrlQuery<HashMap<String, String>>,
) -> ApiResult {
    let s = engine.current();
    reply(
        s.generation,
        "results",
        s.also_read(&id, param(&params, "limit")?)?,
    )
}

async fn search(State(engine): State<Shared>, bytes: Bytes) -> ApiResult {
    let query: Query = body(&bytes)?;
    let s = engine.current();
    reply(s.generation, "results", s.search(&query)?)
}

async fn similar(State(engine): State<Shared>, bytes: Bytes) -> ApiResult {
    let req: SimilarRequest = body(&bytes)?;
    let s = engine.current();
    reply(s.generation, "results", s.similar(&req)?)
}

async fn operator(
    State(engine): State<Shared>,
    Path(kind): Path<String>,
    bytes: Bytes,
) -> ApiResult {
    let kind: OperatorKind = kind
        .parse()
        .map_err(|m: String| ApiError::new("not_found", m))?;
    let req: OpRequest = body(&bytes)?;
    let s = engine.current();
    reply(s.generation, "results", s.operator(kind, &req)?)
}

async fn chain(State(engine): State<Shared>, bytes: Bytes) -> ApiResult {
    let spec: ChainSpec = body(&bytes)?;
    let s = engine.current();
    let result = tokio::task::spawn_blocking(move || s.chain(&spec).map(|r| (s.generation, r)))
        .await
        .map_err(|e| ApiError::new("conflict", e.to_string()))?;
    let (generation, result) = result?;
    reply(generation, "chain", result)
}

async fn utility(State(engine): State<Shared>) -> ApiResult {
    let s = engine.current();
    reply(s.generation, "report", s.utility_report())
}

async fn countries(
    State(engine): State<Shared>,
    UrlQuery(params): UrlQuery<HashMap<String, String>>,
) -> ApiResult {
    let s = engine.current();
    let threshold = param(&params, "threshold")?.unwrap_or(ACTIVE_USAGE_THRESHOLD);
    reply(s.generation, "countries", s.country_analysis(threshold)?)
}

async fn readership(
    State(engine): State<Shared>,
    UrlQuery(params): UrlQuery<HashMap<String, String>>,
) -> ApiResult {
    let month: YearMonth = param::<YearMonth>(&params, "month")?
        .ok_or_else(|| ApiError::new("invalid_query", "month=YYYY-MM is required"))?;
    let s = engine.current();
    reply(
        s.generation,
        "readership",
        s.readership(month, param(&params, "threshold")?),
    )
}

async fn reload(State(engine): State<Shared>) -> ApiResult {
    let engine2 = Arc::clone(&engine);
    let generation = tokio::task::spawn_blocking(move || engine2.reload())
        .await
        .map_err(|e| ApiError::new("conflict", e.to_string()))??;
    Ok(Json(json!({ "status": "ok", "generation": generation })))
}

async fn not_found() -> ApiError {
    ApiError::new("not_found", "no such endpoint")
}

async fn method_not_allowed() -> Response {
    let err = ApiError::new("invalid_query", "method not allowed for this endpoint");
    (StatusCode::METHOD_NOT_ALLOWED, Json(err)).into_response()
}

pub fn router(engine: Shared) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/docs/{id}", get(document))
        .route("/docs/{id}/references", get(references))
        .route("/docs/{id}/citations", get(citations))
        .route("/docs/{id}/alsoread", get(also_read))
        .route("/search", post(search))
        .route("/similar", post(similar))
        .route("/op/{kind}", post(operator))
        .route("/chain", post(chain))
        .route("/analytics/utility", get(utility))
        .route("/analytics/countries", get(countries))
        .route("/analytics/readership", get(readership))
        .route("/admin/reload", post(reload))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .with_state(engine)
}

/// Serves until the listener fails or ctrl-c is received.
pub async fn serve_on(listener: TcpListener, engine: Shared) -> std::io::Result<()> {
    axum::serve(listener, router(engine))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub async fn bind(port: u16) -> crate::Result<TcpListener> {
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    TcpListener::bind(addr)
        .await
        .map_err(|e| Error::io(format!("port {port}"), e))
}
