//! Service surface: engine state, data-directory persistence, the HTTP API
//! and the command-line front end.

pub mod cli;
pub mod config;
pub mod engine;
pub mod http;
pub mod persist;

pub use config::{Config, DATA_DIR_ENV};
pub use engine::{Engine, EngineState, OpRequest, SimilarRequest};
pub use http::{router, ApiError};
pub use persist::{ingest, IngestSources, IngestSummary, Snapshot};
