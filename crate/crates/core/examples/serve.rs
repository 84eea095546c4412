//! Ingests the fixture corpus into a scratch directory and serves it.
//!
//! ```text
//! cargo run --example serve -- 8080
//! curl -s localhost:8080/health
//! curl -s -XPOST localhost:8080/search -d '{"title":"supernovae"}'
//! ```

use std::path::PathBuf;
use std::sync::Arc;

use bibops::interface::http::{bind, serve_on};
use bibops::interface::{ingest, Config, Engine, IngestSources};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let port: u16 = std::env::args().nth(1).map_or(Ok(8080), |p| p.parse())?;
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let data = std::env::temp_dir().join("bibops-example-data");
    let summary = ingest(
        &IngestSources {
            documents: fixtures.join("documents.jsonl"),
            citations: fixtures.join("citations.csv"),
            reads: fixtures.join("reads.csv"),
            synonyms: Some(fixtures.join("synonyms.txt")),
            countries: Some(fixtures.join("countries.csv")),
            user_countries: Some(fixtures.join("user_countries.csv")),
            utility: None,
        },
        &data,
    )?;
    print!("{}", summary.to_text());

    let engine = Arc::new(Engine::open(&data, Config::default())?);
    let listener = bind(port).await?;
    println!("listening on {}; ctrl-c to stop", listener.local_addr()?);
    serve_on(listener, engine).await?;
    Ok(())
}
