//! Co-readership: what else did the readers of a paper read recently?

use std::path::PathBuf;

use bibops::corpus::{format_timestamp, load_documents, load_read_log};
use bibops::graph::{build_coread, DEFAULT_MIN_READERS, DEFAULT_WINDOW_DAYS};

fn main() -> bibops::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let corpus = load_documents(&dir.join("documents.jsonl"))?;
    let log = load_read_log(&dir.join("reads.csv"), &corpus)?;
    println!(
        "{} active events, {} quarantined",
        log.len(),
        log.quarantined().len()
    );

    let coread = build_coread(&log, DEFAULT_WINDOW_DAYS, DEFAULT_MIN_READERS);
    if let Some(start) = coread.window_start() {
        println!("window starts {}", format_timestamp(start));
    }
    let doc = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "2002ApJ...577L...1A".into());
    println!("{doc}: {} reader(s)", coread.reader_count(&doc));
    for hit in &coread.also_read(&doc, 10)?.entries {
        println!(
            "  {:2} shared  {}",
            hit.score,
            corpus.get(&hit.id).unwrap().title
        );
    }
    Ok(())
}
