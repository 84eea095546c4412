//! Fielded search over the fixture corpus.
//!
//! `cargo run --example search -- "dark energy"`

use std::path::PathBuf;

use bibops::corpus::{load_documents, load_synonyms};
use bibops::retrieval::InvertedIndex;
use bibops::Query;

fn main() -> bibops::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let corpus = load_documents(&dir.join("documents.jsonl"))?;
    let synonyms = load_synonyms(&dir.join("synonyms.txt"))?;
    let index = InvertedIndex::build(&corpus, &synonyms);

    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "accelerating supernovae".into());
    let queries = [
        ("title", Query::title(text.clone()).with_limit(5)),
        (
            "abstract, 2002 only",
            Query::abstract_text(text.clone())
                .with_years(Some(2002), Some(2002))
                .with_limit(5),
        ),
        (
            "author",
            Query::author("Riess, A.; Perlmutter").with_limit(5),
        ),
    ];
    for (label, q) in queries {
        let hits = index.search(&q)?;
        println!(
            "{label}: {} hit(s){}",
            hits.len(),
            if hits.truncated { " (truncated)" } else { "" }
        );
        for hit in &hits.entries {
            let doc = corpus.get(&hit.id).expect("hits come from the corpus");
            println!("  {:7.4}  {}  {}", hit.score, doc.year, doc.title);
        }
    }
    // "supernova" and "supernovae" share a synonym group
    let a = index.search(&Query::title("supernova"))?;
    let b = index.search(&Query::title("supernovae"))?;
    assert_eq!(a, b);
    Ok(())
}
