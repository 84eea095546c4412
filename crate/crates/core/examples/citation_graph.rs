//! Reference and citation lists, including cited works outside the corpus.

use std::path::PathBuf;

use bibops::corpus::{load_citations, load_documents};

fn main() -> bibops::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let corpus = load_documents(&dir.join("documents.jsonl"))?;
    let graph = load_citations(&dir.join("citations.csv"), &corpus)?;
    println!(
        "{} edges, {} duplicate pair(s) dropped, external: {:?}",
        graph.edge_count(),
        graph.duplicates_dropped(),
        graph.external_ids().collect::<Vec<_>>()
    );

    let seed = "1998AJ....116.1009R";
    println!("\n{seed} cites:");
    for n in graph.references_of(seed)? {
        let title = corpus
            .get(&n.id)
            .map_or("(not in corpus)", |d| d.title.as_str());
        println!("  {:20} {}", n.id, title);
    }
    println!("\ncited by:");
    for id in graph.citations_of(seed)? {
        println!("  {id}");
    }
    // external ids have citations but no reference list
    let ext = graph.external_ids().next().unwrap().to_owned();
    println!(
        "\n{ext} is cited by {} document(s)",
        graph.citations_of(&ext)?.len()
    );
    Ok(())
}
