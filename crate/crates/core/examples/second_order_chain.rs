//! The four-step operator chain: papers similar to a seed, what their
//! readers also read, what those cite, and who else cites that.

use std::path::PathBuf;

use bibops::corpus::{load_citations, load_documents, load_read_log, load_synonyms};
use bibops::graph::build_coread;
use bibops::retrieval::InvertedIndex;
use bibops::secondorder::{run_chain, ChainContext, ChainSpec, Seed};

fn main() -> bibops::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let corpus = load_documents(&dir.join("documents.jsonl"))?;
    let index = InvertedIndex::build(&corpus, &load_synonyms(&dir.join("synonyms.txt"))?);
    let graph = load_citations(&dir.join("citations.csv"), &corpus)?;
    let coread = build_coread(&load_read_log(&dir.join("reads.csv"), &corpus)?, 180, 2);
    let ctx = ChainContext {
        index: &index,
        graph: &graph,
        coread: &coread,
    };

    let mut spec = ChainSpec::new(
        Seed::Ids(vec!["1998AJ....116.1009R".into()]),
        ChainSpec::parse_steps("similar:500,alsoread:500,references:500,citations:500")?,
    );
    spec.year_min = Some(2002);
    let result = run_chain(&spec, &ctx)?;
    for stage in &result.stages {
        println!(
            "step {} {:10} {:3} -> {:3}",
            stage.step,
            stage.kind.name(),
            stage.input_len,
            stage.output.len()
        );
        for hit in stage.output.entries.iter().take(3) {
            println!(
                "    {:7.3}  {}",
                hit.score,
                corpus.get(&hit.id).unwrap().title
            );
        }
    }
    Ok(())
}
