use std::path::Path;

use super::{read_to_string, source_name, write_string, Corpus};
use crate::error::{Error, Result};
use crate::graph::CitationGraph;

pub fn load_citations(path: &Path, corpus: &Corpus) -> Result<CitationGraph> {
    parse_citations(&read_to_string(path)?, &source_name(path), corpus)
}

/// Parses headerless `citing,cited` rows. Repeated pairs are dropped and
/// counted in [`CitationGraph::duplicates_dropped`].
pub fn parse_citations(text: &str, source: &str, corpus: &Corpus) -> Result<CitationGraph> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut edges = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            Error::parse(
                source,
                e.position().map_or(0, |p| p.line() as usize),
                e.to_string(),
            )
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() == 1 && row[0].is_empty() {
            continue;
        }
        if row.len() != 2 || row[0].is_empty() || row[1].is_empty() {
            return Err(Error::parse(
                source,
                line,
                "expected 2 non-empty fields (citing,cited)",
            ));
        }
        if !corpus.contains(&row[0]) {
            return Err(Error::Validation(format!(
                "{source}:{line}: citing document {} is not in the corpus",
                &row[0]
            )));
        }
        edges.push((row[0].to_owned(), row[1].to_owned()));
    }
    CitationGraph::build(edges, corpus.id_set())
}

pub fn citations_to_string(graph: &CitationGraph) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for (citing, cited) in graph.edges() {
        w.write_record([citing, cited]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn save_citations(graph: &CitationGraph, path: &Path) -> Result<()> {
    write_string(path, &citations_to_string(graph))
}
