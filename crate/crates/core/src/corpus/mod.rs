//! Data model, file formats and validation for the inputs the engine works on:
//! bibliographic records, citation pairs, read logs, synonym groups and
//! per-country indicator tables.
//!
//! Every loader has a matching `save_*` that writes the canonical form of the
//! file (records sorted by key, `\n` line endings), so `save(load(f))` is a
//! fixed point.

mod citations;
mod countries;
mod reads;
mod synonyms;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use citations::{citations_to_string, load_citations, parse_citations, save_citations};
pub use countries::{
    countries_to_string, load_countries, load_user_countries, parse_countries,
    parse_user_countries, save_countries, CountryRecord, Culture,
};
pub use reads::{
    format_timestamp, load_read_log, parse_read_log, parse_timestamp, read_log_to_string,
    save_read_log, AccessType, ReadEvent, ReadLog,
};
pub use synonyms::{
    load_synonyms, parse_synonyms, save_synonyms, synonyms_to_string, SynonymTable,
};

pub const MIN_YEAR: i32 = 1600;
pub const MAX_YEAR: i32 = 2100;

/// One bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
    #[serde(default)]
    pub authors: Vec<String>,
    pub year: i32,
    #[serde(default)]
    pub journal: String,
}

impl Document {
    pub fn validate(&self) -> Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("document id must be non-empty".into());
        }
        if self.title.trim().is_empty() {
            return Err(format!("document {} has an empty title", self.id));
        }
        if !(MIN_YEAR..=MAX_YEAR).contains(&self.year) {
            return Err(format!(
                "document {} has year {} outside [{MIN_YEAR}, {MAX_YEAR}]",
                self.id, self.year
            ));
        }
        Ok(())
    }
}

/// A validated, immutable set of documents keyed by id.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    docs: BTreeMap<String, Document>,
    ids: Arc<BTreeSet<String>>,
}

impl Corpus {
    pub fn from_documents(docs: impl IntoIterator<Item = Document>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for doc in docs {
            doc.validate().map_err(Error::Validation)?;
            if map.contains_key(&doc.id) {
                return Err(Error::Validation(format!(
                    "duplicate document id {}",
                    doc.id
                )));
            }
            map.insert(doc.id.clone(), doc);
        }
        Ok(Self::from_map(map))
    }

    fn from_map(docs: BTreeMap<String, Document>) -> Self {
        let ids = Arc::new(docs.keys().cloned().collect());
        Corpus { docs, ids }
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.docs.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.docs.contains_key(id)
    }

    /// Documents in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = &Document> {
        self.docs.values()
    }

    /// Shared handle on the id set, used by structures that must answer
    /// "is this a corpus document" after the corpus itself is dropped.
    pub fn id_set(&self) -> Arc<BTreeSet<String>> {
        Arc::clone(&self.ids)
    }
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_string(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn source_name(path: &Path) -> String {
    path.display().to_string()
}

pub fn load_documents(path: &Path) -> Result<Corpus> {
    parse_documents(&read_to_string(path)?, &source_name(path))
}

/// Parses line-delimited JSON records. Blank lines are skipped.
pub fn parse_documents(text: &str, source: &str) -> Result<Corpus> {
    let mut docs: BTreeMap<String, (usize, Document)> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document =
            serde_json::from_str(line).map_err(|e| Error::parse(source, lineno, e.to_string()))?;
        doc.validate()
            .map_err(|msg| Error::Validation(format!("{source}:{lineno}: {msg}")))?;
        if let Some((first, _)) = docs.get(&doc.id) {
            return Err(Error::Validation(format!(
                "duplicate document id {} on line {lineno} (first defined on line {first})",
                doc.id
            )));
        }
        docs.insert(doc.id.clone(), (lineno, doc));
    }
    Ok(Corpus::from_map(
        docs.into_iter().map(|(id, (_, doc))| (id, doc)).collect(),
    ))
}

pub fn documents_to_string(corpus: &Corpus) -> String {
    let mut out = String::new();
    for doc in corpus.iter() {
        out.push_str(&serde_json::to_string(doc).expect("document serializes"));
        out.push('\n');
    }
    out
}

pub fn save_documents(corpus: &Corpus, path: &Path) -> Result<()> {
    write_string(path, &documents_to_string(corpus))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(id: &str) -> String {
        format!(
            r#"{{"id":"{id}","title":"T {id}","abstract":"a","authors":["Doe, J."],"year":2001,"journal":"ApJ"}}"#
        )
    }

    #[test]
    fn loads_three_records() {
        let text = [line("a"), line("b"), line("c")].join("\n");
        let corpus = parse_documents(&text, "docs").unwrap();
        assert_eq!(corpus.len(), 3);
        assert_eq!(corpus.get("b").unwrap().authors, vec!["Doe, J."]);
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        assert!(parse_documents("", "docs").unwrap().is_empty());
    }

    #[test]
    fn duplicate_id_names_id_and_line() {
        let text = [line("a"), line("x"), line("b"), line("c"), line("x")].join("\n");
        let err = parse_documents(&text, "docs").unwrap_err().to_string();
        assert!(err.contains("duplicate document id x"), "{err}");
        assert!(err.contains("line 5"), "{err}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = format!("{}\n{{not json\n", line("a"));
        match parse_documents(&text, "docs").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range_year_and_empty_title() {
        let bad_year = line("a").replace("2001", "1500");
        assert!(matches!(
            parse_documents(&bad_year, "docs"),
            Err(Error::Validation(_))
        ));
        let no_title = line("a").replace("T a", " ");
        assert!(matches!(
            parse_documents(&no_title, "docs"),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn canonical_form_is_sorted_and_stable() {
        let text = [line("c"), line("a"), line("b")].join("\r\n");
        let corpus = parse_documents(&text, "docs").unwrap();
        let canon = documents_to_string(&corpus);
        assert!(canon.starts_with(r#"{"id":"a""#));
        let again = documents_to_string(&parse_documents(&canon, "docs").unwrap());
        assert_eq!(canon, again);
    }
}
