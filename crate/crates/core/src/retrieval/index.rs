use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{author_tokens, tokenize};
use crate::corpus::{Corpus, SynonymTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Title,
    Abstract,
    Author,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Title, Field::Abstract, Field::Author];

    pub fn name(self) -> &'static str {
        match self {
            Field::Title => "title",
            Field::Abstract => "abstract",
            Field::Author => "author",
        }
    }

    pub(crate) fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    /// Position of the document in [`InvertedIndex::doc_ids`].
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct FieldIndex {
    pub(crate) postings: BTreeMap<String, Vec<Posting>>,
    pub(crate) lengths: Vec<u32>,
}

impl FieldIndex {
    fn add(&mut self, doc: u32, tokens: &[String]) {
        let mut counts: BTreeMap<&str, u32> = BTreeMap::new();
        for t in tokens {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
        for (term, tf) in counts {
            self.postings
                .entry(term.to_owned())
                .or_default()
                .push(Posting { doc, tf });
        }
        self.lengths.push(tokens.len() as u32);
    }
}

/// Per-field postings over a corpus. Documents are numbered in ascending id
/// order, so postings lists are sorted by document id.
#[derive(Debug, Clone, Default)]
pub struct InvertedIndex {
    pub(crate) doc_ids: Vec<String>,
    pub(crate) years: Vec<i32>,
    pub(crate) abstracts: Vec<String>,
    pub(crate) fields: [FieldIndex; 3],
    pub(crate) synonyms: SynonymTable,
}

impl InvertedIndex {
    pub fn build(corpus: &Corpus, synonyms: &SynonymTable) -> Self {
        let mut index = InvertedIndex {
            synonyms: synonyms.clone(),
            ..Default::default()
        };
        for (i, doc) in corpus.iter().enumerate() {
            let i = i as u32;
            index.doc_ids.push(doc.id.clone());
            index.years.push(doc.year);
            index.abstracts.push(doc.abstract_text.clone());
            index.fields[Field::Title.slot()].add(i, &tokenize(&doc.title, synonyms));
            index.fields[Field::Abstract.slot()].add(i, &tokenize(&doc.abstract_text, synonyms));
            index.fields[Field::Author.slot()].add(i, &author_tokens(&doc.authors, synonyms));
        }
        index
    }

    pub fn len(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_ids.is_empty()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn synonyms(&self) -> &SynonymTable {
        &self.synonyms
    }

    pub(crate) fn position(&self, id: &str) -> Option<usize> {
        self.doc_ids.binary_search_by(|d| d.as_str().cmp(id)).ok()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.position(id).is_some()
    }

    pub fn postings(&self, field: Field, term: &str) -> &[Posting] {
        self.fields[field.slot()]
            .postings
            .get(term)
            .map_or(&[], Vec::as_slice)
    }

    /// Every (term, postings) pair of `field` in term order.
    pub fn terms(&self, field: Field) -> impl Iterator<Item = (&str, &[Posting])> {
        self.fields[field.slot()]
            .postings
            .iter()
            .map(|(t, p)| (t.as_str(), p.as_slice()))
    }

    pub fn document_frequency(&self, field: Field, term: &str) -> usize {
        self.postings(field, term).len()
    }

    /// Token count of `id`'s `field`.
    pub fn field_length(&self, field: Field, id: &str) -> Option<u32> {
        self.position(id)
            .map(|i| self.fields[field.slot()].lengths[i])
    }

    pub fn year(&self, id: &str) -> Option<i32> {
        self.position(id).map(|i| self.years[i])
    }

    pub fn abstract_of(&self, id: &str) -> Option<&str> {
        self.position(id).map(|i| self.abstracts[i].as_str())
    }

    /// Field-for-field equality of the built structures, ignoring the stored
    /// synonym table.
    pub fn same_postings(&self, other: &InvertedIndex) -> bool {
        self.doc_ids == other.doc_ids && self.fields == other.fields
    }
}
