//! First-order text search over titles, abstracts and author surnames.
//!
//! Matching is any-term (OR): a document scores as soon as one query term
//! occurs in one queried field. Each field contributes
//!
//! ```text
//! sum over matched terms t of  ln(1 + N / df(t)) * (1 + ln tf(t))
//! ---------------------------------------------------------------
//!                   ln(1 + field length)
//! ```
//!
//! and a document's score is the sum of its field scores. Query terms are
//! deduplicated and summed in ascending order so scores are reproducible
//! to the bit.

mod index;
mod ranked;
mod search;

pub use index::{Field, InvertedIndex, Posting};
pub use ranked::{RankedList, Scored};
pub use search::{Query, DEFAULT_OPERATOR_LIMIT, DEFAULT_SEARCH_LIMIT};

use crate::corpus::SynonymTable;

/// Lowercases, splits on anything that is not alphanumeric, drops tokens
/// shorter than two characters and maps synonyms to their canonical term.
pub fn tokenize(text: &str, synonyms: &SynonymTable) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(|t| {
            let lower = t.to_lowercase();
            match synonyms.canonical(&lower) {
                Some(canon) => canon.to_owned(),
                None => lower,
            }
        })
        .collect()
}

/// Surname tokens of an author list: for each entry the text before its
/// first comma.
pub fn author_tokens<S: AsRef<str>>(authors: &[S], synonyms: &SynonymTable) -> Vec<String> {
    authors
        .iter()
        .flat_map(|a| {
            let surname = a.as_ref().split(',').next().unwrap_or_default();
            tokenize(surname, synonyms)
        })
        .collect()
}
