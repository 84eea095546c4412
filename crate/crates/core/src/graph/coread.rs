use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::corpus::ReadLog;
use crate::error::{Error, Result};
use crate::retrieval::RankedList;

pub const DEFAULT_WINDOW_DAYS: u32 = 180;
pub const DEFAULT_MIN_READERS: usize = 2;

const DAY_MS: i64 = 86_400_000;

/// Who read what within the trailing window of a read log.
///
/// Built from article reads only (abstract and full-text access types);
/// repeat reads of one document by one user collapse to a single entry
/// holding the latest timestamp.
#[derive(Debug, Clone, Default)]
pub struct CoReadIndex {
    readers: BTreeMap<String, BTreeMap<String, i64>>,
    user_docs: BTreeMap<String, BTreeSet<String>>,
    min_readers: usize,
    window_start: Option<i64>,
    corpus_ids: Arc<BTreeSet<String>>,
}

/// Indexes read events in the `window_days` ending at the log's latest
/// timestamp (inclusive at both ends).
pub fn build_coread(log: &ReadLog, window_days: u32, min_readers: usize) -> CoReadIndex {
    let window_start = log
        .max_timestamp()
        .map(|end| end - i64::from(window_days) * DAY_MS);
    let mut readers: BTreeMap<String, BTreeMap<String, i64>> = BTreeMap::new();
    let mut user_docs: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    if let Some(start) = window_start {
        for e in log
            .active()
            .iter()
            .filter(|e| e.access_type.is_read() && e.timestamp >= start)
        {
            let last = readers
                .entry(e.doc.clone())
                .or_default()
                .entry(e.user.clone())
                .or_insert(e.timestamp);
            *last = (*last).max(e.timestamp);
            user_docs
                .entry(e.user.clone())
                .or_default()
                .insert(e.doc.clone());
        }
    }
    CoReadIndex {
        readers,
        user_docs,
        min_readers,
        window_start,
        corpus_ids: Arc::clone(log.corpus_ids()),
    }
}

impl CoReadIndex {
    pub fn min_readers(&self) -> usize {
        self.min_readers
    }

    /// Earliest indexed instant, or `None` for an empty log.
    pub fn window_start(&self) -> Option<i64> {
        self.window_start
    }

    pub fn knows_doc(&self, doc: &str) -> bool {
        self.corpus_ids.contains(doc)
    }

    pub fn readers_of(&self, doc: &str) -> impl Iterator<Item = &str> {
        self.readers
            .get(doc)
            .into_iter()
            .flat_map(|m| m.keys().map(String::as_str))
    }

    /// Last in-window read of `doc` by `user`.
    pub fn last_read(&self, doc: &str, user: &str) -> Option<i64> {
        self.readers.get(doc)?.get(user).copied()
    }

    pub fn reader_count(&self, doc: &str) -> usize {
        self.readers.get(doc).map_or(0, BTreeMap::len)
    }

    pub fn docs_of(&self, user: &str) -> impl Iterator<Item = &str> {
        self.user_docs
            .get(user)
            .into_iter()
            .flat_map(|s| s.iter().map(String::as_str))
    }

    pub fn users(&self) -> impl Iterator<Item = &str> {
        self.user_docs.keys().map(String::as_str)
    }

    /// Counts, for every document read by someone in `users`, how many of
    /// them read it.
    pub(crate) fn count_reads_by<'a>(
        &'a self,
        users: impl IntoIterator<Item = &'a str>,
    ) -> BTreeMap<&'a str, usize> {
        let mut counts = BTreeMap::new();
        for user in users {
            for doc in self.docs_of(user) {
                *counts.entry(doc).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Documents most read by the readers of `doc`, scored by the number of
    /// those readers who read them. Candidates with fewer than
    /// `min_readers` readers overall are dropped.
    pub fn also_read(&self, doc: &str, limit: usize) -> Result<RankedList> {
        if !self.knows_doc(doc) {
            return Err(Error::not_found("document", doc));
        }
        let counts = self.count_reads_by(self.readers_of(doc));
        let scored = counts
            .into_iter()
            .filter(|&(c, _)| c != doc && self.reader_count(c) >= self.min_readers)
            .map(|(c, n)| (c.to_owned(), n as f64));
        Ok(RankedList::from_scores(
            scored,
            limit,
            format!("also_read({doc})"),
        ))
    }
}
