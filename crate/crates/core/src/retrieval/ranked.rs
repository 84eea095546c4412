use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

/// One scored document in a [`RankedList`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub id: String,
    pub score: f64,
}

/// Ordered results passed between search and the list operators.
///
/// Entries are sorted by descending score with ties broken by ascending id,
/// and no id appears twice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub entries: Vec<Scored>,
    pub provenance: String,
    /// Set when candidates were cut off by the limit.
    #[serde(default)]
    pub truncated: bool,
}

pub(crate) fn rank_order(a: &Scored, b: &Scored) -> Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.id.cmp(&b.id))
}

impl RankedList {
    pub fn empty(provenance: impl Into<String>) -> Self {
        RankedList {
            entries: Vec::new(),
            provenance: provenance.into(),
            truncated: false,
        }
    }

    /// Ranks `(id, score)` pairs and keeps the top `limit`. Ids must be
    /// distinct.
    pub fn from_scores(
        scores: impl IntoIterator<Item = (String, f64)>,
        limit: usize,
        provenance: impl Into<String>,
    ) -> Self {
        let mut entries: Vec<Scored> = scores
            .into_iter()
            .map(|(id, score)| Scored { id, score })
            .collect();
        entries.sort_by(rank_order);
        let truncated = entries.len() > limit;
        entries.truncate(limit);
        RankedList {
            entries,
            provenance: provenance.into(),
            truncated,
        }
    }

    /// An unscored list in the given order (duplicates dropped), each entry
    /// scored 1.
    pub fn from_ids<S: AsRef<str>>(ids: &[S], provenance: impl Into<String>) -> Self {
        let mut seen = HashSet::new();
        let entries = ids
            .iter()
            .map(AsRef::as_ref)
            .filter(|id| seen.insert(*id))
            .map(|id| Scored {
                id: id.to_owned(),
                score: 1.0,
            })
            .collect::<Vec<_>>();
        let mut list = RankedList {
            entries,
            provenance: provenance.into(),
            truncated: false,
        };
        list.entries.sort_by(rank_order);
        list
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.id.as_str())
    }

    pub fn score_of(&self, id: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.id == id).map(|e| e.score)
    }

    /// Checks the ordering and uniqueness invariants.
    pub fn is_well_formed(&self) -> bool {
        let mut seen = HashSet::new();
        self.entries
            .iter()
            .all(|e| e.score >= 0.0 && seen.insert(&e.id))
            && self
                .entries
                .windows(2)
                .all(|w| rank_order(&w[0], &w[1]) == Ordering::Less)
    }
}
