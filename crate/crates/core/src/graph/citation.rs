use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// A cited or citing document, flagged when it lies outside the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Neighbor {
    pub id: String,
    pub external: bool,
}

/// Forward (references) and inverse (citations) adjacency over citing→cited
/// pairs. Adjacency lists are sorted and duplicate-free. Cited ids that are
/// not in the corpus are kept and reported through [`external_ids`].
///
/// [`external_ids`]: CitationGraph::external_ids
#[derive(Debug, Clone, Default)]
pub struct CitationGraph {
    forward: BTreeMap<String, Vec<String>>,
    inverse: BTreeMap<String, Vec<String>>,
    external: BTreeSet<String>,
    corpus_ids: Arc<BTreeSet<String>>,
    edge_count: usize,
    duplicates: usize,
}

impl CitationGraph {
    pub fn build(
        edges: impl IntoIterator<Item = (String, String)>,
        corpus_ids: Arc<BTreeSet<String>>,
    ) -> Result<Self> {
        let mut pairs = BTreeSet::new();
        let mut duplicates = 0;
        for (citing, cited) in edges {
            if !corpus_ids.contains(&citing) {
                return Err(Error::Validation(format!(
                    "citing document {citing} is not in the corpus"
                )));
            }
            if citing == cited {
                return Err(Error::Validation(format!("document {citing} cites itself")));
            }
            if !pairs.insert((citing, cited)) {
                duplicates += 1;
            }
        }

        let mut forward: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut inverse: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut external = BTreeSet::new();
        let edge_count = pairs.len();
        // BTreeSet iteration is (citing, cited) ordered, so forward lists come
        // out sorted; inverse lists are sorted after the fact.
        for (citing, cited) in pairs {
            if !corpus_ids.contains(&cited) {
                external.insert(cited.clone());
            }
            inverse
                .entry(cited.clone())
                .or_default()
                .push(citing.clone());
            forward.entry(citing).or_default().push(cited);
        }
        for list in inverse.values_mut() {
            list.sort();
        }

        Ok(CitationGraph {
            forward,
            inverse,
            external,
            corpus_ids,
            edge_count,
            duplicates,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates
    }

    pub fn external_ids(&self) -> impl Iterator<Item = &str> {
        self.external.iter().map(String::as_str)
    }

    pub fn is_external(&self, id: &str) -> bool {
        self.external.contains(id)
    }

    pub fn in_corpus(&self, id: &str) -> bool {
        self.corpus_ids.contains(id)
    }

    /// All pairs in (citing, cited) order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.forward
            .iter()
            .flat_map(|(a, bs)| bs.iter().map(move |b| (a.as_str(), b.as_str())))
    }

    /// Cited ids of `doc`; empty for unknown ids.
    pub fn refs(&self, doc: &str) -> &[String] {
        self.forward.get(doc).map_or(&[], Vec::as_slice)
    }

    /// Citing ids of `doc`; empty for unknown ids.
    pub fn cites(&self, doc: &str) -> &[String] {
        self.inverse.get(doc).map_or(&[], Vec::as_slice)
    }

    pub fn references_of(&self, doc: &str) -> Result<Vec<Neighbor>> {
        if !self.in_corpus(doc) {
            return Err(Error::not_found("document", doc));
        }
        Ok(self
            .refs(doc)
            .iter()
            .map(|id| Neighbor {
                id: id.clone(),
                external: self.is_external(id),
            })
            .collect())
    }

    /// Citing documents of `doc`, which may be a corpus or an external id.
    pub fn citations_of(&self, doc: &str) -> Result<Vec<String>> {
        if !self.in_corpus(doc) && !self.is_external(doc) {
            return Err(Error::not_found("document", doc));
        }
        Ok(self.cites(doc).to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(xs: &[&str]) -> Arc<BTreeSet<String>> {
        Arc::new(xs.iter().map(|s| s.to_string()).collect())
    }

    fn edges(xs: &[(&str, &str)]) -> Vec<(String, String)> {
        xs.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn references_sorted() {
        let g =
            CitationGraph::build(edges(&[("x", "b"), ("x", "a")]), ids(&["x", "a", "b"])).unwrap();
        let refs: Vec<_> = g
            .references_of("x")
            .unwrap()
            .into_iter()
            .map(|n| n.id)
            .collect();
        assert_eq!(refs, ["a", "b"]);
        assert!(g.references_of("a").unwrap().is_empty());
    }

    #[test]
    fn citations_sorted() {
        let g = CitationGraph::build(
            edges(&[("y", "a"), ("x", "a"), ("x", "b")]),
            ids(&["x", "y", "a", "b"]),
        )
        .unwrap();
        assert_eq!(g.citations_of("a").unwrap(), ["x", "y"]);
        assert_eq!(g.citations_of("b").unwrap(), ["x"]);
        assert!(g.citations_of("x").unwrap().is_empty());
    }

    #[test]
    fn unknown_docs_not_found() {
        let g = CitationGraph::build(edges(&[("x", "EXT")]), ids(&["x"])).unwrap();
        assert!(matches!(
            g.references_of("nope"),
            Err(Error::NotFound { .. })
        ));
        assert!(matches!(
            g.citations_of("nope"),
            Err(Error::NotFound { .. })
        ));
        assert_eq!(g.citations_of("EXT").unwrap(), ["x"]);
        // external ids have no reference lists of their own
        assert!(g.references_of("EXT").is_err());
    }

    proptest! {
        #[test]
        fn forward_inverse_consistent(raw in proptest::collection::vec((0u8..12, 0u8..16), 0..80)) {
            let corpus = Arc::new((0..12).map(|i| format!("d{i:02}")).collect::<BTreeSet<_>>());
            let es: Vec<(String, String)> = raw
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (format!("d{a:02}"), format!("d{b:02}")))
                .collect();
            let g = CitationGraph::build(es.clone(), corpus).unwrap();
            let unique: BTreeSet<_> = es.iter().cloned().collect();
            prop_assert_eq!(g.edge_count(), unique.len());
            prop_assert_eq!(g.duplicates_dropped(), es.len() - unique.len());
            for (a, b) in &unique {
                prop_assert!(g.refs(a).contains(b));
                prop_assert!(g.cites(b).contains(a));
            }
            for (a, bs) in &g.forward {
                prop_assert!(bs.windows(2).all(|w| w[0] < w[1]));
                for b in bs {
                    prop_assert!(g.cites(b).contains(a));
                }
            }
            for (b, as_) in &g.inverse {
                prop_assert!(as_.windows(2).all(|w| w[0] < w[1]));
                for a in as_ {
                    prop_assert!(g.refs(a).contains(b));
                }
            }
            for ext in g.external_ids() {
                prop_assert!(!g.in_corpus(ext));
            }
        }
    }
}
