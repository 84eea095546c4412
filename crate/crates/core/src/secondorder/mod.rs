//! List-to-list operators: turn a ranked list of documents into the collated
//! reference, citation or co-read lists of its members, and run declarative
//! chains of such steps.
//!
//! Operators only look at which documents are in the input list; input
//! scores are ignored. Every candidate score counts input members, so no
//! score can exceed the input length.

mod chain;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{CitationGraph, CoReadIndex};
use crate::retrieval::RankedList;

pub use chain::{run_chain, ChainContext, ChainResult, ChainSpec, Seed, Stage, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Similar,
    References,
    Citations,
    #[serde(alias = "also_read", alias = "also-read")]
    AlsoRead,
}

impl OperatorKind {
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Similar => "similar",
            OperatorKind::References => "references",
            OperatorKind::Citations => "citations",
            OperatorKind::AlsoRead => "alsoread",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "similar" => Ok(OperatorKind::Similar),
            "references" | "refs" => Ok(OperatorKind::References),
            "citations" | "cites" => Ok(OperatorKind::Citations),
            "alsoread" | "also_read" | "also-read" => Ok(OperatorKind::AlsoRead),
            other => Err(format!(
                "unknown operator {other:?}; expected similar, references, citations or alsoread"
            )),
        }
    }
}

fn input_set(input: &RankedList) -> BTreeSet<&str> {
    input.ids().collect()
}

fn rank(counts: BTreeMap<&str, usize>, limit: usize, provenance: String) -> RankedList {
    RankedList::from_scores(
        counts.into_iter().map(|(id, n)| (id.to_owned(), n as f64)),
        limit,
        provenance,
    )
}

/// Collated reference lists: each cited document scores the number of input
/// documents that cite it. Input documents stay eligible. Ids outside the
/// corpus are dropped unless `include_external` is set.
pub fn op_references(
    input: &RankedList,
    graph: &CitationGraph,
    limit: usize,
    include_external: bool,
) -> RankedList {
    let mut counts = BTreeMap::new();
    for doc in input_set(input) {
        for cited in graph.refs(doc) {
            if include_external || graph.in_corpus(cited) {
                *counts.entry(cited.as_str()).or_insert(0) += 1;
            }
        }
    }
    rank(counts, limit, format!("references(limit={limit})"))
}

/// Collated citation lists: each citing document scores the number of input
/// documents it cites.
pub fn op_citations(input: &RankedList, graph: &CitationGraph, limit: usize) -> RankedList {
    let mut counts = BTreeMap::new();
    for doc in input_set(input) {
        for citing in graph.cites(doc) {
            *counts.entry(citing.as_str()).or_insert(0) += 1;
        }
    }
    rank(counts, limit, format!("citations(limit={limit})"))
}

/// Collated co-read lists: with U the readers of any input document, each
/// other document scores the number of users in U who read it. Input
/// documents are excluded.
pub fn op_alsoread(input: &RankedList, coread: &CoReadIndex, limit: usize) -> RankedList {
    let members = input_set(input);
    let readers: BTreeSet<&str> = members
        .iter()
        .flat_map(|doc| coread.readers_of(doc))
        .collect();
    let mut counts = coread.count_reads_by(readers);
    counts.retain(|doc, _| !members.contains(doc));
    rank(counts, limit, format!("alsoread(limit={limit})"))
}
