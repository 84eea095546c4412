//! Bibliographic search and recommendation over a document corpus, its
//! citation graph and a usage log.
//!
//! The crate is organised in layers:
//!
//! * [`corpus`] loads, validates and canonically re-writes the input files.
//! * [`retrieval`] builds a fielded inverted index and answers ranked,
//!   recall-oriented text queries, including "find similar" queries seeded
//!   by documents.
//! * [`graph`] answers reference, citation and "also read" queries.
//! * [`secondorder`] maps whole result lists to the collated reference,
//!   citation or co-read lists of their members, and runs chains of those
//!   operators.
//! * [`analytics`] covers readership counts, the country research model,
//!   power-law fits and the utility-time report.
//! * [`interface`] ties everything into an [`interface::Engine`] served over
//!   HTTP and driven by the `bibops` command-line tool.

pub mod analytics;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod interface;
pub mod retrieval;
pub mod secondorder;

pub use error::{Error, Result};
pub use retrieval::{Query, RankedList, Scored};
