//! Citation adjacency and reader co-occurrence.

mod citation;
mod coread;

pub use citation::{CitationGraph, Neighbor};
pub use coread::{build_coread, CoReadIndex, DEFAULT_MIN_READERS, DEFAULT_WINDOW_DAYS};
