//! On-disk layout of a data directory.
//!
//! Ingestion writes the canonical form of every input file plus a
//! plain-text snapshot of the built postings and citation adjacency. The
//! engine always rebuilds from the canonical files; the snapshot is there
//! for inspection and for other tools.
//!
//! ```text
//! data/
//!   GENERATION            decimal counter, bumped on every ingest
//!   documents.jsonl
//!   citations.csv
//!   reads.csv
//!   synonyms.txt          optional
//!   countries.csv         optional
//!   user_countries.csv    optional
//!   utility.csv           optional
//!   snapshot/postings.tsv field <TAB> term <TAB> doc:tf,doc:tf,...
//!   snapshot/lengths.tsv  doc <TAB> title_len <TAB> abstract_len <TAB> author_len
//!   snapshot/adjacency.tsv citing <TAB> cited,cited,...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analytics::parse_utility_table;
use crate::corpus::{
    self, citations_to_string, countries_to_string, documents_to_string, read_log_to_string,
    synonyms_to_string, Corpus, SynonymTable,
};
use crate::error::{Error, Result};
use crate::graph::CitationGraph;
use crate::retrieval::{Field, InvertedIndex};

pub const GENERATION_FILE: &str = "GENERATION";
pub const DOCUMENTS_FILE: &str = "documents.jsonl";
pub const CITATIONS_FILE: &str = "citations.csv";
pub const READS_FILE: &str = "reads.csv";
pub const SYNONYMS_FILE: &str = "synonyms.txt";
pub const COUNTRIES_FILE: &str = "countries.csv";
pub const USER_COUNTRIES_FILE: &str = "user_countries.csv";
pub const UTILITY_FILE: &str = "utility.csv";
pub const SNAPSHOT_DIR: &str = "snapshot";

pub const REQUIRED_FILES: [&str; 3] = [DOCUMENTS_FILE, CITATIONS_FILE, READS_FILE];

/// Source files for an ingest. Optional inputs are skipped when absent.
#[derive(Debug, Clone, Default)]
pub struct IngestSources {
    pub documents: PathBuf,
    pub citations: PathBuf,
    pub reads: PathBuf,
    pub synonyms: Option<PathBuf>,
    pub countries: Option<PathBuf>,
    pub user_countries: Option<PathBuf>,
    pub utility: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngestSummary {
    pub generation: u64,
    pub documents: usize,
    pub citation_edges: usize,
    pub duplicate_citations: usize,
    pub external_cited: Vec<String>,
    pub read_events: usize,
    pub quarantined_events: usize,
    pub countries: Option<usize>,
}

impl IngestSummary {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "generation          {}", self.generation);
        let _ = writeln!(s, "documents           {}", self.documents);
        let _ = writeln!(s, "citation edges      {}", self.citation_edges);
        let _ = writeln!(s, "duplicate citations {}", self.duplicate_citations);
        let _ = writeln!(s, "external cited ids  {}", self.external_cited.len());
        let _ = writeln!(s, "read events         {}", self.read_events);
        let _ = writeln!(s, "quarantined events  {}", self.quarantined_events);
        if let Some(n) = self.countries {
            let _ = writeln!(s, "countries           {n}");
        }
        s
    }
}

pub fn read_generation(dir: &Path) -> Result<u64> {
    let path = dir.join(GENERATION_FILE);
    if !path.exists() {
        return Ok(1);
    }
    let text = corpus::read_to_string(&path)?;
    text.trim()
        .parse()
        .map_err(|_| Error::parse(path.display().to_string(), 1, "generation is not a number"))
}

/// Files from [`REQUIRED_FILES`] missing in `dir`.
pub fn missing_files(dir: &Path) -> Vec<String> {
    REQUIRED_FILES
        .iter()
        .filter(|f| !dir.join(f).is_file())
        .map(|f| f.to_string())
        .collect()
}

fn remove_if_present(path: &Path) -> Result<()> {
    match fs::remove_file(path) {
        Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(Error::io(path, e)),
        _ => Ok(()),
    }
}

/// Validates every source, writes canonical copies and the snapshot into
/// `out`, and bumps the generation counter.
pub fn ingest(sources: &IngestSources, out: &Path) -> Result<IngestSummary> {
    let corpus = corpus::load_documents(&sources.documents)?;
    let graph = corpus::load_citations(&sources.citations, &corpus)?;
    let log = corpus::load_read_log(&sources.reads, &corpus)?;
    let synonyms = match &sources.synonyms {
        Some(p) => corpus::load_synonyms(p)?,
        None => SynonymTable::default(),
    };
    let countries = sources
        .countries
        .as_deref()
        .map(corpus::load_countries)
        .transpose()?;
    let user_countries = sources
        .user_countries
        .as_deref()
        .map(corpus::load_user_countries)
        .transpose()?;
    let utility_text = sources
        .utility
        .as_deref()
        .map(|p| -> Result<String> {
            let text = corpus::read_to_string(p)?;
            parse_utility_table(&text, &p.display().to_string())?;
            Ok(text)
        })
        .transpose()?;

    fs::create_dir_all(out.join(SNAPSHOT_DIR)).map_err(|e| Error::io(out, e))?;
    let generation = if out.join(GENERATION_FILE).exists() {
        read_generation(out)? + 1
    } else {
        1
    };

    let write = |name: &str, text: &str| corpus::write_string(&out.join(name), text);
    write(DOCUMENTS_FILE, &documents_to_string(&corpus))?;
    write(CITATIONS_FILE, &citations_to_string(&graph))?;
    write(READS_FILE, &read_log_to_string(&log))?;
    write(SYNONYMS_FILE, &synonyms_to_string(&synonyms))?;
    // optional files left over from an earlier generation must not leak in
    let write_or_remove = |name: &str, text: Option<String>| match text {
        Some(t) => write(name, &t),
        None => remove_if_present(&out.join(name)),
    };
    write_or_remove(
        COUNTRIES_FILE,
        countries.as_deref().map(countries_to_string),
    )?;
    write_or_remove(
        USER_COUNTRIES_FILE,
        user_countries
            .as_ref()
            .map(|m| m.iter().map(|(u, iso)| format!("{u},{iso}\n")).collect()),
    )?;
    write_or_remove(UTILITY_FILE, utility_text)?;

    let index = InvertedIndex::build(&corpus, &synonyms);
    Snapshot::build(&index, &graph).write(&out.join(SNAPSHOT_DIR))?;
    write(GENERATION_FILE, &format!("{generation}\n"))?;

    Ok(IngestSummary {
        generation,
        documents: corpus.len(),
        citation_edges: graph.edge_count(),
        duplicate_citations: graph.duplicates_dropped(),
        external_cited: graph.external_ids().map(str::to_owned).collect(),
        read_events: log.len(),
        quarantined_events: log.quarantined().len(),
        countries: countries.map(|c| c.len()),
    })
}

/// Plain-text image of an index and citation graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Snapshot {
    /// (field, term) → [(doc id, tf)]
    pub postings: BTreeMap<(Field, String), Vec<(String, u32)>>,
    /// doc id → [title, abstract, author] lengths
    pub lengths: BTreeMap<String, [u32; 3]>,
    pub adjacency: BTreeMap<String, Vec<String>>,
}

impl Snapshot {
    pub fn build(index: &InvertedIndex, graph: &CitationGraph) -> Self {
        let ids = index.doc_ids();
        let mut postings = BTreeMap::new();
        for field in Field::ALL {
            for (term, list) in index.terms(field) {
                postings.insert(
                    (field, term.to_owned()),
                    list.iter()
                        .map(|p| (ids[p.doc as usize].clone(), p.tf))
                        .collect(),
                );
            }
        }
        let lengths = ids
            .iter()
            .map(|id| {
                let len = |f| index.field_length(f, id).unwrap_or(0);
                (
                    id.clone(),
                    [len(Field::Title), len(Field::Abstract), len(Field::Author)],
                )
            })
            .collect();
        let mut adjacency: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (a, b) in graph.edges() {
            adjacency
                .entry(a.to_owned())
                .or_default()
                .push(b.to_owned());
        }
        Snapshot {
            postings,
            lengths,
            adjacency,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut postings = String::new();
        for ((field, term), list) in &self.postings {
            let cells: Vec<String> = list.iter().map(|(d, tf)| format!("{d}:{tf}")).collect();
            let _ = writeln!(postings, "{}\t{term}\t{}", field.name(), cells.join(","));
        }
        let mut lengths = String::new();
        for (id, [t, a, au]) in &self.lengths {
            let _ = writeln!(lengths, "{id}\t{t}\t{a}\t{au}");
        }
        let mut adjacency = String::new();
        for (id, cited) in &self.adjacency {
            let _ = writeln!(adjacency, "{id}\t{}", cited.join(","));
        }
        corpus::write_string(&dir.join("postings.tsv"), &postings)?;
        corpus::write_string(&dir.join("lengths.tsv"), &lengths)?;
        corpus::write_string(&dir.join("adjacency.tsv"), &adjacency)
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let mut snap = Snapshot::default();
        let bad = |file: &str, line: usize| {
            Error::parse(file.to_owned(), line, "malformed snapshot line")
        };

        let text = corpus::read_to_string(&dir.join("postings.tsv"))?;
        for (i, line) in text.lines().enumerate() {
            let mut parts = line.split('\t');
            let (Some(field), Some(term), Some(cells), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad("postings.tsv", i + 1));
            };
            let field = Field::ALL
                .into_iter()
                .find(|f| f.name() == field)
                .ok_or_else(|| bad("postings.tsv", i + 1))?;
            let list = cells
                .split(',')
                .map(|cell| {
                    let (d, tf) = cell.rsplit_once(':')?;
                    Some((d.to_owned(), tf.parse().ok()?))
                })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("postings.tsv", i + 1))?;
            snap.postings.insert((field, term.to_owned()), list);
        }

        let text = corpus::read_to_string(&dir.join("lengths.tsv"))?;
        for (i, line) in text.lines().enumerate() {
            let parts: Vec<&str> = line.split('\t').collect();
            let nums: Option<Vec<u32>> = parts
                .get(1..)
                .map(|p| p.iter().filter_map(|n| n.parse().ok()).collect());
            match nums {
                Some(n) if parts.len() == 4 && n.len() == 3 => {
                    snap.lengths.insert(parts[0].to_owned(), [n[0], n[1], n[2]]);
                }
                _ => return Err(bad("lengths.tsv", i + 1)),
            }
        }

        let text = corpus::read_to_string(&dir.join("adjacency.tsv"))?;
        for (i, line) in text.lines().enumerate() {
            let (id, cited) = line
                .split_once('\t')
                .ok_or_else(|| bad("adjacency.tsv", i + 1))?;
            snap.adjacency
                .insert(id.to_owned(), cited.split(',').map(str::to_owned).collect());
        }
        Ok(snap)
    }
}

/// Convenience for tests and tools: the snapshot a corpus would produce.
pub fn snapshot_of(corpus: &Corpus, synonyms: &SynonymTable, graph: &CitationGraph) -> Snapshot {
    Snapshot::build(&InvertedIndex::build(corpus, synonyms), graph)
}
