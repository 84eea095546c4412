//! Random corpora and brute-force reference implementations shared by the
//! integration tests. The oracles work from the raw documents, edges and
//! events; they never consult the library's indexes.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use bibops::corpus::{AccessType, Corpus, Document, ReadEvent, ReadLog, SynonymTable};
use bibops::graph::{build_coread, CitationGraph, CoReadIndex};
use bibops::retrieval::InvertedIndex;
use bibops::{Query, RankedList};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DAY_MS: i64 = 86_400_000;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

const VOCAB: &[&str] = &[
    "supernova",
    "supernovae",
    "galaxy",
    "cluster",
    "clusters",
    "dark",
    "energy",
    "matter",
    "redshift",
    "survey",
    "metallicity",
    "abundance",
    "star",
    "stars",
    "quasar",
    "qso",
    "lensing",
    "distance",
    "light",
    "curve",
    "x",
    "cosmic",
    "dust",
    "of",
    "the",
    "universe",
    "Galaxy",
    "DARK",
    "Ia",
];
const SURNAMES: &[&str] = &[
    "Riess",
    "Kurtz",
    "Eichhorn",
    "Accomazzi",
    "Grant",
    "Murray",
    "Smith",
    "O'Neil",
    "Dark",
];
const SYNONYMS: &[&[&str]] = &[
    &["supernova", "supernovae"],
    &["metallicity", "abundance"],
    &["qso", "quasar"],
];

pub struct World {
    pub docs: Vec<Document>,
    pub synonyms: SynonymTable,
    pub edges: Vec<(String, String)>,
    pub events: Vec<ReadEvent>,
    pub corpus: Corpus,
    pub graph: CitationGraph,
    pub log: ReadLog,
    pub index: InvertedIndex,
    pub coread: CoReadIndex,
    pub window_days: u32,
    pub min_readers: usize,
}

fn words(rng: &mut ChaCha8Rng, min: usize, max: usize) -> String {
    let n = rng.random_range(min..=max);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(*VOCAB.choose(rng).unwrap());
    }
    let sep = [" ", " ", ", ", "-", ". "];
    let mut text = String::new();
    for (i, w) in out.iter().enumerate() {
        if i > 0 {
            text.push_str(sep.choose(rng).unwrap());
        }
        text.push_str(w);
    }
    text
}

/// A random corpus with at most `max_docs` documents, `max_users` readers
/// and `max_edges` raw citation pairs.
pub fn random_world(seed: u64, max_docs: usize, max_users: usize, max_edges: usize) -> World {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_docs = rng.random_range(1..=max_docs);
    let docs: Vec<Document> = (0..n_docs)
        .map(|i| {
            let n_auth = rng.random_range(0..=3);
            Document {
                id: format!("D{i:03}"),
                title: words(&mut rng, 1, 6),
                abstract_text: if rng.random_bool(0.1) {
                    String::new()
                } else {
                    words(&mut rng, 1, 14)
                },
                authors: (0..n_auth)
                    .map(|_| format!("{}, A.", SURNAMES.choose(&mut rng).unwrap()))
                    .collect(),
                year: rng.random_range(1990..=2002),
                journal: "ApJ".into(),
            }
        })
        .collect();
    let corpus = Corpus::from_documents(docs.clone()).unwrap();
    let synonyms = SynonymTable::new(
        SYNONYMS
            .iter()
            .map(|g| g.iter().map(|t| t.to_string()).collect())
            .collect(),
    )
    .unwrap();

    let n_edges = rng.random_range(0..=max_edges);
    let mut edges = Vec::new();
    for _ in 0..n_edges {
        let citing = docs.choose(&mut rng).unwrap().id.clone();
        let cited = if rng.random_bool(0.15) {
            format!("X{}", rng.random_range(0..5))
        } else {
            docs.choose(&mut rng).unwrap().id.clone()
        };
        if citing != cited {
            edges.push((citing, cited));
        }
    }
    let graph = CitationGraph::build(edges.clone(), corpus.id_set()).unwrap();

    let n_users = rng.random_range(1..=max_users);
    let n_events = rng.random_range(0..=n_users * 25);
    let base = 1_000_000_000_000i64;
    let mut events = Vec::new();
    for _ in 0..n_events {
        let user = format!("u{}", rng.random_range(0..n_users));
        let ts = base + rng.random_range(0..400 * DAY_MS);
        let t = if rng.random_bool(0.6) {
            *[AccessType::A, AccessType::E, AccessType::F, AccessType::G]
                .choose(&mut rng)
                .unwrap()
        } else {
            *AccessType::ALL.choose(&mut rng).unwrap()
        };
        let doc = if t == AccessType::Q {
            String::new()
        } else if rng.random_bool(0.05) {
            "GHOST".to_owned()
        } else {
            docs.choose(&mut rng).unwrap().id.clone()
        };
        events.push(ReadEvent::new(ts, &user, &doc, t));
        if rng.random_bool(0.2) {
            events.push(ReadEvent::new(
                ts + rng.random_range(0..DAY_MS),
                &user,
                &doc,
                t,
            ));
        }
    }
    let log = ReadLog::new(events.clone(), &corpus);
    let window_days = rng.random_range(30..=400);
    let min_readers = rng.random_range(1..=3);
    let coread = build_coread(&log, window_days, min_readers);
    let index = InvertedIndex::build(&corpus, &synonyms);
    World {
        docs,
        synonyms,
        edges,
        events,
        corpus,
        graph,
        log,
        index,
        coread,
        window_days,
        min_readers,
    }
}

/// A random subset of document ids, sometimes with an external id mixed in.
pub fn random_input(world: &World, seed: u64, with_external: bool) -> RankedList {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=world.docs.len().min(12));
    let mut ids: Vec<String> = world
        .docs
        .choose_multiple(&mut rng, n)
        .map(|d| d.id.clone())
        .collect();
    if with_external && rng.random_bool(0.5) {
        ids.push(format!("X{}", rng.random_range(0..5)));
    }
    RankedList::from_ids(&ids, "input")
}

pub fn random_query(seed: u64) -> Query {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut q = Query::default();
        if rng.random_bool(0.6) {
            q.title = Some(words(&mut rng, 1, 4));
        }
        if rng.random_bool(0.6) {
            q.abstract_text = Some(words(&mut rng, 1, 5));
        }
        if rng.random_bool(0.4) {
            let n = rng.random_range(1..=2);
            let names: Vec<String> = (0..n)
                .map(|_| format!("{}, B.", SURNAMES.choose(&mut rng).unwrap()))
                .collect();
            q.author = Some(names.join(";"));
        }
        if q.title.is_none() && q.abstract_text.is_none() && q.author.is_none() {
            continue;
        }
        if rng.random_bool(0.3) {
            q.year_min = Some(rng.random_range(1990..=2002));
        }
        if rng.random_bool(0.3) {
            q.year_max = Some(rng.random_range(q.year_min.unwrap_or(1990)..=2002));
        }
        q.limit = rng.random_range(1..=60);
        return q;
    }
}

// ---- oracles ---------------------------------------------------------------

/// Expected ranking: score descending, id ascending, cut at `limit`.
pub fn oracle_rank(mut scores: Vec<(String, f64)>, limit: usize) -> (Vec<(String, f64)>, bool) {
    scores.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    let truncated = scores.len() > limit;
    scores.truncate(limit);
    (scores, truncated)
}

pub fn assert_matches(actual: &RankedList, expected: &(Vec<(String, f64)>, bool), what: &str) {
    let got: Vec<(String, u64)> = actual
        .entries
        .iter()
        .map(|s| (s.id.clone(), s.score.to_bits()))
        .collect();
    let want: Vec<(String, u64)> = expected
        .0
        .iter()
        .map(|(id, s)| (id.clone(), s.to_bits()))
        .collect();
    assert_eq!(got, want, "{what}: ranked entries differ");
    assert_eq!(
        actual.truncated, expected.1,
        "{what}: truncated flag differs"
    );
}

fn oracle_tokens(text: &str, synonyms: &[&[&str]]) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_alphanumeric() {
            cur.push(ch);
        } else {
            if cur.chars().count() >= 2 {
                let lower = cur.to_lowercase();
                let canon = synonyms
                    .iter()
                    .find(|g| g.contains(&lower.as_str()))
                    .map_or(lower.clone(), |g| g[0].to_owned());
                out.push(canon);
            }
            cur.clear();
        }
    }
    out
}

fn surname_tokens(names: &[String]) -> Vec<String> {
    names
        .iter()
        .flat_map(|n| oracle_tokens(n.split(',').next().unwrap_or(""), SYNONYMS))
        .collect()
}

fn field_tokens(doc: &Document, field: usize) -> Vec<String> {
    match field {
        0 => oracle_tokens(&doc.title, SYNONYMS),
        1 => oracle_tokens(&doc.abstract_text, SYNONYMS),
        _ => surname_tokens(&doc.authors),
    }
}

/// Scores by scanning every document: per field, idf·(1 + ln tf) summed over
/// distinct query terms in ascending order, divided by ln(1 + field length);
/// fields are added title, abstract, author.
pub fn oracle_scores(
    docs: &[Document],
    field_terms: &[(usize, Vec<String>)],
    years: (Option<i32>, Option<i32>),
) -> Vec<(String, f64)> {
    let n = docs.len() as f64;
    let tokens: Vec<[Vec<String>; 3]> = docs
        .iter()
        .map(|d| [field_tokens(d, 0), field_tokens(d, 1), field_tokens(d, 2)])
        .collect();
    let mut out = Vec::new();
    for (di, doc) in docs.iter().enumerate() {
        if years.0.is_some_and(|lo| doc.year < lo) || years.1.is_some_and(|hi| doc.year > hi) {
            continue;
        }
        let mut total = 0.0;
        let mut matched = false;
        for (field, terms) in field_terms {
            let mut distinct: Vec<&String> =
                terms.iter().collect::<BTreeSet<_>>().into_iter().collect();
            distinct.sort();
            let mut sum = 0.0;
            let mut hit = false;
            for term in distinct {
                let tf = tokens[di][*field].iter().filter(|t| *t == term).count();
                if tf == 0 {
                    continue;
                }
                let df = tokens.iter().filter(|t| t[*field].contains(term)).count();
                sum += (1.0 + n / df as f64).ln() * (1.0 + (tf as f64).ln());
                hit = true;
            }
            if hit {
                let len = tokens[di][*field].len() as f64;
                total += sum / (1.0 + len).ln();
                matched = true;
            }
        }
        if matched {
            out.push((doc.id.clone(), total));
        }
    }
    out
}

pub fn oracle_search(world: &World, q: &Query) -> (Vec<(String, f64)>, bool) {
    let mut fields = Vec::new();
    if let Some(t) = q.title.as_deref().filter(|t| !t.trim().is_empty()) {
        fields.push((0, oracle_tokens(t, SYNONYMS)));
    }
    if let Some(t) = q.abstract_text.as_deref().filter(|t| !t.trim().is_empty()) {
        fields.push((1, oracle_tokens(t, SYNONYMS)));
    }
    if let Some(t) = q.author.as_deref().filter(|t| !t.trim().is_empty()) {
        let names: Vec<String> = t.split(';').map(str::to_owned).collect();
        fields.push((2, surname_tokens(&names)));
    }
    oracle_rank(
        oracle_scores(&world.docs, &fields, (q.year_min, q.year_max)),
        q.limit,
    )
}

fn edge_set(world: &World) -> BTreeSet<(String, String)> {
    world.edges.iter().cloned().collect()
}

fn corpus_ids(world: &World) -> BTreeSet<String> {
    world.docs.iter().map(|d| d.id.clone()).collect()
}

pub fn oracle_references(
    world: &World,
    input: &[String],
    limit: usize,
    include_external: bool,
) -> (Vec<(String, f64)>, bool) {
    let edges = edge_set(world);
    let ids = corpus_ids(world);
    let candidates: BTreeSet<String> = edges.iter().map(|(_, b)| b.clone()).collect();
    let mut scores = Vec::new();
    for c in candidates {
        if !include_external && !ids.contains(&c) {
            continue;
        }
        let n = input
            .iter()
            .filter(|i| edges.contains(&((*i).clone(), c.clone())))
            .count();
        if n > 0 {
            scores.push((c, n as f64));
        }
    }
    oracle_rank(scores, limit)
}

pub fn oracle_citations(
    world: &World,
    input: &[String],
    limit: usize,
) -> (Vec<(String, f64)>, bool) {
    let edges = edge_set(world);
    let mut scores = Vec::new();
    for c in corpus_ids(world) {
        let n = input
            .iter()
            .filter(|i| edges.contains(&(c.clone(), (*i).clone())))
            .count();
        if n > 0 {
            scores.push((c, n as f64));
        }
    }
    oracle_rank(scores, limit)
}

/// (user, doc) pairs read inside the trailing window.
pub fn oracle_window_reads(world: &World) -> BTreeSet<(String, String)> {
    let ids = corpus_ids(world);
    let active: Vec<&ReadEvent> = world
        .events
        .iter()
        .filter(|e| e.access_type == AccessType::Q || ids.contains(&e.doc))
        .collect();
    let Some(end) = active.iter().map(|e| e.timestamp).max() else {
        return BTreeSet::new();
    };
    let start = end - i64::from(world.window_days) * DAY_MS;
    active
        .into_iter()
        .filter(|e| {
            matches!(
                e.access_type,
                AccessType::A | AccessType::E | AccessType::F | AccessType::G
            ) && e.timestamp >= start
        })
        .map(|e| (e.user.clone(), e.doc.clone()))
        .collect()
}

fn readers(pairs: &BTreeSet<(String, String)>, doc: &str) -> BTreeSet<String> {
    pairs
        .iter()
        .filter(|(_, d)| d == doc)
        .map(|(u, _)| u.clone())
        .collect()
}

pub fn oracle_alsoread_op(
    world: &World,
    input: &[String],
    limit: usize,
) -> (Vec<(String, f64)>, bool) {
    let pairs = oracle_window_reads(world);
    let users: BTreeSet<String> = input.iter().flat_map(|d| readers(&pairs, d)).collect();
    let mut scores = Vec::new();
    for c in corpus_ids(world) {
        if input.contains(&c) {
            continue;
        }
        let n = readers(&pairs, &c).intersection(&users).count();
        if n > 0 {
            scores.push((c, n as f64));
        }
    }
    oracle_rank(scores, limit)
}

pub fn oracle_also_read(world: &World, doc: &str, limit: usize) -> (Vec<(String, f64)>, bool) {
    let pairs = oracle_window_reads(world);
    let users = readers(&pairs, doc);
    let mut scores = Vec::new();
    for c in corpus_ids(world) {
        if c == doc {
            continue;
        }
        let all = readers(&pairs, &c);
        let n = all.intersection(&users).count();
        if n > 0 && all.len() >= world.min_readers {
            scores.push((c, n as f64));
        }
    }
    oracle_rank(scores, limit)
}

/// Runs every operator on one random world against its oracle.
pub fn check_world(seed: u64) {
    let world = random_world(seed, 50, 20, 300);
    for k in 0..4u64 {
        let s = seed.wrapping_mul(31).wrapping_add(k);
        let input = random_input(&world, s, true);
        let ids: Vec<String> = input.ids().map(str::to_owned).collect();
        let limit = 1 + (s as usize % 40);

        let got = bibops::secondorder::op_references(&input, &world.graph, limit, k % 2 == 0);
        assert_matches(
            &got,
            &oracle_references(&world, &ids, limit, k % 2 == 0),
            "op_references",
        );

        let got = bibops::secondorder::op_citations(&input, &world.graph, limit);
        assert_matches(&got, &oracle_citations(&world, &ids, limit), "op_citations");

        let got = bibops::secondorder::op_alsoread(&input, &world.coread, limit);
        assert_matches(
            &got,
            &oracle_alsoread_op(&world, &ids, limit),
            "op_alsoread",
        );

        let doc = &ids[0];
        if world.corpus.contains(doc) {
            let got = world.coread.also_read(doc, limit).unwrap();
            assert_matches(&got, &oracle_also_read(&world, doc, limit), "also_read");
        }

        let q = random_query(s);
        let got = world.index.search(&q).unwrap();
        assert_matches(&got, &oracle_search(&world, &q), "search");
    }
}

/// Counts per doc of a ranked list, for readable failure output.
pub fn as_map(list: &RankedList) -> BTreeMap<String, f64> {
    list.entries
        .iter()
        .map(|s| (s.id.clone(), s.score))
        .collect()
}

/// Synthetic countries whose usage follows usage/pop = 1e-6·(gdp/pop)²,
/// each usage multiplied by lognormal noise of the given sigma (none when
/// sigma is 0).
pub fn model_countries(seed: u64, n: usize, sigma: f64) -> Vec<bibops::corpus::CountryRecord> {
    use rand_distr::{Distribution, LogNormal};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = LogNormal::new(0.0, sigma.max(f64::MIN_POSITIVE)).unwrap();
    (0..n)
        .map(|i| {
            let per_capita = rng.random_range(500u64..60_000) as f64;
            let population = rng.random_range(1u64..1000) * 1_000_000;
            let exact = per_capita * per_capita * population as f64 * 1e-6;
            let factor = if sigma > 0.0 {
                noise.sample(&mut rng)
            } else {
                1.0
            };
            bibops::corpus::CountryRecord {
                iso: format!(
                    "{}{}",
                    (b'A' + (i / 26) as u8) as char,
                    (b'A' + (i % 26) as u8) as char
                ),
                gdp: per_capita * population as f64,
                population,
                iau_members: 1,
                culture: bibops::corpus::Culture::European,
                usage: (exact * factor).round() as u64,
            }
        })
        .collect()
}

/// Ingests the fixture corpus into a fresh temporary data directory.
pub fn fixture_data_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let sources = bibops::interface::IngestSources {
        documents: fixture("corpus/documents.jsonl"),
        citations: fixture("corpus/citations.csv"),
        reads: fixture("corpus/reads.csv"),
        synonyms: Some(fixture("corpus/synonyms.txt")),
        countries: Some(fixture("corpus/countries.csv")),
        user_countries: Some(fixture("corpus/user_countries.csv")),
        utility: None,
    };
    bibops::interface::ingest(&sources, dir.path()).unwrap();
    dir
}

pub const SEED_DOC: &str = "1998AJ....116.1009R";
pub const CANONICAL_STEPS: &str = "similar:500,alsoread:500,references:500,citations:500";
