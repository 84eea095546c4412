use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::config::Config;
use super::persist::{self, missing_files, read_generation};
use crate::analytics::{
    self, access_counts, bifurcation_report, country_usage, filter_active_countries, unique_reads,
    usage_power_law, user_month_stats, BifurcationReport, CountryUsage, CultureConstants,
    PowerLawFit, UserMonthStats, UtilityReport, UtilityTable, YearMonth,
};
use crate::corpus::{self, Corpus, CountryRecord, Document, ReadLog, SynonymTable};
use crate::error::{Error, Result};
use crate::graph::{build_coread, CitationGraph, CoReadIndex, Neighbor};
use crate::retrieval::{InvertedIndex, Query, RankedList};
use crate::secondorder::{
    op_alsoread, op_citations, op_references, run_chain, ChainContext, ChainResult, ChainSpec,
    OperatorKind,
};

/// Everything built from one generation of a data directory.
#[derive(Debug)]
pub struct EngineState {
    pub generation: u64,
    pub config: Config,
    pub corpus: Corpus,
    pub index: InvertedIndex,
    pub graph: CitationGraph,
    pub coread: CoReadIndex,
    pub log: ReadLog,
    pub countries: Option<Vec<CountryRecord>>,
    pub user_countries: BTreeMap<String, String>,
    pub utility: UtilityTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarRequest {
    pub seeds: Vec<String>,
    #[serde(default)]
    pub year_min: Option<i32>,
    #[serde(default)]
    pub year_max: Option<i32>,
    #[serde(default)]
    pub limit: Option<usize>,
}

/// Input to a single list operator: the ids of the current list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpRequest {
    pub ids: Vec<String>,
    #[serde(default)]
    pub limit: Option<usize>,
    #[serde(default)]
    pub include_external: bool,
    #[serde(default)]
    pub year_min: Option<i32>,
    #[serde(default)]
    pub year_max: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryAnalysis {
    pub threshold: u64,
    pub countries: usize,
    pub active: Vec<CountryRecord>,
    pub usage_fit: Option<PowerLawFit>,
    pub bifurcation: BifurcationReport,
    pub predicted_scientists: BTreeMap<String, f64>,
    pub log_usage: BTreeMap<String, CountryUsage>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Readership {
    pub month: YearMonth,
    pub unique_reads: u64,
    pub users: UserMonthStats,
}

fn positive(limit: Option<usize>, default: usize) -> Result<usize> {
    match limit {
        Some(0) => Err(Error::InvalidQuery("limit must be positive".into())),
        Some(n) => Ok(n),
        None => Ok(default),
    }
}

impl EngineState {
    /// Builds all indexes from the canonical files in `dir`.
    pub fn load(dir: &Path, config: Config) -> Result<Self> {
        let missing = missing_files(dir);
        if !missing.is_empty() {
            return Err(Error::MissingData {
                dir: dir.to_owned(),
                missing,
            });
        }
        let generation = read_generation(dir)?;
        let corpus = corpus::load_documents(&dir.join(persist::DOCUMENTS_FILE))?;
        let graph = corpus::load_citations(&dir.join(persist::CITATIONS_FILE), &corpus)?;
        let log = corpus::load_read_log(&dir.join(persist::READS_FILE), &corpus)?;
        let optional = |name: &str| Some(dir.join(name)).filter(|p| p.is_file());
        let synonyms = optional(persist::SYNONYMS_FILE)
            .map(|p| corpus::load_synonyms(&p))
            .transpose()?
            .unwrap_or_default();
        let countries = optional(persist::COUNTRIES_FILE)
            .map(|p| corpus::load_countries(&p))
            .transpose()?;
        let user_countries = optional(persist::USER_COUNTRIES_FILE)
            .map(|p| corpus::load_user_countries(&p))
            .transpose()?
            .unwrap_or_default();
        let utility = optional(persist::UTILITY_FILE)
            .map(|p| analytics::load_utility_table(&p))
            .transpose()?
            .unwrap_or_default();
        Ok(Self::from_parts(
            generation,
            config,
            corpus,
            &synonyms,
            graph,
            log,
            countries,
            user_countries,
            utility,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        generation: u64,
        config: Config,
        corpus: Corpus,
        synonyms: &SynonymTable,
        graph: CitationGraph,
        log: ReadLog,
        countries: Option<Vec<CountryRecord>>,
        user_countries: BTreeMap<String, String>,
        utility: UtilityTable,
    ) -> Self {
        let index = InvertedIndex::build(&corpus, synonyms);
        let coread = build_coread(&log, config.window_days, config.min_readers);
        EngineState {
            generation,
            config,
            corpus,
            index,
            graph,
            coread,
            log,
            countries,
            user_countries,
            utility,
        }
    }

    pub fn chain_context(&self) -> ChainContext<'_> {
        ChainContext {
            index: &self.index,
            graph: &self.graph,
            coread: &self.coread,
        }
    }

    pub fn document(&self, id: &str) -> Result<&Document> {
        self.corpus
            .get(id)
            .ok_or_else(|| Error::not_found("document", id))
    }

    pub fn references(&self, id: &str) -> Result<Vec<Neighbor>> {
        self.graph.references_of(id)
    }

    pub fn citations(&self, id: &str) -> Result<Vec<String>> {
        self.graph.citations_of(id)
    }

    pub fn also_read(&self, id: &str, limit: Option<usize>) -> Result<RankedList> {
        self.coread
            .also_read(id, positive(limit, self.config.search_limit)?)
    }

    pub fn search(&self, query: &Query) -> Result<RankedList> {
        self.index.search(query)
    }

    pub fn similar(&self, req: &SimilarRequest) -> Result<RankedList> {
        self.index.find_similar(
            &req.seeds,
            req.year_min,
            req.year_max,
            positive(req.limit, self.config.operator_limit)?,
        )
    }

    /// Applies one operator to an explicit id list. Unknown ids are an error
    /// unless they are external ids of the citation graph.
    pub fn operator(&self, kind: OperatorKind, req: &OpRequest) -> Result<RankedList> {
        let limit = positive(req.limit, self.config.operator_limit)?;
        if let Some(bad) = req
            .ids
            .iter()
            .find(|id| !self.corpus.contains(id) && !self.graph.is_external(id))
        {
            return Err(Error::not_found("document", bad.as_str()));
        }
        let input = RankedList::from_ids(&req.ids, "input");
        Ok(match kind {
            OperatorKind::References => {
                op_references(&input, &self.graph, limit, req.include_external)
            }
            OperatorKind::Citations => op_citations(&input, &self.graph, limit),
            OperatorKind::AlsoRead => op_alsoread(&input, &self.coread, limit),
            OperatorKind::Similar => {
                let seeds: Vec<&str> = input.ids().filter(|id| self.corpus.contains(id)).collect();
                self.index
                    .find_similar(&seeds, req.year_min, req.year_max, limit)?
            }
        })
    }

    pub fn chain(&self, spec: &ChainSpec) -> Result<ChainResult> {
        run_chain(spec, &self.chain_context())
    }

    pub fn utility_report(&self) -> UtilityReport {
        analytics::utility_report(&access_counts(&self.log), &self.utility)
    }

    pub fn readership(&self, month: YearMonth, threshold: Option<u64>) -> Readership {
        Readership {
            month,
            unique_reads: unique_reads(&self.log, month),
            users: user_month_stats(
                &self.log,
                month,
                threshold.unwrap_or(self.config.heavy_threshold),
            ),
        }
    }

    pub fn country_analysis(&self, threshold: u64) -> Result<CountryAnalysis> {
        let countries = self
            .countries
            .as_ref()
            .ok_or_else(|| Error::not_found("data file", persist::COUNTRIES_FILE))?;
        Ok(analyze_countries(
            countries,
            threshold,
            &self.log,
            &self.user_countries,
        ))
    }
}

/// Active-country filter, usage fit, bifurcation and scientist predictions
/// for a country table, plus per-country usage measured from `log`.
pub fn analyze_countries(
    countries: &[CountryRecord],
    threshold: u64,
    log: &ReadLog,
    user_countries: &BTreeMap<String, String>,
) -> CountryAnalysis {
    let constants = CultureConstants::default();
    let active = filter_active_countries(countries, threshold);
    CountryAnalysis {
        threshold,
        countries: countries.len(),
        usage_fit: usage_power_law(&active).ok(),
        bifurcation: bifurcation_report(countries, &constants),
        predicted_scientists: countries
            .iter()
            .map(|r| (r.iso.clone(), analytics::predict_scientists(r, &constants)))
            .collect(),
        log_usage: if user_countries.is_empty() {
            BTreeMap::new()
        } else {
            country_usage(log, user_countries)
        },
        active,
    }
}

/// Shared handle to the current [`EngineState`]. Readers take an `Arc`
/// snapshot and never block a reload for longer than the pointer swap.
#[derive(Debug)]
pub struct Engine {
    data_dir: PathBuf,
    config: Config,
    state: RwLock<Arc<EngineState>>,
}

impl Engine {
    pub fn open(data_dir: impl Into<PathBuf>, config: Config) -> Result<Self> {
        let data_dir = data_dir.into();
        let state = EngineState::load(&data_dir, config.clone())?;
        Ok(Engine {
            data_dir,
            config,
            state: RwLock::new(Arc::new(state)),
        })
    }

    pub fn from_state(state: EngineState) -> Self {
        Engine {
            data_dir: PathBuf::new(),
            config: state.config.clone(),
            state: RwLock::new(Arc::new(state)),
        }
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    pub fn current(&self) -> Arc<EngineState> {
        Arc::clone(&self.state.read().expect("engine lock poisoned"))
    }

    /// Rebuilds from the data directory if its generation changed, then
    /// swaps the new state in. Returns the generation now being served.
    pub fn reload(&self) -> Result<u64> {
        let current = self.current().generation;
        if read_generation(&self.data_dir)? == current {
            return Ok(current);
        }
        let fresh = Arc::new(EngineState::load(&self.data_dir, self.config.clone())?);
        let generation = fresh.generation;
        *self.state.write().expect("engine lock poisoned") = fresh;
        Ok(generation)
    }
}
