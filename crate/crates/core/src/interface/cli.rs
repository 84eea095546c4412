//! The `bibops` command line.
//!
//! Exit status is 0 on success, 1 when the operation fails, and 2 on usage
//! errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use super::config::{Config, DATA_DIR_ENV};
use super::engine::{analyze_countries, Engine, EngineState, OpRequest, SimilarRequest};
use super::persist::{ingest, IngestSources};
use crate::analytics::{
    compare_shares, load_access_counts, load_shares, load_utility_table, readership_ratio,
    utility_report, Format, Table, UtilityTable, YearMonth, ACTIVE_USAGE_THRESHOLD,
    NON_ELECTRONIC_READS_BASELINE,
};
use crate::corpus::{self, AccessType, ReadLog};
use crate::error::{Error, Result};
use crate::retrieval::{Query, RankedList};
use crate::secondorder::{ChainResult, ChainSpec, OperatorKind, Seed};

#[derive(Debug, Parser)]
#[command(
    name = "bibops",
    version,
    about = "Bibliographic search, list operators and readership analytics"
)]
pub struct Cli {
    /// Data directory produced by `ingest`.
    #[arg(long, global = true, env = DATA_DIR_ENV, default_value = "data")]
    pub data: PathBuf,

    /// Flat key=value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output format: text, csv or json.
    #[arg(long, global = true, default_value = "text")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate input files and write a data directory.
    Ingest(IngestArgs),
    /// Fielded text search.
    Search(SearchArgs),
    /// Documents with abstracts similar to the given ones.
    Similar(SimilarArgs),
    /// Apply one list operator to explicit document ids.
    Op(OpArgs),
    /// Run an operator chain.
    Chain(ChainArgs),
    /// Analytics reports.
    #[command(subcommand)]
    Report(ReportCommand),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub docs: PathBuf,
    #[arg(long)]
    pub cites: PathBuf,
    #[arg(long)]
    pub reads: PathBuf,
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    #[arg(long)]
    pub countries: Option<PathBuf>,
    #[arg(long)]
    pub user_countries: Option<PathBuf>,
    #[arg(long)]
    pub utility: Option<PathBuf>,
    /// Output directory; defaults to --data.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub title: Option<String>,
    #[arg(long = "abstract")]
    pub abstract_text: Option<String>,
    #[arg(long)]
    pub author: Option<String>,
    #[arg(long)]
    pub year_min: Option<i32>,
    #[arg(long)]
    pub year_max: Option<i32>,
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimilarArgs {
    #[arg(required = true)]
    pub seeds: Vec<String>,
    #[arg(long)]
    pub year_min: Option<i32>,
    #[arg(long)]
    pub year_max: Option<i32>,
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OpArgs {
    /// references, citations, alsoread or similar.
    pub kind: OperatorKind,
    #[arg(required = true)]
    pub ids: Vec<String>,
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long)]
    pub include_external: bool,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Seed the chain with the best abstract matches for this text.
    #[arg(
        long,
        conflicts_with = "seed_ids",
        required_unless_present = "seed_ids"
    )]
    pub seed_text: Option<String>,
    /// Number of search hits used as the seed list.
    #[arg(long, default_value_t = 1)]
    pub seed_limit: usize,
    /// Comma-separated document ids.
    #[arg(long, value_delimiter = ',')]
    pub seed_ids: Option<Vec<String>>,
    /// Steps as kind:limit pairs, e.g. similar:500,alsoread:500
    #[arg(long)]
    pub steps: String,
    #[arg(long)]
    pub year_min: Option<i32>,
    #[arg(long)]
    pub year_max: Option<i32>,
    #[arg(long)]
    pub include_external: bool,
    /// Rows shown per stage in text output.
    #[arg(long, default_value_t = 10)]
    pub show: usize,
}

#[derive(Debug, Subcommand)]
pub enum ReportCommand {
    /// Research time gained per access type, in FTE years.
    Utility {
        /// `code,count` file; without it counts come from the data directory's read log.
        #[arg(long)]
        counts: Option<PathBuf>,
        /// `code,minutes` overrides.
        #[arg(long)]
        utility: Option<PathBuf>,
        #[arg(long, default_value_t = NON_ELECTRONIC_READS_BASELINE)]
        baseline: u64,
    },
    /// Unique reads and heavy-user statistics for one month.
    Readership {
        #[arg(long)]
        month: YearMonth,
        #[arg(long)]
        threshold: Option<u64>,
    },
    /// Country model: active filter, usage fit, bifurcation counts.
    Countries {
        /// Country table; defaults to the data directory's.
        #[arg(long)]
        countries: Option<PathBuf>,
        #[arg(long, default_value_t = ACTIVE_USAGE_THRESHOLD)]
        threshold: u64,
    },
    /// Reads share vs. citation and paper shares per country.
    Shares {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub port: Option<u16>,
}

impl Cli {
    fn load_config(&self) -> Result<Config> {
        self.config
            .as_deref()
            .map(Config::load)
            .transpose()
            .map(Option::unwrap_or_default)
    }

    fn state(&self) -> Result<EngineState> {
        EngineState::load(&self.data, self.load_config()?)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn ranked_table(list: &RankedList, rows: usize, state: Option<&EngineState>) -> Table {
    let mut t = Table::new(["rank", "id", "score", "year", "title"]);
    for (i, e) in list.entries.iter().take(rows).enumerate() {
        let doc = state.and_then(|s| s.corpus.get(&e.id));
        t.push([
            (i + 1).to_string(),
            e.id.clone(),
            format_score(e.score),
            doc.map(|d| d.year.to_string()).unwrap_or_default(),
            doc.map(|d| d.title.clone())
                .unwrap_or_else(|| "(external)".into()),
        ]);
    }
    t
}

fn format_score(score: f64) -> String {
    if score.fract() == 0.0 {
        format!("{score:.0}")
    } else {
        format!("{score:.4}")
    }
}

fn render_list(list: &RankedList, format: Format, state: &EngineState) -> String {
    match format {
        Format::Json => json(list),
        Format::Csv => {
            let mut t = Table::new(["id", "score"]);
            for e in &list.entries {
                t.push([e.id.clone(), e.score.to_string()]);
            }
            t.to_csv()
        }
        Format::Text => {
            let mut out = ranked_table(list, usize::MAX, Some(state)).to_text();
            if list.truncated {
                out.push_str("(truncated)\n");
            }
            out
        }
    }
}

fn render_chain(result: &ChainResult, format: Format, show: usize, state: &EngineState) -> String {
    match format {
        Format::Json => json(result),
        Format::Csv => {
            let mut t = Table::new(["stage", "kind", "rank", "id", "score"]);
            for (i, e) in result.seed.entries.iter().enumerate() {
                t.push([
                    "0".into(),
                    "seed".into(),
                    (i + 1).to_string(),
                    e.id.clone(),
                    e.score.to_string(),
                ]);
            }
            for stage in &result.stages {
                for (i, e) in stage.output.entries.iter().enumerate() {
                    t.push([
                        stage.step.to_string(),
                        stage.kind.to_string(),
                        (i + 1).to_string(),
                        e.id.clone(),
                        e.score.to_string(),
                    ]);
                }
            }
            t.to_csv()
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "seed: {} document(s)", result.seed.len());
            out.push_str(&ranked_table(&result.seed, show, Some(state)).to_text());
            for stage in &result.stages {
                let _ = writeln!(
                    out,
                    "\nstage {}: {} (limit {}) input {} -> output {}{}",
                    stage.step,
                    stage.kind,
                    stage.limit,
                    stage.input_len,
                    stage.output.len(),
                    if stage.empty { " [empty]" } else { "" }
                );
                out.push_str(&ranked_table(&stage.output, show, Some(state)).to_text());
            }
            out
        }
    }
}

fn utility_output(
    counts: &std::collections::BTreeMap<AccessType, u64>,
    table: &UtilityTable,
    baseline: u64,
    format: Format,
) -> Result<String> {
    let report = utility_report(counts, table);
    let full_text: u64 = counts
        .iter()
        .filter(|(t, _)| t.is_full_text())
        .map(|(_, n)| n)
        .sum();
    let ratio = readership_ratio(full_text, baseline)?;
    Ok(match format {
        Format::Json => json(&serde_json::json!({
            "report": report,
            "full_text_reads": full_text,
            "baseline": baseline,
            "readership_ratio": ratio,
        })),
        Format::Csv => report.to_table().to_csv(),
        Format::Text => format!(
            "{}\nfull-text reads {full_text} = {ratio:.2} x non-electronic baseline {baseline}\n",
            report.to_table().to_text()
        ),
    })
}

/// Runs a parsed command and returns what it prints on stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    let format = cli.format;
    match &cli.command {
        Command::Ingest(a) => {
            let out = a.out.clone().unwrap_or_else(|| cli.data.clone());
            let summary = ingest(
                &IngestSources {
                    documents: a.docs.clone(),
                    citations: a.cites.clone(),
                    reads: a.reads.clone(),
                    synonyms: a.synonyms.clone(),
                    countries: a.countries.clone(),
                    user_countries: a.user_countries.clone(),
                    utility: a.utility.clone(),
                },
                &out,
            )?;
            Ok(match format {
                Format::Json => json(&summary),
                _ => summary.to_text(),
            })
        }
        Command::Search(a) => {
            let state = cli.state()?;
            let query = Query {
                title: a.title.clone(),
                abstract_text: a.abstract_text.clone(),
                author: a.author.clone(),
                year_min: a.year_min,
                year_max: a.year_max,
                limit: a.limit.unwrap_or(state.config.search_limit),
            };
            Ok(render_list(&state.search(&query)?, format, &state))
        }
        Command::Similar(a) => {
            let state = cli.state()?;
            let list = state.similar(&SimilarRequest {
                seeds: a.seeds.clone(),
                year_min: a.year_min,
                year_max: a.year_max,
                limit: a.limit,
            })?;
            Ok(render_list(&list, format, &state))
        }
        Command::Op(a) => {
            let state = cli.state()?;
            let list = state.operator(
                a.kind,
                &OpRequest {
                    ids: a.ids.clone(),
                    limit: a.limit,
                    include_external: a.include_external,
                    year_min: None,
                    year_max: None,
                },
            )?;
            Ok(render_list(&list, format, &state))
        }
        Command::Chain(a) => {
            let state = cli.state()?;
            let seed = match (&a.seed_text, &a.seed_ids) {
                (Some(text), _) => {
                    Seed::Query(Query::abstract_text(text.clone()).with_limit(a.seed_limit))
                }
                (None, Some(ids)) => Seed::Ids(ids.clone()),
                (None, None) => return Err(Error::InvalidQuery("a seed is required".into())),
            };
            let spec = ChainSpec {
                seed,
                steps: ChainSpec::parse_steps(&a.steps)?,
                year_min: a.year_min,
                year_max: a.year_max,
                include_external: a.include_external,
            };
            Ok(render_chain(&state.chain(&spec)?, format, a.show, &state))
        }
        Command::Report(r) => report(cli, r, format),
        Command::Serve(a) => {
            let mut config = cli.load_config()?;
            if let Some(p) = a.port {
                config.port = p;
            }
            serve(cli.data.clone(), config)?;
            Ok(String::new())
        }
    }
}

fn report(cli: &Cli, cmd: &ReportCommand, format: Format) -> Result<String> {
    match cmd {
        ReportCommand::Utility {
            counts,
            utility,
            baseline,
        } => {
            let table = match utility {
                Some(p) => load_utility_table(p)?,
                None if counts.is_none() => cli.state()?.utility,
                None => UtilityTable::default(),
            };
            let counts = match counts {
                Some(p) => load_access_counts(p)?,
                None => crate::analytics::access_counts(&cli.state()?.log),
            };
            utility_output(&counts, &table, *baseline, format)
        }
        ReportCommand::Readership { month, threshold } => {
            let state = cli.state()?;
            let r = state.readership(*month, *threshold);
            Ok(match format {
                Format::Json => json(&r),
                _ => {
                    let mut t = Table::new(["metric", "value"]);
                    t.push(["month".to_owned(), r.month.to_string()]);
                    t.push(["unique reads".to_owned(), r.unique_reads.to_string()]);
                    t.push(["users".to_owned(), r.users.per_user.len().to_string()]);
                    t.push(["heavy threshold".to_owned(), r.users.threshold.to_string()]);
                    t.push(["heavy users".to_owned(), r.users.heavy_users.to_string()]);
                    t.push([
                        "heavy median".to_owned(),
                        r.users
                            .heavy_median
                            .map_or("-".to_owned(), |m| m.to_string()),
                    ]);
                    t.push([
                        "heavy share".to_owned(),
                        format!("{:.4}", r.users.heavy_share),
                    ]);
                    t.render(format)
                }
            })
        }
        ReportCommand::Countries {
            countries,
            threshold,
        } => {
            let analysis = match countries {
                Some(p) => analyze_countries(
                    &corpus::load_countries(p)?,
                    *threshold,
                    &ReadLog::default(),
                    &Default::default(),
                ),
                None => cli.state()?.country_analysis(*threshold)?,
            };
            Ok(match format {
                Format::Json => json(&analysis),
                _ => {
                    let mut t = Table::new(["culture", "above", "on_line", "below"]);
                    for (culture, c) in &analysis.bifurcation.by_culture {
                        t.push([
                            culture.to_string(),
                            c.above.to_string(),
                            c.on_line.to_string(),
                            c.below.to_string(),
                        ]);
                    }
                    let mut out = format!(
                        "{} of {} countries at or above usage {}\n",
                        analysis.active.len(),
                        analysis.countries,
                        analysis.threshold
                    );
                    if let Some(fit) = &analysis.usage_fit {
                        let _ = writeln!(
                            out,
                            "usage/pop vs gdp/pop exponent {:.3} (rms {:.3}, n {})",
                            fit.exponent, fit.residual_rms, fit.n
                        );
                    }
                    out.push_str("IAU members relative to gdp/k:\n");
                    out.push_str(&t.render(format));
                    out
                }
            })
        }
        ReportCommand::Shares { file } => {
            let cmp = compare_shares(&load_shares(file)?);
            Ok(match format {
                Format::Json => json(&cmp),
                _ => cmp.to_table().render(format),
            })
        }
    }
}

fn serve(data: PathBuf, config: Config) -> Result<()> {
    let port = config.port;
    let engine = std::sync::Arc::new(Engine::open(data, config)?);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Error::io("tokio runtime", e))?;
    runtime.block_on(async move {
        let listener = super::http::bind(port).await?;
        tracing::info!(port, generation = engine.current().generation, "serving");
        super::http::serve_on(listener, engine)
            .await
            .map_err(|e| Error::io(format!("port {port}"), e))
    })
}

/// Parses `args`, runs the command, prints its output and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
