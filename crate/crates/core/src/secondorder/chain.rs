use serde::{Deserialize, Serialize};

use super::{op_alsoread, op_citations, op_references, OperatorKind};
use crate::error::{Error, Result};
use crate::graph::{CitationGraph, CoReadIndex};
use crate::retrieval::{InvertedIndex, Query, RankedList, DEFAULT_OPERATOR_LIMIT};

fn default_step_limit() -> usize {
    DEFAULT_OPERATOR_LIMIT
}

/// Where a chain starts: explicit document ids or a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seed {
    Ids(Vec<String>),
    Query(Query),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: OperatorKind,
    #[serde(default = "default_step_limit")]
    pub limit: usize,
}

impl Step {
    pub fn new(kind: OperatorKind, limit: usize) -> Self {
        Step { kind, limit }
    }
}

/// A declarative operator chain. The year range applies to `similar` steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub seed: Seed,
    pub steps: Vec<Step>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year_min: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year_max: Option<i32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub include_external: bool,
}

impl ChainSpec {
    pub fn new(seed: Seed, steps: Vec<Step>) -> Self {
        ChainSpec {
            seed,
            steps,
            year_min: None,
            year_max: None,
            include_external: false,
        }
    }

    /// Parses `kind:limit` pairs separated by commas, e.g.
    /// `similar:500,alsoread:500`. A missing limit means the default.
    pub fn parse_steps(text: &str) -> Result<Vec<Step>> {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|part| {
                let (kind, limit) = match part.split_once(':') {
                    Some((k, l)) => (
                        k,
                        l.trim().parse().map_err(|_| {
                            Error::InvalidQuery(format!("bad step limit in {part:?}"))
                        })?,
                    ),
                    None => (part, DEFAULT_OPERATOR_LIMIT),
                };
                let kind = kind.parse().map_err(Error::InvalidQuery)?;
                Ok(Step { kind, limit })
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::InvalidQuery("chain needs at least one step".into()));
        }
        if let Some(step) = self.steps.iter().find(|s| s.limit == 0) {
            return Err(Error::InvalidQuery(format!(
                "step {} has a zero limit",
                step.kind
            )));
        }
        if let (Some(lo), Some(hi)) = (self.year_min, self.year_max) {
            if lo > hi {
                return Err(Error::InvalidQuery(format!(
                    "year_min {lo} is greater than year_max {hi}"
                )));
            }
        }
        Ok(())
    }
}

/// Indexes a chain runs against.
#[derive(Debug, Clone, Copy)]
pub struct ChainContext<'a> {
    pub index: &'a InvertedIndex,
    pub graph: &'a CitationGraph,
    pub coread: &'a CoReadIndex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    /// 1-based position in the chain.
    pub step: usize,
    pub kind: OperatorKind,
    pub limit: usize,
    pub input_len: usize,
    pub output: RankedList,
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainResult {
    pub seed: RankedList,
    pub stages: Vec<Stage>,
}

impl ChainResult {
    pub fn last(&self) -> &RankedList {
        self.stages.last().map_or(&self.seed, |s| &s.output)
    }
}

fn resolve_seed(seed: &Seed, ctx: &ChainContext<'_>) -> Result<RankedList> {
    let list = match seed {
        Seed::Ids(ids) => {
            if let Some(missing) = ids.iter().find(|id| !ctx.index.contains(id)) {
                return Err(Error::not_found("document", missing.as_str()));
            }
            RankedList::from_ids(ids, "seed(ids)")
        }
        Seed::Query(q) => {
            let mut list = ctx.index.search(q)?;
            list.provenance = "seed(search)".into();
            list
        }
    };
    if list.is_empty() {
        return Err(Error::EmptySeed);
    }
    Ok(list)
}

/// Applies one operator step to `input`.
pub(crate) fn apply_step(
    step: Step,
    input: &RankedList,
    ctx: &ChainContext<'_>,
    spec: &ChainSpec,
) -> Result<RankedList> {
    Ok(match step.kind {
        OperatorKind::Similar => {
            let seeds: Vec<&str> = input.ids().filter(|id| ctx.index.contains(id)).collect();
            if seeds.is_empty() {
                RankedList::empty("")
            } else {
                ctx.index
                    .find_similar(&seeds, spec.year_min, spec.year_max, step.limit)?
            }
        }
        OperatorKind::References => {
            op_references(input, ctx.graph, step.limit, spec.include_external)
        }
        OperatorKind::Citations => op_citations(input, ctx.graph, step.limit),
        OperatorKind::AlsoRead => op_alsoread(input, ctx.coread, step.limit),
    })
}

/// Resolves the seed and applies each step to the previous step's output.
/// A step with empty input yields an empty stage rather than an error.
pub fn run_chain(spec: &ChainSpec, ctx: &ChainContext<'_>) -> Result<ChainResult> {
    spec.validate()?;
    let seed = resolve_seed(&spec.seed, ctx)?;
    let mut stages: Vec<Stage> = Vec::with_capacity(spec.steps.len());
    for (i, &step) in spec.steps.iter().enumerate() {
        let input = stages.last().map_or(&seed, |s| &s.output);
        let mut output = apply_step(step, input, ctx, spec)?;
        output.provenance = format!("step {}: {}(limit={})", i + 1, step.kind, step.limit);
        stages.push(Stage {
            step: i + 1,
            kind: step.kind,
            limit: step.limit,
            input_len: input.len(),
            empty: output.is_empty(),
            output,
        });
    }
    Ok(ChainResult { seed, stages })
}
