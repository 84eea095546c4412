use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{tokenize, Field, InvertedIndex, RankedList};
use crate::error::{Error, Result};

pub const DEFAULT_SEARCH_LIMIT: usize = 200;
pub const DEFAULT_OPERATOR_LIMIT: usize = 500;

fn default_limit() -> usize {
    DEFAULT_SEARCH_LIMIT
}

/// A fielded query. Empty or missing fields are not searched.
///
/// The author field takes `;`-separated names, each reduced to the text
/// before its first comma, matching how document authors are indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year_min: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year_max: Option<i32>,
    #[serde(default = "default_limit")]
    pub limit: usize,
}

impl Default for Query {
    fn default() -> Self {
        Query {
            title: None,
            abstract_text: None,
            author: None,
            year_min: None,
            year_max: None,
            limit: DEFAULT_SEARCH_LIMIT,
        }
    }
}

fn non_empty(s: &Option<String>) -> Option<&str> {
    s.as_deref().filter(|s| !s.trim().is_empty())
}

impl Query {
    pub fn title(text: impl Into<String>) -> Self {
        Query {
            title: Some(text.into()),
            ..Default::default()
        }
    }

    pub fn abstract_text(text: impl Into<String>) -> Self {
        Query {
            abstract_text: Some(text.into()),
            ..Default::default()
        }
    }

    pub fn author(text: impl Into<String>) -> Self {
        Query {
            author: Some(text.into()),
            ..Default::default()
        }
    }

    pub fn with_years(mut self, year_min: Option<i32>, year_max: Option<i32>) -> Self {
        self.year_min = year_min;
        self.year_max = year_max;
        self
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if non_empty(&self.title).is_none()
            && non_empty(&self.abstract_text).is_none()
            && non_empty(&self.author).is_none()
        {
            return Err(Error::InvalidQuery(
                "at least one of title, abstract, author must be non-empty".into(),
            ));
        }
        check_years(self.year_min, self.year_max)?;
        if self.limit == 0 {
            return Err(Error::InvalidQuery("limit must be positive".into()));
        }
        Ok(())
    }
}

fn check_years(year_min: Option<i32>, year_max: Option<i32>) -> Result<()> {
    match (year_min, year_max) {
        (Some(lo), Some(hi)) if lo > hi => Err(Error::InvalidQuery(format!(
            "year_min {lo} is greater than year_max {hi}"
        ))),
        _ => Ok(()),
    }
}

/// Distinct query terms per field, in field order then term order.
type FieldTerms = Vec<(Field, BTreeSet<String>)>;

impl InvertedIndex {
    fn query_terms(&self, query: &Query) -> FieldTerms {
        let syn = &self.synonyms;
        let mut out = Vec::new();
        if let Some(t) = non_empty(&query.title) {
            out.push((Field::Title, tokenize(t, syn).into_iter().collect()));
        }
        if let Some(t) = non_empty(&query.abstract_text) {
            out.push((Field::Abstract, tokenize(t, syn).into_iter().collect()));
        }
        if let Some(t) = non_empty(&query.author) {
            let names: Vec<&str> = t.split(';').collect();
            out.push((
                Field::Author,
                super::author_tokens(&names, syn).into_iter().collect(),
            ));
        }
        out
    }

    /// Scores every document matching at least one term, restricted to the
    /// year range.
    fn score_matches(
        &self,
        terms: &FieldTerms,
        year_min: Option<i32>,
        year_max: Option<i32>,
    ) -> BTreeMap<u32, f64> {
        let n = self.len() as f64;
        let in_range = |doc: u32| {
            let y = self.years[doc as usize];
            year_min.is_none_or(|lo| y >= lo) && year_max.is_none_or(|hi| y <= hi)
        };
        let mut total: BTreeMap<u32, f64> = BTreeMap::new();
        for (field, field_terms) in terms {
            let mut acc: BTreeMap<u32, f64> = BTreeMap::new();
            for term in field_terms {
                let postings = self.postings(*field, term);
                if postings.is_empty() {
                    continue;
                }
                let idf = (1.0 + n / postings.len() as f64).ln();
                for p in postings.iter().filter(|p| in_range(p.doc)) {
                    *acc.entry(p.doc).or_insert(0.0) += idf * (1.0 + f64::from(p.tf).ln());
                }
            }
            let lengths = &self.fields[field.slot()].lengths;
            for (doc, sum) in acc {
                let norm = (1.0 + f64::from(lengths[doc as usize])).ln();
                *total.entry(doc).or_insert(0.0) += sum / norm;
            }
        }
        total
    }

    pub fn search(&self, query: &Query) -> Result<RankedList> {
        query.validate()?;
        let terms = self.query_terms(query);
        let scores = self.score_matches(&terms, query.year_min, query.year_max);
        Ok(RankedList::from_scores(
            scores
                .into_iter()
                .map(|(doc, s)| (self.doc_ids[doc as usize].clone(), s)),
            query.limit,
            "search",
        ))
    }

    /// Uses the seeds' concatenated abstracts as an abstract-field query.
    /// The seeds themselves never appear in the result.
    pub fn find_similar<S: AsRef<str>>(
        &self,
        seeds: &[S],
        year_min: Option<i32>,
        year_max: Option<i32>,
        limit: usize,
    ) -> Result<RankedList> {
        check_years(year_min, year_max)?;
        let mut positions = HashSet::new();
        let mut text = String::new();
        for seed in seeds {
            let seed = seed.as_ref();
            let pos = self
                .position(seed)
                .ok_or_else(|| Error::not_found("document", seed))?;
            if positions.insert(pos as u32) {
                text.push_str(&self.abstracts[pos]);
                text.push(' ');
            }
        }
        let terms = vec![(
            Field::Abstract,
            tokenize(&text, &self.synonyms).into_iter().collect(),
        )];
        let scores = self.score_matches(&terms, year_min, year_max);
        Ok(RankedList::from_scores(
            scores
                .into_iter()
                .filter(|(doc, _)| !positions.contains(doc))
                .map(|(doc, s)| (self.doc_ids[doc as usize].clone(), s)),
            limit,
            format!("similar({} seeds)", positions.len()),
        ))
    }
}
