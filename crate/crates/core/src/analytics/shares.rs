//! Compares each country's share of reads with its shares of citations and
//! papers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table::Table;
use crate::error::{Error, Result};

/// Percent-of-world shares for one country.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareRow {
    pub country: String,
    pub reads: f64,
    pub cites: f64,
    pub papers: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareDeviation {
    pub country: String,
    /// `reads / mean(cites, papers) - 1`
    pub reads_vs_mean: f64,
    /// `papers / cites - 1`
    pub papers_vs_cites: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareComparison {
    pub rows: Vec<ShareDeviation>,
    /// Median of `|reads_vs_mean|`.
    pub median_reads_deviation: f64,
    /// Median of `|papers_vs_cites|`.
    pub median_papers_deviation: f64,
}

impl ShareComparison {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["country", "reads_vs_mean_pct", "papers_vs_cites_pct"]);
        for r in &self.rows {
            t.push([
                r.country.clone(),
                format!("{:+.1}", 100.0 * r.reads_vs_mean),
                format!("{:+.1}", 100.0 * r.papers_vs_cites),
            ]);
        }
        t.push([
            "median |dev|".to_owned(),
            format!("{:.1}", 100.0 * self.median_reads_deviation),
            format!("{:.1}", 100.0 * self.median_papers_deviation),
        ]);
        t
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    match n {
        0 => 0.0,
        _ if n % 2 == 1 => xs[n / 2],
        _ => (xs[n / 2 - 1] + xs[n / 2]) / 2.0,
    }
}

pub fn compare_shares(rows: &[ShareRow]) -> ShareComparison {
    let rows: Vec<ShareDeviation> = rows
        .iter()
        .map(|r| ShareDeviation {
            country: r.country.clone(),
            reads_vs_mean: r.reads / ((r.cites + r.papers) / 2.0) - 1.0,
            papers_vs_cites: r.papers / r.cites - 1.0,
        })
        .collect();
    ShareComparison {
        median_reads_deviation: median(rows.iter().map(|r| r.reads_vs_mean.abs()).collect()),
        median_papers_deviation: median(rows.iter().map(|r| r.papers_vs_cites.abs()).collect()),
        rows,
    }
}

/// Reads headerless `country,reads,cites,papers` rows of positive percentages.
pub fn parse_shares(text: &str, source: &str) -> Result<Vec<ShareRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            Error::parse(
                source,
                e.position().map_or(0, |p| p.line() as usize),
                e.to_string(),
            )
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() == 1 && row[0].is_empty() {
            continue;
        }
        if row.len() != 4 {
            return Err(Error::parse(
                source,
                line,
                "expected 4 fields (country,reads,cites,papers)",
            ));
        }
        let num = |i: usize| -> Result<f64> {
            row[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v > 0.0)
                .ok_or_else(|| {
                    Error::parse(
                        source,
                        line,
                        format!("{:?} is not a positive share", &row[i]),
                    )
                })
        };
        out.push(ShareRow {
            country: row[0].to_owned(),
            reads: num(1)?,
            cites: num(2)?,
            papers: num(3)?,
        });
    }
    Ok(out)
}

pub fn load_shares(path: &Path) -> Result<Vec<ShareRow>> {
    parse_shares(
        &crate::corpus::read_to_string(path)?,
        &path.display().to_string(),
    )
}
