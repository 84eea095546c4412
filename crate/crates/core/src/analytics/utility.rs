//! Utility time: research time a tool saves, credited per access by type
//! and expressed in 2000-hour full-time-equivalent research years.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::table::Table;
use crate::corpus::{AccessType, ReadLog};
use crate::error::{Error, Result};

type Exact = Ratio<u128>;

const MINUTES_PER_FTE_YEAR: u128 = 60 * 2000;

/// Estimated yearly article reads by non-electronic means.
pub const NON_ELECTRONIC_READS_BASELINE: u64 = 1_200_000;

/// Minutes of research time credited per access, by access type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityTable {
    minutes: BTreeMap<AccessType, Exact>,
}

impl Default for UtilityTable {
    /// Full text 15 minutes; abstracts and reference or citation lists a
    /// third of that; one minute per query; nothing for the other types.
    fn default() -> Self {
        let mut minutes = BTreeMap::new();
        for t in AccessType::ALL {
            let m = match t {
                AccessType::E | AccessType::F | AccessType::G => 15,
                AccessType::A | AccessType::C | AccessType::R => 5,
                AccessType::Q => 1,
                _ => 0,
            };
            minutes.insert(t, Exact::from_integer(m));
        }
        UtilityTable { minutes }
    }
}

impl UtilityTable {
    pub fn minutes(&self, t: AccessType) -> Exact {
        self.minutes.get(&t).copied().unwrap_or_default()
    }

    pub fn set(&mut self, t: AccessType, minutes: Exact) {
        self.minutes.insert(t, minutes);
    }
}

/// Parses a non-negative decimal such as `5`, `2.5` or `0.125` exactly.
fn parse_minutes(text: &str) -> Option<Exact> {
    let text = text.trim();
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return None;
    }
    let digits: u128 = format!("{int}{frac}").parse().ok()?;
    Some(Exact::new(digits, 10u128.pow(frac.len() as u32)))
}

fn parse_code(text: &str, source: &str, line: usize) -> Result<AccessType> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("simple queries") {
        return Ok(AccessType::Q);
    }
    t.parse()
        .map_err(|e: Error| Error::parse(source, line, e.to_string()))
}

fn rows(text: &str, source: &str) -> Result<Vec<(usize, String, String)>> {
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
        if row.len() != 2 {
            return Err(Error::parse(source, line, "expected 2 fields"));
        }
        out.push((line, row[0].to_owned(), row[1].to_owned()));
    }
    Ok(out)
}

/// Reads `code,minutes` overrides on top of the default table.
pub fn parse_utility_table(text: &str, source: &str) -> Result<UtilityTable> {
    let mut table = UtilityTable::default();
    for (line, code, minutes) in rows(text, source)? {
        let t = parse_code(&code, source, line)?;
        let m = parse_minutes(&minutes).ok_or_else(|| {
            Error::parse(
                source,
                line,
                format!("minutes {minutes:?} is not a non-negative number"),
            )
        })?;
        table.set(t, m);
    }
    Ok(table)
}

pub fn load_utility_table(path: &Path) -> Result<UtilityTable> {
    parse_utility_table(
        &crate::corpus::read_to_string(path)?,
        &path.display().to_string(),
    )
}

/// Reads `code,count` rows. Codes are access-type letters; `Simple Queries`
/// is accepted for `Q`. Counts may carry thousands separators.
pub fn parse_access_counts(text: &str, source: &str) -> Result<BTreeMap<AccessType, u64>> {
    let mut counts = BTreeMap::new();
    for (line, code, count) in rows(text, source)? {
        let t = parse_code(&code, source, line)?;
        let n: u64 = count.replace([',', '_'], "").parse().map_err(|_| {
            Error::parse(
                source,
                line,
                format!("count {count:?} is not a whole number"),
            )
        })?;
        if counts.insert(t, n).is_some() {
            return Err(Error::parse(source, line, format!("code {t} listed twice")));
        }
    }
    Ok(counts)
}

pub fn load_access_counts(path: &Path) -> Result<BTreeMap<AccessType, u64>> {
    parse_access_counts(
        &crate::corpus::read_to_string(path)?,
        &path.display().to_string(),
    )
}

/// Accesses per type over every parsed event of `log`. Queries are counted
/// as logged, without halving.
pub fn access_counts(log: &ReadLog) -> BTreeMap<AccessType, u64> {
    let mut counts = BTreeMap::new();
    for e in log.all_events() {
        *counts.entry(e.access_type).or_insert(0) += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityRow {
    pub code: AccessType,
    pub label: String,
    pub count: u64,
    pub minutes: f64,
    pub fte_years: f64,
    #[serde(skip)]
    exact_fte: Exact,
}

impl UtilityRow {
    pub fn exact_fte_years(&self) -> Exact {
        self.exact_fte
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityReport {
    pub rows: Vec<UtilityRow>,
    pub total_fte_years: f64,
    #[serde(skip)]
    exact_total: Exact,
}

fn to_f64(r: Exact) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl UtilityReport {
    pub fn exact_total(&self) -> Exact {
        self.exact_total
    }

    pub fn row(&self, code: AccessType) -> Option<&UtilityRow> {
        self.rows.iter().find(|r| r.code == code)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["code", "function", "number", "minutes", "fte_years"]);
        for r in &self.rows {
            t.push([
                r.code.to_string(),
                r.label.clone(),
                r.count.to_string(),
                if r.minutes == 0.0 {
                    String::new()
                } else {
                    format_num(r.minutes)
                },
                if r.minutes == 0.0 {
                    String::new()
                } else {
                    format!("{:.1}", r.fte_years)
                },
            ]);
        }
        t.push([
            "".to_owned(),
            "Total".to_owned(),
            self.rows.iter().map(|r| r.count).sum::<u64>().to_string(),
            String::new(),
            format!("{:.1}", self.total_fte_years),
        ]);
        t
    }
}

fn format_num(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        v.to_string()
    }
}

/// One row per access type present in `counts`, in table order; the total is
/// the exact sum of the rows.
pub fn utility_report(counts: &BTreeMap<AccessType, u64>, table: &UtilityTable) -> UtilityReport {
    let mut rows = Vec::new();
    let mut total = Exact::default();
    for t in AccessType::ALL {
        let Some(&count) = counts.get(&t) else {
            continue;
        };
        let minutes = table.minutes(t);
        let fte = minutes * Exact::from_integer(u128::from(count))
            / Exact::from_integer(MINUTES_PER_FTE_YEAR);
        total += fte;
        rows.push(UtilityRow {
            code: t,
            label: t.label().to_owned(),
            count,
            minutes: to_f64(minutes),
            fte_years: to_f64(fte),
            exact_fte: fte,
        });
    }
    UtilityReport {
        rows,
        total_fte_years: to_f64(total),
        exact_total: total,
    }
}

/// Electronic full-text reads as a multiple of the non-electronic baseline.
pub fn readership_ratio(electronic_reads: u64, baseline: u64) -> Result<f64> {
    if baseline == 0 {
        return Err(Error::Domain("baseline must be positive".into()));
    }
    Ok(electronic_reads as f64 / baseline as f64)
}
