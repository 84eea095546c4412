use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{read_to_string, source_name, write_string};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Culture {
    European,
    Asian,
    Other,
}

impl Culture {
    pub const ALL: [Culture; 3] = [Culture::European, Culture::Asian, Culture::Other];

    pub fn label(self) -> &'static str {
        match self {
            Culture::European => "european",
            Culture::Asian => "asian",
            Culture::Other => "other",
        }
    }
}

impl fmt::Display for Culture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Culture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        Culture::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| {
                format!("unknown culture {s:?}; allowed labels are european, asian, other")
            })
    }
}

/// Indicators for one country.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryRecord {
    pub iso: String,
    /// GDP in USD at purchasing power parity.
    pub gdp: f64,
    pub population: u64,
    pub iau_members: u64,
    pub culture: Culture,
    /// Query-log entries attributed to the country.
    pub usage: u64,
}

impl CountryRecord {
    pub fn validate(&self) -> Result<(), String> {
        if self.iso.len() != 2 || !self.iso.bytes().all(|b| b.is_ascii_uppercase()) {
            return Err(format!(
                "iso code {:?} is not two uppercase letters",
                self.iso
            ));
        }
        if !(self.gdp.is_finite() && self.gdp > 0.0) {
            return Err(format!("{}: gdp must be positive", self.iso));
        }
        if self.population == 0 {
            return Err(format!("{}: population must be positive", self.iso));
        }
        Ok(())
    }

    pub fn gdp_per_capita(&self) -> f64 {
        self.gdp / self.population as f64
    }

    pub fn usage_per_capita(&self) -> f64 {
        self.usage as f64 / self.population as f64
    }
}

pub fn load_countries(path: &Path) -> Result<Vec<CountryRecord>> {
    parse_countries(&read_to_string(path)?, &source_name(path))
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn field<T: FromStr>(
    record: &csv::StringRecord,
    i: usize,
    name: &str,
    source: &str,
    line: usize,
) -> Result<T>
where
    T::Err: fmt::Display,
{
    record[i]
        .parse()
        .map_err(|e| Error::parse(source, line, format!("{name}: {e}")))
}

pub fn parse_countries(text: &str, source: &str) -> Result<Vec<CountryRecord>> {
    let mut records: Vec<CountryRecord> = Vec::new();
    for row in csv_reader(text).records() {
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
        if row.len() != 6 {
            return Err(Error::parse(
                source,
                line,
                format!(
                    "expected 6 fields (iso,gdp,population,iau_members,culture,usage), found {}",
                    row.len()
                ),
            ));
        }
        let culture: Culture = row[4]
            .parse()
            .map_err(|m: String| Error::parse(source, line, m))?;
        let gdp: f64 = field(&row, 1, "gdp", source, line)?;
        let population: f64 = field(&row, 2, "population", source, line)?;
        if !(population.is_finite() && population > 0.0 && population.fract() == 0.0) {
            return Err(Error::Validation(format!(
                "{source}: row {line}: population must be a positive whole number"
            )));
        }
        let record = CountryRecord {
            iso: row[0].to_owned(),
            gdp,
            population: population as u64,
            iau_members: field(&row, 3, "iau_members", source, line)?,
            culture,
            usage: field(&row, 5, "usage", source, line)?,
        };
        record
            .validate()
            .map_err(|m| Error::Validation(format!("{source}: row {line}: {m}")))?;
        if records.iter().any(|r| r.iso == record.iso) {
            return Err(Error::Validation(format!(
                "{source}: row {line}: duplicate iso code {}",
                record.iso
            )));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn countries_to_string(records: &[CountryRecord]) -> String {
    let mut sorted: Vec<&CountryRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.iso.cmp(&b.iso));
    let mut w = csv_writer();
    for r in sorted {
        w.write_record([
            r.iso.clone(),
            r.gdp.to_string(),
            r.population.to_string(),
            r.iau_members.to_string(),
            r.culture.to_string(),
            r.usage.to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

pub fn save_countries(records: &[CountryRecord], path: &Path) -> Result<()> {
    write_string(path, &countries_to_string(records))
}

/// Reads a `user,iso` mapping used to attribute log entries to countries.
pub fn load_user_countries(path: &Path) -> Result<BTreeMap<String, String>> {
    parse_user_countries(&read_to_string(path)?, &source_name(path))
}

pub fn parse_user_countries(text: &str, source: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for row in csv_reader(text).records() {
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
            return Err(Error::parse(source, line, "expected 2 fields (user,iso)"));
        }
        if map.insert(row[0].to_owned(), row[1].to_owned()).is_some() {
            return Err(Error::Validation(format!(
                "{source}: row {line}: user {} mapped twice",
                &row[0]
            )));
        }
    }
    Ok(map)
}
