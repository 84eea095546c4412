//! Country-level research model: scientists proportional to GDP with a
//! per-culture factor, and research output proportional to scientists times
//! GDP per capita.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::powerlaw::{fit_power_law, PowerLawFit};
use crate::corpus::{CountryRecord, Culture};
use crate::error::Result;

/// World GDP per IAU member, USD.
pub const GDP_PER_SCIENTIST: f64 = 4.3e9;

/// Average number of queries per IAU member; countries below it are too
/// sparsely sampled to place on the model.
pub const ACTIVE_USAGE_THRESHOLD: u64 = 1737;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CultureConstants {
    pub european: f64,
    pub asian: f64,
    pub other: f64,
    /// GDP per scientist.
    pub k: f64,
}

impl Default for CultureConstants {
    fn default() -> Self {
        CultureConstants {
            european: 3f64.sqrt(),
            asian: 1.0 / 3f64.sqrt(),
            other: 0.0,
            k: GDP_PER_SCIENTIST,
        }
    }
}

impl CultureConstants {
    pub fn factor(&self, culture: Culture) -> f64 {
        match culture {
            Culture::European => self.european,
            Culture::Asian => self.asian,
            Culture::Other => self.other,
        }
    }
}

/// Countries whose usage reaches `threshold` (inclusive).
pub fn filter_active_countries(records: &[CountryRecord], threshold: u64) -> Vec<CountryRecord> {
    records
        .iter()
        .filter(|r| r.usage >= threshold)
        .cloned()
        .collect()
}

/// Predicted scientist count, `c(culture) / k · gdp`.
pub fn predict_scientists(record: &CountryRecord, constants: &CultureConstants) -> f64 {
    constants.factor(record.culture) / constants.k * record.gdp
}

/// Unnormalized research output, `scientists · gdp / population`.
pub fn predict_research(record: &CountryRecord, scientists: f64) -> f64 {
    scientists * record.gdp / record.population as f64
}

/// Fits per-capita usage against per-capita GDP; data following usage ∝
/// GDP² / population gives exponent 2.
pub fn usage_power_law(records: &[CountryRecord]) -> Result<PowerLawFit> {
    let x: Vec<f64> = records.iter().map(CountryRecord::gdp_per_capita).collect();
    let y: Vec<f64> = records
        .iter()
        .map(CountryRecord::usage_per_capita)
        .collect();
    fit_power_law(&x, &y)
}

/// Position of a country's IAU membership relative to the mean line
/// `members = gdp / k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineSide {
    /// More members than the mean line predicts.
    Above,
    OnLine,
    /// Fewer members than the mean line predicts.
    Below,
}

impl LineSide {
    pub fn classify(record: &CountryRecord, k: f64) -> Self {
        let expected = record.gdp / k;
        let members = record.iau_members as f64;
        if members > expected {
            LineSide::Above
        } else if members < expected {
            LineSide::Below
        } else {
            LineSide::OnLine
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BifurcationCounts {
    pub above: usize,
    pub on_line: usize,
    pub below: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BifurcationReport {
    pub by_culture: BTreeMap<Culture, BifurcationCounts>,
    pub sides: BTreeMap<String, LineSide>,
}

/// Splits countries by the mean line `members = gdp / k` and counts each
/// side per culture class. Sides are named by the member-count inequality,
/// not by plot geometry.
pub fn bifurcation_report(
    records: &[CountryRecord],
    constants: &CultureConstants,
) -> BifurcationReport {
    let mut report = BifurcationReport::default();
    for culture in Culture::ALL {
        report
            .by_culture
            .insert(culture, BifurcationCounts::default());
    }
    for r in records {
        let side = LineSide::classify(r, constants.k);
        let counts = report.by_culture.entry(r.culture).or_default();
        match side {
            LineSide::Above => counts.above += 1,
            LineSide::OnLine => counts.on_line += 1,
            LineSide::Below => counts.below += 1,
        }
        report.sides.insert(r.iso.clone(), side);
    }
    report
}
