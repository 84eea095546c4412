use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::corpus::{ReadEvent, ReadLog};
use crate::error::Error;

pub const DEFAULT_HEAVY_THRESHOLD: u64 = 10;
/// Country code for users the resolver does not map.
pub const UNRESOLVED_COUNTRY: &str = "ZZ";

/// A calendar month, written `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    pub year: i32,
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Option<Self> {
        NaiveDate::from_ymd_opt(year, month, 1).map(|_| YearMonth { year, month })
    }

    /// Half-open `[start, end)` range in epoch milliseconds.
    pub fn range_ms(self) -> (i64, i64) {
        let start = NaiveDate::from_ymd_opt(self.year, self.month, 1).expect("validated");
        let next = if self.month == 12 {
            NaiveDate::from_ymd_opt(self.year + 1, 1, 1)
        } else {
            NaiveDate::from_ymd_opt(self.year, self.month + 1, 1)
        }
        .expect("validated");
        let ms = |d: NaiveDate| d.and_hms_opt(0, 0, 0).unwrap().and_utc().timestamp_millis();
        (ms(start), ms(next))
    }

    pub fn contains(self, timestamp: i64) -> bool {
        let (lo, hi) = self.range_ms();
        (lo..hi).contains(&timestamp)
    }

    pub fn of_timestamp(timestamp: i64) -> Self {
        let d = chrono::DateTime::from_timestamp_millis(timestamp)
            .expect("timestamp in range")
            .date_naive();
        YearMonth {
            year: d.year(),
            month: d.month(),
        }
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidQuery(format!("month {s:?} is not YYYY-MM"));
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        YearMonth::new(year, month).ok_or_else(bad)
    }
}

impl Serialize for YearMonth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearMonth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn month_reads(log: &ReadLog, month: YearMonth) -> impl Iterator<Item = &ReadEvent> {
    let (lo, hi) = month.range_ms();
    log.active()
        .iter()
        .filter(move |e| e.access_type.is_read() && (lo..hi).contains(&e.timestamp))
}

/// Distinct (user, document) pairs among article reads in `month`.
pub fn unique_reads(log: &ReadLog, month: YearMonth) -> u64 {
    month_reads(log, month)
        .map(|e| (e.user.as_str(), e.doc.as_str()))
        .collect::<BTreeSet<_>>()
        .len() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserMonthStats {
    pub month: YearMonth,
    pub threshold: u64,
    /// Unique reads per user.
    pub per_user: BTreeMap<String, u64>,
    pub heavy_users: usize,
    /// Median unique reads among heavy users; `None` when there are none.
    pub heavy_median: Option<f64>,
    pub heavy_reads: u64,
    pub total_reads: u64,
    /// `heavy_reads / total_reads`, 0 when nobody read anything.
    pub heavy_share: f64,
}

/// Per-user unique reads in `month`; users with at least `threshold` are
/// heavy users.
pub fn user_month_stats(log: &ReadLog, month: YearMonth, threshold: u64) -> UserMonthStats {
    let pairs: BTreeSet<(&str, &str)> = month_reads(log, month)
        .map(|e| (e.user.as_str(), e.doc.as_str()))
        .collect();
    let mut per_user: BTreeMap<String, u64> = BTreeMap::new();
    for (user, _) in pairs {
        *per_user.entry(user.to_owned()).or_insert(0) += 1;
    }
    let mut heavy: Vec<u64> = per_user
        .values()
        .copied()
        .filter(|&n| n >= threshold)
        .collect();
    heavy.sort_unstable();
    let heavy_median = match heavy.len() {
        0 => None,
        n if n % 2 == 1 => Some(heavy[n / 2] as f64),
        n => Some((heavy[n / 2 - 1] + heavy[n / 2]) as f64 / 2.0),
    };
    let heavy_reads: u64 = heavy.iter().sum();
    let total_reads: u64 = per_user.values().sum();
    UserMonthStats {
        month,
        threshold,
        heavy_users: heavy.len(),
        heavy_median,
        heavy_reads,
        total_reads,
        heavy_share: if total_reads == 0 {
            0.0
        } else {
            heavy_reads as f64 / total_reads as f64
        },
        per_user,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountryUsage {
    /// Log entries.
    pub raw: u64,
    /// Estimated requests: the log holds about two entries per request.
    pub adjusted: f64,
}

/// Log entries per country, attributing each user through `resolver`.
/// Every parsed entry counts, including queries and quarantined events;
/// unmapped users fall under [`UNRESOLVED_COUNTRY`].
pub fn country_usage(
    log: &ReadLog,
    resolver: &BTreeMap<String, String>,
) -> BTreeMap<String, CountryUsage> {
    let mut raw: BTreeMap<String, u64> = BTreeMap::new();
    for e in log.all_events() {
        let iso = resolver
            .get(&e.user)
            .map_or(UNRESOLVED_COUNTRY, String::as_str);
        *raw.entry(iso.to_owned()).or_insert(0) += 1;
    }
    raw.into_iter()
        .map(|(iso, n)| {
            (
                iso,
                CountryUsage {
                    raw: n,
                    adjusted: n as f64 / 2.0,
                },
            )
        })
        .collect()
}
