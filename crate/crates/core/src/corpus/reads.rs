use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::{read_to_string, source_name, write_string, Corpus};
use crate::error::{Error, Result};

/// Access-type codes as logged by the service. `Q` is a plain query and
/// carries no document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AccessType {
    A,
    C,
    D,
    E,
    F,
    G,
    I,
    L,
    M,
    N,
    O,
    P,
    R,
    S,
    T,
    U,
    Q,
}

impl AccessType {
    /// Table order: the document access types alphabetically, queries last.
    pub const ALL: [AccessType; 17] = [
        AccessType::A,
        AccessType::C,
        AccessType::D,
        AccessType::E,
        AccessType::F,
        AccessType::G,
        AccessType::I,
        AccessType::L,
        AccessType::M,
        AccessType::N,
        AccessType::O,
        AccessType::P,
        AccessType::R,
        AccessType::S,
        AccessType::T,
        AccessType::U,
        AccessType::Q,
    ];

    pub fn code(self) -> char {
        match self {
            AccessType::A => 'A',
            AccessType::C => 'C',
            AccessType::D => 'D',
            AccessType::E => 'E',
            AccessType::F => 'F',
            AccessType::G => 'G',
            AccessType::I => 'I',
            AccessType::L => 'L',
            AccessType::M => 'M',
            AccessType::N => 'N',
            AccessType::O => 'O',
            AccessType::P => 'P',
            AccessType::R => 'R',
            AccessType::S => 'S',
            AccessType::T => 'T',
            AccessType::U => 'U',
            AccessType::Q => 'Q',
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AccessType::A => "Abstract",
            AccessType::C => "Citations",
            AccessType::D => "Data",
            AccessType::E => "HTML Article",
            AccessType::F => "PDF Article",
            AccessType::G => "GIF Article",
            AccessType::I => "Author Comments",
            AccessType::L => "Library Entry",
            AccessType::M => "Document Delivery",
            AccessType::N => "NED Entry",
            AccessType::O => "Associated Articles",
            AccessType::P => "PDS Entry",
            AccessType::R => "Reference List",
            AccessType::S => "SIMBAD Entry",
            AccessType::T => "Table of Contents",
            AccessType::U => "Also Read",
            AccessType::Q => "Simple Queries",
        }
    }

    /// Abstract and the three full-text forms count as reading the article.
    pub fn is_read(self) -> bool {
        matches!(
            self,
            AccessType::A | AccessType::E | AccessType::F | AccessType::G
        )
    }

    pub fn is_full_text(self) -> bool {
        matches!(self, AccessType::E | AccessType::F | AccessType::G)
    }
}

impl fmt::Display for AccessType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for AccessType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => AccessType::ALL
                .into_iter()
                .find(|t| t.code() == c)
                .ok_or_else(|| Error::Domain(format!("unknown access type code {s:?}"))),
            _ => Err(Error::Domain(format!("unknown access type code {s:?}"))),
        }
    }
}

/// One logged access.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReadEvent {
    /// Milliseconds since the Unix epoch, UTC.
    pub timestamp: i64,
    pub user: String,
    pub doc: String,
    pub access_type: AccessType,
}

impl ReadEvent {
    pub fn new(timestamp: i64, user: &str, doc: &str, access_type: AccessType) -> Self {
        ReadEvent {
            timestamp,
            user: user.to_owned(),
            doc: doc.to_owned(),
            access_type,
        }
    }
}

pub fn parse_timestamp(text: &str) -> Result<i64, String> {
    DateTime::parse_from_rfc3339(text.trim())
        .map(|t| t.with_timezone(&Utc).timestamp_millis())
        .map_err(|e| format!("bad timestamp {text:?}: {e}"))
}

pub fn format_timestamp(millis: i64) -> String {
    DateTime::<Utc>::from_timestamp_millis(millis)
        .expect("timestamp in chrono range")
        .to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// A loaded read log. Events on documents the corpus does not know are kept
/// aside in `quarantine` and take no part in read statistics.
#[derive(Debug, Clone, Default)]
pub struct ReadLog {
    active: Vec<ReadEvent>,
    quarantine: Vec<ReadEvent>,
    corpus_ids: Arc<BTreeSet<String>>,
}

impl ReadLog {
    /// Splits `events` into active and quarantined against `corpus`; both
    /// lists end up in canonical (chronological) order.
    pub fn new(events: impl IntoIterator<Item = ReadEvent>, corpus: &Corpus) -> Self {
        Self::with_ids(events, corpus.id_set())
    }

    pub fn with_ids(
        events: impl IntoIterator<Item = ReadEvent>,
        corpus_ids: Arc<BTreeSet<String>>,
    ) -> Self {
        let (mut active, mut quarantine): (Vec<_>, Vec<_>) = events
            .into_iter()
            .partition(|e| e.access_type == AccessType::Q || corpus_ids.contains(&e.doc));
        active.sort();
        quarantine.sort();
        ReadLog {
            active,
            quarantine,
            corpus_ids,
        }
    }

    pub fn active(&self) -> &[ReadEvent] {
        &self.active
    }

    pub fn quarantined(&self) -> &[ReadEvent] {
        &self.quarantine
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn total(&self) -> usize {
        self.active.len() + self.quarantine.len()
    }

    /// Every parsed event, active and quarantined, in canonical order.
    pub fn all_events(&self) -> Vec<&ReadEvent> {
        let mut all: Vec<&ReadEvent> = self.active.iter().chain(&self.quarantine).collect();
        all.sort();
        all
    }

    pub fn knows_doc(&self, id: &str) -> bool {
        self.corpus_ids.contains(id)
    }

    pub(crate) fn corpus_ids(&self) -> &Arc<BTreeSet<String>> {
        &self.corpus_ids
    }

    pub fn max_timestamp(&self) -> Option<i64> {
        self.active.iter().map(|e| e.timestamp).max()
    }
}

pub fn load_read_log(path: &Path, corpus: &Corpus) -> Result<ReadLog> {
    parse_read_log(&read_to_string(path)?, &source_name(path), corpus)
}

pub fn parse_read_log(text: &str, source: &str, corpus: &Corpus) -> Result<ReadLog> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut events = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(source, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        if record.len() != 4 {
            return Err(Error::parse(
                source,
                line,
                format!(
                    "expected 4 fields (timestamp,user,doc,access_type), found {}",
                    record.len()
                ),
            ));
        }
        let timestamp = parse_timestamp(&record[0]).map_err(|m| Error::parse(source, line, m))?;
        let access_type: AccessType = record[3]
            .parse()
            .map_err(|e: Error| Error::parse(source, line, e.to_string()))?;
        let user = record[1].trim();
        let doc = record[2].trim();
        if user.is_empty() {
            return Err(Error::parse(source, line, "empty user id"));
        }
        if (access_type == AccessType::Q) != doc.is_empty() {
            return Err(Error::parse(
                source,
                line,
                "doc must be empty exactly when access_type is Q",
            ));
        }
        events.push(ReadEvent::new(timestamp, user, doc, access_type));
    }
    Ok(ReadLog::new(events, corpus))
}

pub fn read_log_to_string(log: &ReadLog) -> String {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for e in log.all_events() {
        writer
            .write_record([
                format_timestamp(e.timestamp).as_str(),
                &e.user,
                &e.doc,
                &e.access_type.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

pub fn save_read_log(log: &ReadLog, path: &Path) -> Result<()> {
    write_string(path, &read_log_to_string(log))
}
