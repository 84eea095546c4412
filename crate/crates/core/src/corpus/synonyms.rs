use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

use super::{read_to_string, source_name, write_string};

/// Groups of interchangeable terms. The first term of a group is its
/// canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymTable {
    groups: Vec<Vec<String>>,
    canonical: HashMap<String, usize>,
}

impl SynonymTable {
    pub fn new(groups: Vec<Vec<String>>) -> Result<Self> {
        let mut canonical = HashMap::new();
        for (gi, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::Validation(format!(
                    "synonym group {} is empty",
                    gi + 1
                )));
            }
            for term in group {
                if term.is_empty() || term.chars().any(|c| c.is_uppercase()) {
                    return Err(Error::Validation(format!(
                        "synonym term {term:?} must be non-empty lowercase"
                    )));
                }
                if let Some(prev) = canonical.insert(term.clone(), gi) {
                    return Err(Error::Validation(format!(
                        "synonym term {term:?} appears in groups {} and {}",
                        prev + 1,
                        gi + 1
                    )));
                }
            }
        }
        Ok(SynonymTable { groups, canonical })
    }

    pub fn groups(&self) -> &[Vec<String>] {
        &self.groups
    }

    /// Canonical term for `term`, or `None` if it is not in any group.
    pub fn canonical(&self, term: &str) -> Option<&str> {
        self.canonical
            .get(term)
            .map(|&gi| self.groups[gi][0].as_str())
    }
}

pub fn load_synonyms(path: &Path) -> Result<SynonymTable> {
    parse_synonyms(&read_to_string(path)?, &source_name(path))
}

pub fn parse_synonyms(text: &str, source: &str) -> Result<SynonymTable> {
    let mut groups = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let group: Vec<String> = line.split(',').map(|t| t.trim().to_owned()).collect();
        if group.iter().any(|t| t.is_empty()) {
            return Err(Error::parse(source, idx + 1, "empty synonym term"));
        }
        groups.push(group);
    }
    SynonymTable::new(groups)
}

pub fn synonyms_to_string(table: &SynonymTable) -> String {
    table
        .groups
        .iter()
        .map(|g| format!("{}\n", g.join(",")))
        .collect()
}

pub fn save_synonyms(table: &SynonymTable, path: &Path) -> Result<()> {
    write_string(path, &synonyms_to_string(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_term_is_canonical() {
        let t = parse_synonyms("metallicity, abundance\nqso,quasar\n", "s").unwrap();
        assert_eq!(t.canonical("abundance"), Some("metallicity"));
        assert_eq!(t.canonical("metallicity"), Some("metallicity"));
        assert_eq!(t.canonical("galaxy"), None);
        assert_eq!(
            synonyms_to_string(&t),
            "metallicity,abundance\nqso,quasar\n"
        );
    }

    #[test]
    fn term_in_two_groups_rejected() {
        assert!(parse_synonyms("a1,b1\nb1,c1\n", "s").is_err());
    }

    #[test]
    fn uppercase_rejected() {
        assert!(parse_synonyms("Quasar,qso\n", "s").is_err());
    }
}
