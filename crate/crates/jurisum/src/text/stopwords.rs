//! Versioned English stopword list with file-based overrides.

use std::collections::BTreeSet;
use std::io;
use std::path::Path;
use std::sync::LazyLock;

/// The list shipped with the artifact: one lowercase term per line.
const DEFAULT_LIST: &str = include_str!("stopwords.txt");

static DEFAULT: LazyLock<StopwordList> = LazyLock::new(|| StopwordList::parse(DEFAULT_LIST));

/// A set of terms excluded from vocabularies and significance ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    terms: BTreeSet<String>,
}

impl StopwordList {
    /// The built-in English list (~180 terms).
    pub fn default_english() -> &'static StopwordList {
        &DEFAULT
    }

    /// Reads a list from a UTF-8 file, one lowercase term per line.
    pub fn from_file(path: &Path) -> io::Result<StopwordList> {
        Ok(StopwordList::parse(&std::fs::read_to_string(path)?))
    }

    pub fn from_terms<I, S>(terms: I) -> StopwordList
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        StopwordList {
            terms: terms.into_iter().map(Into::into).collect(),
        }
    }

    /// An empty list; nothing is filtered.
    pub fn empty() -> StopwordList {
        StopwordList {
            terms: BTreeSet::new(),
        }
    }

    fn parse(raw: &str) -> StopwordList {
        StopwordList {
            terms: raw
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| l.to_lowercase())
                .collect(),
        }
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeSet<String> {
        &self.terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_list_has_expected_shape() {
        let list = StopwordList::default_english();
        assert!(list.len() >= 150 && list.len() <= 220, "got {}", list.len());
        assert!(list.contains("the"));
        assert!(list.contains("of"));
        assert!(!list.contains("court"));
    }

    #[test]
    fn file_override_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stop.txt");
        std::fs::write(&path, "alpha\nbeta\n\n# comment\ngamma\n").unwrap();
        let list = StopwordList::from_file(&path).unwrap();
        assert_eq!(list.len(), 3);
        assert!(list.contains("beta"));
    }
}
