//! Data model and ingestion/validation of multi-jurisdiction case-summary
//! corpora.
//!
//! Two on-disk layouts are accepted: canonical JSONL (one case per line) and
//! the plain-directory layout the source datasets ship in
//! (`<root>/<split>/docs/<id>.txt` with parallel `refs/` and `segments/`
//! directories). Text is preserved byte-for-byte except that line endings
//! are normalized to `\n`; all other normalization is left to the metric
//! modules.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("record {line}: missing required field `{field}`")]
    MissingField { line: usize, field: &'static str },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("document for id `{0}` is empty")]
    EmptyDocument(String),
    #[error("unknown id `{0}` in split request")]
    UnknownId(String),
    #[error("record {line}: jurisdiction `{found}` differs from corpus jurisdiction `{expected}`")]
    MixedJurisdiction {
        line: usize,
        expected: String,
        found: String,
    },
    #[error("record {line}: split `{found}` differs from corpus split `{expected}`")]
    MixedSplit {
        line: usize,
        expected: String,
        found: String,
    },
    #[error("record {line}: unknown split value (expected train/test/unlabeled)")]
    InvalidSplit { line: usize },
    #[error("directory layout at `{0}` has no split directory (expected train/, test/ or unlabeled/, or a docs/ directory)")]
    NoSplitDir(PathBuf),
    #[error("directory layout at `{root}` has multiple split directories ({found:?}); load one split at a time")]
    AmbiguousSplit { root: PathBuf, found: Vec<String> },
    #[error("io error at `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("record {line}: malformed JSON: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

/// Court system / country identifier; free-form so new jurisdictions need no
/// code change.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Jurisdiction(pub String);

impl Jurisdiction {
    pub fn new(id: impl Into<String>) -> Jurisdiction {
        Jurisdiction(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Jurisdiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    #[default]
    Train,
    Test,
    Unlabeled,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
            Split::Unlabeled => "unlabeled",
        }
    }

    pub fn parse(s: &str) -> Option<Split> {
        match s {
            "train" => Some(Split::Train),
            "test" => Some(Split::Test),
            "unlabeled" => Some(Split::Unlabeled),
            _ => None,
        }
    }
}

/// A judgment document with zero or more reference summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasePair {
    pub id: String,
    pub jurisdiction: Jurisdiction,
    /// Full judgment text.
    pub document: String,
    /// Reference summaries in dataset order; empty for unlabeled corpora,
    /// plural when multiple annotators provided summaries.
    #[serde(default)]
    pub references: Vec<String>,
    /// Optional rhetorical segments of the summary, in declared order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<IndexMap<String, String>>,
}

/// All pairs of one jurisdiction and one split; immutable after load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub jurisdiction: Jurisdiction,
    pub split: Split,
    pub pairs: Vec<CasePair>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|p| p.id.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Dir,
}

/// Collapses runs of whitespace to single spaces and trims the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn normalize_line_endings(text: &str) -> String {
    if text.contains('\r') {
        text.replace("\r\n", "\n").replace('\r', "\n")
    } else {
        text.to_string()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonlRecord {
    id: Option<String>,
    jurisdiction: Option<String>,
    #[serde(default)]
    split: Option<String>,
    document: Option<String>,
    #[serde(default)]
    references: Option<Vec<String>>,
    #[serde(default)]
    segments: Option<IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    selected: Option<Vec<usize>>,
}

/// Loads and validates one corpus.
///
/// For `Jsonl` the path is a file whose records must all share one
/// jurisdiction and one split. For `Dir` the path is either a split
/// directory itself (containing `docs/`) or a root containing exactly one
/// split directory; the jurisdiction is taken from the root's directory
/// name and the split from the split directory name.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    match format {
        CorpusFormat::Jsonl => load_jsonl(path),
        CorpusFormat::Dir => load_dir(path),
    }
}

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn load_jsonl(path: &Path) -> Result<Corpus, CorpusError> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut pairs: Vec<CasePair> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut jurisdiction: Option<Jurisdiction> = None;
    let mut split: Option<Split> = None;

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: JsonlRecord =
            serde_json::from_str(&line).map_err(|source| CorpusError::Json {
                line: line_no,
                source,
            })?;
        let pair = pair_from_record(record, line_no, &mut jurisdiction, &mut split)?;
        if !seen.insert(pair.id.clone()) {
            return Err(CorpusError::DuplicateId(pair.id));
        }
        pairs.push(pair);
    }
    Ok(Corpus {
        jurisdiction: jurisdiction.unwrap_or_else(|| Jurisdiction::new("unknown")),
        split: split.unwrap_or_default(),
        pairs,
    })
}

fn pair_from_record(
    record: JsonlRecord,
    line: usize,
    jurisdiction: &mut Option<Jurisdiction>,
    split: &mut Option<Split>,
) -> Result<CasePair, CorpusError> {
    let id = record
        .id
        .ok_or(CorpusError::MissingField { line, field: "id" })?;
    let jur = record.jurisdiction.ok_or(CorpusError::MissingField {
        line,
        field: "jurisdiction",
    })?;
    let document = record.document.ok_or(CorpusError::MissingField {
        line,
        field: "document",
    })?;
    let document = normalize_line_endings(&document);
    if normalize_whitespace(&document).is_empty() {
        return Err(CorpusError::EmptyDocument(id));
    }
    let record_split = match &record.split {
        Some(s) => Split::parse(s).ok_or(CorpusError::InvalidSplit { line })?,
        None => Split::Train,
    };
    match jurisdiction {
        None => *jurisdiction = Some(Jurisdiction::new(jur.clone())),
        Some(j) if j.as_str() != jur => {
            return Err(CorpusError::MixedJurisdiction {
                line,
                expected: j.as_str().to_string(),
                found: jur,
            })
        }
        Some(_) => {}
    }
    match split {
        None => *split = Some(record_split),
        Some(s) if *s != record_split => {
            return Err(CorpusError::MixedSplit {
                line,
                expected: s.as_str().to_string(),
                found: record_split.as_str().to_string(),
            })
        }
        Some(_) => {}
    }
    Ok(CasePair {
        id,
        jurisdiction: Jurisdiction::new(jur),
        document,
        references: record
            .references
            .unwrap_or_default()
            .iter()
            .map(|r| normalize_line_endings(r))
            .collect(),
        segments: record.segments.map(|m| {
            m.into_iter()
                .map(|(k, v)| (k, normalize_line_endings(&v)))
                .collect()
        }),
    })
}

const SPLIT_NAMES: &[&str] = &["train", "test", "unlabeled"];

fn load_dir(path: &Path) -> Result<Corpus, CorpusError> {
    // `path` may be the split directory itself or a root holding exactly one.
    let (split_dir, split, jurisdiction) = if path.join("docs").is_dir() {
        let split_name = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or("train");
        let split = Split::parse(split_name).unwrap_or_default();
        let jurisdiction = path
            .parent()
            .and_then(|p| p.file_name())
            .and_then(|n| n.to_str())
            .filter(|s| !s.is_empty())
            .unwrap_or(split_name);
        (path.to_path_buf(), split, jurisdiction.to_string())
    } else {
        let found: Vec<String> = SPLIT_NAMES
            .iter()
            .filter(|s| path.join(s).join("docs").is_dir())
            .map(|s| s.to_string())
            .collect();
        match found.len() {
            0 => return Err(CorpusError::NoSplitDir(path.to_path_buf())),
            1 => {
                let split = Split::parse(&found[0]).unwrap();
                let jurisdiction = path
                    .file_name()
                    .and_then(|n| n.to_str())
                    .unwrap_or("unknown")
                    .to_string();
                (path.join(&found[0]), split, jurisdiction)
            }
            _ => {
                return Err(CorpusError::AmbiguousSplit {
                    root: path.to_path_buf(),
                    found,
                })
            }
        }
    };

    let docs_dir = split_dir.join("docs");
    let mut ids: Vec<String> = Vec::new();
    for entry in fs::read_dir(&docs_dir).map_err(|e| io_err(&docs_dir, e))? {
        let entry = entry.map_err(|e| io_err(&docs_dir, e))?;
        let p = entry.path();
        if p.extension().and_then(|e| e.to_str()) == Some("txt") {
            if let Some(stem) = p.file_stem().and_then(|s| s.to_str()) {
                ids.push(stem.to_string());
            }
        }
    }
    ids.sort();

    let refs_dir = split_dir.join("refs");
    let seg_dir = split_dir.join("segments");
    let mut pairs = Vec::with_capacity(ids.len());
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for id in ids {
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateId(id));
        }
        let doc_path = docs_dir.join(format!("{id}.txt"));
        let document =
            normalize_line_endings(&fs::read_to_string(&doc_path).map_err(|e| io_err(&doc_path, e))?);
        if normalize_whitespace(&document).is_empty() {
            return Err(CorpusError::EmptyDocument(id));
        }

        // refs/<id>.<k>.txt ordered by k
        let mut references = Vec::new();
        if refs_dir.is_dir() {
            let mut ref_files: Vec<(usize, PathBuf)> = Vec::new();
            for entry in fs::read_dir(&refs_dir).map_err(|e| io_err(&refs_dir, e))? {
                let p = entry.map_err(|e| io_err(&refs_dir, e))?.path();
                if let Some(name) = p.file_name().and_then(|n| n.to_str()) {
                    if let Some(rest) = name.strip_prefix(&format!("{id}.")) {
                        if let Some(k) = rest.strip_suffix(".txt").and_then(|k| k.parse().ok()) {
                            ref_files.push((k, p.clone()));
                        }
                    }
                }
            }
            ref_files.sort_by_key(|&(k, _)| k);
            for (_, p) in ref_files {
                references
                    .push(normalize_line_endings(&fs::read_to_string(&p).map_err(|e| io_err(&p, e))?));
            }
        }

        // segments/<id>.<segment-name>.txt, lexicographic by segment name
        // (which happens to match the UK-Abs declared order).
        let mut segments: Option<IndexMap<String, String>> = None;
        if seg_dir.is_dir() {
            let mut seg_files: Vec<(String, PathBuf)> = Vec::new();
            for entry in fs::read_dir(&seg_dir).map_err(|e| io_err(&seg_dir, e))? {
                let p = entry.map_err(|e| io_err(&seg_dir, e))?.path();
                if let Some(name) = p.file_name().and_then(|n| n.to_str()) {
                    if let Some(rest) = name.strip_prefix(&format!("{id}.")) {
                        if let Some(seg_name) = rest.strip_suffix(".txt") {
                            seg_files.push((seg_name.to_string(), p.clone()));
                        }
                    }
                }
            }
            seg_files.sort_by(|a, b| a.0.cmp(&b.0));
            if !seg_files.is_empty() {
                let mut map = IndexMap::new();
                for (name, p) in seg_files {
                    map.insert(
                        name,
                        normalize_line_endings(&fs::read_to_string(&p).map_err(|e| io_err(&p, e))?),
                    );
                }
                segments = Some(map);
            }
        }

        pairs.push(CasePair {
            id,
            jurisdiction: Jurisdiction::new(jurisdiction.clone()),
            document,
            references,
            segments,
        });
    }

    Ok(Corpus {
        jurisdiction: Jurisdiction::new(jurisdiction),
        split,
        pairs,
    })
}

/// Writes a corpus as JSONL, one record per pair, preserving order.
pub fn write_corpus(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    let mut out = fs::File::create(path).map_err(|e| io_err(path, e))?;
    for pair in &corpus.pairs {
        let record = JsonlRecord {
            id: Some(pair.id.clone()),
            jurisdiction: Some(pair.jurisdiction.as_str().to_string()),
            split: Some(corpus.split.as_str().to_string()),
            document: Some(pair.document.clone()),
            references: Some(pair.references.clone()),
            segments: pair.segments.clone(),
            provenance: None,
            selected: None,
        };
        let line = serde_json::to_string(&record).expect("record serializes");
        writeln!(out, "{line}").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

/// Partitions `corpus` into `(train, test)` by membership in `test_ids`,
/// preserving order within each side.
pub fn split_corpus(
    corpus: &Corpus,
    test_ids: &BTreeSet<String>,
) -> Result<(Corpus, Corpus), CorpusError> {
    let known: BTreeSet<&str> = corpus.ids().collect();
    for id in test_ids {
        if !known.contains(id.as_str()) {
            return Err(CorpusError::UnknownId(id.clone()));
        }
    }
    let mut train_pairs = Vec::new();
    let mut test_pairs = Vec::new();
    for pair in &corpus.pairs {
        if test_ids.contains(&pair.id) {
            test_pairs.push(pair.clone());
        } else {
            train_pairs.push(pair.clone());
        }
    }
    Ok((
        Corpus {
            jurisdiction: corpus.jurisdiction.clone(),
            split: corpus.split,
            pairs: train_pairs,
        },
        Corpus {
            jurisdiction: corpus.jurisdiction.clone(),
            split: Split::Test,
            pairs: test_pairs,
        },
    ))
}

/// One validation finding; `id` is absent for corpus-level issues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub id: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, id: Option<&str>, message: impl Into<String>) {
        self.issues.push(ValidationIssue {
            id: id.map(str::to_string),
            message: message.into(),
        });
    }
}

/// Checks every corpus invariant and reports issues without mutating or
/// failing; an empty report means the corpus is well-formed.
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let mut report = ValidationReport::default();
    if corpus.jurisdiction.as_str().is_empty() {
        report.push(None, "empty jurisdiction id");
    }
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for pair in &corpus.pairs {
        if !seen.insert(&pair.id) {
            report.push(Some(&pair.id), "duplicate id");
        }
        if pair.jurisdiction != corpus.jurisdiction {
            report.push(
                Some(&pair.id),
                format!(
                    "jurisdiction mismatch: pair `{}` vs corpus `{}`",
                    pair.jurisdiction, corpus.jurisdiction
                ),
            );
        }
        if normalize_whitespace(&pair.document).is_empty() {
            report.push(Some(&pair.id), "empty document");
        }
        match corpus.split {
            Split::Test if pair.references.is_empty() => {
                report.push(Some(&pair.id), "test pair without reference");
            }
            Split::Unlabeled if !pair.references.is_empty() => {
                report.push(Some(&pair.id), "unexpected reference");
            }
            _ => {}
        }
        if let Some(segments) = &pair.segments {
            let joined = segments
                .values()
                .map(|v| normalize_whitespace(v))
                .collect::<Vec<_>>()
                .join(" ");
            let joined = normalize_whitespace(&joined);
            let matches_any = pair
                .references
                .iter()
                .any(|r| normalize_whitespace(r) == joined);
            if !matches_any {
                report.push(Some(&pair.id), "segment/reference mismatch");
            }
        }
    }
    report
}
