//! Corpus characterization: extractive fragments, compression/coverage/
//! density/copy-length, n-gram novelty and repetition, and cross-corpus
//! vocabulary overlap.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::par;
use crate::text::{ngrams, tokenize, StopwordList};

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("summary is empty")]
    EmptySummary,
    #[error("summary has fewer than {n} tokens")]
    TooShort { n: usize },
    #[error("corpus has pairs without references; profile requires labeled pairs")]
    UnlabeledCorpus,
    #[error("vocabulary sizes differ ({a} vs {b}); overlap requires equal K")]
    SizeMismatch { a: usize, b: usize },
    #[error("external score `{0}` is not finite")]
    NonFiniteValue(String),
}

/// A maximal shared token run found by the greedy left-to-right scan:
/// document tokens `[doc_start, doc_start+length)` equal summary tokens
/// `[sum_start, sum_start+length)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub doc_start: usize,
    pub sum_start: usize,
    pub length: usize,
}

/// Greedy fragment extraction: at each summary position take the longest
/// match anywhere in the document (ties to the smallest `doc_start`),
/// advance by its length, or by one position when the token never occurs
/// in the document.
pub fn extractive_fragments(doc: &[String], summary: &[String]) -> Vec<Fragment> {
    // index document positions by token
    let mut positions: HashMap<&str, Vec<usize>> = HashMap::new();
    for (j, t) in doc.iter().enumerate() {
        positions.entry(t.as_str()).or_default().push(j);
    }
    let mut fragments = Vec::new();
    let mut i = 0;
    while i < summary.len() {
        let mut best_len = 0usize;
        let mut best_j = 0usize;
        if let Some(starts) = positions.get(summary[i].as_str()) {
            for &j in starts {
                // positions are ascending, so a strictly-longer requirement
                // keeps the smallest doc_start on ties
                let mut l = 0;
                while i + l < summary.len() && j + l < doc.len() && doc[j + l] == summary[i + l] {
                    l += 1;
                }
                if l > best_len {
                    best_len = l;
                    best_j = j;
                }
            }
        }
        if best_len > 0 {
            fragments.push(Fragment {
                doc_start: best_j,
                sum_start: i,
                length: best_len,
            });
            i += best_len;
        } else {
            i += 1;
        }
    }
    fragments
}

fn fragment_lengths(doc: &[String], summary: &[String]) -> Vec<usize> {
    extractive_fragments(doc, summary)
        .iter()
        .map(|f| f.length)
        .collect()
}

/// Fraction of summary tokens lying inside an extractive fragment.
pub fn coverage(doc: &[String], summary: &[String]) -> Result<f64, ProfileError> {
    if summary.is_empty() {
        return Err(ProfileError::EmptySummary);
    }
    let total: usize = fragment_lengths(doc, summary).iter().sum();
    Ok(total as f64 / summary.len() as f64)
}

/// Mean squared fragment length per summary token.
pub fn density(doc: &[String], summary: &[String]) -> Result<f64, ProfileError> {
    if summary.is_empty() {
        return Err(ProfileError::EmptySummary);
    }
    let sq: usize = fragment_lengths(doc, summary).iter().map(|l| l * l).sum();
    Ok(sq as f64 / summary.len() as f64)
}

/// Mean fragment length, or 0 when no fragment exists.
pub fn copy_length(doc: &[String], summary: &[String]) -> f64 {
    let lengths = fragment_lengths(doc, summary);
    if lengths.is_empty() {
        return 0.0;
    }
    lengths.iter().sum::<usize>() as f64 / lengths.len() as f64
}

/// Fraction of distinct summary n-grams that never occur in the document.
pub fn novelty(doc: &[String], summary: &[String], n: usize) -> Result<f64, ProfileError> {
    if summary.len() < n {
        return Err(ProfileError::TooShort { n });
    }
    let doc_grams: HashSet<&[String]> = if doc.len() >= n {
        doc.windows(n).collect()
    } else {
        HashSet::new()
    };
    let sum_grams: HashSet<&[String]> = summary.windows(n).collect();
    let novel = sum_grams.iter().filter(|g| !doc_grams.contains(*g)).count();
    Ok(novel as f64 / sum_grams.len() as f64)
}

/// `1 - distinct/total` over the summary's own n-grams.
pub fn repetition(summary: &[String], n: usize) -> Result<f64, ProfileError> {
    if summary.len() < n {
        return Err(ProfileError::TooShort { n });
    }
    let grams = ngrams(summary, n).expect("n >= 1");
    let total: usize = grams.values().sum();
    let distinct = grams.len();
    Ok(1.0 - distinct as f64 / total as f64)
}

/// Per-corpus aggregate of the characterization metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub jurisdiction: String,
    pub n_pairs: usize,
    pub compression_ratio: f64,
    pub coverage: f64,
    pub density: f64,
    pub copy_length: f64,
    /// n -> mean fraction of novel n-grams.
    pub novelty: BTreeMap<usize, f64>,
    /// n -> mean repeated-gram fraction.
    pub repetition: BTreeMap<usize, f64>,
    pub avg_doc_tokens: f64,
    pub avg_sum_tokens: f64,
    /// Top-K most frequent non-stopword terms over documents and summaries.
    pub vocabulary: BTreeSet<String>,
    /// Externally computed scores (e.g. "perplexity"); ingestion only.
    #[serde(default)]
    pub external_scores: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileParams {
    pub n_novelty: usize,
    pub n_repetition: usize,
    pub vocab_k: usize,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            n_novelty: 3,
            n_repetition: 2,
            vocab_k: 1000,
        }
    }
}

struct PairMetrics {
    compression: f64,
    coverage: Option<f64>,
    density: Option<f64>,
    copy_length: Option<f64>,
    novelty: Option<f64>,
    repetition: Option<f64>,
    doc_tokens: usize,
    sum_tokens: usize,
}

/// Computes the per-pair metrics (reference 0 for multi-reference pairs)
/// and averages them arithmetically in pair order.
///
/// Pairs fan out in parallel; the reduction is a sequential sum in input
/// order so results do not depend on scheduling.
pub fn profile_dataset(
    corpus: &Corpus,
    params: &ProfileParams,
    stopwords: &StopwordList,
) -> Result<DatasetProfile, ProfileError> {
    if corpus.pairs.iter().any(|p| p.references.is_empty()) {
        return Err(ProfileError::UnlabeledCorpus);
    }
    let per_pair = par::map_ordered(&corpus.pairs, |pair| {
        let doc = tokenize(&pair.document).tokens;
        let summary = tokenize(&pair.references[0]).tokens;
        let compression = if doc.is_empty() {
            0.0
        } else {
            summary.len() as f64 / doc.len() as f64
        };
        let (cov, den, copy) = if summary.is_empty() {
            (None, None, None)
        } else {
            (
                Some(coverage(&doc, &summary).expect("non-empty")),
                Some(density(&doc, &summary).expect("non-empty")),
                Some(copy_length(&doc, &summary)),
            )
        };
        PairMetrics {
            compression,
            coverage: cov,
            density: den,
            copy_length: copy,
            novelty: novelty(&doc, &summary, params.n_novelty).ok(),
            repetition: repetition(&summary, params.n_repetition).ok(),
            doc_tokens: doc.len(),
            sum_tokens: summary.len(),
        }
    });

    fn mean_of(values: impl Iterator<Item = Option<f64>>) -> f64 {
        let mut sum = 0.0;
        let mut n = 0usize;
        for v in values.flatten() {
            sum += v;
            n += 1;
        }
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    }

    let n_pairs = per_pair.len();
    let compression_ratio = mean_of(per_pair.iter().map(|m| Some(m.compression)));
    let cov = mean_of(per_pair.iter().map(|m| m.coverage));
    let den = mean_of(per_pair.iter().map(|m| m.density));
    let copy = mean_of(per_pair.iter().map(|m| m.copy_length));
    let nov = mean_of(per_pair.iter().map(|m| m.novelty));
    let rep = mean_of(per_pair.iter().map(|m| m.repetition));
    let avg_doc_tokens = mean_of(per_pair.iter().map(|m| Some(m.doc_tokens as f64)));
    let avg_sum_tokens = mean_of(per_pair.iter().map(|m| Some(m.sum_tokens as f64)));

    Ok(DatasetProfile {
        jurisdiction: corpus.jurisdiction.as_str().to_string(),
        n_pairs,
        compression_ratio,
        coverage: cov,
        density: den,
        copy_length: copy,
        novelty: BTreeMap::from([(params.n_novelty, nov)]),
        repetition: BTreeMap::from([(params.n_repetition, rep)]),
        avg_doc_tokens,
        avg_sum_tokens,
        vocabulary: vocabulary(&[corpus], params.vocab_k, stopwords),
        external_scores: BTreeMap::new(),
    })
}

/// Top-K most frequent non-stopword terms over all documents and summaries
/// of the given corpora. Ties at the frequency cutoff break lexicographically
/// ascending; the result holds `min(k, distinct-term-count)` terms.
pub fn vocabulary(corpora: &[&Corpus], k: usize, stopwords: &StopwordList) -> BTreeSet<String> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for corpus in corpora {
        for pair in &corpus.pairs {
            for text in std::iter::once(&pair.document).chain(pair.references.iter()) {
                for t in tokenize(text).tokens {
                    if !stopwords.contains(&t) {
                        *counts.entry(t).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.into_iter().take(k).map(|(t, _)| t).collect()
}

/// Percentage overlap `100 * |a ∩ b| / K` between equal-size vocabularies.
pub fn vocab_overlap(a: &BTreeSet<String>, b: &BTreeSet<String>) -> Result<f64, ProfileError> {
    if a.len() != b.len() {
        return Err(ProfileError::SizeMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let inter = a.intersection(b).count();
    Ok(100.0 * inter as f64 / a.len() as f64)
}

/// Returns the profile with `external_scores[name] = value` set; every other
/// field is unchanged.
pub fn ingest_external_scores(
    mut profile: DatasetProfile,
    name: &str,
    value: f64,
) -> Result<DatasetProfile, ProfileError> {
    if !value.is_finite() {
        return Err(ProfileError::NonFiniteValue(name.to_string()));
    }
    profile.external_scores.insert(name.to_string(), value);
    Ok(profile)
}
