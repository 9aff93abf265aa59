//! ROUGE scoring with multi-reference averaging, corpus-level reporting,
//! and per-segment recall.
//!
//! ROUGE-L is computed over whole texts as a token-level LCS (not the
//! sentence-level union variant), with F1 at beta=1. No stemming or
//! stopword removal is applied.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::par;
use crate::text::tokenize;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("at least one reference is required")]
    NoReference,
    #[error("at least one segment is required")]
    NoSegments,
    #[error("missing output for document id `{0}`")]
    MissingOutput(String),
}

/// Precision / recall / F1 triple in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    fn from_pr(precision: f64, recall: f64) -> RougeScore {
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        RougeScore {
            precision,
            recall,
            f1,
        }
    }
}

/// Length of the longest common subsequence, two-row dynamic programming.
pub fn lcs_len(a: &[String], b: &[String]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0u32; short.len() + 1];
    let mut cur = vec![0u32; short.len() + 1];
    for x in long {
        for (j, y) in short.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()] as usize
}

/// ROUGE-L of a candidate against one reference:
/// `P = LCS/|candidate|`, `R = LCS/|reference|` (zero when the respective
/// side is empty).
pub fn rouge_l(candidate: &[String], reference: &[String]) -> RougeScore {
    let l = lcs_len(candidate, reference) as f64;
    let precision = if candidate.is_empty() { 0.0 } else { l / candidate.len() as f64 };
    let recall = if reference.is_empty() { 0.0 } else { l / reference.len() as f64 };
    RougeScore::from_pr(precision, recall)
}

/// ROUGE-N with clipped n-gram matching, used for pseudo-reference
/// construction alongside ROUGE-L.
pub fn rouge_n(candidate: &[String], reference: &[String], n: usize) -> RougeScore {
    if n == 0 || candidate.len() < n || reference.len() < n {
        return RougeScore::default();
    }
    let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
    for g in reference.windows(n) {
        *ref_counts.entry(g).or_insert(0) += 1;
    }
    let mut matched = 0usize;
    let mut cand_counts: HashMap<&[String], usize> = HashMap::new();
    for g in candidate.windows(n) {
        let used = cand_counts.entry(g).or_insert(0);
        if *used < ref_counts.get(g).copied().unwrap_or(0) {
            matched += 1;
        }
        *used += 1;
    }
    let cand_total = candidate.len() - n + 1;
    let ref_total = reference.len() - n + 1;
    RougeScore::from_pr(matched as f64 / cand_total as f64, matched as f64 / ref_total as f64)
}

/// Arithmetic mean of per-reference P, R, and F1 (F1 is averaged, not
/// recomputed from the averaged P and R).
pub fn rouge_l_multi(candidate: &[String], references: &[Vec<String>]) -> Result<RougeScore, EvalError> {
    if references.is_empty() {
        return Err(EvalError::NoReference);
    }
    let mut acc = RougeScore::default();
    for reference in references {
        let s = rouge_l(candidate, reference);
        acc.precision += s.precision;
        acc.recall += s.recall;
        acc.f1 += s.f1;
    }
    let k = references.len() as f64;
    Ok(RougeScore {
        precision: acc.precision / k,
        recall: acc.recall / k,
        f1: acc.f1 / k,
    })
}

/// ROUGE-L recall of the candidate against each named summary segment.
pub fn segment_recall(
    candidate: &[String],
    segments: &IndexMap<String, Vec<String>>,
) -> Result<BTreeMap<String, f64>, EvalError> {
    if segments.is_empty() {
        return Err(EvalError::NoSegments);
    }
    Ok(segments
        .iter()
        .map(|(name, seg)| (name.clone(), rouge_l(candidate, seg).recall))
        .collect())
}

/// Per-document and corpus-averaged scores for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// id -> score averaged over that document's references.
    pub per_doc: BTreeMap<String, RougeScore>,
    /// Arithmetic mean of the per-document scores, in corpus order.
    pub mean: RougeScore,
    /// Segment name -> mean ROUGE-L recall over documents carrying that
    /// segment; present only when some document has segments.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segment_recall: Option<BTreeMap<String, f64>>,
    /// Reserved for externally computed BERTScore values.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bertscore: Option<f64>,
}

/// Scores `outputs` (id -> summary text) against a test corpus.
///
/// Every corpus id must have an output; extra outputs are ignored. Scoring
/// fans out per document; the mean reduction runs in corpus order.
pub fn evaluate_run(
    outputs: &BTreeMap<String, String>,
    corpus: &Corpus,
) -> Result<EvalReport, EvalError> {
    for pair in &corpus.pairs {
        if !outputs.contains_key(&pair.id) {
            return Err(EvalError::MissingOutput(pair.id.clone()));
        }
        if pair.references.is_empty() {
            return Err(EvalError::NoReference);
        }
    }
    struct DocResult {
        id: String,
        score: RougeScore,
        segments: Option<BTreeMap<String, f64>>,
    }
    let results: Vec<DocResult> = par::map_ordered(&corpus.pairs, |pair| {
        let candidate = tokenize(&outputs[&pair.id]).tokens;
        let references: Vec<Vec<String>> = pair
            .references
            .iter()
            .map(|r| tokenize(r).tokens)
            .collect();
        let score = rouge_l_multi(&candidate, &references).expect("non-empty references");
        let segments = pair.segments.as_ref().map(|segs| {
            let tokenized: IndexMap<String, Vec<String>> = segs
                .iter()
                .map(|(k, v)| (k.clone(), tokenize(v).tokens))
                .collect();
            segment_recall(&candidate, &tokenized).expect("non-empty segments")
        });
        DocResult {
            id: pair.id.clone(),
            score,
            segments,
        }
    });

    let mut mean = RougeScore::default();
    let mut per_doc = BTreeMap::new();
    let mut seg_sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for r in &results {
        mean.precision += r.score.precision;
        mean.recall += r.score.recall;
        mean.f1 += r.score.f1;
        per_doc.insert(r.id.clone(), r.score);
        if let Some(segs) = &r.segments {
            for (name, recall) in segs {
                let e = seg_sums.entry(name.clone()).or_insert((0.0, 0));
                e.0 += recall;
                e.1 += 1;
            }
        }
    }
    let n = results.len().max(1) as f64;
    mean.precision /= n;
    mean.recall /= n;
    mean.f1 /= n;

    let segment_recall = if seg_sums.is_empty() {
        None
    } else {
        Some(
            seg_sums
                .into_iter()
                .map(|(name, (sum, count))| (name, sum / count as f64))
                .collect(),
        )
    };

    Ok(EvalReport {
        per_doc,
        mean,
        segment_recall,
        bertscore: None,
    })
}
