//! The seven unsupervised extractive summarizers, each producing sentence
//! scores or a budgeted summary, plus corpus-level batch summarization.
//!
//! All scorers are deterministic pure functions; corpus-level summarization
//! fans out per document with per-document results that do not depend on
//! thread count.

mod casesum;
mod graph;
mod letsum;
mod lsa;
mod luhn;
mod mmr;

pub use casesum::{casesummarizer_scores, CaseSummarizerWeights};
pub use graph::{lexrank_scores, reduction_scores};
pub use letsum::{letsum_summary, LetSumConfig, Theme};
pub use lsa::lsa_scores;
pub use luhn::luhn_scores;
pub use mmr::mmr_summary;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::par;
use crate::text::{split_sentences, SentenceIndex, StopwordList, TfIdfModel};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("document has no sentences")]
    EmptyDocument,
    #[error("budget must be at least one word")]
    ZeroBudget,
    #[error("mmr lambda must lie in [0, 1], got {0}")]
    InvalidLambda(f64),
    #[error("one score required per sentence ({scores} scores vs {sentences} sentences)")]
    ScoreCountMismatch { scores: usize, sentences: usize },
    #[error("sentence scores must be finite")]
    NonFiniteScore,
}

/// Token budget for an output summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    max_words: usize,
}

impl Budget {
    pub fn new(max_words: usize) -> Result<Budget, ExtractError> {
        if max_words == 0 {
            return Err(ExtractError::ZeroBudget);
        }
        Ok(Budget { max_words })
    }

    pub fn max_words(&self) -> usize {
        self.max_words
    }
}

/// One finite score per sentence of the index it refers to.
#[derive(Debug, Clone)]
pub struct ScoredSentences<'a> {
    pub doc: &'a SentenceIndex,
    pub scores: Vec<f64>,
}

impl<'a> ScoredSentences<'a> {
    pub fn new(doc: &'a SentenceIndex, scores: Vec<f64>) -> Result<Self, ExtractError> {
        if scores.len() != doc.len() {
            return Err(ExtractError::ScoreCountMismatch {
                scores: scores.len(),
                sentences: doc.len(),
            });
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(ExtractError::NonFiniteScore);
        }
        Ok(ScoredSentences { doc, scores })
    }
}

/// Selected sentence indices in document order plus their joined text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractiveSummary {
    /// Strictly increasing document sentence indices.
    pub indices: Vec<usize>,
    /// Selected sentences joined with newlines.
    pub text: String,
    /// Total token count of the selected sentences.
    pub word_count: usize,
}

pub(crate) fn assemble_summary(doc: &SentenceIndex, mut indices: Vec<usize>) -> ExtractiveSummary {
    indices.sort_unstable();
    indices.dedup();
    let text = indices
        .iter()
        .map(|&i| doc.sentences[i].text.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    let word_count = indices.iter().map(|&i| doc.sentences[i].tokens.len()).sum();
    ExtractiveSummary {
        indices,
        text,
        word_count,
    }
}

/// Ranks sentences by score (ties to the earlier sentence) and takes them
/// until the running total reaches the budget. The sentence that crosses
/// `max_words` is kept, so short budgets never produce empty summaries.
pub fn select_by_budget(
    scored: &ScoredSentences<'_>,
    budget: &Budget,
) -> Result<ExtractiveSummary, ExtractError> {
    let doc = scored.doc;
    if doc.is_empty() {
        return Err(ExtractError::EmptyDocument);
    }
    let mut order: Vec<usize> = (0..doc.len()).collect();
    order.sort_by(|&a, &b| {
        scored.scores[b]
            .partial_cmp(&scored.scores[a])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    let mut selected = Vec::new();
    let mut total = 0usize;
    for idx in order {
        if total >= budget.max_words() {
            break;
        }
        selected.push(idx);
        total += doc.sentences[idx].tokens.len();
    }
    Ok(assemble_summary(doc, selected))
}

/// Which summarizer to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    LexRank,
    Reduction,
    Lsa,
    Luhn,
    CaseSummarizer,
    LetSum,
    Mmr,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::LexRank,
        Algorithm::Reduction,
        Algorithm::Lsa,
        Algorithm::Luhn,
        Algorithm::CaseSummarizer,
        Algorithm::LetSum,
        Algorithm::Mmr,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::LexRank => "lexrank",
            Algorithm::Reduction => "reduction",
            Algorithm::Lsa => "lsa",
            Algorithm::Luhn => "luhn",
            Algorithm::CaseSummarizer => "casesummarizer",
            Algorithm::LetSum => "letsum",
            Algorithm::Mmr => "mmr",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lexrank" => Ok(Algorithm::LexRank),
            "reduction" => Ok(Algorithm::Reduction),
            "lsa" => Ok(Algorithm::Lsa),
            "luhn" => Ok(Algorithm::Luhn),
            "casesummarizer" => Ok(Algorithm::CaseSummarizer),
            "letsum" => Ok(Algorithm::LetSum),
            "mmr" => Ok(Algorithm::Mmr),
            other => Err(format!(
                "unknown algorithm `{other}` (expected one of lexrank, reduction, lsa, luhn, casesummarizer, letsum, mmr)"
            )),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Algorithm constants; the defaults are the classical published values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummarizeParams {
    /// LexRank: similarity-graph edge cutoff.
    pub lexrank_threshold: f64,
    /// LexRank: damping factor of the random walk.
    pub lexrank_damping: f64,
    /// LSA: a singular triplet is kept while `sigma >= fraction * sigma_max`.
    pub lsa_rank_fraction: f64,
    /// Luhn: top fraction of document terms treated as significant.
    pub luhn_sig_top_fraction: f64,
    /// Luhn: maximum non-significant tokens between cluster members.
    pub luhn_max_gap: usize,
    pub casesummarizer: CaseSummarizerWeights,
    pub mmr_lambda: f64,
    #[serde(skip)]
    pub letsum: LetSumConfig,
}

impl Default for SummarizeParams {
    fn default() -> Self {
        SummarizeParams {
            lexrank_threshold: 0.1,
            lexrank_damping: 0.85,
            lsa_rank_fraction: 0.5,
            luhn_sig_top_fraction: 0.1,
            luhn_max_gap: 4,
            casesummarizer: CaseSummarizerWeights::default(),
            mmr_lambda: 0.6,
            letsum: LetSumConfig::default(),
        }
    }
}

/// Runs one algorithm over a pre-split document.
pub fn summarize_document(
    doc: &SentenceIndex,
    model: &TfIdfModel,
    algo: Algorithm,
    budget: &Budget,
    params: &SummarizeParams,
    stopwords: &StopwordList,
) -> Result<ExtractiveSummary, ExtractError> {
    match algo {
        Algorithm::LexRank => {
            let scored = lexrank_scores(doc, model, params.lexrank_threshold, params.lexrank_damping)?;
            select_by_budget(&scored, budget)
        }
        Algorithm::Reduction => {
            let scored = reduction_scores(doc, model)?;
            select_by_budget(&scored, budget)
        }
        Algorithm::Lsa => {
            let scored = lsa_scores(doc, model, params.lsa_rank_fraction)?;
            select_by_budget(&scored, budget)
        }
        Algorithm::Luhn => {
            let scored = luhn_scores(doc, stopwords, params.luhn_sig_top_fraction, params.luhn_max_gap)?;
            select_by_budget(&scored, budget)
        }
        Algorithm::CaseSummarizer => {
            let scored = casesummarizer_scores(doc, model, &params.casesummarizer)?;
            select_by_budget(&scored, budget)
        }
        Algorithm::LetSum => letsum_summary(doc, budget, &params.letsum),
        Algorithm::Mmr => mmr_summary(doc, model, budget, params.mmr_lambda),
    }
}

/// One document's summary in a corpus run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocSummary {
    pub id: String,
    pub summary: ExtractiveSummary,
}

/// Summarizes every document of a corpus with one algorithm, in parallel,
/// preserving corpus order.
pub fn summarize_corpus(
    corpus: &Corpus,
    model: &TfIdfModel,
    algo: Algorithm,
    budget: &Budget,
    params: &SummarizeParams,
    stopwords: &StopwordList,
) -> Result<Vec<DocSummary>, ExtractError> {
    par::try_map_ordered(&corpus.pairs, |pair| {
        let doc = split_sentences(&pair.document);
        let summary = summarize_document(&doc, model, algo, budget, params, stopwords)?;
        Ok(DocSummary {
            id: pair.id.clone(),
            summary,
        })
    })
}
