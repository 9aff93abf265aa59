//! CaseSummarizer: mean TF-IDF sentence weight boosted by legal-specific
//! surface features (dates, capitalized entity spans, section headings).

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{ExtractError, ScoredSentences};
use crate::text::{vectorize, Sentence, SentenceIndex, TfIdfModel};

/// Feature weights applied in units of the base-score standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseSummarizerWeights {
    pub w_date: f64,
    pub w_entity: f64,
    pub w_heading: f64,
}

impl Default for CaseSummarizerWeights {
    fn default() -> Self {
        CaseSummarizerWeights {
            w_date: 0.2,
            w_entity: 0.3,
            w_heading: 1.5,
        }
    }
}

const MONTHS: &[&str] = &[
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december",
];

fn is_year(token: &str) -> bool {
    token.len() == 4
        && token.chars().all(|c| c.is_ascii_digit())
        && (1500..=2100).contains(&token.parse::<u32>().unwrap_or(0))
}

fn is_day(token: &str) -> bool {
    token.parse::<u32>().map(|d| (1..=31).contains(&d)).unwrap_or(false)
}

/// Count of date-like tokens: 4-digit years, plus month names adjacent to a
/// day number.
fn date_feature(sentence: &Sentence) -> usize {
    let tokens = &sentence.tokens.tokens;
    let mut count = 0;
    for (i, t) in tokens.iter().enumerate() {
        if is_year(t) {
            count += 1;
        } else if MONTHS.contains(&t.as_str()) {
            let before = i > 0 && is_day(&tokens[i - 1]);
            let after = i + 1 < tokens.len() && is_day(&tokens[i + 1]);
            if before || after {
                count += 1;
            }
        }
    }
    count
}

/// Count of maximal runs of two or more capitalized words in the original
/// casing.
fn entity_feature(sentence: &Sentence) -> usize {
    let mut spans = 0;
    let mut run = 0;
    for &(start, end) in &sentence.tokens.offsets {
        let original = &sentence.text[start..end];
        let capitalized = original.chars().next().map(char::is_uppercase).unwrap_or(false);
        if capitalized {
            run += 1;
        } else {
            if run >= 2 {
                spans += 1;
            }
            run = 0;
        }
    }
    if run >= 2 {
        spans += 1;
    }
    spans
}

static NUMBERED_HEADING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*\d+(\.\d+)*[.)]\s*\S").unwrap());

fn is_heading_text(text: &str, token_count: usize) -> bool {
    let text = text.trim();
    let has_letter = text.chars().any(|c| c.is_alphabetic());
    let has_lower = text.chars().any(|c| c.is_lowercase());
    if has_letter && !has_lower {
        return true;
    }
    NUMBERED_HEADING.is_match(text) && token_count <= 12
}

/// A heading is an all-caps line (letters present, none lowercase) or a
/// short numbered lead-in like "3. PROCEDURAL HISTORY".
fn is_heading(sentence: &Sentence) -> bool {
    is_heading_text(&sentence.text, sentence.tokens.len())
}

/// Headings without terminal punctuation merge into the sentence that
/// follows them, so a sentence whose first line is an all-caps heading also
/// starts a section.
fn starts_with_heading_line(sentence: &Sentence) -> bool {
    match sentence.text.split_once('\n') {
        Some((first, rest)) if !rest.trim().is_empty() => {
            let tokens = crate::text::tokenize(first).len();
            is_heading_text(first, tokens)
        }
        _ => false,
    }
}

/// TF-IDF base score plus standard-deviation-scaled feature boosts:
/// `score_i = base_i + sigma_base * (w_date*d_i + w_entity*e_i + w_heading*h_i)`
/// where `base_i` is the mean TF-IDF weight over the sentence's tokens and
/// `h_i` marks sentences immediately preceded by a detected heading.
pub fn casesummarizer_scores<'a>(
    doc: &'a SentenceIndex,
    model: &TfIdfModel,
    weights: &CaseSummarizerWeights,
) -> Result<ScoredSentences<'a>, ExtractError> {
    if doc.is_empty() {
        return Err(ExtractError::EmptyDocument);
    }
    let base: Vec<f64> = doc
        .sentences
        .iter()
        .map(|s| {
            let n = s.tokens.len();
            if n == 0 {
                return 0.0;
            }
            let v = vectorize(model, &s.tokens.tokens);
            v.entries().iter().map(|&(_, w)| w).sum::<f64>() / n as f64
        })
        .collect();
    let n = base.len() as f64;
    let mean = base.iter().sum::<f64>() / n;
    let var = base.iter().map(|b| (b - mean) * (b - mean)).sum::<f64>() / n;
    let sigma = var.max(0.0).sqrt();

    let scores = doc
        .sentences
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let d = date_feature(s) as f64;
            let e = entity_feature(s) as f64;
            let h = if (i > 0 && is_heading(&doc.sentences[i - 1])) || starts_with_heading_line(s) {
                1.0
            } else {
                0.0
            };
            base[i] + sigma * (weights.w_date * d + weights.w_entity * e + weights.w_heading * h)
        })
        .collect();
    ScoredSentences::new(doc, scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{fit_tfidf, split_sentences, StopwordList};

    fn fit_on(doc: &SentenceIndex) -> TfIdfModel {
        let token_docs: Vec<_> = doc.sentences.iter().map(|s| s.tokens.clone()).collect();
        fit_tfidf(&token_docs, &StopwordList::empty()).unwrap()
    }

    #[test]
    fn featureless_ranking_matches_mean_tfidf() {
        let doc = split_sentences("Alpha beta gamma. Delta epsilon. Alpha alpha beta.");
        let model = fit_on(&doc);
        let scored = casesummarizer_scores(&doc, &model, &CaseSummarizerWeights::default()).unwrap();
        let base: Vec<f64> = doc
            .sentences
            .iter()
            .map(|s| {
                let v = vectorize(&model, &s.tokens.tokens);
                v.entries().iter().map(|&(_, w)| w).sum::<f64>() / s.tokens.len() as f64
            })
            .collect();
        // no dates, no capitalized runs, no headings: identical ranking
        let mut rank_scored: Vec<usize> = (0..3).collect();
        rank_scored.sort_by(|&a, &b| scored.scores[b].partial_cmp(&scored.scores[a]).unwrap());
        let mut rank_base: Vec<usize> = (0..3).collect();
        rank_base.sort_by(|&a, &b| base[b].partial_cmp(&base[a]).unwrap());
        assert_eq!(rank_scored, rank_base);
        for (s, b) in scored.scores.iter().zip(&base) {
            assert!((s - b).abs() < 1e-12);
        }
    }

    #[test]
    fn heading_boost_is_one_and_half_sigma() {
        let doc = split_sentences("PROCEDURAL HISTORY. The appeal was allowed. The appeal was allowed.");
        assert_eq!(doc.len(), 3);
        let model = fit_on(&doc);
        let scored = casesummarizer_scores(&doc, &model, &CaseSummarizerWeights::default()).unwrap();
        // sentences 1 and 2 are identical; 1 follows the all-caps heading
        let base: Vec<f64> = doc
            .sentences
            .iter()
            .map(|s| {
                let v = vectorize(&model, &s.tokens.tokens);
                v.entries().iter().map(|&(_, w)| w).sum::<f64>() / s.tokens.len() as f64
            })
            .collect();
        let n = base.len() as f64;
        let mean = base.iter().sum::<f64>() / n;
        let sigma = (base.iter().map(|b| (b - mean) * (b - mean)).sum::<f64>() / n).sqrt();
        assert!(sigma > 0.0);
        let diff = scored.scores[1] - scored.scores[2];
        assert!((diff - 1.5 * sigma).abs() < 1e-12, "diff {diff} sigma {sigma}");
    }

    #[test]
    fn dated_sentence_exceeds_base_by_fifth_sigma() {
        let doc = split_sentences("the order issued in 1961 today. Plain words without any dates. Other text entirely differs.");
        let model = fit_on(&doc);
        let weights = CaseSummarizerWeights::default();
        let scored = casesummarizer_scores(&doc, &model, &weights).unwrap();
        let base: Vec<f64> = doc
            .sentences
            .iter()
            .map(|s| {
                let v = vectorize(&model, &s.tokens.tokens);
                v.entries().iter().map(|&(_, w)| w).sum::<f64>() / s.tokens.len() as f64
            })
            .collect();
        let n = base.len() as f64;
        let mean = base.iter().sum::<f64>() / n;
        let sigma = (base.iter().map(|b| (b - mean) * (b - mean)).sum::<f64>() / n).sqrt();
        assert!((scored.scores[0] - base[0] - 0.2 * sigma).abs() < 1e-12);
        assert!((scored.scores[1] - base[1]).abs() < 1e-12);
    }

    #[test]
    fn entity_spans_counted_in_original_casing() {
        let doc = split_sentences("The Board of Veterans Appeals heard Mr Smith today.");
        let s = &doc.sentences[0];
        // runs: [The Board] (of breaks), [Veterans Appeals], [Mr Smith] -> 3
        assert_eq!(entity_feature(s), 3);
    }

    #[test]
    fn date_tokens_detected() {
        let doc = split_sentences("Decided on 4 May 1961 and again in 1987.");
        let s = &doc.sentences[0];
        // "may" adjacent to day 4, years 1961 and 1987
        assert_eq!(date_feature(s), 3);
    }
}
