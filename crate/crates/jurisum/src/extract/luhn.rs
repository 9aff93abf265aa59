//! Luhn significant-word cluster scoring.

use std::collections::{HashMap, HashSet};

use super::{ExtractError, ScoredSentences};
use crate::text::{SentenceIndex, StopwordList};

/// Scores each sentence by its densest cluster of significant words.
///
/// Significant words are the non-stopword terms in the top
/// `sig_top_fraction` of the document's term-frequency ranking (at least
/// one term; ties break lexicographically). Within a sentence, a cluster
/// is a maximal run of significant tokens separated by at most `max_gap`
/// non-significant tokens; its score is
/// `significant_count^2 / cluster_token_length`, and the sentence takes
/// its best cluster. Sentences without significant words score zero.
pub fn luhn_scores<'a>(
    doc: &'a SentenceIndex,
    stopwords: &StopwordList,
    sig_top_fraction: f64,
    max_gap: usize,
) -> Result<ScoredSentences<'a>, ExtractError> {
    if doc.is_empty() {
        return Err(ExtractError::EmptyDocument);
    }
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for sentence in &doc.sentences {
        for t in &sentence.tokens.tokens {
            if !stopwords.contains(t) {
                *freq.entry(t.as_str()).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, usize)> = freq.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let n_sig = ((sig_top_fraction * ranked.len() as f64).ceil() as usize).max(1);
    let significant: HashSet<&str> = ranked.iter().take(n_sig).map(|&(t, _)| t).collect();

    let scores = doc
        .sentences
        .iter()
        .map(|sentence| {
            let positions: Vec<usize> = sentence
                .tokens
                .tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| significant.contains(t.as_str()))
                .map(|(i, _)| i)
                .collect();
            if positions.is_empty() {
                return 0.0;
            }
            let mut best = 0.0f64;
            let mut cluster_start = positions[0];
            let mut cluster_count = 1usize;
            let mut prev = positions[0];
            for &p in &positions[1..] {
                if p - prev - 1 > max_gap {
                    let len = prev - cluster_start + 1;
                    best = best.max((cluster_count * cluster_count) as f64 / len as f64);
                    cluster_start = p;
                    cluster_count = 1;
                } else {
                    cluster_count += 1;
                }
                prev = p;
            }
            let len = prev - cluster_start + 1;
            best.max((cluster_count * cluster_count) as f64 / len as f64)
        })
        .collect();
    ScoredSentences::new(doc, scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::split_sentences;

    #[test]
    fn stopword_only_sentence_scores_zero() {
        let doc = split_sentences("The of and but. Statute statute statute.");
        let scored = luhn_scores(&doc, StopwordList::default_english(), 0.5, 4).unwrap();
        assert_eq!(scored.scores[0], 0.0);
        assert!(scored.scores[1] > 0.0);
    }

    #[test]
    fn repeated_significant_word_scores_length() {
        // a sentence of one significant word repeated L times scores L^2/L = L
        let doc = split_sentences("statute statute statute statute");
        let scored = luhn_scores(&doc, &StopwordList::empty(), 1.0, 4).unwrap();
        assert!((scored.scores[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cluster_hand_trace() {
        // significant = {appeal, court, statute}; the first sentence has a
        // cluster of 3 significant words spanning 5 tokens -> 9/5 = 1.8
        let doc = split_sentences(
            "Statute court of the appeal. Statute again. Court again. Appeal again. Filler words only here.",
        );
        assert_eq!(doc.len(), 5);
        let stop = StopwordList::from_terms(["of", "the", "again", "filler", "words", "only", "here"]);
        let scored = luhn_scores(&doc, &stop, 1.0, 4).unwrap();
        assert!((scored.scores[0] - 9.0 / 5.0).abs() < 1e-12, "got {}", scored.scores[0]);
    }

    #[test]
    fn gap_splits_clusters() {
        // two significant words separated by 5 insignificant ones with
        // max_gap 4: two singleton clusters, best score 1.0
        let doc = split_sentences("key f1 f2 f3 f4 f5 key");
        let stop = StopwordList::from_terms(["f1", "f2", "f3", "f4", "f5"]);
        let scored = luhn_scores(&doc, &stop, 1.0, 4).unwrap();
        assert!((scored.scores[0] - 1.0).abs() < 1e-12);
        // with a larger gap allowance they merge: 2^2 / 7
        let scored = luhn_scores(&doc, &stop, 1.0, 5).unwrap();
        assert!((scored.scores[0] - 4.0 / 7.0).abs() < 1e-12);
    }
}
