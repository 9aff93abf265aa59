//! LetSum-style thematic summarization: partition sentences into four
//! themes by cue phrases, then spend a fixed share of the word budget on
//! each theme.

use serde::{Deserialize, Serialize};

use super::{assemble_summary, Budget, ExtractError, ExtractiveSummary};
use crate::text::{fit_tfidf, vectorize, SentenceIndex, StopwordList};

/// Thematic role of a sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theme {
    Introduction,
    Context,
    Analysis,
    Conclusion,
}

impl Theme {
    pub const ORDER: [Theme; 4] = [
        Theme::Introduction,
        Theme::Context,
        Theme::Analysis,
        Theme::Conclusion,
    ];

    /// Budget share of each theme, in [`Theme::ORDER`] order.
    pub const BUDGET_SHARE: [f64; 4] = [0.10, 0.25, 0.60, 0.05];
}

/// Cue phrase lists per theme; matched as lowercase substrings.
/// The shipped list is a versioned default and fully configurable.
#[derive(Debug, Clone)]
pub struct LetSumConfig {
    pub introduction_cues: Vec<String>,
    pub context_cues: Vec<String>,
    pub analysis_cues: Vec<String>,
    pub conclusion_cues: Vec<String>,
    pub stopwords: StopwordList,
}

impl Default for LetSumConfig {
    fn default() -> Self {
        fn cues(list: &[&str]) -> Vec<String> {
            list.iter().map(|s| s.to_string()).collect()
        }
        LetSumConfig {
            introduction_cues: cues(&[
                "this appeal",
                "this petition",
                "this case",
                "the appellant",
                "the petitioner",
                "introduction",
                "brought before",
                "arises from",
            ]),
            context_cues: cues(&[
                "the facts",
                "background",
                "evidence",
                "witness",
                "alleged",
                "charged with",
                "the trial",
                "contended",
                "testified",
            ]),
            analysis_cues: cues(&[
                "held that",
                "we consider",
                "the question",
                "whether",
                "submitted that",
                "argued that",
                "in our opinion",
                "the section",
                "provides that",
                "reasoning",
            ]),
            conclusion_cues: cues(&[
                "we conclude",
                "in conclusion",
                "appeal is dismissed",
                "appeal is allowed",
                "set aside",
                "disposed of",
                "accordingly",
                "for these reasons",
                "order of the",
            ]),
            stopwords: StopwordList::default_english().clone(),
        }
    }
}

impl LetSumConfig {
    fn cue_lists(&self) -> [&[String]; 4] {
        [
            &self.introduction_cues,
            &self.context_cues,
            &self.analysis_cues,
            &self.conclusion_cues,
        ]
    }
}

fn assign_theme(text_lower: &str, position: usize, total: usize, config: &LetSumConfig) -> Theme {
    let lists = config.cue_lists();
    let mut best: Option<(usize, usize)> = None; // (matches, theme index)
    for (ti, cues) in lists.iter().enumerate() {
        let matches = cues.iter().filter(|c| text_lower.contains(c.as_str())).count();
        if matches > 0 && best.map(|(m, _)| matches > m).unwrap_or(true) {
            best = Some((matches, ti));
        }
    }
    if let Some((_, ti)) = best {
        return Theme::ORDER[ti];
    }
    // unmatched sentences fall back to their position quartile
    let quartile = (position * 4 / total.max(1)).min(3);
    Theme::ORDER[quartile]
}

/// Partitions sentences into Introduction/Context/Analysis/Conclusion by
/// cue-phrase matching (unmatched sentences fall back to their position
/// quartile), allocates the word budget 10/25/60/5 percent across the
/// themes, and selects within each theme by mean TF-IDF descending.
///
/// A theme's unused allocation rolls forward to the next theme in order.
/// Each non-empty theme keeps its first allocation-crossing sentence, so
/// the output can overflow per theme (never more than one sentence per
/// theme beyond its share). Documents that fit the budget entirely are
/// returned whole. Sentence ranking uses a TF-IDF model fitted over the
/// document's own sentences, so the method needs no corpus-level model.
pub fn letsum_summary(
    doc: &SentenceIndex,
    budget: &Budget,
    config: &LetSumConfig,
) -> Result<ExtractiveSummary, ExtractError> {
    if doc.is_empty() {
        return Err(ExtractError::EmptyDocument);
    }
    if doc.total_tokens() <= budget.max_words() {
        return Ok(assemble_summary(doc, (0..doc.len()).collect()));
    }

    let token_docs: Vec<_> = doc.sentences.iter().map(|s| s.tokens.clone()).collect();
    let model = fit_tfidf(&token_docs, &config.stopwords).expect("non-empty document");
    let mean_tfidf: Vec<f64> = doc
        .sentences
        .iter()
        .map(|s| {
            let n = s.tokens.len();
            if n == 0 {
                return 0.0;
            }
            let v = vectorize(&model, &s.tokens.tokens);
            v.entries().iter().map(|&(_, w)| w).sum::<f64>() / n as f64
        })
        .collect();

    let total = doc.len();
    let mut themed: [Vec<usize>; 4] = Default::default();
    for (i, s) in doc.sentences.iter().enumerate() {
        let theme = assign_theme(&s.text.to_lowercase(), i, total, config);
        let slot = Theme::ORDER.iter().position(|t| *t == theme).unwrap();
        themed[slot].push(i);
    }

    let mut selected: Vec<usize> = Vec::new();
    let mut carry = 0.0f64;
    for (slot, members) in themed.iter().enumerate() {
        let alloc = Theme::BUDGET_SHARE[slot] * budget.max_words() as f64 + carry;
        if members.is_empty() {
            carry = alloc;
            continue;
        }
        let mut ranked = members.clone();
        ranked.sort_by(|&a, &b| {
            mean_tfidf[b]
                .partial_cmp(&mean_tfidf[a])
                .expect("finite scores")
                .then(a.cmp(&b))
        });
        let mut used = 0.0f64;
        for idx in ranked {
            if used >= alloc {
                break;
            }
            selected.push(idx);
            used += doc.sentences[idx].tokens.len() as f64;
        }
        carry = (alloc - used).max(0.0);
    }

    Ok(assemble_summary(doc, selected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::split_sentences;

    #[test]
    fn short_document_returned_whole() {
        let doc = split_sentences("This appeal concerns a statute. The facts are short.");
        let summary = letsum_summary(&doc, &Budget::new(100).unwrap(), &LetSumConfig::default()).unwrap();
        assert_eq!(summary.indices, vec![0, 1]);
    }

    #[test]
    fn conclusion_only_document_rolls_allocations_forward() {
        // every sentence cue-matches Conclusion; Conclusion's 5% plus the
        // rolled-over 95% covers the full budget
        let text = "We conclude alpha beta gamma delta. We conclude epsilon zeta eta theta. \
                    We conclude iota kappa lambda mu. We conclude nu xi omicron pi. \
                    We conclude rho sigma tau upsilon.";
        let doc = split_sentences(text);
        assert_eq!(doc.len(), 5);
        // 5 sentences x 6 tokens = 30 tokens; budget 12 fits two sentences
        let summary = letsum_summary(&doc, &Budget::new(12).unwrap(), &LetSumConfig::default()).unwrap();
        assert_eq!(summary.indices.len(), 2, "selected {:?}", summary.indices);
    }

    #[test]
    fn allocation_hand_trace_two_per_theme() {
        // 8 sentences, two cue-matched per theme, equal 5-token lengths,
        // budget of 4 sentences (20 words): allocations 2/5/12/1 words
        // select one sentence per theme except Analysis, which fits two.
        let text = "This appeal concerns alpha beta. The facts were beta gamma. \
                    Held that delta epsilon stands. We conclude zeta eta now. \
                    This petition adds theta iota. Background shows kappa lambda fully. \
                    Whether mu nu holds matters. Accordingly xi omicron pi follows.";
        let doc = split_sentences(text);
        assert_eq!(doc.len(), 8);
        let config = LetSumConfig::default();
        let summary = letsum_summary(&doc, &Budget::new(20).unwrap(), &config).unwrap();
        // themes: intro {0,4}, context {1,5}, analysis {2,6}, conclusion {3,7}
        let count = |ids: &[usize]| {
            summary
                .indices
                .iter()
                .filter(|i| ids.contains(i))
                .count()
        };
        assert_eq!(count(&[0, 4]), 1, "introduction picks one");
        assert_eq!(count(&[1, 5]), 1, "context picks one");
        assert_eq!(count(&[2, 6]), 2, "analysis picks two");
        assert_eq!(count(&[3, 7]), 1, "conclusion picks one");
    }

    #[test]
    fn unmatched_sentences_fall_to_position_quartile() {
        let text = "Alpha beta gamma delta word. Epsilon zeta eta theta word. \
                    Iota kappa lambda mu word. Nu xi omicron pi word.";
        let doc = split_sentences(text);
        assert_eq!(doc.len(), 4);
        let config = LetSumConfig::default();
        // no cues match; quartiles put one sentence per theme; a budget of
        // one sentence's tokens still yields at least one per theme with
        // at most one overflow each
        let summary = letsum_summary(&doc, &Budget::new(10).unwrap(), &config).unwrap();
        assert!(!summary.indices.is_empty());
        // indices strictly increasing
        assert!(summary.indices.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn output_in_document_order() {
        let text = "We conclude the appeal fails. This appeal concerns property law. \
                    The facts involve a lease signed long ago by both parties. \
                    Held that the lease controls entirely over later conduct.";
        let doc = split_sentences(text);
        let summary = letsum_summary(&doc, &Budget::new(15).unwrap(), &LetSumConfig::default()).unwrap();
        assert!(summary.indices.windows(2).all(|w| w[0] < w[1]));
    }
}
