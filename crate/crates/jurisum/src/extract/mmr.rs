//! Maximal marginal relevance: greedy selection trading centroid relevance
//! against redundancy with already-selected sentences.

use super::graph::{cosine_matrix, sentence_vectors};
use super::{assemble_summary, Budget, ExtractError, ExtractiveSummary};
use crate::text::{cosine, SentenceIndex, SparseVec, TfIdfModel};

/// Iteratively picks `argmax_i [ lambda*rel(i) - (1-lambda)*max_{j in S} sim(i,j) ]`
/// until the word budget is reached (the crossing sentence is kept), where
/// `rel(i)` is the cosine of sentence `i` to the centroid of all sentence
/// vectors. Ties go to the earlier sentence; output is in document order.
pub fn mmr_summary(
    doc: &SentenceIndex,
    model: &TfIdfModel,
    budget: &Budget,
    lambda: f64,
) -> Result<ExtractiveSummary, ExtractError> {
    if doc.is_empty() {
        return Err(ExtractError::EmptyDocument);
    }
    if !(0.0..=1.0).contains(&lambda) || lambda.is_nan() {
        return Err(ExtractError::InvalidLambda(lambda));
    }
    let vecs = sentence_vectors(doc, model);
    let n = vecs.len();
    let centroid = SparseVec::sum(vecs.iter()).scaled(1.0 / n as f64);
    let relevance: Vec<f64> = vecs.iter().map(|v| cosine(v, &centroid)).collect();
    let sim = cosine_matrix(&vecs);

    let mut selected: Vec<usize> = Vec::new();
    let mut picked = vec![false; n];
    let mut total = 0usize;
    while total < budget.max_words() && selected.len() < n {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if picked[i] {
                continue;
            }
            let redundancy = selected
                .iter()
                .map(|&j| sim[i][j])
                .fold(0.0f64, f64::max);
            let score = lambda * relevance[i] - (1.0 - lambda) * redundancy;
            let better = match best {
                None => true,
                Some((_, b)) => score > b,
            };
            if better {
                best = Some((i, score));
            }
        }
        let (idx, _) = best.expect("unselected sentence exists");
        picked[idx] = true;
        selected.push(idx);
        total += doc.sentences[idx].tokens.len();
    }
    Ok(assemble_summary(doc, selected))
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
    fn single_sentence_selected() {
        let doc = split_sentences("Just one sentence here.");
        let model = fit_on(&doc);
        let s = mmr_summary(&doc, &model, &Budget::new(2).unwrap(), 0.6).unwrap();
        assert_eq!(s.indices, vec![0]);
    }

    #[test]
    fn lambda_one_equals_relevance_ranking() {
        let doc = split_sentences(
            "The court heard the appeal today. The appeal concerned a property lease. \
             Unrelated weather filler sentence rains. The lease terms bound the court.",
        );
        let model = fit_on(&doc);
        let budget = Budget::new(12).unwrap();
        let s = mmr_summary(&doc, &model, &budget, 1.0).unwrap();

        // oracle: pure relevance-to-centroid top selection with the same
        // budget walk
        let vecs = super::sentence_vectors(&doc, &model);
        let centroid = SparseVec::sum(vecs.iter()).scaled(1.0 / vecs.len() as f64);
        let rel: Vec<f64> = vecs.iter().map(|v| cosine(v, &centroid)).collect();
        let mut order: Vec<usize> = (0..doc.len()).collect();
        order.sort_by(|&a, &b| rel[b].partial_cmp(&rel[a]).unwrap().then(a.cmp(&b)));
        let mut expect = Vec::new();
        let mut total = 0;
        for i in order {
            if total >= budget.max_words() {
                break;
            }
            expect.push(i);
            total += doc.sentences[i].tokens.len();
        }
        expect.sort_unstable();
        assert_eq!(s.indices, expect);
    }

    #[test]
    fn duplicate_of_top_sentence_skipped_for_diverse_third() {
        // s0 and s1 are identical (cosine 1); s2 shares the dominant theme
        // loosely. After picking s0, MMR must pick s2, not the duplicate s1.
        let doc = split_sentences(
            "The statute governs the lease entirely. The statute governs the lease entirely. \
             The statute also mentions damages briefly.",
        );
        let model = fit_on(&doc);
        let s = mmr_summary(&doc, &model, &Budget::new(12).unwrap(), 0.6).unwrap();
        assert_eq!(s.indices, vec![0, 2]);
    }

    #[test]
    fn rejects_bad_lambda() {
        let doc = split_sentences("One sentence.");
        let model = fit_on(&doc);
        assert!(matches!(
            mmr_summary(&doc, &model, &Budget::new(5).unwrap(), 1.5),
            Err(ExtractError::InvalidLambda(_))
        ));
    }

    #[test]
    fn budget_overflow_semantics() {
        let doc = split_sentences("Alpha beta gamma delta epsilon. Zeta eta theta.");
        let model = fit_on(&doc);
        let s = mmr_summary(&doc, &model, &Budget::new(1).unwrap(), 0.6).unwrap();
        assert_eq!(s.indices.len(), 1, "first crossing sentence kept, then stop");
    }
}
