//! Similarity-graph scorers: LexRank's damped random walk and Reduction's
//! plain edge-weight sum.

use super::{ExtractError, ScoredSentences};
use crate::text::{cosine, vectorize, SentenceIndex, SparseVec, TfIdfModel};

pub(crate) fn sentence_vectors(doc: &SentenceIndex, model: &TfIdfModel) -> Vec<SparseVec> {
    doc.sentences
        .iter()
        .map(|s| vectorize(model, &s.tokens.tokens))
        .collect()
}

pub(crate) fn cosine_matrix(vecs: &[SparseVec]) -> Vec<Vec<f64>> {
    let n = vecs.len();
    let mut sim = vec![vec![0.0; n]; n];
    for i in 0..n {
        sim[i][i] = cosine(&vecs[i], &vecs[i]);
        for j in i + 1..n {
            let c = cosine(&vecs[i], &vecs[j]);
            sim[i][j] = c;
            sim[j][i] = c;
        }
    }
    sim
}

/// Damped power iteration over a thresholded, row-normalized similarity
/// graph. Exposed at crate level so tests can drive it with hand-built
/// matrices.
pub(crate) fn lexrank_power(
    sim: &[Vec<f64>],
    threshold: f64,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Vec<f64> {
    let n = sim.len();
    if n == 0 {
        return Vec::new();
    }
    // threshold, then row-normalize; isolated rows become uniform
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            let w = if sim[i][j] < threshold { 0.0 } else { sim[i][j] };
            m[i][j] = w;
            row_sum += w;
        }
        if row_sum > 0.0 {
            for w in &mut m[i] {
                *w /= row_sum;
            }
        } else {
            for w in &mut m[i] {
                *w = 1.0 / n as f64;
            }
        }
    }

    let teleport = (1.0 - damping) / n as f64;
    let mut p = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        for slot in next.iter_mut() {
            *slot = teleport;
        }
        for i in 0..n {
            let pi = p[i];
            if pi == 0.0 {
                continue;
            }
            for j in 0..n {
                next[j] += damping * m[i][j] * pi;
            }
        }
        let l1: f64 = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut p, &mut next);
        if l1 < tol {
            break;
        }
    }
    p
}

/// Graph-based salience: stationary distribution of a damped random walk
/// over the thresholded cosine-similarity graph of TF-IDF sentence vectors.
/// Scores sum to one.
pub fn lexrank_scores<'a>(
    doc: &'a SentenceIndex,
    model: &TfIdfModel,
    threshold: f64,
    damping: f64,
) -> Result<ScoredSentences<'a>, ExtractError> {
    if doc.is_empty() {
        return Err(ExtractError::EmptyDocument);
    }
    let vecs = sentence_vectors(doc, model);
    let sim = cosine_matrix(&vecs);
    let scores = lexrank_power(&sim, threshold, damping, 1e-6, 100);
    ScoredSentences::new(doc, scores)
}

pub(crate) fn edge_sum_scores(sim: &[Vec<f64>]) -> Vec<f64> {
    let n = sim.len();
    (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| sim[i][j]).sum())
        .collect()
}

/// Sum of cosine similarities to every other sentence (no random walk).
pub fn reduction_scores<'a>(
    doc: &'a SentenceIndex,
    model: &TfIdfModel,
) -> Result<ScoredSentences<'a>, ExtractError> {
    if doc.is_empty() {
        return Err(ExtractError::EmptyDocument);
    }
    let vecs = sentence_vectors(doc, model);
    let sim = cosine_matrix(&vecs);
    ScoredSentences::new(doc, edge_sum_scores(&sim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{fit_tfidf, split_sentences, tokenize, StopwordList};

    fn fit_on(doc: &SentenceIndex) -> TfIdfModel {
        let token_docs: Vec<_> = doc.sentences.iter().map(|s| s.tokens.clone()).collect();
        fit_tfidf(&token_docs, &StopwordList::empty()).unwrap()
    }

    #[test]
    fn lexrank_uniform_on_identical_sentences() {
        let doc = split_sentences("The cat sat here. The cat sat here. The cat sat here.");
        assert_eq!(doc.len(), 3);
        let model = fit_on(&doc);
        let scored = lexrank_scores(&doc, &model, 0.1, 0.85).unwrap();
        for s in &scored.scores {
            assert!((s - 1.0 / 3.0).abs() < 1e-9, "got {s}");
        }
    }

    #[test]
    fn lexrank_single_sentence_scores_one() {
        let doc = split_sentences("Just one sentence.");
        let model = fit_on(&doc);
        let scored = lexrank_scores(&doc, &model, 0.1, 0.85).unwrap();
        assert!((scored.scores[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lexrank_sums_to_one() {
        let doc = split_sentences(
            "The court allowed the appeal. The appellant argued severance. Costs were reserved entirely. The court considered the statute.",
        );
        let model = fit_on(&doc);
        let scored = lexrank_scores(&doc, &model, 0.1, 0.85).unwrap();
        let sum: f64 = scored.scores.iter().sum();
        assert!((sum - 1.0).abs() < 1e-6, "sum {sum}");
    }

    /// Dense stationary-distribution oracle: solves
    /// `(I - d M^T) p = ((1-d)/N) 1` by Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    fn stationary_oracle(sim: &[Vec<f64>], threshold: f64, damping: f64) -> Vec<f64> {
        let n = sim.len();
        // same thresholding/normalization as the implementation under test,
        // but a direct linear solve instead of power iteration
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                let w = if sim[i][j] < threshold { 0.0 } else { sim[i][j] };
                m[i][j] = w;
                row_sum += w;
            }
            if row_sum > 0.0 {
                for w in &mut m[i] {
                    *w /= row_sum;
                }
            } else {
                for w in &mut m[i] {
                    *w = 1.0 / n as f64;
                }
            }
        }
        // A = I - d*M^T, b = (1-d)/n
        let mut a = vec![vec![0.0; n]; n];
        let mut b = vec![(1.0 - damping) / n as f64; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = if i == j { 1.0 } else { 0.0 } - damping * m[j][i];
            }
        }
        // Gaussian elimination with partial pivoting
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
                .unwrap();
            a.swap(col, pivot);
            b.swap(col, pivot);
            for row in col + 1..n {
                let factor = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
        let mut p = vec![0.0; n];
        for row in (0..n).rev() {
            let mut acc = b[row];
            for k in row + 1..n {
                acc -= a[row][k] * p[k];
            }
            p[row] = acc / a[row][row];
        }
        p
    }

    #[test]
    fn lexrank_matches_dense_solve_on_hand_matrix() {
        let sim = vec![
            vec![1.0, 0.6, 0.05],
            vec![0.6, 1.0, 0.3],
            vec![0.05, 0.3, 1.0],
        ];
        let power = lexrank_power(&sim, 0.1, 0.85, 1e-12, 10_000);
        let oracle = stationary_oracle(&sim, 0.1, 0.85);
        for (a, b) in power.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-5, "power {a} vs oracle {b}");
        }
    }

    #[test]
    fn reduction_single_and_identical() {
        let one = split_sentences("Only sentence.");
        let model = fit_on(&one);
        let scored = reduction_scores(&one, &model).unwrap();
        assert_eq!(scored.scores, vec![0.0]);

        let two = split_sentences("Same words here. Same words here.");
        let model = fit_on(&two);
        let scored = reduction_scores(&two, &model).unwrap();
        assert!((scored.scores[0] - 1.0).abs() < 1e-12);
        assert!((scored.scores[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduction_known_pairwise_cosines() {
        // s01=0.5, s02=0.2, s12=0.1 -> scores [0.7, 0.6, 0.3]
        let sim = vec![
            vec![1.0, 0.5, 0.2],
            vec![0.5, 1.0, 0.1],
            vec![0.2, 0.1, 1.0],
        ];
        let scores = edge_sum_scores(&sim);
        assert!((scores[0] - 0.7).abs() < 1e-12);
        assert!((scores[1] - 0.6).abs() < 1e-12);
        assert!((scores[2] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn reduction_hand_sum() {
        // partially-overlapping sentences: each score must equal the sum of
        // its off-diagonal cosine row
        let doc = split_sentences("Alpha beta. Alpha gamma. Beta delta.");
        let model = fit_on(&doc);
        let vecs = sentence_vectors(&doc, &model);
        let sim = cosine_matrix(&vecs);
        let scored = reduction_scores(&doc, &model).unwrap();
        for (i, score) in scored.scores.iter().enumerate() {
            let expect: f64 = (0..3).filter(|&j| j != i).map(|j| sim[i][j]).sum();
            assert!((score - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn reduction_order_equivariance() {
        let text_a = "The cat sat on the mat. Dogs bark at night. The cat purred loudly.";
        let text_b = "Dogs bark at night. The cat purred loudly. The cat sat on the mat.";
        let doc_a = split_sentences(text_a);
        let doc_b = split_sentences(text_b);
        let all_tokens = vec![tokenize(text_a)];
        let model = fit_tfidf(&all_tokens, &StopwordList::empty()).unwrap();
        let a = reduction_scores(&doc_a, &model).unwrap().scores;
        let b = reduction_scores(&doc_b, &model).unwrap().scores;
        // permutation (0,1,2) -> (2,0,1)
        assert!((a[0] - b[2]).abs() < 1e-12);
        assert!((a[1] - b[0]).abs() < 1e-12);
        assert!((a[2] - b[1]).abs() < 1e-12);
    }
}
