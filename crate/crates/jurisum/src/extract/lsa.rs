//! Latent-semantic-analysis scoring via SVD of the term-by-sentence matrix.

use nalgebra::DMatrix;

use super::graph::sentence_vectors;
use super::{ExtractError, ScoredSentences};
use crate::text::{SentenceIndex, TfIdfModel};

/// Scores sentence `j` as `sqrt(sum_i (sigma_i * V[j,i])^2)` over the `k`
/// leading singular triplets, where `k` counts the singular values at least
/// `rank_fraction * sigma_max` (always at least one).
///
/// Rows of the term-by-sentence matrix that are zero everywhere are omitted
/// before the decomposition; this changes neither the singular values nor
/// the right singular vectors.
pub fn lsa_scores<'a>(
    doc: &'a SentenceIndex,
    model: &TfIdfModel,
    rank_fraction: f64,
) -> Result<ScoredSentences<'a>, ExtractError> {
    if doc.is_empty() {
        return Err(ExtractError::EmptyDocument);
    }
    let vecs = sentence_vectors(doc, model);
    let n = vecs.len();

    // compact row index over terms that actually occur
    let mut present: Vec<u32> = vecs
        .iter()
        .flat_map(|v| v.entries().iter().map(|&(i, _)| i))
        .collect();
    present.sort_unstable();
    present.dedup();
    if present.is_empty() {
        // every sentence vectorizes to zero
        return ScoredSentences::new(doc, vec![0.0; n]);
    }
    let row_of = |ix: u32| present.binary_search(&ix).expect("present index");

    let mut matrix = DMatrix::<f64>::zeros(present.len(), n);
    for (j, v) in vecs.iter().enumerate() {
        for &(ix, w) in v.entries() {
            matrix[(row_of(ix), j)] = w;
        }
    }

    let scores = lsa_score_matrix(&matrix, rank_fraction);
    ScoredSentences::new(doc, scores)
}

/// Dense-matrix core of [`lsa_scores`]; columns are sentences.
pub(crate) fn lsa_score_matrix(matrix: &DMatrix<f64>, rank_fraction: f64) -> Vec<f64> {
    let n = matrix.ncols();
    let svd = matrix.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut triplets: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    triplets.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let sigma_max = triplets.first().map(|t| t.0).unwrap_or(0.0);
    let cutoff = rank_fraction * sigma_max;
    let mut k = triplets.iter().take_while(|(s, _)| *s >= cutoff).count();
    k = k.max(1).min(triplets.len());

    (0..n)
        .map(|j| {
            let mut acc = 0.0;
            for &(sigma, row) in triplets.iter().take(k) {
                let v = v_t[(row, j)];
                acc += (sigma * v) * (sigma * v);
            }
            acc.sqrt()
        })
        .collect()
}
