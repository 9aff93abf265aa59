//! Smooth-IDF TF-IDF model and sparse vector arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{StopwordList, TextError, TokenSeq};
use crate::par;

/// IDF weighting variant. Only the smoothed form is defined:
/// `idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1`, which never goes to zero
/// or negative on tiny corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IdfMode {
    #[default]
    Smooth,
}

/// A fitted vocabulary with document frequencies.
///
/// Maps are ordered so that serialization is byte-stable and column indices
/// are dense in `[0, |V|)` following lexicographic term order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfIdfModel {
    vocabulary: BTreeMap<String, u32>,
    doc_freq: BTreeMap<String, u32>,
    n_docs: usize,
    idf_mode: IdfMode,
    stopwords: BTreeSet<String>,
}

impl TfIdfModel {
    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn index_of(&self, term: &str) -> Option<u32> {
        self.vocabulary.get(term).copied()
    }

    pub fn doc_freq_of(&self, term: &str) -> Option<u32> {
        self.doc_freq.get(term).copied()
    }

    /// Smoothed inverse document frequency of a vocabulary term.
    pub fn idf(&self, term: &str) -> Option<f64> {
        let df = *self.doc_freq.get(term)? as f64;
        Some(((1.0 + self.n_docs as f64) / (1.0 + df)).ln() + 1.0)
    }

    pub fn is_stopword(&self, term: &str) -> bool {
        self.stopwords.contains(term)
    }

    pub fn stopword_list(&self) -> StopwordList {
        StopwordList::from_terms(self.stopwords.iter().cloned())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(raw: &str) -> serde_json::Result<TfIdfModel> {
        serde_json::from_str(raw)
    }
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVec {
    entries: Vec<(u32, f64)>,
}

impl SparseVec {
    /// Builds from index/weight pairs; sorts, merges duplicates, drops zeros
    /// and non-finite weights.
    pub fn from_entries(mut entries: Vec<(u32, f64)>) -> SparseVec {
        entries.retain(|&(_, w)| w != 0.0 && w.is_finite());
        entries.sort_by_key(|&(i, _)| i);
        let mut merged: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (i, w) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += w,
                _ => merged.push((i, w)),
            }
        }
        merged.retain(|&(_, w)| w != 0.0);
        SparseVec { entries: merged }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn dot(&self, other: &SparseVec) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0;
        while i < self.entries.len() && j < other.entries.len() {
            let (ia, wa) = self.entries[i];
            let (ib, wb) = other.entries[j];
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += wa * wb;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
    }

    /// Scales every weight by `factor`.
    pub fn scaled(&self, factor: f64) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().map(|&(i, w)| (i, w * factor)).collect())
    }

    /// Returns the vector scaled to unit L2 norm; the zero vector stays zero.
    pub fn normalized(&self) -> SparseVec {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scaled(1.0 / n)
        }
    }

    /// Element-wise sum of many vectors.
    pub fn sum<'a, I: IntoIterator<Item = &'a SparseVec>>(vecs: I) -> SparseVec {
        let mut all: Vec<(u32, f64)> = Vec::new();
        for v in vecs {
            all.extend_from_slice(&v.entries);
        }
        SparseVec::from_entries(all)
    }
}

/// Cosine similarity of two nonnegative sparse vectors, clamped to `[0, 1]`.
/// Returns 0 when either norm is zero.
pub fn cosine(u: &SparseVec, v: &SparseVec) -> f64 {
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    (u.dot(v) / (nu * nv)).clamp(0.0, 1.0)
}

/// Fits a smooth-IDF model over tokenized documents.
///
/// The vocabulary is every non-stopword term; document-frequency counting
/// may fan out across documents, with a content-based merge so the result
/// is independent of scheduling.
pub fn fit_tfidf(docs: &[TokenSeq], stopwords: &StopwordList) -> Result<TfIdfModel, TextError> {
    if docs.is_empty() {
        return Err(TextError::EmptyCorpus);
    }
    let partials = par::map_ordered(docs, |doc| {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for t in &doc.tokens {
            if !stopwords.contains(t) {
                seen.insert(t.clone());
            }
        }
        seen
    });
    let mut doc_freq: BTreeMap<String, u32> = BTreeMap::new();
    for seen in partials {
        for t in seen {
            *doc_freq.entry(t).or_insert(0) += 1;
        }
    }
    let vocabulary = doc_freq
        .keys()
        .enumerate()
        .map(|(i, t)| (t.clone(), i as u32))
        .collect();
    Ok(TfIdfModel {
        vocabulary,
        doc_freq,
        n_docs: docs.len(),
        idf_mode: IdfMode::Smooth,
        stopwords: stopwords.terms().clone(),
    })
}

/// Raw-count x IDF weights for `tokens`; out-of-vocabulary terms are dropped.
pub fn vectorize(model: &TfIdfModel, tokens: &[String]) -> SparseVec {
    let mut counts: BTreeMap<&str, f64> = BTreeMap::new();
    for t in tokens {
        if model.vocabulary.contains_key(t.as_str()) {
            *counts.entry(t.as_str()).or_insert(0.0) += 1.0;
        }
    }
    // Indices were assigned in lexicographic term order, so iterating the
    // term-keyed map yields strictly increasing indices.
    let entries = counts
        .into_iter()
        .map(|(term, c)| {
            (
                model.vocabulary[term],
                c * model.idf(term).expect("vocab term has idf"),
            )
        })
        .collect();
    SparseVec { entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(tokens: &[&str]) -> TokenSeq {
        TokenSeq::from_tokens(tokens.iter().copied())
    }

    #[test]
    fn smooth_idf_hand_values() {
        // docs=[[a,b],[a,c]]: idf(a)=ln(3/3)+1=1, idf(b)=ln(3/2)+1
        let model = fit_tfidf(&[seq(&["a", "b"]), seq(&["a", "c"])], &StopwordList::empty()).unwrap();
        assert!((model.idf("a").unwrap() - 1.0).abs() < 1e-12);
        assert!((model.idf("b").unwrap() - 1.405_465_108_108_164_4).abs() < 1e-9);
        assert_eq!(model.n_docs(), 2);
        assert_eq!(model.vocab_size(), 3);
    }

    #[test]
    fn single_doc_idf_is_one() {
        let model = fit_tfidf(&[seq(&["a"])], &StopwordList::empty()).unwrap();
        assert!((model.idf("a").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(
            fit_tfidf(&[], &StopwordList::empty()),
            Err(TextError::EmptyCorpus)
        ));
    }

    #[test]
    fn vectorize_hand_value() {
        let model = fit_tfidf(&[seq(&["a", "b"]), seq(&["a", "c"])], &StopwordList::empty()).unwrap();
        let v = vectorize(&model, &["b".to_string(), "b".to_string()]);
        assert_eq!(v.nnz(), 1);
        let (_, w) = v.entries()[0];
        assert!((w - 2.810_930_216_216_328_8).abs() < 1e-9, "got {w}");
    }

    #[test]
    fn vectorize_oov_and_empty() {
        let model = fit_tfidf(&[seq(&["a"])], &StopwordList::empty()).unwrap();
        assert!(vectorize(&model, &["z".to_string()]).is_empty());
        assert!(vectorize(&model, &[]).is_empty());
    }

    #[test]
    fn vectorize_depends_only_on_multiset() {
        let model = fit_tfidf(&[seq(&["a", "b", "c"])], &StopwordList::empty()).unwrap();
        let u = vectorize(&model, &["a".into(), "b".into(), "a".into()]);
        let v = vectorize(&model, &["b".into(), "a".into(), "a".into()]);
        assert_eq!(u, v);
    }

    #[test]
    fn cosine_hand_values() {
        let u = SparseVec::from_entries(vec![(0, 1.0), (1, 1.0)]);
        let v = SparseVec::from_entries(vec![(0, 1.0)]);
        assert!((cosine(&u, &v) - 1.0 / 2.0_f64.sqrt()).abs() < 1e-12);

        let w = SparseVec::from_entries(vec![(2, 3.0)]);
        assert_eq!(cosine(&u, &w), 0.0);
        assert!((cosine(&u, &u) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&u, &SparseVec::default()), 0.0);
    }

    #[test]
    fn model_json_roundtrip_is_stable() {
        let model = fit_tfidf(
            &[seq(&["appeal", "court"]), seq(&["court", "statute"])],
            StopwordList::default_english(),
        )
        .unwrap();
        let json = model.to_json();
        let back = TfIdfModel::from_json(&json).unwrap();
        assert_eq!(model, back);
        assert_eq!(json, back.to_json());
    }
}
