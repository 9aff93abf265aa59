//! Synthetic two-jurisdiction corpus generator for behavioral tests and
//! benchmarks.
//!
//! Documents are built from template sentences over three vocabularies: a
//! small set of shared key terms that determine sentence salience, a shared
//! common pool, and a per-jurisdiction filler pool. A fraction of documents
//! additionally carries an explicit jurisdiction-marker token. Ground-truth
//! salience labels mark exactly the sentences containing a key term.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{CasePair, Corpus, Jurisdiction, Split};
use crate::label::SentenceLabels;

#[derive(Debug, Clone)]
pub struct SynthParams {
    /// Documents generated per jurisdiction.
    pub docs_per_jurisdiction: usize,
    /// Of which this many are held out for evaluation.
    pub heldout_per_jurisdiction: usize,
    /// Fraction of documents carrying jurisdiction-marker tokens.
    pub marker_fraction: f64,
    /// Number of shared salience-defining key terms.
    pub key_terms: usize,
    pub sentences_per_doc: (usize, usize),
    /// Key-term occurrences per salient sentence (repetition makes the
    /// shared salience signal dominate the sentence vector).
    pub key_occurrences: (usize, usize),
    /// Filler tokens per sentence on the source side.
    pub source_fillers_per_sentence: (usize, usize),
    /// Filler tokens per sentence on the target side (longer sentences
    /// dilute the key-term signal).
    pub target_fillers_per_sentence: (usize, usize),
    /// Probability that a salient sentence carries jurisdiction-specific
    /// style tokens alongside the keys (discourse markers each court uses
    /// around its holdings).
    pub style_rate: f64,
    /// Style tokens appended to a styled salient sentence.
    pub style_tokens_per_sentence: (usize, usize),
    /// Size of each jurisdiction-specific salient-style pool.
    pub style_pool: usize,
    /// Probability that a sentence is salient (carries key terms).
    pub salience_rate: f64,
    /// Size of each jurisdiction-specific filler pool.
    pub jurisdiction_pool: usize,
    /// Size of the shared common pool.
    pub common_pool: usize,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            docs_per_jurisdiction: 200,
            heldout_per_jurisdiction: 40,
            marker_fraction: 0.3,
            key_terms: 5,
            sentences_per_doc: (8, 14),
            key_occurrences: (2, 3),
            source_fillers_per_sentence: (4, 8),
            target_fillers_per_sentence: (9, 15),
            style_rate: 0.9,
            style_tokens_per_sentence: (1, 2),
            style_pool: 4,
            salience_rate: 0.35,
            jurisdiction_pool: 40,
            common_pool: 30,
            seed: 7,
        }
    }
}

/// A generated two-jurisdiction dataset with ground-truth salience labels.
#[derive(Debug, Clone)]
pub struct SynthDataset {
    pub source_train: Corpus,
    pub source_train_labels: Vec<SentenceLabels>,
    pub source_test: Corpus,
    pub source_test_labels: Vec<SentenceLabels>,
    pub target_train: Corpus,
    pub target_train_labels: Vec<SentenceLabels>,
    pub target_test: Corpus,
    pub target_test_labels: Vec<SentenceLabels>,
}

const KEY_TERMS: &[&str] = &["statute", "liability", "remedy", "verdict", "damages"];

struct JurSpec {
    name: &'static str,
    marker: &'static str,
    filler_prefix: &'static str,
    is_target: bool,
}

pub fn generate(params: &SynthParams) -> SynthDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let specs = [
        JurSpec {
            name: "SRC",
            marker: "wessexmark",
            filler_prefix: "src",
            is_target: false,
        },
        JurSpec {
            name: "TGT",
            marker: "novaramark",
            filler_prefix: "tgt",
            is_target: true,
        },
    ];

    let keys: Vec<String> = KEY_TERMS
        .iter()
        .take(params.key_terms)
        .map(|s| s.to_string())
        .collect();
    let common: Vec<String> = (0..params.common_pool).map(|i| format!("common{i:02}")).collect();

    let mut out: Vec<(Corpus, Vec<SentenceLabels>, Corpus, Vec<SentenceLabels>)> = Vec::new();
    for spec in &specs {
        let pool: Vec<String> = (0..params.jurisdiction_pool)
            .map(|i| format!("{}{i:02}", spec.filler_prefix))
            .collect();
        let style: Vec<String> = (0..params.style_pool)
            .map(|i| format!("{}sty{i:02}", spec.filler_prefix))
            .collect();
        let filler_range = if spec.is_target {
            params.target_fillers_per_sentence
        } else {
            params.source_fillers_per_sentence
        };

        let mut pairs = Vec::new();
        let mut labels = Vec::new();
        for d in 0..params.docs_per_jurisdiction {
            let has_marker = rng.random_range(0.0..1.0) < params.marker_fraction;
            let n_sentences = rng.random_range(params.sentences_per_doc.0..=params.sentences_per_doc.1);
            let mut sentences = Vec::with_capacity(n_sentences);
            let mut doc_labels = Vec::with_capacity(n_sentences);
            let mut any_salient = false;
            for s in 0..n_sentences {
                // force at least one salient sentence per document
                let salient = rng.random_range(0.0..1.0) < params.salience_rate
                    || (s + 1 == n_sentences && !any_salient);
                any_salient |= salient;
                let mut words: Vec<String> = Vec::new();
                if salient {
                    let k = rng.random_range(params.key_occurrences.0..=params.key_occurrences.1);
                    for _ in 0..k {
                        words.push(keys[rng.random_range(0..keys.len())].clone());
                    }
                    if !style.is_empty() && rng.random_range(0.0..1.0) < params.style_rate {
                        let s = rng.random_range(
                            params.style_tokens_per_sentence.0..=params.style_tokens_per_sentence.1,
                        );
                        for _ in 0..s {
                            words.push(style[rng.random_range(0..style.len())].clone());
                        }
                    }
                }
                let n_fillers = rng.random_range(filler_range.0..=filler_range.1);
                for _ in 0..n_fillers {
                    if rng.random_range(0.0..1.0) < 0.6 {
                        words.push(pool[rng.random_range(0..pool.len())].clone());
                    } else {
                        words.push(common[rng.random_range(0..common.len())].clone());
                    }
                }
                if has_marker && rng.random_range(0.0..1.0) < 0.5 {
                    words.push(spec.marker.to_string());
                }
                // shuffle words deterministically
                for i in (1..words.len()).rev() {
                    let j = rng.random_range(0..=i);
                    words.swap(i, j);
                }
                // capitalize the sentence head so the splitter sees a
                // capital after each terminal period
                let mut text = words.join(" ");
                if let Some(first) = text.get(0..1) {
                    text.replace_range(0..1, &first.to_uppercase());
                }
                text.push('.');
                sentences.push(text);
                doc_labels.push(if salient { 1u8 } else { 0u8 });
            }
            let document = sentences.join(" ");
            let salient_text: Vec<&str> = sentences
                .iter()
                .zip(&doc_labels)
                .filter(|(_, &l)| l == 1)
                .map(|(s, _)| s.as_str())
                .collect();
            let id = format!("{}-{d:03}", spec.name.to_lowercase());
            pairs.push(CasePair {
                id: id.clone(),
                jurisdiction: Jurisdiction::new(spec.name),
                document,
                references: vec![salient_text.join(" ")],
                segments: None,
            });
            labels.push(SentenceLabels {
                id,
                labels: doc_labels,
            });
        }

        let split_at = params.docs_per_jurisdiction - params.heldout_per_jurisdiction;
        let test_pairs = pairs.split_off(split_at);
        let test_labels = labels.split_off(split_at);
        let train = Corpus {
            jurisdiction: Jurisdiction::new(spec.name),
            split: Split::Train,
            pairs,
        };
        let test = Corpus {
            jurisdiction: Jurisdiction::new(spec.name),
            split: Split::Test,
            pairs: test_pairs,
        };
        out.push((train, labels, test, test_labels));
    }

    let (target_train, target_train_labels, target_test, target_test_labels) = out.pop().unwrap();
    let (source_train, source_train_labels, source_test, source_test_labels) = out.pop().unwrap();
    SynthDataset {
        source_train,
        source_train_labels,
        source_test,
        source_test_labels,
        target_train,
        target_train_labels,
        target_test,
        target_test_labels,
    }
}

/// The target-train corpus with references removed and the split set to
/// unlabeled, as the silver pipeline expects.
pub fn unlabeled(corpus: &Corpus) -> Corpus {
    Corpus {
        jurisdiction: corpus.jurisdiction.clone(),
        split: Split::Unlabeled,
        pairs: corpus
            .pairs
            .iter()
            .map(|p| CasePair {
                id: p.id.clone(),
                jurisdiction: p.jurisdiction.clone(),
                document: p.document.clone(),
                references: Vec::new(),
                segments: None,
            })
            .collect(),
    }
}
