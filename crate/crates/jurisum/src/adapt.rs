//! Adversarial extractive scorer: a small encoder with a salience head and
//! a jurisdiction discriminator behind a gradient reversal layer.
//!
//! The trainer optimizes `L_sum + lambda * L_jur` where the reversal layer
//! flips the jurisdiction gradient at the encoder boundary, so the encoder
//! descends on `L_sum - lambda * L_jur` while the discriminator descends on
//! `lambda * L_jur`. Salience targets come from pseudo-reference labels on
//! the source side and, when silver training is on, from silver summaries
//! on the target side. Training is single-threaded, plain gradient descent,
//! and fully deterministic given the seed.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::extract::{select_by_budget, Budget, ExtractError, ExtractiveSummary, ScoredSentences};
use crate::label::{SentenceLabels, SilverPair};
use crate::text::{split_sentences, vectorize, SentenceIndex, SparseVec, TfIdfModel};

#[derive(Debug, Error)]
pub enum AdaptError {
    #[error("invalid schedule steps: t={t} must lie in 0..={total}, total >= 1")]
    InvalidSteps { t: usize, total: usize },
    #[error("feature index {index} out of range for feature dim {dim}")]
    DimensionMismatch { index: usize, dim: usize },
    #[error("batch needs {sentences} salience targets, got {targets}")]
    MissingTargets { sentences: usize, targets: usize },
    #[error("source side has no labeled documents")]
    EmptySource,
    #[error("labels for pair `{id}` cover {labels} sentences but the document has {sentences}")]
    LabelMismatch {
        id: String,
        labels: usize,
        sentences: usize,
    },
    #[error("config invalid: {0}")]
    InvalidConfig(String),
    #[error("document has no sentences")]
    EmptyDocument,
    #[error("checkpoint feature-model hash mismatch (checkpoint {expected}, supplied model {found})")]
    FeatureModelMismatch { expected: String, found: String },
    #[error("checkpoint io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

/// Adaptation rate `lambda = 2/(1+exp(-gamma*p)) - 1` with progress
/// `p = t/total`; monotone nondecreasing in `t`, zero at `t = 0`.
pub fn lambda_schedule(t: usize, total: usize, gamma: f64) -> Result<f64, AdaptError> {
    if total < 1 || t > total {
        return Err(AdaptError::InvalidSteps { t, total });
    }
    let p = t as f64 / total as f64;
    Ok(2.0 / (1.0 + (-gamma * p).exp()) - 1.0)
}

/// Training configuration; `gamma` must lie in `[0.05, 0.1]` while the
/// schedule is active (a fixed lambda overrides the schedule and frees
/// gamma).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrlConfig {
    pub hidden_dim: usize,
    pub gamma: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    /// Documents per batch; training draws single-document batches.
    pub batch_size: usize,
    pub seed: u64,
    /// Train the salience head on silver target labels as well.
    pub use_silver: bool,
    /// Overrides the lambda schedule with a constant.
    pub lambda_fixed: Option<f64>,
    /// When false, the discriminator trains as a plain probe on `L_jur`
    /// and no jurisdiction gradient reaches the encoder (the GRL-off
    /// baseline).
    pub adversarial: bool,
    /// Weight of the target-side salience loss relative to source.
    pub silver_weight: f64,
}

impl Default for GrlConfig {
    fn default() -> Self {
        GrlConfig {
            hidden_dim: 64,
            gamma: 0.1,
            learning_rate: 0.01,
            epochs: 5,
            batch_size: 1,
            seed: 0,
            use_silver: false,
            lambda_fixed: None,
            adversarial: true,
            silver_weight: 1.0,
        }
    }
}

impl GrlConfig {
    pub fn validate(&self) -> Result<(), AdaptError> {
        if self.hidden_dim == 0 {
            return Err(AdaptError::InvalidConfig("hidden_dim must be >= 1".into()));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(AdaptError::InvalidConfig("learning_rate must be positive".into()));
        }
        if self.batch_size != 1 {
            return Err(AdaptError::InvalidConfig(
                "training draws single-document batches; batch_size must be 1".into(),
            ));
        }
        if let Some(l) = self.lambda_fixed {
            if !l.is_finite() || l < 0.0 {
                return Err(AdaptError::InvalidConfig("lambda_fixed must be >= 0".into()));
            }
        } else {
            if !self.gamma.is_finite() || !(0.05..=0.1).contains(&self.gamma) {
                return Err(AdaptError::InvalidConfig(format!(
                    "gamma {} outside [0.05, 0.1]; set lambda_fixed to override the schedule",
                    self.gamma
                )));
            }
        }
        if !self.silver_weight.is_finite() || self.silver_weight < 0.0 {
            return Err(AdaptError::InvalidConfig("silver_weight must be >= 0".into()));
        }
        Ok(())
    }
}

/// Encoder, salience head, and jurisdiction head parameters plus the
/// feature model that defines the input space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrlModel {
    /// Row `t` holds the hidden-dim weights of feature `t`.
    pub w_enc: Vec<Vec<f64>>,
    pub b_enc: Vec<f64>,
    pub w_sal: Vec<f64>,
    pub b_sal: f64,
    pub w_jur: Vec<f64>,
    pub b_jur: f64,
    pub feature: TfIdfModel,
}

impl GrlModel {
    /// Seeded initialization: every parameter drawn uniformly from
    /// `[-0.05, 0.05]` in a fixed order.
    pub fn init(feature: TfIdfModel, hidden_dim: usize, seed: u64) -> GrlModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let feature_dim = feature.vocab_size();
        let draw = |n: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..n).map(|_| rng.random_range(-0.05..=0.05)).collect()
        };
        let w_enc = (0..feature_dim).map(|_| draw(hidden_dim, &mut rng)).collect();
        let b_enc = draw(hidden_dim, &mut rng);
        let w_sal = draw(hidden_dim, &mut rng);
        let b_sal = rng.random_range(-0.05..=0.05);
        let w_jur = draw(hidden_dim, &mut rng);
        let b_jur = rng.random_range(-0.05..=0.05);
        GrlModel {
            w_enc,
            b_enc,
            w_sal,
            b_sal,
            w_jur,
            b_jur,
            feature,
        }
    }

    pub fn hidden_dim(&self) -> usize {
        self.b_enc.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.w_enc.len()
    }
}

/// Jurisdiction side of a batch.
pub const JURISDICTION_SOURCE: f64 = 0.0;
pub const JURISDICTION_TARGET: f64 = 1.0;

/// One document's sentence features and targets.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainBatch {
    /// L2-normalized TF-IDF vector per sentence.
    pub features: Vec<SparseVec>,
    /// Binary salience target per sentence; absent for unlabeled target
    /// documents, whose summarization loss is zero.
    pub salience_targets: Option<Vec<f64>>,
    /// 0 for source, 1 for target.
    pub jurisdiction_target: f64,
    /// Weight on the salience loss (the silver-weight knob).
    pub weight: f64,
}

/// Forward activations kept for the backward pass.
#[derive(Debug, Clone)]
pub struct Forward {
    pub hidden: Vec<Vec<f64>>,
    pub doc_repr: Vec<f64>,
    pub salience_probs: Vec<f64>,
    pub jurisdiction_prob: f64,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn bce(p: f64, y: f64) -> f64 {
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
}

/// Per-sentence `h_i = tanh(W_e^T x_i + b_e)`, salience probabilities
/// `sigmoid(w_s . h_i + b_s)`, document representation `mean_i h_i`, and
/// jurisdiction probability `sigmoid(w_j . mean + b_j)`. Lambda plays no
/// part here: the reversal layer is the identity in the forward pass.
pub fn forward(model: &GrlModel, batch: &TrainBatch) -> Result<Forward, AdaptError> {
    let hidden_dim = model.hidden_dim();
    let n = batch.features.len();
    if n == 0 {
        return Err(AdaptError::EmptyDocument);
    }
    let mut hidden = Vec::with_capacity(n);
    let mut salience_probs = Vec::with_capacity(n);
    let mut doc_repr = vec![0.0; hidden_dim];
    for x in &batch.features {
        let mut pre = model.b_enc.clone();
        for &(ix, w) in x.entries() {
            let row = model
                .w_enc
                .get(ix as usize)
                .ok_or(AdaptError::DimensionMismatch {
                    index: ix as usize,
                    dim: model.feature_dim(),
                })?;
            for (k, p) in pre.iter_mut().enumerate() {
                *p += w * row[k];
            }
        }
        let h: Vec<f64> = pre.iter().map(|z| z.tanh()).collect();
        let z_sal = model.w_sal.iter().zip(&h).map(|(w, hk)| w * hk).sum::<f64>() + model.b_sal;
        salience_probs.push(sigmoid(z_sal));
        for (k, hk) in h.iter().enumerate() {
            doc_repr[k] += hk;
        }
        hidden.push(h);
    }
    for v in &mut doc_repr {
        *v /= n as f64;
    }
    let z_jur = model.w_jur.iter().zip(&doc_repr).map(|(w, m)| w * m).sum::<f64>() + model.b_jur;
    Ok(Forward {
        hidden,
        doc_repr,
        salience_probs,
        jurisdiction_prob: sigmoid(z_jur),
    })
}

/// Loss components of one batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Losses {
    /// `L_sum + lambda * L_jur`.
    pub total: f64,
    /// Mean salience BCE (zero for unlabeled target batches).
    pub summarization: f64,
    /// Jurisdiction BCE.
    pub jurisdiction: f64,
}

/// Computes `(L_total, L_sum, L_jur)` for a batch at a given lambda.
pub fn loss(model: &GrlModel, batch: &TrainBatch, lambda: f64) -> Result<Losses, AdaptError> {
    let fwd = forward(model, batch)?;
    loss_from_forward(&fwd, batch, lambda)
}

fn loss_from_forward(fwd: &Forward, batch: &TrainBatch, lambda: f64) -> Result<Losses, AdaptError> {
    let summarization = match &batch.salience_targets {
        Some(targets) => {
            if targets.len() != fwd.salience_probs.len() {
                return Err(AdaptError::MissingTargets {
                    sentences: fwd.salience_probs.len(),
                    targets: targets.len(),
                });
            }
            let n = targets.len() as f64;
            batch.weight
                * fwd
                    .salience_probs
                    .iter()
                    .zip(targets)
                    .map(|(&p, &y)| bce(p, y))
                    .sum::<f64>()
                / n
        }
        None => 0.0,
    };
    let jurisdiction = bce(fwd.jurisdiction_prob, batch.jurisdiction_target);
    Ok(Losses {
        total: summarization + lambda * jurisdiction,
        summarization,
        jurisdiction,
    })
}

/// Parameter gradients; encoder rows are sparse over the features present
/// in the batch.
#[derive(Debug, Clone, Default)]
pub struct Gradients {
    pub w_enc: BTreeMap<usize, Vec<f64>>,
    pub b_enc: Vec<f64>,
    pub w_sal: Vec<f64>,
    pub b_sal: f64,
    pub w_jur: Vec<f64>,
    pub b_jur: f64,
}

/// Backward pass with the gradient reversal layer.
///
/// The jurisdiction head receives `d(lambda * L_jur)/d theta_j`; the
/// salience head receives `d L_sum / d theta_d`; gradients flowing from
/// the jurisdiction loss into the encoder are multiplied by `-lambda` at
/// the reversal boundary, so the encoder's update direction equals descent
/// on `L_sum - lambda * L_jur`.
pub fn backward_with_grl(
    model: &GrlModel,
    batch: &TrainBatch,
    lambda: f64,
) -> Result<(Gradients, Losses), AdaptError> {
    backward_impl(model, batch, lambda, true)
}

/// GRL-off probe: the discriminator trains on plain `L_jur` and the
/// encoder receives no jurisdiction gradient at all.
pub(crate) fn backward_probe(
    model: &GrlModel,
    batch: &TrainBatch,
) -> Result<(Gradients, Losses), AdaptError> {
    backward_impl(model, batch, 0.0, false)
}

fn backward_impl(
    model: &GrlModel,
    batch: &TrainBatch,
    lambda: f64,
    adversarial: bool,
) -> Result<(Gradients, Losses), AdaptError> {
    let fwd = forward(model, batch)?;
    let losses = loss_from_forward(&fwd, batch, lambda)?;
    let hidden_dim = model.hidden_dim();
    let n = batch.features.len();

    let mut grads = Gradients {
        w_enc: BTreeMap::new(),
        b_enc: vec![0.0; hidden_dim],
        w_sal: vec![0.0; hidden_dim],
        b_sal: 0.0,
        w_jur: vec![0.0; hidden_dim],
        b_jur: 0.0,
    };

    // jurisdiction head: d(coef * L_jur)/d z_j = coef * (q - y_j)
    let q_err = fwd.jurisdiction_prob - batch.jurisdiction_target;
    let head_coef = if adversarial { lambda } else { 1.0 };
    for (k, g) in grads.w_jur.iter_mut().enumerate() {
        *g = head_coef * q_err * fwd.doc_repr[k];
    }
    grads.b_jur = head_coef * q_err;

    // gradient reaching each h_i from the jurisdiction path; the GRL
    // multiplies by -lambda, the probe severs the path entirely
    let enc_jur_coef = if adversarial { -lambda } else { 0.0 };
    let dm_coef = enc_jur_coef * q_err / n as f64;

    for (i, x) in batch.features.iter().enumerate() {
        let h = &fwd.hidden[i];
        // salience path
        let mut dh: Vec<f64> = vec![0.0; hidden_dim];
        if let Some(targets) = &batch.salience_targets {
            let p_err = batch.weight * (fwd.salience_probs[i] - targets[i]) / targets.len() as f64;
            for (k, g) in grads.w_sal.iter_mut().enumerate() {
                *g += p_err * h[k];
            }
            grads.b_sal += p_err;
            for (k, d) in dh.iter_mut().enumerate() {
                *d += p_err * model.w_sal[k];
            }
        }
        // jurisdiction path through the document mean
        for (k, d) in dh.iter_mut().enumerate() {
            *d += dm_coef * model.w_jur[k];
        }
        // through tanh
        let da: Vec<f64> = dh.iter().zip(h).map(|(d, hk)| d * (1.0 - hk * hk)).collect();
        for (k, g) in grads.b_enc.iter_mut().enumerate() {
            *g += da[k];
        }
        for &(ix, w) in x.entries() {
            let row = grads
                .w_enc
                .entry(ix as usize)
                .or_insert_with(|| vec![0.0; hidden_dim]);
            for (k, g) in row.iter_mut().enumerate() {
                *g += w * da[k];
            }
        }
    }
    Ok((grads, losses))
}

fn apply_gradients(model: &mut GrlModel, grads: &Gradients, lr: f64) {
    for (&row, g) in &grads.w_enc {
        for (k, gk) in g.iter().enumerate() {
            model.w_enc[row][k] -= lr * gk;
        }
    }
    for (k, gk) in grads.b_enc.iter().enumerate() {
        model.b_enc[k] -= lr * gk;
    }
    for (k, gk) in grads.w_sal.iter().enumerate() {
        model.w_sal[k] -= lr * gk;
    }
    model.b_sal -= lr * grads.b_sal;
    for (k, gk) in grads.w_jur.iter().enumerate() {
        model.w_jur[k] -= lr * gk;
    }
    model.b_jur -= lr * grads.b_jur;
}

/// Gain applied to unit-norm sentence vectors so the tanh encoder starts
/// in its responsive range under the `[-0.05, 0.05]` init.
pub const FEATURE_GAIN: f64 = 4.0;

/// L2-normalized TF-IDF feature vectors (scaled by [`FEATURE_GAIN`]) for a
/// split document.
pub fn sentence_features(model: &TfIdfModel, doc: &SentenceIndex) -> Vec<SparseVec> {
    doc.sentences
        .iter()
        .map(|s| vectorize(model, &s.tokens.tokens).normalized().scaled(FEATURE_GAIN))
        .collect()
}

/// Builds labeled source batches from a corpus and its sentence labels
/// (matched positionally; ids must agree).
pub fn batches_from_source(
    corpus: &Corpus,
    labels: &[SentenceLabels],
    feature: &TfIdfModel,
) -> Result<Vec<TrainBatch>, AdaptError> {
    let by_id: BTreeMap<&str, &SentenceLabels> =
        labels.iter().map(|l| (l.id.as_str(), l)).collect();
    let mut batches = Vec::with_capacity(corpus.len());
    for pair in &corpus.pairs {
        let doc = split_sentences(&pair.document);
        let l = by_id
            .get(pair.id.as_str())
            .ok_or_else(|| AdaptError::LabelMismatch {
                id: pair.id.clone(),
                labels: 0,
                sentences: doc.len(),
            })?;
        if l.labels.len() != doc.len() {
            return Err(AdaptError::LabelMismatch {
                id: pair.id.clone(),
                labels: l.labels.len(),
                sentences: doc.len(),
            });
        }
        batches.push(TrainBatch {
            features: sentence_features(feature, &doc),
            salience_targets: Some(l.labels.iter().map(|&b| b as f64).collect()),
            jurisdiction_target: JURISDICTION_SOURCE,
            weight: 1.0,
        });
    }
    Ok(batches)
}

/// Builds unlabeled target batches (no salience loss).
pub fn batches_from_target_unlabeled(
    corpus: &Corpus,
    feature: &TfIdfModel,
) -> Vec<TrainBatch> {
    corpus
        .pairs
        .iter()
        .map(|pair| {
            let doc = split_sentences(&pair.document);
            TrainBatch {
                features: sentence_features(feature, &doc),
                salience_targets: None,
                jurisdiction_target: JURISDICTION_TARGET,
                weight: 1.0,
            }
        })
        .collect()
}

/// Builds silver-labeled target batches: positives are the silver summary's
/// selected sentence indices.
pub fn batches_from_silver(
    silver: &[SilverPair],
    feature: &TfIdfModel,
    silver_weight: f64,
) -> Vec<TrainBatch> {
    silver
        .iter()
        .map(|sp| {
            let doc = split_sentences(&sp.pair.document);
            let mut targets = vec![0.0; doc.len()];
            for &i in &sp.selected {
                if i < targets.len() {
                    targets[i] = 1.0;
                }
            }
            TrainBatch {
                features: sentence_features(feature, &doc),
                salience_targets: Some(targets),
                jurisdiction_target: JURISDICTION_TARGET,
                weight: silver_weight,
            }
        })
        .collect()
}

/// Trains with alternating source/target single-document batches in
/// round-robin order for `epochs` passes. The per-step lambda follows the
/// schedule over `T = epochs * (|source| + |target|)` total steps unless
/// fixed. Deterministic given seed, data, and config.
pub fn train(
    mut model: GrlModel,
    source: &[TrainBatch],
    target: &[TrainBatch],
    config: &GrlConfig,
) -> Result<GrlModel, AdaptError> {
    config.validate()?;
    if source.is_empty() {
        return Err(AdaptError::EmptySource);
    }
    for b in source {
        if b.salience_targets.is_none() {
            return Err(AdaptError::MissingTargets {
                sentences: b.features.len(),
                targets: 0,
            });
        }
    }
    // silver labels participate only when enabled
    let stripped_target: Vec<TrainBatch>;
    let target: &[TrainBatch] = if config.use_silver {
        target
    } else {
        stripped_target = target
            .iter()
            .map(|b| TrainBatch {
                features: b.features.clone(),
                salience_targets: None,
                jurisdiction_target: b.jurisdiction_target,
                weight: b.weight,
            })
            .collect();
        &stripped_target
    };

    let total_steps = config.epochs * (source.len() + target.len());
    let mut step = 0usize;
    for _epoch in 0..config.epochs {
        let mut si = 0usize;
        let mut ti = 0usize;
        let mut source_turn = true;
        while si < source.len() || ti < target.len() {
            let batch = if source_turn && si < source.len() {
                let b = &source[si];
                si += 1;
                b
            } else if ti < target.len() {
                let b = &target[ti];
                ti += 1;
                b
            } else {
                let b = &source[si];
                si += 1;
                b
            };
            source_turn = !source_turn;

            let lambda = match config.lambda_fixed {
                Some(l) => l,
                None => lambda_schedule(step, total_steps, config.gamma)?,
            };
            let (grads, _losses) = if config.adversarial {
                backward_with_grl(&model, batch, lambda)?
            } else {
                backward_probe(&model, batch)?
            };
            apply_gradients(&mut model, &grads, config.learning_rate);
            step += 1;
        }
    }
    Ok(model)
}

/// Scores a document's sentences with the salience head and selects by
/// budget.
pub fn predict_summary(
    model: &GrlModel,
    doc: &SentenceIndex,
    budget: &Budget,
) -> Result<ExtractiveSummary, AdaptError> {
    if doc.is_empty() {
        return Err(AdaptError::EmptyDocument);
    }
    let batch = TrainBatch {
        features: sentence_features(&model.feature, doc),
        salience_targets: None,
        jurisdiction_target: JURISDICTION_TARGET,
        weight: 1.0,
    };
    let fwd = forward(model, &batch)?;
    let scored = ScoredSentences::new(doc, fwd.salience_probs).map_err(AdaptError::Extract)?;
    Ok(select_by_budget(&scored, budget)?)
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    w_enc: Vec<Vec<f64>>,
    b_enc: Vec<f64>,
    w_sal: Vec<f64>,
    b_sal: f64,
    w_jur: Vec<f64>,
    b_jur: f64,
    config: GrlConfig,
    feature_model_sha256: String,
}

/// Hash of the canonical feature-model serialization, used to tie a
/// checkpoint to the TF-IDF model it was trained with.
pub fn feature_model_hash(model: &TfIdfModel) -> String {
    let json = model.to_json();
    let digest = Sha256::digest(json.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes the checkpoint JSON (parameters + config + feature-model hash).
/// The feature model itself is saved separately.
pub fn save_checkpoint(model: &GrlModel, config: &GrlConfig, path: &Path) -> Result<(), AdaptError> {
    let checkpoint = Checkpoint {
        w_enc: model.w_enc.clone(),
        b_enc: model.b_enc.clone(),
        w_sal: model.w_sal.clone(),
        b_sal: model.b_sal,
        w_jur: model.w_jur.clone(),
        b_jur: model.b_jur,
        config: config.clone(),
        feature_model_sha256: feature_model_hash(&model.feature),
    };
    std::fs::write(path, serde_json::to_string_pretty(&checkpoint)?)?;
    Ok(())
}

/// Loads a checkpoint, verifying that the supplied feature model matches
/// the hash recorded at save time. Returns the model and its config.
pub fn load_checkpoint(path: &Path, feature: TfIdfModel) -> Result<(GrlModel, GrlConfig), AdaptError> {
    let raw = std::fs::read_to_string(path)?;
    let checkpoint: Checkpoint = serde_json::from_str(&raw)?;
    let found = feature_model_hash(&feature);
    if checkpoint.feature_model_sha256 != found {
        return Err(AdaptError::FeatureModelMismatch {
            expected: checkpoint.feature_model_sha256,
            found,
        });
    }
    Ok((
        GrlModel {
            w_enc: checkpoint.w_enc,
            b_enc: checkpoint.b_enc,
            w_sal: checkpoint.w_sal,
            b_sal: checkpoint.b_sal,
            w_jur: checkpoint.w_jur,
            b_jur: checkpoint.b_jur,
            feature,
        },
        checkpoint.config,
    ))
}
