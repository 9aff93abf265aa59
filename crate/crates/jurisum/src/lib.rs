//! Corpus workbench for cross-jurisdiction legal case summarization:
//! corpus ingestion and profiling, unsupervised extractive summarizers,
//! pseudo-reference and silver-summary labeling, a gradient-reversal
//! adversarial extractive trainer, and ROUGE-L evaluation.
//!
//! With the default `parallel` feature, corpus-level operations fan out
//! over rayon; disabling it gives a fully sequential build with identical
//! outputs.

pub mod adapt;
pub mod corpus;
pub mod eval;
pub mod extract;
pub mod label;
pub mod par;
pub mod profile;
pub mod synth;
pub mod text;
