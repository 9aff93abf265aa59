//! Training-data construction: extractive pseudo-references from abstractive
//! summaries, chunk-level reference mapping for long documents, and silver
//! summaries for unlabeled target jurisdictions.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CasePair, Corpus, Split};
use crate::extract::{summarize_document, Algorithm, Budget, ExtractError, SummarizeParams};
use crate::eval::{rouge_l, rouge_n};
use crate::par;
use crate::text::{split_sentences, vectorize, SentenceIndex, SparseVec, StopwordList, TfIdfModel, TokenSeq};

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("pair `{0}` has no reference summary")]
    NoReference(String),
    #[error("document has no sentences")]
    EmptyDocument,
    #[error("chunk token limit must be at least one")]
    InvalidChunkSize,
    #[error("silver generation requires an unlabeled corpus, got split `{0}`")]
    WrongSplit(String),
    #[error("no embedding vector for document `{id}` sentence {sent} ({kind})")]
    MissingEmbedding {
        id: String,
        sent: usize,
        kind: &'static str,
    },
    #[error("cannot compare embeddings of different kinds (sparse vs dense)")]
    MixedEmbeddings,
    #[error("summarization failed: {0}")]
    Extract(#[from] ExtractError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed embedding record on line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

/// Binary per-sentence salience labels for one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceLabels {
    pub id: String,
    /// One 0/1 entry per document sentence.
    pub labels: Vec<u8>,
}

impl SentenceLabels {
    pub fn positive_indices(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == 1)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Marks, for each reference sentence, its best-matching document sentence
/// by the mean of ROUGE-1, ROUGE-2, and ROUGE-L F1 (ties to the earlier
/// sentence); the union of marks is the positive set. `top_k` marks that
/// many best document sentences per reference sentence.
pub fn build_pseudo_reference(pair: &CasePair) -> Result<SentenceLabels, LabelError> {
    build_pseudo_reference_top_k(pair, 1)
}

pub fn build_pseudo_reference_top_k(pair: &CasePair, top_k: usize) -> Result<SentenceLabels, LabelError> {
    let reference = pair
        .references
        .first()
        .ok_or_else(|| LabelError::NoReference(pair.id.clone()))?;
    let doc = split_sentences(&pair.document);
    if doc.is_empty() {
        return Err(LabelError::EmptyDocument);
    }
    let ref_sents = split_sentences(reference);
    let mut labels = vec![0u8; doc.len()];
    for ref_sent in &ref_sents.sentences {
        let mut scored: Vec<(usize, f64)> = doc
            .sentences
            .iter()
            .enumerate()
            .map(|(i, doc_sent)| {
                let c = &doc_sent.tokens.tokens;
                let r = &ref_sent.tokens.tokens;
                let mean = (rouge_n(c, r, 1).f1 + rouge_n(c, r, 2).f1 + rouge_l(c, r).f1) / 3.0;
                (i, mean)
            })
            .collect();
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite").then(a.0.cmp(&b.0)));
        for &(i, _) in scored.iter().take(top_k.max(1)) {
            labels[i] = 1;
        }
    }
    Ok(SentenceLabels {
        id: pair.id.clone(),
        labels,
    })
}

/// A run of consecutive document sentences bounded by a token budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chunk {
    pub index: usize,
    /// Sentence index range `[start, end)`.
    pub start: usize,
    pub end: usize,
    pub token_count: usize,
    /// Set when a single sentence alone exceeded the token limit.
    pub oversized: bool,
    /// Reference text assigned by [`map_summary_to_chunks`]; `None` until
    /// mapped, and left `None` for chunks with no assigned sentences.
    pub reference: Option<String>,
}

/// Greedy packing of consecutive sentences: a chunk closes when adding the
/// next sentence would exceed `max_chunk_tokens`; an oversized single
/// sentence becomes its own flagged chunk.
pub fn chunk_document(doc: &SentenceIndex, max_chunk_tokens: usize) -> Result<Vec<Chunk>, LabelError> {
    if max_chunk_tokens == 0 {
        return Err(LabelError::InvalidChunkSize);
    }
    if doc.is_empty() {
        return Err(LabelError::EmptyDocument);
    }
    let mut chunks: Vec<Chunk> = Vec::new();
    let mut start = 0usize;
    let mut tokens = 0usize;
    for (i, s) in doc.sentences.iter().enumerate() {
        let len = s.tokens.len();
        if i > start && tokens + len > max_chunk_tokens {
            chunks.push(Chunk {
                index: chunks.len(),
                start,
                end: i,
                token_count: tokens,
                oversized: tokens > max_chunk_tokens,
                reference: None,
            });
            start = i;
            tokens = 0;
        }
        tokens += len;
    }
    chunks.push(Chunk {
        index: chunks.len(),
        start,
        end: doc.len(),
        token_count: tokens,
        oversized: tokens > max_chunk_tokens,
        reference: None,
    });
    Ok(chunks)
}

/// Whether a sentence belongs to a document or a reference summary, for
/// embedding lookups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentenceKind {
    Document,
    Reference,
}

impl SentenceKind {
    fn as_str(&self) -> &'static str {
        match self {
            SentenceKind::Document => "doc",
            SentenceKind::Reference => "ref",
        }
    }
}

/// An embedding vector; TF-IDF embeddings are sparse, externally loaded
/// ones dense.
#[derive(Debug, Clone, PartialEq)]
pub enum EmbedVec {
    Sparse(SparseVec),
    Dense(Vec<f64>),
}

impl EmbedVec {
    fn cosine(&self, other: &EmbedVec) -> Result<f64, LabelError> {
        match (self, other) {
            (EmbedVec::Sparse(a), EmbedVec::Sparse(b)) => Ok(crate::text::cosine(a, b)),
            (EmbedVec::Dense(a), EmbedVec::Dense(b)) => {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
                if na == 0.0 || nb == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(dot / (na * nb))
                }
            }
            _ => Err(LabelError::MixedEmbeddings),
        }
    }
}

/// Pluggable sentence-embedding interface for chunk mapping. The default
/// is the TF-IDF sentence vector; an external-vectors loader provides
/// parity with precomputed embeddings.
pub trait SentenceEmbedder {
    fn embed(
        &self,
        pair_id: &str,
        kind: SentenceKind,
        index: usize,
        tokens: &TokenSeq,
    ) -> Result<EmbedVec, LabelError>;
}

/// TF-IDF default embedder.
pub struct TfIdfEmbedder<'a> {
    pub model: &'a TfIdfModel,
}

impl SentenceEmbedder for TfIdfEmbedder<'_> {
    fn embed(
        &self,
        _pair_id: &str,
        _kind: SentenceKind,
        _index: usize,
        tokens: &TokenSeq,
    ) -> Result<EmbedVec, LabelError> {
        Ok(EmbedVec::Sparse(vectorize(self.model, &tokens.tokens)))
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct EmbeddingRecord {
    id: String,
    sent: usize,
    vec: Vec<f64>,
    /// "doc" (default) or "ref".
    #[serde(default)]
    kind: Option<String>,
}

/// Embedder backed by a JSONL file of `{"id", "sent", "vec", "kind"?}`
/// records, where `kind` distinguishes document from reference sentences
/// and defaults to "doc".
pub struct ExternalEmbedder {
    vectors: HashMap<(String, &'static str, usize), Vec<f64>>,
}

impl ExternalEmbedder {
    pub fn from_file(path: &Path) -> Result<ExternalEmbedder, LabelError> {
        let reader = BufReader::new(fs::File::open(path)?);
        let mut vectors = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: EmbeddingRecord =
                serde_json::from_str(&line).map_err(|source| LabelError::Json {
                    line: i + 1,
                    source,
                })?;
            let kind = match record.kind.as_deref() {
                Some("ref") => "ref",
                _ => "doc",
            };
            vectors.insert((record.id, kind, record.sent), record.vec);
        }
        Ok(ExternalEmbedder { vectors })
    }
}

impl SentenceEmbedder for ExternalEmbedder {
    fn embed(
        &self,
        pair_id: &str,
        kind: SentenceKind,
        index: usize,
        _tokens: &TokenSeq,
    ) -> Result<EmbedVec, LabelError> {
        self.vectors
            .get(&(pair_id.to_string(), kind.as_str(), index))
            .cloned()
            .map(EmbedVec::Dense)
            .ok_or_else(|| LabelError::MissingEmbedding {
                id: pair_id.to_string(),
                sent: index,
                kind: kind.as_str(),
            })
    }
}

/// Maps each reference sentence to its most similar document sentence by
/// embedding cosine (ties to the earlier sentence) and assigns it to the
/// chunk containing that sentence. Each chunk's reference is its assigned
/// sentences joined in original reference order; unassigned chunks keep
/// `None` and are excluded from training exports.
pub fn map_summary_to_chunks(
    pair: &CasePair,
    chunks: &[Chunk],
    embedder: &dyn SentenceEmbedder,
) -> Result<Vec<Chunk>, LabelError> {
    let reference = pair
        .references
        .first()
        .ok_or_else(|| LabelError::NoReference(pair.id.clone()))?;
    let doc = split_sentences(&pair.document);
    let ref_sents = split_sentences(reference);

    let doc_embeds: Vec<EmbedVec> = doc
        .sentences
        .iter()
        .enumerate()
        .map(|(i, s)| embedder.embed(&pair.id, SentenceKind::Document, i, &s.tokens))
        .collect::<Result<_, _>>()?;

    let mut assigned: Vec<Vec<&str>> = vec![Vec::new(); chunks.len()];
    for (ri, ref_sent) in ref_sents.sentences.iter().enumerate() {
        let ref_embed = embedder.embed(&pair.id, SentenceKind::Reference, ri, &ref_sent.tokens)?;
        let mut best: Option<(usize, f64)> = None;
        for (di, doc_embed) in doc_embeds.iter().enumerate() {
            let sim = ref_embed.cosine(doc_embed)?;
            let better = match best {
                None => true,
                Some((_, b)) => sim > b,
            };
            if better {
                best = Some((di, sim));
            }
        }
        if let Some((di, _)) = best {
            if let Some(ci) = chunks.iter().position(|c| c.start <= di && di < c.end) {
                assigned[ci].push(&ref_sent.text);
            }
        }
    }

    Ok(chunks
        .iter()
        .zip(assigned)
        .map(|(chunk, sents)| {
            let mut out = chunk.clone();
            out.reference = if sents.is_empty() {
                None
            } else {
                Some(sents.join(" "))
            };
            out
        })
        .collect())
}

/// A machine-labeled case: the single reference is a generated extractive
/// summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilverPair {
    pub pair: CasePair,
    /// Document sentence indices forming the silver reference.
    pub selected: Vec<usize>,
    /// Algorithm name and parameters that produced the reference.
    pub provenance: String,
}

/// Generates one silver pair per document of an unlabeled corpus using an
/// unsupervised summarizer (MMR unless configured otherwise).
pub fn generate_silver(
    corpus: &Corpus,
    model: &TfIdfModel,
    algorithm: Algorithm,
    budget: &Budget,
    params: &SummarizeParams,
    stopwords: &StopwordList,
) -> Result<Vec<SilverPair>, LabelError> {
    if corpus.split != Split::Unlabeled {
        return Err(LabelError::WrongSplit(corpus.split.as_str().to_string()));
    }
    let provenance = format!(
        "{}(budget={},lambda={})",
        algorithm,
        budget.max_words(),
        params.mmr_lambda
    );
    par::try_map_ordered(&corpus.pairs, |pair| {
        let doc = split_sentences(&pair.document);
        let summary = summarize_document(&doc, model, algorithm, budget, params, stopwords)?;
        Ok(SilverPair {
            pair: CasePair {
                id: pair.id.clone(),
                jurisdiction: pair.jurisdiction.clone(),
                document: pair.document.clone(),
                references: vec![summary.text.clone()],
                segments: None,
            },
            selected: summary.indices,
            provenance: provenance.clone(),
        })
    })
}

/// Writes sentence labels as JSONL (`{"id", "labels"}` per line).
pub fn write_labels(labels: &[SentenceLabels], path: &Path) -> Result<(), LabelError> {
    let mut out = fs::File::create(path)?;
    for l in labels {
        writeln!(out, "{}", serde_json::to_string(l).expect("labels serialize"))?;
    }
    Ok(())
}

/// Reads sentence labels written by [`write_labels`].
pub fn read_labels(path: &Path) -> Result<Vec<SentenceLabels>, LabelError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut labels = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        labels.push(serde_json::from_str(&line).map_err(|source| LabelError::Json {
            line: i + 1,
            source,
        })?);
    }
    Ok(labels)
}

#[derive(Serialize, Deserialize)]
struct SilverRecord {
    id: String,
    jurisdiction: String,
    split: String,
    document: String,
    references: Vec<String>,
    provenance: String,
    selected: Vec<usize>,
}

/// Writes silver pairs in the corpus JSONL format with `provenance` (and
/// the selected sentence indices) attached.
pub fn write_silver(pairs: &[SilverPair], path: &Path) -> Result<(), LabelError> {
    let mut out = fs::File::create(path)?;
    for sp in pairs {
        let record = SilverRecord {
            id: sp.pair.id.clone(),
            jurisdiction: sp.pair.jurisdiction.as_str().to_string(),
            split: "train".to_string(),
            document: sp.pair.document.clone(),
            references: sp.pair.references.clone(),
            provenance: sp.provenance.clone(),
            selected: sp.selected.clone(),
        };
        writeln!(out, "{}", serde_json::to_string(&record).expect("record serializes"))?;
    }
    Ok(())
}

/// Reads silver pairs written by [`write_silver`].
pub fn read_silver(path: &Path) -> Result<Vec<SilverPair>, LabelError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: SilverRecord = serde_json::from_str(&line).map_err(|source| LabelError::Json {
            line: i + 1,
            source,
        })?;
        pairs.push(SilverPair {
            pair: CasePair {
                id: record.id,
                jurisdiction: crate::corpus::Jurisdiction::new(record.jurisdiction),
                document: record.document,
                references: record.references,
                segments: None,
            },
            selected: record.selected,
            provenance: record.provenance,
        });
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Jurisdiction;
    use crate::text::fit_tfidf;

    fn pair(id: &str, doc: &str, refs: &[&str]) -> CasePair {
        CasePair {
            id: id.to_string(),
            jurisdiction: Jurisdiction::new("X"),
            document: doc.to_string(),
            references: refs.iter().map(|r| r.to_string()).collect(),
            segments: None,
        }
    }

    #[test]
    fn pseudo_reference_exact_match() {
        let doc = "Alpha beta gamma here. Delta epsilon zeta there. The appeal was dismissed today. Omega psi chi end.";
        let p = pair("c1", doc, &["The appeal was dismissed today."]);
        let labels = build_pseudo_reference(&p).unwrap();
        assert_eq!(labels.labels, vec![0, 0, 1, 0]);
    }

    #[test]
    fn pseudo_reference_union_dedups() {
        let doc = "Alpha beta gamma here. Delta epsilon zeta there.";
        // both reference sentences match document sentence 0 best
        let p = pair("c1", doc, &["Alpha beta gamma. Alpha beta here."]);
        let labels = build_pseudo_reference(&p).unwrap();
        assert_eq!(labels.labels, vec![1, 0]);
        assert_eq!(labels.positive_indices(), vec![0]);
    }

    #[test]
    fn pseudo_reference_bigram_overlap_decides() {
        // reference shares bigrams only with document sentence 1
        let doc = "Unrelated opening words entirely. The statute of limitation applies. Closing remark follows now.";
        let p = pair("c1", doc, &["Court held the statute of limitation governs."]);
        let labels = build_pseudo_reference(&p).unwrap();
        assert_eq!(labels.labels, vec![0, 1, 0]);
        // hand check: mean ROUGE F1 vs sentence 1 dominates
        let doc_idx = split_sentences(doc);
        let ref_idx = split_sentences(&p.references[0]);
        let r = &ref_idx.sentences[0].tokens.tokens;
        let s1 = &doc_idx.sentences[1].tokens.tokens;
        let mean1 = (rouge_n(s1, r, 1).f1 + rouge_n(s1, r, 2).f1 + rouge_l(s1, r).f1) / 3.0;
        let s0 = &doc_idx.sentences[0].tokens.tokens;
        let mean0 = (rouge_n(s0, r, 1).f1 + rouge_n(s0, r, 2).f1 + rouge_l(s0, r).f1) / 3.0;
        assert!(mean1 > mean0);
    }

    #[test]
    fn pseudo_reference_requires_reference() {
        let p = pair("c1", "Some document.", &[]);
        assert!(matches!(build_pseudo_reference(&p), Err(LabelError::NoReference(_))));
    }

    #[test]
    fn pseudo_reference_idempotent() {
        let p = pair(
            "c1",
            "Alpha beta gamma. Delta epsilon zeta. Eta theta iota.",
            &["Delta epsilon zeta."],
        );
        let a = build_pseudo_reference(&p).unwrap();
        let b = build_pseudo_reference(&p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chunking_basic_and_boundary() {
        let doc = split_sentences("Short sentence one. Short sentence two.");
        let chunks = chunk_document(&doc, 1024).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!((chunks[0].start, chunks[0].end), (0, 2));

        // two 3-token sentences with limit 5: 3+3 > 5, so two chunks
        let doc = split_sentences("Alpha beta gamma. Delta epsilon zeta.");
        let chunks = chunk_document(&doc, 5).unwrap();
        assert_eq!(chunks.len(), 2);
        assert!(!chunks[0].oversized);
        assert_eq!(chunks[0].token_count, 3);
    }

    #[test]
    fn chunking_oversized_singleton() {
        let doc = split_sentences("One two three four five six seven eight.");
        let chunks = chunk_document(&doc, 4).unwrap();
        assert_eq!(chunks.len(), 1);
        assert!(chunks[0].oversized);
    }

    #[test]
    fn chunking_partitions_sentences() {
        let doc = split_sentences(
            "Alpha beta gamma delta. Epsilon zeta eta. Theta iota kappa lambda mu. Nu xi. Omicron pi rho sigma.",
        );
        let chunks = chunk_document(&doc, 7).unwrap();
        assert_eq!(chunks[0].start, 0);
        assert_eq!(chunks.last().unwrap().end, doc.len());
        for w in chunks.windows(2) {
            assert_eq!(w[0].end, w[1].start);
        }
    }

    #[test]
    fn map_to_single_chunk_takes_everything() {
        let p = pair(
            "c1",
            "Alpha beta gamma. Delta epsilon zeta.",
            &["Alpha beta. Delta epsilon."],
        );
        let doc = split_sentences(&p.document);
        let chunks = chunk_document(&doc, 1024).unwrap();
        let docs_tokens: Vec<TokenSeq> = doc.sentences.iter().map(|s| s.tokens.clone()).collect();
        let model = fit_tfidf(&docs_tokens, &StopwordList::empty()).unwrap();
        let mapped = map_summary_to_chunks(&p, &chunks, &TfIdfEmbedder { model: &model }).unwrap();
        assert_eq!(mapped.len(), 1);
        assert_eq!(mapped[0].reference.as_deref(), Some("Alpha beta. Delta epsilon."));
    }

    #[test]
    fn map_verbatim_sentence_to_its_chunk() {
        let p = pair(
            "c1",
            "Alpha beta gamma delta epsilon. Statute governs the lease.",
            &["Statute governs the lease."],
        );
        let doc = split_sentences(&p.document);
        let chunks = chunk_document(&doc, 5).unwrap();
        assert_eq!(chunks.len(), 2);
        let docs_tokens: Vec<TokenSeq> = doc.sentences.iter().map(|s| s.tokens.clone()).collect();
        let model = fit_tfidf(&docs_tokens, &StopwordList::empty()).unwrap();
        let mapped = map_summary_to_chunks(&p, &chunks, &TfIdfEmbedder { model: &model }).unwrap();
        assert_eq!(mapped[0].reference, None);
        assert_eq!(mapped[1].reference.as_deref(), Some("Statute governs the lease."));
    }

    #[test]
    fn map_two_references_to_two_chunks() {
        let p = pair(
            "c1",
            "The statute governs leases fully. Damages were awarded to claimant.",
            &["Statute governs leases. Damages awarded to claimant."],
        );
        let doc = split_sentences(&p.document);
        let chunks = chunk_document(&doc, 5).unwrap();
        assert_eq!(chunks.len(), 2);
        let docs_tokens: Vec<TokenSeq> = doc.sentences.iter().map(|s| s.tokens.clone()).collect();
        let model = fit_tfidf(&docs_tokens, &StopwordList::empty()).unwrap();
        let mapped = map_summary_to_chunks(&p, &chunks, &TfIdfEmbedder { model: &model }).unwrap();
        assert_eq!(mapped[0].reference.as_deref(), Some("Statute governs leases."));
        assert_eq!(mapped[1].reference.as_deref(), Some("Damages awarded to claimant."));
    }

    #[test]
    fn external_embedder_roundtrip_and_mapping() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vecs.jsonl");
        std::fs::write(
            &path,
            concat!(
                r#"{"id":"c1","sent":0,"vec":[1.0,0.0]}"#,
                "\n",
                r#"{"id":"c1","sent":1,"vec":[0.0,1.0]}"#,
                "\n",
                r#"{"id":"c1","sent":0,"vec":[0.0,1.0],"kind":"ref"}"#,
                "\n"
            ),
        )
        .unwrap();
        let embedder = ExternalEmbedder::from_file(&path).unwrap();
        let p = pair("c1", "First sentence here. Second sentence there.", &["Pick the second."]);
        let doc = split_sentences(&p.document);
        let chunks = chunk_document(&doc, 3).unwrap();
        assert_eq!(chunks.len(), 2);
        let mapped = map_summary_to_chunks(&p, &chunks, &embedder).unwrap();
        assert_eq!(mapped[0].reference, None);
        assert_eq!(mapped[1].reference.as_deref(), Some("Pick the second."));

        // missing vector is an error
        let p2 = pair("c2", "Doc sentence.", &["Ref sentence."]);
        let chunks2 = chunk_document(&split_sentences(&p2.document), 1024).unwrap();
        assert!(matches!(
            map_summary_to_chunks(&p2, &chunks2, &embedder),
            Err(LabelError::MissingEmbedding { .. })
        ));
    }

    #[test]
    fn silver_requires_unlabeled_and_matches_direct_mmr() {
        use crate::corpus::Split;
        let mut corpus = Corpus {
            jurisdiction: Jurisdiction::new("T"),
            split: Split::Unlabeled,
            pairs: (0..5)
                .map(|i| {
                    pair(
                        &format!("d{i}"),
                        "The statute governs the lease. Unrelated filler text follows here. The lease bound the parties.",
                        &[],
                    )
                })
                .collect(),
        };
        let all_docs: Vec<TokenSeq> = corpus
            .pairs
            .iter()
            .map(|p| crate::text::tokenize(&p.document))
            .collect();
        let model = fit_tfidf(&all_docs, &StopwordList::empty()).unwrap();
        let budget = Budget::new(20).unwrap();
        let params = SummarizeParams::default();
        let silver = generate_silver(
            &corpus,
            &model,
            Algorithm::Mmr,
            &budget,
            &params,
            &StopwordList::empty(),
        )
        .unwrap();
        assert_eq!(silver.len(), 5);
        for (sp, p) in silver.iter().zip(&corpus.pairs) {
            let doc = split_sentences(&p.document);
            let direct = crate::extract::mmr_summary(&doc, &model, &budget, params.mmr_lambda).unwrap();
            assert_eq!(sp.pair.references[0], direct.text);
            assert_eq!(sp.selected, direct.indices);
            assert!(sp.provenance.contains("mmr"));
        }

        corpus.split = Split::Train;
        assert!(matches!(
            generate_silver(&corpus, &model, Algorithm::Mmr, &budget, &params, &StopwordList::empty()),
            Err(LabelError::WrongSplit(_))
        ));
    }

    #[test]
    fn silver_empty_corpus_gives_empty_list() {
        let corpus = Corpus {
            jurisdiction: Jurisdiction::new("T"),
            split: Split::Unlabeled,
            pairs: vec![],
        };
        let model = fit_tfidf(&[TokenSeq::from_tokens(["x"])], &StopwordList::empty()).unwrap();
        let silver = generate_silver(
            &corpus,
            &model,
            Algorithm::Mmr,
            &Budget::new(5).unwrap(),
            &SummarizeParams::default(),
            &StopwordList::empty(),
        )
        .unwrap();
        assert!(silver.is_empty());
    }

    #[test]
    fn labels_and_silver_jsonl_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let labels = vec![
            SentenceLabels { id: "a".into(), labels: vec![1, 0, 1] },
            SentenceLabels { id: "b".into(), labels: vec![0, 1] },
        ];
        let lpath = dir.path().join("labels.jsonl");
        write_labels(&labels, &lpath).unwrap();
        assert_eq!(read_labels(&lpath).unwrap(), labels);

        let silver = vec![SilverPair {
            pair: pair("d0", "Doc text here.", &["Doc text here."]),
            selected: vec![0],
            provenance: "mmr(budget=5,lambda=0.6)".to_string(),
        }];
        let spath = dir.path().join("silver.jsonl");
        write_silver(&silver, &spath).unwrap();
        assert_eq!(read_silver(&spath).unwrap(), silver);
    }
}
