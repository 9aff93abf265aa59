//! Parallel-vs-sequential benchmarks for the corpus-level operations.
//!
//! `per_pair_metrics` drives one identical per-pair kernel through the
//! feature-switched parallel map and the always-sequential helper. The
//! public-API groups compare the default build ("default", rayon-parallel
//! under the `parallel` feature) against the same call pinned to a
//! one-thread pool ("pool1"). Build with `--no-default-features` to
//! measure the true sequential fallback as the default path.

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, Criterion};

use jurisum::corpus::Corpus;
use jurisum::eval::evaluate_run;
use jurisum::extract::{summarize_corpus, Algorithm, Budget, SummarizeParams};
use jurisum::par;
use jurisum::profile::{
    copy_length, coverage, density, novelty, profile_dataset, repetition, ProfileParams,
};
use jurisum::synth::{self, SynthParams};
use jurisum::text::{fit_tfidf, tokenize, StopwordList, TfIdfModel, TokenSeq};

struct Fixture {
    corpus: Corpus,
    model: TfIdfModel,
}

fn fixture() -> Fixture {
    let data = synth::generate(&SynthParams {
        docs_per_jurisdiction: 150,
        heldout_per_jurisdiction: 20,
        sentences_per_doc: (25, 40),
        seed: 42,
        ..SynthParams::default()
    });
    let corpus = data.source_train;
    let docs: Vec<TokenSeq> = corpus.pairs.iter().map(|p| tokenize(&p.document)).collect();
    let model = fit_tfidf(&docs, StopwordList::default_english()).unwrap();
    Fixture { corpus, model }
}

fn per_pair_kernel(pair: &jurisum::corpus::CasePair) -> f64 {
    let doc = tokenize(&pair.document).tokens;
    let summary = tokenize(&pair.references[0]).tokens;
    coverage(&doc, &summary).unwrap_or(0.0)
        + density(&doc, &summary).unwrap_or(0.0)
        + copy_length(&doc, &summary)
        + novelty(&doc, &summary, 3).unwrap_or(0.0)
        + repetition(&summary, 2).unwrap_or(0.0)
}

fn bench_per_pair_metrics(c: &mut Criterion) {
    let fx = fixture();
    let mut group = c.benchmark_group("per_pair_metrics");
    group.bench_function("map_ordered", |b| {
        b.iter(|| {
            par::map_ordered(&fx.corpus.pairs, per_pair_kernel)
                .iter()
                .sum::<f64>()
        })
    });
    group.bench_function("map_ordered_seq", |b| {
        b.iter(|| {
            par::map_ordered_seq(&fx.corpus.pairs, per_pair_kernel)
                .iter()
                .sum::<f64>()
        })
    });
    group.finish();
}

fn bench_profile(c: &mut Criterion) {
    let fx = fixture();
    let params = ProfileParams {
        vocab_k: 200,
        ..ProfileParams::default()
    };
    let stopwords = StopwordList::default_english();
    let mut group = c.benchmark_group("profile_dataset");
    group.bench_function("default", |b| {
        b.iter(|| profile_dataset(&fx.corpus, &params, stopwords).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("pool1", |b| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        b.iter(|| pool.install(|| profile_dataset(&fx.corpus, &params, stopwords).unwrap()))
    });
    group.finish();
}

fn bench_summarize(c: &mut Criterion) {
    let fx = fixture();
    let budget = Budget::new(80).unwrap();
    let params = SummarizeParams::default();
    let stopwords = StopwordList::default_english();
    let mut group = c.benchmark_group("summarize_corpus_mmr");
    group.sample_size(20);
    group.bench_function("default", |b| {
        b.iter(|| {
            summarize_corpus(&fx.corpus, &fx.model, Algorithm::Mmr, &budget, &params, stopwords)
                .unwrap()
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("pool1", |b| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        b.iter(|| {
            pool.install(|| {
                summarize_corpus(&fx.corpus, &fx.model, Algorithm::Mmr, &budget, &params, stopwords)
                    .unwrap()
            })
        })
    });
    group.finish();
}

fn bench_evaluate(c: &mut Criterion) {
    let fx = fixture();
    let mut test = fx.corpus.clone();
    test.split = jurisum::corpus::Split::Test;
    let outputs: BTreeMap<String, String> = test
        .pairs
        .iter()
        .map(|p| (p.id.clone(), p.document.clone()))
        .collect();
    let mut group = c.benchmark_group("evaluate_run");
    group.sample_size(20);
    group.bench_function("default", |b| {
        b.iter(|| evaluate_run(&outputs, &test).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("pool1", |b| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        b.iter(|| pool.install(|| evaluate_run(&outputs, &test).unwrap()))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_per_pair_metrics,
    bench_profile,
    bench_summarize,
    bench_evaluate
);
criterion_main!(benches);
