//! `jurisum` command line: corpus profiling, summarization, labeling,
//! adversarial training, and evaluation as reproducible runs.
//!
//! Every subcommand writes a `run.json` with the fully resolved
//! configuration. A flat `key = value` config file can pre-set any flag;
//! explicit flags win. Exit codes: 0 success, 1 domain error, 2 usage
//! error.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use jurisum::adapt::{
    batches_from_silver, batches_from_source, batches_from_target_unlabeled, load_checkpoint,
    predict_summary, save_checkpoint, train, GrlConfig, GrlModel,
};
use jurisum::corpus::{load_corpus, Corpus, CorpusFormat};
use jurisum::eval::evaluate_run;
use jurisum::extract::{
    summarize_corpus, Algorithm, Budget, CaseSummarizerWeights, SummarizeParams,
};
use jurisum::label::{
    build_pseudo_reference_top_k, chunk_document, generate_silver, map_summary_to_chunks,
    read_labels, read_silver, write_labels, write_silver, ExternalEmbedder, SentenceEmbedder,
    SentenceLabels, TfIdfEmbedder,
};
use jurisum::profile::{
    ingest_external_scores, profile_dataset, vocab_overlap, vocabulary, ProfileParams,
};
use jurisum::text::{fit_tfidf, split_sentences, tokenize, StopwordList, TfIdfModel, TokenSeq};

#[derive(Parser)]
#[command(name = "jurisum", version, about = "Cross-jurisdiction legal case summarization workbench")]
struct Cli {
    /// Flat key = value config file; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for per-document parallelism (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Stopword list file (one lowercase term per line); overrides the
    /// built-in list and the JURISUM_STOPWORDS environment variable.
    #[arg(long, global = true)]
    stopwords: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute dataset characterization metrics for one corpus.
    Profile(ProfileArgs),
    /// Vocabulary-overlap matrix across corpora.
    Overlap(OverlapArgs),
    /// Run an unsupervised extractive summarizer over a corpus.
    Summarize(SummarizeArgs),
    /// Build extractive pseudo-reference sentence labels (and optionally
    /// chunk-level references).
    Label(LabelArgs),
    /// Generate silver summaries for an unlabeled corpus.
    Silver(SilverArgs),
    /// Train the adversarial extractive scorer.
    Train(TrainArgs),
    /// Summarize with a trained model checkpoint.
    Predict(PredictArgs),
    /// Score summaries against a test corpus with ROUGE-L.
    Eval(EvalArgs),
    /// Chain silver -> train -> predict -> eval for a source/target pair.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct ProfileArgs {
    /// Corpus path (.jsonl file or dataset directory).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    novelty_n: Option<usize>,
    #[arg(long)]
    repetition_n: Option<usize>,
    #[arg(long)]
    vocab_k: Option<usize>,
    /// Externally computed scores as name=value (e.g. perplexity=16.91).
    #[arg(long = "external")]
    external: Vec<String>,
}

#[derive(Args)]
struct OverlapArgs {
    /// Corpus paths; give the flag once per corpus.
    #[arg(long = "in", required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(long)]
    algo: Option<String>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Word budget; defaults to the corpus mean reference length.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long)]
    rank_fraction: Option<f64>,
    #[arg(long)]
    sig_top_fraction: Option<f64>,
    #[arg(long)]
    max_gap: Option<usize>,
    #[arg(long)]
    lambda_mmr: Option<f64>,
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Document sentences marked per reference sentence.
    #[arg(long)]
    top_k: Option<usize>,
    /// Also write chunk-level references to this JSONL file.
    #[arg(long)]
    chunks: Option<PathBuf>,
    #[arg(long)]
    chunk_tokens: Option<usize>,
    /// External sentence-embedding JSONL for chunk mapping.
    #[arg(long)]
    embeddings: Option<PathBuf>,
}

#[derive(Args)]
struct SilverArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    lambda_mmr: Option<f64>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    source: Option<PathBuf>,
    #[arg(long)]
    target: Option<PathBuf>,
    /// Silver corpus JSONL for the target side (enables silver training).
    #[arg(long)]
    silver: Option<PathBuf>,
    /// Precomputed source sentence labels; derived from references when
    /// absent.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    hidden: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    lambda_fixed: Option<f64>,
    #[arg(long)]
    silver_weight: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    /// Feature-model JSON; defaults to `<model>.tfidf.json`.
    #[arg(long)]
    tfidf: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    /// Directory of `<id>.txt` summary files.
    #[arg(long)]
    outputs: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Include per-segment recall for corpora with segmented references.
    #[arg(long)]
    segments: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    source: Option<PathBuf>,
    /// Unlabeled target-train corpus.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Labeled target test corpus for the final evaluation.
    #[arg(long)]
    target_test: Option<PathBuf>,
    /// Silver algorithm (`mmr`, `casesummarizer`, ... or `none`).
    #[arg(long)]
    silver: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    hidden: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flat config-file values consulted for flags the user left unset.
struct Resolver {
    values: BTreeMap<String, String>,
    resolved: BTreeMap<String, serde_json::Value>,
}

impl Resolver {
    fn load(path: Option<&Path>) -> Result<Resolver> {
        let mut values = BTreeMap::new();
        if let Some(path) = path {
            let raw = fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            for (i, line) in raw.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| anyhow!("config line {}: expected `key = value`", i + 1))?;
                values.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Resolver {
            values,
            resolved: BTreeMap::new(),
        })
    }

    fn record(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.resolved.insert(key.to_string(), value.into());
    }

    fn opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Clone + Into<serde_json::Value>,
        T::Err: std::fmt::Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.values.get(key) {
                Some(raw) => Some(
                    raw.parse::<T>()
                        .map_err(|e| anyhow!("config key `{key}`: {e}"))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.record(key, v.clone());
        }
        Ok(value)
    }

    fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Clone + Into<serde_json::Value>,
        T::Err: std::fmt::Display,
    {
        let v = self.opt(key, flag)?.unwrap_or(default);
        self.record(key, v.clone());
        Ok(v)
    }

    fn require<T>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T: FromStr + Clone + Into<serde_json::Value>,
        T::Err: std::fmt::Display,
    {
        self.opt(key, flag)?
            .ok_or_else(|| anyhow!("missing required option --{key} (or config key `{key}`)"))
    }

    fn path(&mut self, key: &str, flag: Option<PathBuf>) -> Result<Option<PathBuf>> {
        let value = flag.or_else(|| self.values.get(key).map(PathBuf::from));
        if let Some(p) = &value {
            self.record(key, p.display().to_string());
        }
        Ok(value)
    }

    fn require_path(&mut self, key: &str, flag: Option<PathBuf>) -> Result<PathBuf> {
        self.path(key, flag)?
            .ok_or_else(|| anyhow!("missing required option --{key} (or config key `{key}`)"))
    }

    /// Writes run.json next to the primary output.
    fn write_run_json(&self, command: &str, out: &Path, out_is_dir: bool) -> Result<()> {
        let run = serde_json::json!({
            "artifact": "jurisum",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "options": self.resolved,
        });
        let path = if out_is_dir {
            fs::create_dir_all(out)?;
            out.join("run.json")
        } else {
            out.with_extension(match out.extension().and_then(|e| e.to_str()) {
                Some(ext) => format!("{ext}.run.json"),
                None => "run.json".to_string(),
            })
        };
        fs::write(&path, serde_json::to_string_pretty(&run)?)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

fn detect_format(path: &Path) -> CorpusFormat {
    if path.extension().and_then(|e| e.to_str()) == Some("jsonl") {
        CorpusFormat::Jsonl
    } else {
        CorpusFormat::Dir
    }
}

fn load(path: &Path) -> Result<Corpus> {
    load_corpus(path, detect_format(path))
        .with_context(|| format!("loading corpus {}", path.display()))
}

fn resolve_stopwords(flag: Option<&Path>) -> Result<StopwordList> {
    if let Some(path) = flag {
        return Ok(StopwordList::from_file(path)?);
    }
    if let Some(path) = std::env::var_os("JURISUM_STOPWORDS") {
        return Ok(StopwordList::from_file(Path::new(&path))?);
    }
    Ok(StopwordList::default_english().clone())
}

/// Mean reference-0 token count of the corpus, the per-jurisdiction
/// default budget.
fn default_budget(corpus: &Corpus) -> Result<usize> {
    let lengths: Vec<usize> = corpus
        .pairs
        .iter()
        .filter_map(|p| p.references.first())
        .map(|r| tokenize(r).len())
        .collect();
    if lengths.is_empty() {
        bail!("corpus has no references; give --budget explicitly");
    }
    let mean = lengths.iter().sum::<usize>() as f64 / lengths.len() as f64;
    Ok((mean.round() as usize).max(1))
}

fn corpus_token_docs(corpus: &Corpus) -> Vec<TokenSeq> {
    corpus.pairs.iter().map(|p| tokenize(&p.document)).collect()
}

fn write_summaries(
    out: &Path,
    results: &[jurisum::extract::DocSummary],
) -> Result<()> {
    fs::create_dir_all(out)?;
    let mut selected = String::new();
    for ds in results {
        fs::write(out.join(format!("{}.txt", ds.id)), format!("{}\n", ds.summary.text))?;
        let line = serde_json::json!({"id": ds.id, "indices": ds.summary.indices});
        selected.push_str(&line.to_string());
        selected.push('\n');
    }
    fs::write(out.join("selected.jsonl"), selected)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("initializing worker pool")?;
    }
    #[cfg(not(feature = "parallel"))]
    if cli.jobs.is_some() {
        eprintln!("note: built without the `parallel` feature; --jobs is ignored");
    }

    let mut resolver = Resolver::load(cli.config.as_deref())?;
    let stopwords = resolve_stopwords(cli.stopwords.as_deref())?;

    match cli.command {
        Command::Profile(args) => cmd_profile(args, &mut resolver, &stopwords),
        Command::Overlap(args) => cmd_overlap(args, &mut resolver, &stopwords),
        Command::Summarize(args) => cmd_summarize(args, &mut resolver, &stopwords),
        Command::Label(args) => cmd_label(args, &mut resolver, &stopwords),
        Command::Silver(args) => cmd_silver(args, &mut resolver, &stopwords),
        Command::Train(args) => cmd_train(args, &mut resolver, &stopwords),
        Command::Predict(args) => cmd_predict(args, &mut resolver),
        Command::Eval(args) => cmd_eval(args, &mut resolver),
        Command::Pipeline(args) => cmd_pipeline(args, &mut resolver, &stopwords),
    }
}

fn cmd_profile(args: ProfileArgs, r: &mut Resolver, stopwords: &StopwordList) -> Result<()> {
    let input = r.require_path("in", args.input)?;
    let out = r.require_path("out", args.out)?;
    let params = ProfileParams {
        n_novelty: r.get("novelty-n", args.novelty_n, 3)?,
        n_repetition: r.get("repetition-n", args.repetition_n, 2)?,
        vocab_k: r.get("vocab-k", args.vocab_k, 1000)?,
    };
    let corpus = load(&input)?;
    let mut profile = profile_dataset(&corpus, &params, stopwords)?;
    for entry in &args.external {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("--external expects name=value, got `{entry}`"))?;
        let value: f64 = value.parse().context("--external value must be a number")?;
        profile = ingest_external_scores(profile, name, value)?;
        r.record(&format!("external.{name}"), value);
    }
    fs::write(&out, serde_json::to_string_pretty(&profile)?)?;
    r.write_run_json("profile", &out, false)?;
    println!("profiled {} pairs of {}", profile.n_pairs, profile.jurisdiction);
    Ok(())
}

fn cmd_overlap(args: OverlapArgs, r: &mut Resolver, stopwords: &StopwordList) -> Result<()> {
    if args.inputs.len() < 2 {
        bail!("--in must be given at least twice");
    }
    let out = r.require_path("out", args.out)?;
    let k = r.get("k", args.k, 1000)?;
    r.record(
        "in",
        args.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    );
    let corpora: Vec<Corpus> = args.inputs.iter().map(|p| load(p)).collect::<Result<_>>()?;
    let mut vocabs: Vec<BTreeSet<String>> = corpora
        .iter()
        .map(|c| vocabulary(&[c], k, stopwords))
        .collect();
    // overlap requires equal-size vocabularies; clamp K to the smallest
    // corpus when necessary
    let k_eff = vocabs.iter().map(|v| v.len()).min().unwrap_or(0);
    if k_eff < k {
        eprintln!("note: clamping vocabulary size to {k_eff} (smallest corpus)");
        vocabs = corpora
            .iter()
            .map(|c| vocabulary(&[c], k_eff, stopwords))
            .collect();
        r.record("k-effective", k_eff);
    }
    let names: Vec<&str> = corpora.iter().map(|c| c.jurisdiction.as_str()).collect();
    let mut csv = String::from("jurisdiction");
    for n in &names {
        csv.push(',');
        csv.push_str(n);
    }
    csv.push('\n');
    for (i, a) in vocabs.iter().enumerate() {
        csv.push_str(names[i]);
        for b in &vocabs {
            let pct = vocab_overlap(a, b)?;
            csv.push_str(&format!(",{pct:.1}"));
        }
        csv.push('\n');
    }
    fs::write(&out, csv)?;
    r.write_run_json("overlap", &out, false)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn summarize_params(
    r: &mut Resolver,
    threshold: Option<f64>,
    damping: Option<f64>,
    rank_fraction: Option<f64>,
    sig_top_fraction: Option<f64>,
    max_gap: Option<usize>,
    lambda_mmr: Option<f64>,
    stopwords: &StopwordList,
) -> Result<SummarizeParams> {
    let defaults = SummarizeParams::default();
    let mut letsum = defaults.letsum.clone();
    letsum.stopwords = stopwords.clone();
    Ok(SummarizeParams {
        lexrank_threshold: r.get("threshold", threshold, defaults.lexrank_threshold)?,
        lexrank_damping: r.get("damping", damping, defaults.lexrank_damping)?,
        lsa_rank_fraction: r.get("rank-fraction", rank_fraction, defaults.lsa_rank_fraction)?,
        luhn_sig_top_fraction: r.get(
            "sig-top-fraction",
            sig_top_fraction,
            defaults.luhn_sig_top_fraction,
        )?,
        luhn_max_gap: r.get("max-gap", max_gap, defaults.luhn_max_gap)?,
        casesummarizer: CaseSummarizerWeights::default(),
        mmr_lambda: r.get("lambda-mmr", lambda_mmr, defaults.mmr_lambda)?,
        letsum,
    })
}

fn cmd_summarize(args: SummarizeArgs, r: &mut Resolver, stopwords: &StopwordList) -> Result<()> {
    let algo: Algorithm = r
        .require("algo", args.algo)?
        .parse()
        .map_err(|e: String| anyhow!(e))?;
    let input = r.require_path("in", args.input)?;
    let out = r.require_path("out", args.out)?;
    let corpus = load(&input)?;
    let budget_words = match r.opt("budget", args.budget)? {
        Some(b) => b,
        None => {
            let b = default_budget(&corpus)?;
            r.record("budget", b);
            b
        }
    };
    let budget = Budget::new(budget_words)?;
    let params = summarize_params(
        r,
        args.threshold,
        args.damping,
        args.rank_fraction,
        args.sig_top_fraction,
        args.max_gap,
        args.lambda_mmr,
        stopwords,
    )?;
    let results = summarize_corpus(&corpus, &fit_model(&corpus, stopwords)?, algo, &budget, &params, stopwords)?;
    write_summaries(&out, &results)?;
    r.write_run_json("summarize", &out, true)?;
    println!("wrote {} summaries to {}", results.len(), out.display());
    Ok(())
}

fn fit_model(corpus: &Corpus, stopwords: &StopwordList) -> Result<TfIdfModel> {
    Ok(fit_tfidf(&corpus_token_docs(corpus), stopwords)?)
}

fn cmd_label(args: LabelArgs, r: &mut Resolver, stopwords: &StopwordList) -> Result<()> {
    let input = r.require_path("in", args.input)?;
    let out = r.require_path("out", args.out)?;
    let top_k = r.get("top-k", args.top_k, 1)?;
    let corpus = load(&input)?;
    let labels: Vec<SentenceLabels> = corpus
        .pairs
        .iter()
        .map(|p| build_pseudo_reference_top_k(p, top_k))
        .collect::<std::result::Result<_, _>>()?;
    write_labels(&labels, &out)?;

    if let Some(chunks_out) = r.path("chunks", args.chunks)? {
        let chunk_tokens = r.get("chunk-tokens", args.chunk_tokens, 1024)?;
        let external = match r.path("embeddings", args.embeddings)? {
            Some(p) => Some(ExternalEmbedder::from_file(&p)?),
            None => None,
        };
        let model = fit_model(&corpus, stopwords)?;
        let tfidf_embedder = TfIdfEmbedder { model: &model };
        let embedder: &dyn SentenceEmbedder = match &external {
            Some(e) => e,
            None => &tfidf_embedder,
        };
        let mut lines = String::new();
        for pair in &corpus.pairs {
            let doc = split_sentences(&pair.document);
            let chunks = chunk_document(&doc, chunk_tokens)?;
            let mapped = map_summary_to_chunks(pair, &chunks, embedder)?;
            // chunks with no assigned reference are excluded from training
            // exports
            for chunk in mapped.into_iter().filter(|c| c.reference.is_some()) {
                let line = serde_json::json!({
                    "id": pair.id,
                    "chunk": chunk.index,
                    "start": chunk.start,
                    "end": chunk.end,
                    "token_count": chunk.token_count,
                    "oversized": chunk.oversized,
                    "reference": chunk.reference,
                });
                lines.push_str(&line.to_string());
                lines.push('\n');
            }
        }
        fs::write(&chunks_out, lines)?;
    }
    r.write_run_json("label", &out, false)?;
    println!("labeled {} pairs", labels.len());
    Ok(())
}

fn cmd_silver(args: SilverArgs, r: &mut Resolver, stopwords: &StopwordList) -> Result<()> {
    let input = r.require_path("in", args.input)?;
    let out = r.require_path("out", args.out)?;
    let budget = Budget::new(r.require("budget", args.budget)?)?;
    let algo: Algorithm = r
        .get("algo", args.algo, "mmr".to_string())?
        .parse()
        .map_err(|e: String| anyhow!(e))?;
    let mut params = SummarizeParams::default();
    params.mmr_lambda = r.get("lambda-mmr", args.lambda_mmr, params.mmr_lambda)?;
    params.letsum.stopwords = stopwords.clone();
    let corpus = load(&input)?;
    let model = fit_model(&corpus, stopwords)?;
    let silver = generate_silver(&corpus, &model, algo, &budget, &params, stopwords)?;
    write_silver(&silver, &out)?;
    r.write_run_json("silver", &out, false)?;
    println!("generated {} silver pairs", silver.len());
    Ok(())
}

struct TrainInputs {
    feature: TfIdfModel,
    model: GrlModel,
    config: GrlConfig,
}

#[allow(clippy::too_many_arguments)]
fn train_from_corpora(
    r: &mut Resolver,
    source: &Corpus,
    target: &Corpus,
    silver: Option<&[jurisum::label::SilverPair]>,
    labels: Option<Vec<SentenceLabels>>,
    gamma: Option<f64>,
    epochs: Option<usize>,
    seed: Option<u64>,
    hidden: Option<usize>,
    lr: Option<f64>,
    lambda_fixed: Option<f64>,
    silver_weight: Option<f64>,
    stopwords: &StopwordList,
) -> Result<TrainInputs> {
    let defaults = GrlConfig::default();
    let config = GrlConfig {
        hidden_dim: r.get("hidden", hidden, defaults.hidden_dim)?,
        gamma: r.get("gamma", gamma, defaults.gamma)?,
        learning_rate: r.get("lr", lr, defaults.learning_rate)?,
        epochs: r.get("epochs", epochs, defaults.epochs)?,
        batch_size: 1,
        seed: r.get("seed", seed, defaults.seed)?,
        use_silver: silver.is_some(),
        lambda_fixed: r.opt("lambda-fixed", lambda_fixed)?,
        adversarial: true,
        silver_weight: r.get("silver-weight", silver_weight, defaults.silver_weight)?,
    };

    // feature space over source and target documents
    let mut docs = corpus_token_docs(source);
    docs.extend(corpus_token_docs(target));
    let feature = fit_tfidf(&docs, stopwords)?;

    let labels = match labels {
        Some(l) => l,
        None => source
            .pairs
            .iter()
            .map(build_pseudo_reference_top_k_default)
            .collect::<std::result::Result<_, _>>()?,
    };
    let source_batches = batches_from_source(source, &labels, &feature)?;
    let target_batches = match silver {
        Some(sp) => batches_from_silver(sp, &feature, config.silver_weight),
        None => batches_from_target_unlabeled(target, &feature),
    };

    let init = GrlModel::init(feature.clone(), config.hidden_dim, config.seed);
    let model = train(init, &source_batches, &target_batches, &config)?;
    Ok(TrainInputs {
        feature,
        model,
        config,
    })
}

fn build_pseudo_reference_top_k_default(
    pair: &jurisum::corpus::CasePair,
) -> std::result::Result<SentenceLabels, jurisum::label::LabelError> {
    build_pseudo_reference_top_k(pair, 1)
}

fn cmd_train(args: TrainArgs, r: &mut Resolver, stopwords: &StopwordList) -> Result<()> {
    let source_path = r.require_path("source", args.source)?;
    let target_path = r.require_path("target", args.target)?;
    let out = r.require_path("out", args.out)?;
    let source = load(&source_path)?;
    let target = load(&target_path)?;
    let silver = match r.path("silver", args.silver)? {
        Some(p) => Some(read_silver(&p)?),
        None => None,
    };
    let labels = match r.path("labels", args.labels)? {
        Some(p) => Some(read_labels(&p)?),
        None => None,
    };
    let trained = train_from_corpora(
        r,
        &source,
        &target,
        silver.as_deref(),
        labels,
        args.gamma,
        args.epochs,
        args.seed,
        args.hidden,
        args.lr,
        args.lambda_fixed,
        args.silver_weight,
        stopwords,
    )?;
    save_checkpoint(&trained.model, &trained.config, &out)?;
    let tfidf_path = sidecar_tfidf_path(&out);
    fs::write(&tfidf_path, trained.feature.to_json())?;
    r.write_run_json("train", &out, false)?;
    println!(
        "trained model written to {} (features {})",
        out.display(),
        tfidf_path.display()
    );
    Ok(())
}

fn sidecar_tfidf_path(model_path: &Path) -> PathBuf {
    match model_path.extension().and_then(|e| e.to_str()) {
        Some("json") => model_path.with_extension("tfidf.json"),
        _ => model_path.with_extension("tfidf"),
    }
}

fn cmd_predict(args: PredictArgs, r: &mut Resolver) -> Result<()> {
    let model_path = r.require_path("model", args.model)?;
    let input = r.require_path("in", args.input)?;
    let out = r.require_path("out", args.out)?;
    let tfidf_path = match r.path("tfidf", args.tfidf)? {
        Some(p) => p,
        None => sidecar_tfidf_path(&model_path),
    };
    let feature = TfIdfModel::from_json(
        &fs::read_to_string(&tfidf_path)
            .with_context(|| format!("reading feature model {}", tfidf_path.display()))?,
    )?;
    let (model, _config) = load_checkpoint(&model_path, feature)?;
    let corpus = load(&input)?;
    let budget_words = match r.opt("budget", args.budget)? {
        Some(b) => b,
        None => {
            let b = default_budget(&corpus)?;
            r.record("budget", b);
            b
        }
    };
    let budget = Budget::new(budget_words)?;
    let results: Vec<jurisum::extract::DocSummary> =
        jurisum::par::try_map_ordered(&corpus.pairs, |pair| {
            let doc = split_sentences(&pair.document);
            let summary = predict_summary(&model, &doc, &budget)?;
            Ok::<_, jurisum::adapt::AdaptError>(jurisum::extract::DocSummary {
                id: pair.id.clone(),
                summary,
            })
        })?;
    write_summaries(&out, &results)?;
    r.write_run_json("predict", &out, true)?;
    println!("predicted {} summaries to {}", results.len(), out.display());
    Ok(())
}

fn read_outputs(dir: &Path, corpus: &Corpus) -> Result<BTreeMap<String, String>> {
    let mut outputs = BTreeMap::new();
    for pair in &corpus.pairs {
        let path = dir.join(format!("{}.txt", pair.id));
        let text = fs::read_to_string(&path)
            .with_context(|| format!("missing output for id `{}` at {}", pair.id, path.display()))?;
        outputs.insert(pair.id.clone(), text);
    }
    Ok(outputs)
}

fn write_eval_outputs(
    report: &jurisum::eval::EvalReport,
    out: &Path,
    csv: Option<&Path>,
) -> Result<()> {
    fs::write(out, serde_json::to_string_pretty(report)?)?;
    if let Some(csv_path) = csv {
        let mut csv = String::from("id,precision,recall,f1\n");
        for (id, s) in &report.per_doc {
            csv.push_str(&format!("{id},{},{},{}\n", s.precision, s.recall, s.f1));
        }
        csv.push_str(&format!(
            "MEAN,{},{},{}\n",
            report.mean.precision, report.mean.recall, report.mean.f1
        ));
        fs::write(csv_path, csv)?;
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs, r: &mut Resolver) -> Result<()> {
    let outputs_dir = r.require_path("outputs", args.outputs)?;
    let corpus_path = r.require_path("corpus", args.corpus)?;
    let out = r.require_path("out", args.out)?;
    let csv = r.path("csv", args.csv)?;
    r.record("segments", args.segments);
    let corpus = load(&corpus_path)?;
    let outputs = read_outputs(&outputs_dir, &corpus)?;
    let mut report = evaluate_run(&outputs, &corpus)?;
    if !args.segments {
        report.segment_recall = None;
    }
    write_eval_outputs(&report, &out, csv.as_deref())?;
    r.write_run_json("eval", &out, false)?;
    println!(
        "ROUGE-L mean P/R/F1 = {:.4}/{:.4}/{:.4} over {} documents",
        report.mean.precision,
        report.mean.recall,
        report.mean.f1,
        report.per_doc.len()
    );
    Ok(())
}

fn cmd_pipeline(args: PipelineArgs, r: &mut Resolver, stopwords: &StopwordList) -> Result<()> {
    let source_path = r.require_path("source", args.source)?;
    let target_path = r.require_path("target", args.target)?;
    let target_test_path = r.require_path("target-test", args.target_test)?;
    let out = r.require_path("out", args.out)?;
    let silver_algo = r.get("silver", args.silver, "mmr".to_string())?;
    fs::create_dir_all(&out)?;

    let source = load(&source_path)?;
    let target = load(&target_path)?;
    let target_test = load(&target_test_path)?;

    // budget: explicit, else source-reference average
    let budget_words = match r.opt("budget", args.budget)? {
        Some(b) => b,
        None => {
            let b = default_budget(&source)?;
            r.record("budget", b);
            b
        }
    };
    let budget = Budget::new(budget_words)?;

    // 1. source labels
    let labels: Vec<SentenceLabels> = source
        .pairs
        .iter()
        .map(|p| build_pseudo_reference_top_k(p, 1))
        .collect::<std::result::Result<_, _>>()?;
    write_labels(&labels, &out.join("labels.jsonl"))?;

    // 2. silver summaries on the unlabeled target
    let silver = if silver_algo == "none" {
        None
    } else {
        let algo: Algorithm = silver_algo.parse().map_err(|e: String| anyhow!(e))?;
        let mut params = SummarizeParams::default();
        params.letsum.stopwords = stopwords.clone();
        let mut docs = corpus_token_docs(&source);
        docs.extend(corpus_token_docs(&target));
        let feature = fit_tfidf(&docs, stopwords)?;
        let silver = generate_silver(&target, &feature, algo, &budget, &params, stopwords)?;
        write_silver(&silver, &out.join("silver.jsonl"))?;
        Some(silver)
    };

    // 3. adversarial training
    let trained = train_from_corpora(
        r,
        &source,
        &target,
        silver.as_deref(),
        Some(labels),
        args.gamma,
        args.epochs,
        args.seed,
        args.hidden,
        args.lr,
        None,
        None,
        stopwords,
    )?;
    let model_path = out.join("model.json");
    save_checkpoint(&trained.model, &trained.config, &model_path)?;
    fs::write(sidecar_tfidf_path(&model_path), trained.feature.to_json())?;

    // 4. predict on the target test set
    let outputs_dir = out.join("outputs");
    let results: Vec<jurisum::extract::DocSummary> =
        jurisum::par::try_map_ordered(&target_test.pairs, |pair| {
            let doc = split_sentences(&pair.document);
            let summary = predict_summary(&trained.model, &doc, &budget)?;
            Ok::<_, jurisum::adapt::AdaptError>(jurisum::extract::DocSummary {
                id: pair.id.clone(),
                summary,
            })
        })?;
    write_summaries(&outputs_dir, &results)?;

    // 5. evaluate
    let outputs = read_outputs(&outputs_dir, &target_test)?;
    let report = evaluate_run(&outputs, &target_test)?;
    write_eval_outputs(&report, &out.join("eval.json"), Some(&out.join("eval.csv")))?;
    r.write_run_json("pipeline", &out, true)?;
    println!(
        "pipeline complete: ROUGE-L mean F1 = {:.4} over {} target documents",
        report.mean.f1,
        report.per_doc.len()
    );
    Ok(())
}
