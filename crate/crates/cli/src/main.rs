use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use topicvec::alignment::{
    build_unified, cross_topic_similarity, pca_export, topic_neighbors, write_neighbors_csv, write_pca_csv,
    UnifiedModel,
};
use topicvec::corpus::{build_vocab, encode, tokenize, write_sentences, RawCorpus};
use topicvec::embeddings::{train_cbow_with_report, CbowParams, EmbeddingMatrix};
use topicvec::evaluation::{
    doc_features, parse_scws, read_feature_csv, run_scws, write_feature_csv, ContextScorer, FeatureMode,
    FeatureRecord, GlobalBackoff, LinearClassifier, Metric, ScwsReport, SenseModel, SmoothedSenses, TopicSenses,
    TrainParams,
};
use topicvec::pipeline::{compute_anchors, run_pipeline, PipelineConfig, RunManifest};
use topicvec::smoothing::{smooth_model, GmmParams};
use topicvec::topics::{partition_corpus, train_lda, LdaParams, TopicModel, DEFAULT_INFER_ITERATIONS};

const OUTPUT_ENV: &str = "TOPICVEC_OUTPUT_DIR";

/// Topic-specific word embeddings: LDA partitioning, per-topic CBOW spaces
/// aligned into one global space, and contextual similarity evaluation.
#[derive(Parser)]
#[command(name = "topicvec", version)]
struct Cli {
    /// Random seed for the subcommand's stochastic steps.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train an LDA topic model with collapsed Gibbs sampling.
    LdaTrain(LdaTrainArgs),
    /// Split a corpus into overlapping per-topic sub-corpora.
    Partition(PartitionArgs),
    /// Train CBOW embeddings on a corpus.
    EmbedTrain(EmbedTrainArgs),
    /// Select semantic anchors shared by the global and topic spaces.
    Anchors(AnchorsArgs),
    /// Map every topic space into the global space.
    Align(AlignArgs),
    /// Replace each word's topic vectors with GMM component means.
    Smooth(SmoothArgs),
    /// Contextual word similarity on an SCWS-format file.
    EvalScws(EvalScwsArgs),
    /// Build document or sentence-pair feature vectors.
    Features(FeaturesArgs),
    /// Train and evaluate a linear classifier on feature files.
    Classify(ClassifyArgs),
    /// Inspect a unified model.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Run or validate the whole pipeline.
    #[command(subcommand)]
    Pipeline(PipelineCommand),
}

#[derive(Args)]
struct LdaTrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 50)]
    topics: usize,
    /// Defaults to 50 / topics.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    beta: f64,
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    #[arg(long, default_value_t = 5)]
    min_count: u64,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// LDA model written by `lda-train`.
    #[arg(long)]
    model: PathBuf,
    #[arg(long, env = OUTPUT_ENV)]
    output_dir: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    #[arg(long, default_value_t = DEFAULT_INFER_ITERATIONS)]
    infer_iterations: usize,
}

#[derive(Args)]
struct EmbedTrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 300)]
    dim: usize,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 5)]
    negative: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    learning_rate: f64,
    #[arg(long, default_value_t = 5)]
    min_count: u64,
}

#[derive(Args)]
struct SpacesArgs {
    /// Global embedding file.
    #[arg(long)]
    global: PathBuf,
    /// Glob matching the topic embedding files; sorted paths give topic ids.
    #[arg(long)]
    topics: String,
}

#[derive(Args)]
struct AnchorsArgs {
    #[command(flatten)]
    spaces: SpacesArgs,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 5000)]
    count: usize,
    #[arg(long, default_value_t = 256)]
    block_rows: usize,
}

#[derive(Args)]
struct AlignArgs {
    #[command(flatten)]
    spaces: SpacesArgs,
    /// Anchor file written by `anchors`.
    #[arg(long)]
    anchors: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct SmoothArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    components: usize,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct EvalScwsArgs {
    #[arg(long)]
    data: PathBuf,
    /// Unified model (`align` or `smooth` output).
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    lda: PathBuf,
    /// avgsimc or maxsimc.
    #[arg(long, default_value = "avgsimc")]
    metric: Metric,
    /// Score with the smoothed vectors stored in the model.
    #[arg(long)]
    smoothed: bool,
    /// Global embeddings used for words without topic vectors.
    #[arg(long)]
    backoff_global: Option<PathBuf>,
    /// Leave the target word out of each context's topic inference.
    #[arg(long)]
    exclude_target: bool,
    #[arg(long, default_value_t = DEFAULT_INFER_ITERATIONS)]
    infer_iterations: usize,
    /// Write `id,prediction,gold` rows here.
    #[arg(long)]
    predictions: Option<PathBuf>,
}

#[derive(Args)]
struct FeaturesArgs {
    /// One example per line: `label<TAB>text`, or `label<TAB>text1<TAB>text2`
    /// for sentence pairs.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    lda: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// avgc, avg or maxc.
    #[arg(long, default_value = "avgc")]
    mode: FeatureMode,
    #[arg(long, default_value_t = DEFAULT_INFER_ITERATIONS)]
    infer_iterations: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    train: PathBuf,
    /// Defaults to the training file.
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Nearest neighbours of a word inside one topic.
    Neighbors {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        topic: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// 2-D PCA of the topic vectors of the given words, as CSV.
    Pca {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        words: Vec<String>,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cosine between two topic vectors of one word.
    CrossSim {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum PipelineCommand {
    /// Run every stage, skipping the ones that are up to date.
    Run {
        /// `key = value` configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override one setting, e.g. `--set topics=2`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, env = OUTPUT_ENV)]
        output_dir: Option<PathBuf>,
    },
    /// Check a configuration and, optionally, a run manifest.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Recompute and compare every digest in this manifest.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed;
    match cli.command {
        Command::LdaTrain(a) => lda_train(a, seed.unwrap_or(0)),
        Command::Partition(a) => partition(a, seed.unwrap_or(0)),
        Command::EmbedTrain(a) => embed_train(a, seed.unwrap_or(1)),
        Command::Anchors(a) => anchors(a),
        Command::Align(a) => align(a),
        Command::Smooth(a) => smooth(a, seed.unwrap_or(0)),
        Command::EvalScws(a) => eval_scws(a, seed.unwrap_or(0)),
        Command::Features(a) => features(a, seed.unwrap_or(0)),
        Command::Classify(a) => classify(a, seed.unwrap_or(0)),
        Command::Analyze(a) => analyze(a),
        Command::Pipeline(p) => pipeline(p, seed),
    }
}

fn lda_train(a: LdaTrainArgs, seed: u64) -> Result<()> {
    let raw = RawCorpus::read(&a.corpus)?;
    let vocab = build_vocab(&raw, a.min_count)?;
    let corpus = encode(&raw, &vocab);
    let mut params = LdaParams::new(a.topics);
    if let Some(alpha) = a.alpha {
        params.alpha = alpha;
    }
    params.beta = a.beta;
    params.iterations = a.iterations;
    params.seed = seed;
    info!(
        "training LDA: {} topics, {} words, {} tokens",
        a.topics,
        vocab.len(),
        corpus.num_tokens()
    );
    let model = train_lda(&corpus, &vocab, &params)?;
    model.write(&a.output)?;
    for k in 0..model.num_topics().min(10) {
        let top: Vec<&str> = model.top_words(k, 8).into_iter().map(|(w, _)| w).collect();
        info!("topic {k}: {}", top.join(" "));
    }
    Ok(())
}

fn partition(a: PartitionArgs, seed: u64) -> Result<()> {
    let lda = TopicModel::read(&a.model)?;
    let corpus = encode(&RawCorpus::read(&a.corpus)?, lda.vocab());
    let part = partition_corpus(&lda, &corpus, a.threshold, a.infer_iterations, seed)?;
    fs::create_dir_all(&a.output_dir).with_context(|| format!("creating {}", a.output_dir.display()))?;
    for (k, sub) in part.sub_corpora.iter().enumerate() {
        let path = a.output_dir.join(topicvec::pipeline::sub_corpus_file(k));
        write_sentences(&path, sub, lda.vocab())?;
        println!("{}\t{}", path.display(), sub.len());
    }
    Ok(())
}

fn embed_train(a: EmbedTrainArgs, seed: u64) -> Result<()> {
    let raw = RawCorpus::read(&a.corpus)?;
    let vocab = build_vocab(&raw, a.min_count)?;
    let params = CbowParams {
        dim: a.dim,
        window: a.window,
        negative: a.negative,
        epochs: a.epochs,
        learning_rate: a.learning_rate,
        seed,
    };
    let (x, report) = train_cbow_with_report(&encode(&raw, &vocab), &vocab, &params)?;
    for (e, loss) in report.epoch_loss.iter().enumerate() {
        info!("epoch {}: loss {loss:.4}", e + 1);
    }
    x.write_text(&a.output)?;
    Ok(())
}

fn topic_paths(pattern: &str) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = glob::glob(pattern)
        .with_context(|| format!("bad glob {pattern:?}"))?
        .collect::<std::result::Result<_, _>>()?;
    paths.sort();
    if paths.is_empty() {
        bail!("no topic embedding files match {pattern:?}");
    }
    Ok(paths)
}

fn load_spaces(a: &SpacesArgs) -> Result<(EmbeddingMatrix, Vec<EmbeddingMatrix>)> {
    let global = EmbeddingMatrix::read_text(&a.global)?;
    let spaces = topic_paths(&a.topics)?
        .iter()
        .enumerate()
        .map(|(k, p)| {
            info!("topic {k}: {}", p.display());
            EmbeddingMatrix::read_text(p)
        })
        .collect::<topicvec::Result<Vec<_>>>()?;
    Ok((global, spaces))
}

fn anchors(a: AnchorsArgs) -> Result<()> {
    let (global, spaces) = load_spaces(&a.spaces)?;
    let (shared, anchors) = compute_anchors(&global, &spaces, a.count, a.block_rows)?;
    info!("{} shared words, {} anchors", shared.len(), anchors.len());
    anchors.write(&a.output, &shared)?;
    Ok(())
}

fn align(a: AlignArgs) -> Result<()> {
    let (global, spaces) = load_spaces(&a.spaces)?;
    let anchors = topicvec::anchors::AnchorSet::read_words(&a.anchors)?;
    let words: Vec<&str> = anchors.iter().map(|(w, _)| w.as_str()).collect();
    let (model, maps) = build_unified(&spaces, &global, &words)?;
    for m in &maps {
        info!("topic {}: orthogonality error {:.2e}", m.topic, m.orthogonality_error());
    }
    model.write(&a.output)?;
    println!("{} words, {} topic vectors", model.vocab().len(), model.num_vectors());
    Ok(())
}

fn smooth(a: SmoothArgs, seed: u64) -> Result<()> {
    let mut model = UnifiedModel::read(&a.model)?;
    let params = GmmParams {
        seed,
        max_iters: a.max_iters,
        tol: a.tol,
    };
    let smoothed = smooth_model(&model, a.components, &params)?;
    model.set_smoothed(smoothed)?;
    model.meta.seeds.insert("smooth".into(), seed);
    model.write(&a.output)?;
    Ok(())
}

fn score_scws<M: SenseModel + Sync>(
    model: M,
    lda: &TopicModel,
    a: &EvalScwsArgs,
    pairs: &[topicvec::evaluation::ContextualPair],
    seed: u64,
) -> ScwsReport {
    let mut scorer = ContextScorer::new(model, lda);
    scorer.infer_iterations = a.infer_iterations;
    scorer.seed = seed;
    scorer.exclude_target = a.exclude_target;
    run_scws(pairs, &scorer, a.metric)
}

fn eval_scws(a: EvalScwsArgs, seed: u64) -> Result<()> {
    let pairs = parse_scws(&a.data)?;
    let model = UnifiedModel::read(&a.model)?;
    let lda = TopicModel::read(&a.lda)?;
    if lda.num_topics() != model.num_topics() {
        bail!(
            "LDA model has {} topics but the unified model has {}",
            lda.num_topics(),
            model.num_topics()
        );
    }
    let global = a.backoff_global.as_ref().map(EmbeddingMatrix::read_text).transpose()?;
    let report = match (a.smoothed, &global) {
        (false, None) => score_scws(TopicSenses(&model), &lda, &a, &pairs, seed),
        (false, Some(g)) => score_scws(GlobalBackoff { inner: TopicSenses(&model), global: g }, &lda, &a, &pairs, seed),
        (true, None) => score_scws(SmoothedSenses::new(&model)?, &lda, &a, &pairs, seed),
        (true, Some(g)) => score_scws(
            GlobalBackoff {
                inner: SmoothedSenses::new(&model)?,
                global: g,
            },
            &lda,
            &a,
            &pairs,
            seed,
        ),
    };
    if let Some(path) = &a.predictions {
        let mut out = BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
        writeln!(out, "id,prediction,gold")?;
        for (id, p, g) in &report.predictions {
            writeln!(out, "{id},{p},{g}")?;
        }
        out.flush()?;
    }
    println!("{report}");
    Ok(())
}

fn features(a: FeaturesArgs, seed: u64) -> Result<()> {
    let model = UnifiedModel::read(&a.model)?;
    let lda = TopicModel::read(&a.lda)?;
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let label: usize = fields[0]
            .trim()
            .parse()
            .with_context(|| format!("{}:{}: bad label {:?}", a.input.display(), i + 1, fields[0]))?;
        let feats = |s: &str, stream: u64| {
            let tokens = tokenize(s);
            doc_features(&tokens, &model, &lda, a.infer_iterations, topicvec::derive_seed(seed, stream), a.mode)
        };
        let stream = 2 * i as u64;
        records.push(match fields.len() {
            2 => FeatureRecord {
                label,
                vector: feats(fields[1], stream),
            },
            3 => FeatureRecord::concat(label, &feats(fields[1], stream), &feats(fields[2], stream + 1)),
            n => bail!("{}:{}: expected 2 or 3 tab-separated fields, found {n}", a.input.display(), i + 1),
        });
    }
    write_feature_csv(&a.output, &records)?;
    info!("wrote {} feature rows", records.len());
    Ok(())
}

fn classify(a: ClassifyArgs, seed: u64) -> Result<()> {
    let train = read_feature_csv(&a.train)?;
    let test = match &a.test {
        Some(p) => read_feature_csv(p)?,
        None => train.clone(),
    };
    let params = TrainParams {
        epochs: a.epochs,
        learning_rate: a.learning_rate,
        seed,
    };
    let clf = LinearClassifier::train(&train, &params)?;
    println!("{}", clf.evaluate(&test));
    Ok(())
}

fn analyze(cmd: AnalyzeCommand) -> Result<()> {
    match cmd {
        AnalyzeCommand::Neighbors { model, word, topic, n } => {
            let model = UnifiedModel::read(&model)?;
            let neighbors = topic_neighbors(&model, &word, topic, n)?;
            write_neighbors_csv(&mut io::stdout().lock(), &neighbors)?;
        }
        AnalyzeCommand::Pca { model, words, output } => {
            let model = UnifiedModel::read(&model)?;
            let words: Vec<&str> = words.iter().map(String::as_str).collect();
            let rows = pca_export(&model, &words)?;
            match output {
                Some(p) => {
                    let mut out = BufWriter::new(fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?);
                    write_pca_csv(&mut out, &rows)?;
                    out.flush()?;
                }
                None => write_pca_csv(&mut io::stdout().lock(), &rows)?,
            }
        }
        AnalyzeCommand::CrossSim { model, word, j, k } => {
            let model = UnifiedModel::read(&model)?;
            println!("{}", cross_topic_similarity(&model, &word, j, k)?);
        }
    }
    Ok(())
}

fn load_config(path: Option<&Path>, overrides: &[String], seed: Option<u64>) -> Result<PipelineConfig> {
    let mut cfg = match path {
        Some(p) => PipelineConfig::read(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = seed {
        cfg.set("seed", &s.to_string())?;
    }
    for o in overrides {
        let Some((k, v)) = o.split_once('=') else {
            bail!("override {o:?} is not KEY=VALUE");
        };
        cfg.set(k, v)?;
    }
    Ok(cfg)
}

fn pipeline(cmd: PipelineCommand, seed: Option<u64>) -> Result<()> {
    match cmd {
        PipelineCommand::Run {
            config,
            overrides,
            output_dir,
        } => {
            let mut cfg = load_config(config.as_deref(), &overrides, seed)?;
            if let Some(dir) = output_dir {
                if !overrides.iter().any(|o| o.trim_start().starts_with("output_dir") || o.trim_start().starts_with("output-dir")) {
                    cfg.output_dir = dir;
                }
            }
            let manifest = run_pipeline(&cfg)?;
            for s in &manifest.stages {
                println!("{}\t{}", s.name, if s.skipped { "skipped" } else { "done" });
            }
        }
        PipelineCommand::Validate {
            config,
            overrides,
            manifest,
        } => {
            let cfg = load_config(config.as_deref(), &overrides, seed)?;
            for w in cfg.validate()? {
                warn!("{w}");
            }
            println!("configuration ok");
            if let Some(m) = manifest {
                RunManifest::read_verified(&m)?;
                println!("manifest ok");
            }
        }
    }
    Ok(())
}
