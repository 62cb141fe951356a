//! End-to-end orchestration: LDA, soft partitioning, global and per-topic
//! CBOW spaces, anchor selection, alignment and optional smoothing.
//!
//! Every intermediate artifact is a plain-text file in the output directory
//! and a `manifest.json` records the SHA-256 digest of each stage's inputs
//! and outputs. A rerun skips any stage whose parameters and digests are
//! unchanged.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use log::{info, warn};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::alignment::{build_unified, UnifiedModel};
use crate::anchors::{anchor_scores, select_anchors, AnchorSet};
use crate::corpus::{build_vocab, encode, write_sentences, RawCorpus, Vocabulary};
use crate::derive_seed;
use crate::embeddings::{train_cbow, CbowParams, EmbeddingMatrix};
use crate::error::{Error, Result};
use crate::smoothing::{smooth_model, GmmParams};
use crate::topics::{partition_corpus, train_lda, LdaParams, TopicModel};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const LDA_FILE: &str = "lda.model";
pub const GLOBAL_FILE: &str = "global.vec";
pub const ANCHORS_FILE: &str = "anchors.tsv";
pub const UNIFIED_FILE: &str = "unified.model";
pub const SMOOTHED_FILE: &str = "smoothed.model";

pub fn sub_corpus_file(k: usize) -> String {
    format!("sub_{k:03}.txt")
}

pub fn topic_space_file(k: usize) -> String {
    format!("tdsm_{k:03}.vec")
}

/// Every setting of a pipeline run. Defaults follow the reference setup
/// (50 topics, threshold 0.1, 300 dimensions, window 5, 5000 anchors).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub corpus: PathBuf,
    pub output_dir: PathBuf,
    pub min_count: u64,
    pub topics: usize,
    /// `None` means `50 / topics`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub lda_iterations: usize,
    pub infer_iterations: usize,
    pub threshold: f64,
    pub dim: usize,
    pub window: usize,
    pub negative: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub anchors: usize,
    pub block_rows: usize,
    /// Gaussian components per word; `None` disables smoothing.
    pub components: Option<usize>,
    pub gmm_max_iters: usize,
    pub gmm_tol: f64,
    pub lda_seed: u64,
    pub partition_seed: u64,
    pub embed_seed: u64,
    pub smooth_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus: PathBuf::from("corpus.txt"),
            output_dir: PathBuf::from("out"),
            min_count: 5,
            topics: 50,
            alpha: None,
            beta: 0.01,
            lda_iterations: 1000,
            infer_iterations: crate::topics::DEFAULT_INFER_ITERATIONS,
            threshold: 0.1,
            dim: 300,
            window: 5,
            negative: 5,
            epochs: 5,
            learning_rate: 0.025,
            anchors: crate::anchors::DEFAULT_ANCHOR_COUNT,
            block_rows: crate::anchors::DEFAULT_BLOCK_ROWS,
            components: None,
            gmm_max_iters: 200,
            gmm_tol: 1e-6,
            lda_seed: 1,
            partition_seed: 2,
            embed_seed: 3,
            smooth_seed: 4,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("invalid value {value:?} for {key}")))
}

fn parse_optional<T: std::str::FromStr>(key: &str, value: &str, none: &str) -> Result<Option<T>> {
    if value.eq_ignore_ascii_case(none) {
        Ok(None)
    } else {
        parse_value(key, value).map(Some)
    }
}

impl PipelineConfig {
    /// Sets one field from its textual form. Keys use `snake_case` or
    /// `kebab-case`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let key = key.trim().replace('-', "_");
        match key.as_str() {
            "corpus" => self.corpus = PathBuf::from(value),
            "output_dir" => self.output_dir = PathBuf::from(value),
            "min_count" => self.min_count = parse_value(&key, value)?,
            "topics" => self.topics = parse_value(&key, value)?,
            "alpha" => self.alpha = parse_optional(&key, value, "auto")?,
            "beta" => self.beta = parse_value(&key, value)?,
            "lda_iterations" => self.lda_iterations = parse_value(&key, value)?,
            "infer_iterations" => self.infer_iterations = parse_value(&key, value)?,
            "threshold" => self.threshold = parse_value(&key, value)?,
            "dim" => self.dim = parse_value(&key, value)?,
            "window" => self.window = parse_value(&key, value)?,
            "negative" => self.negative = parse_value(&key, value)?,
            "epochs" => self.epochs = parse_value(&key, value)?,
            "learning_rate" => self.learning_rate = parse_value(&key, value)?,
            "anchors" => self.anchors = parse_value(&key, value)?,
            "block_rows" => self.block_rows = parse_value(&key, value)?,
            "components" => self.components = parse_optional(&key, value, "off")?,
            "gmm_max_iters" => self.gmm_max_iters = parse_value(&key, value)?,
            "gmm_tol" => self.gmm_tol = parse_value(&key, value)?,
            "lda_seed" => self.lda_seed = parse_value(&key, value)?,
            "partition_seed" => self.partition_seed = parse_value(&key, value)?,
            "embed_seed" => self.embed_seed = parse_value(&key, value)?,
            "smooth_seed" => self.smooth_seed = parse_value(&key, value)?,
            "seed" => {
                let s: u64 = parse_value(&key, value)?;
                self.lda_seed = derive_seed(s, 0);
                self.partition_seed = derive_seed(s, 1);
                self.embed_seed = derive_seed(s, 2);
                self.smooth_seed = derive_seed(s, 3);
            }
            other => return Err(Error::InvalidArgument(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Parses the flat `key = value` format; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        let mut errors = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => {
                    if let Err(e) = cfg.set(k, v) {
                        errors.push(format!("line {}: {e}", i + 1));
                    }
                }
                None => errors.push(format!("line {}: expected key = value", i + 1)),
            }
        }
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errors))
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let opt = |v: Option<String>, none: &str| v.unwrap_or_else(|| none.to_string());
        [
            ("corpus", self.corpus.display().to_string()),
            ("output_dir", self.output_dir.display().to_string()),
            ("min_count", self.min_count.to_string()),
            ("topics", self.topics.to_string()),
            ("alpha", opt(self.alpha.map(|a| a.to_string()), "auto")),
            ("beta", self.beta.to_string()),
            ("lda_iterations", self.lda_iterations.to_string()),
            ("infer_iterations", self.infer_iterations.to_string()),
            ("threshold", self.threshold.to_string()),
            ("dim", self.dim.to_string()),
            ("window", self.window.to_string()),
            ("negative", self.negative.to_string()),
            ("epochs", self.epochs.to_string()),
            ("learning_rate", self.learning_rate.to_string()),
            ("anchors", self.anchors.to_string()),
            ("block_rows", self.block_rows.to_string()),
            ("components", opt(self.components.map(|c| c.to_string()), "off")),
            ("gmm_max_iters", self.gmm_max_iters.to_string()),
            ("gmm_tol", self.gmm_tol.to_string()),
            ("lda_seed", self.lda_seed.to_string()),
            ("partition_seed", self.partition_seed.to_string()),
            ("embed_seed", self.embed_seed.to_string()),
            ("smooth_seed", self.smooth_seed.to_string()),
        ]
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
    }

    pub fn alpha_value(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.topics.max(1) as f64)
    }

    /// Range-checks every field. Returns warnings on success and the full
    /// list of problems on failure.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut errors = Vec::new();
        let mut check = |ok: bool, msg: String| {
            if !ok {
                errors.push(msg);
            }
        };
        check(self.topics >= 1, format!("topics: must be >= 1, got {}", self.topics));
        check(
            self.threshold > 0.0 && self.threshold < 1.0,
            format!("threshold: must lie in (0, 1), got {}", self.threshold),
        );
        check(self.dim >= 2, format!("dim: must be >= 2, got {}", self.dim));
        check(self.anchors >= 1, format!("anchors: must be >= 1, got {}", self.anchors));
        check(self.min_count >= 1, format!("min_count: must be >= 1, got {}", self.min_count));
        check(self.window >= 1, format!("window: must be >= 1, got {}", self.window));
        check(self.lda_iterations >= 1, format!("lda_iterations: must be >= 1, got {}", self.lda_iterations));
        check(self.infer_iterations >= 1, format!("infer_iterations: must be >= 1, got {}", self.infer_iterations));
        check(self.beta > 0.0, format!("beta: must be positive, got {}", self.beta));
        check(
            self.alpha.is_none_or(|a| a > 0.0),
            format!("alpha: must be positive, got {:?}", self.alpha),
        );
        check(self.learning_rate > 0.0, format!("learning_rate: must be positive, got {}", self.learning_rate));
        check(self.block_rows >= 1, format!("block_rows: must be >= 1, got {}", self.block_rows));
        if let Some(n) = self.components {
            check(n >= 1, format!("components: must be >= 1 when smoothing, got {n}"));
        }
        check(self.gmm_tol >= 0.0, format!("gmm_tol: must be non-negative, got {}", self.gmm_tol));
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }
        let mut warnings = Vec::new();
        if self.anchors > crate::anchors::DEFAULT_ANCHOR_COUNT {
            warnings.push(format!(
                "anchors: {} exceeds typical shared vocabularies; the anchor stage fails if it exceeds the actual one",
                self.anchors
            ));
        }
        if self.anchors < self.dim {
            warnings.push(format!(
                "anchors: {} anchors underdetermine a {}x{} orthogonal map",
                self.anchors, self.dim, self.dim
            ));
        }
        Ok(warnings)
    }
}

pub fn sha256_file(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub params: Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub skipped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: PipelineConfig,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub stages: Vec<StageRecord>,
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RunManifest {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, serde_json::to_string_pretty(self)? + "\n").map_err(|e| Error::io(path, e))
    }

    /// Recomputes every recorded digest. Relative paths resolve against
    /// `base`. Returns one message per missing or modified file.
    pub fn verify(&self, base: &Path) -> Vec<String> {
        let mut problems = Vec::new();
        for stage in &self.stages {
            for f in stage.inputs.iter().chain(&stage.outputs) {
                let p = resolve(base, &f.path);
                match sha256_file(&p) {
                    Ok(d) if d == f.sha256 => {}
                    Ok(_) => problems.push(format!("{}: {} was modified", stage.name, f.path)),
                    Err(_) => problems.push(format!("{}: {} is missing", stage.name, f.path)),
                }
            }
        }
        problems
    }

    /// Reads a manifest and fails unless every digest still matches.
    pub fn read_verified(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let manifest = Self::read(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let problems = manifest.verify(base);
        if problems.is_empty() {
            Ok(manifest)
        } else {
            Err(Error::Config(problems))
        }
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }
}

fn resolve(base: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

struct Runner<'a> {
    dir: &'a Path,
    previous: Option<RunManifest>,
    records: Vec<StageRecord>,
}

impl Runner<'_> {
    fn digests(&self, paths: &[String]) -> Result<Vec<FileDigest>> {
        paths
            .iter()
            .map(|p| {
                Ok(FileDigest {
                    path: p.clone(),
                    sha256: sha256_file(resolve(self.dir, p))?,
                })
            })
            .collect()
    }

    /// Runs `body` unless the previous manifest shows the same stage with
    /// identical parameters, inputs and intact outputs.
    fn stage<F>(&mut self, name: &str, params: Value, inputs: Vec<String>, outputs: Vec<String>, body: F) -> Result<()>
    where
        F: FnOnce() -> Result<()>,
    {
        let wrap = |e: Error| Error::Stage {
            stage: name.to_string(),
            source: Box::new(e),
        };
        let input_digests = self.digests(&inputs).map_err(wrap)?;
        if let Some(prev) = self.previous.as_ref().and_then(|m| m.stage(name)) {
            let outputs_intact = prev.outputs.iter().map(|f| &f.path).eq(outputs.iter())
                && prev
                    .outputs
                    .iter()
                    .all(|f| sha256_file(resolve(self.dir, &f.path)).is_ok_and(|d| d == f.sha256));
            if prev.params == params && prev.inputs == input_digests && outputs_intact {
                info!("stage {name}: up to date, skipped");
                let mut rec = prev.clone();
                rec.skipped = true;
                self.records.push(rec);
                return Ok(());
            }
        }
        info!("stage {name}: running");
        body().map_err(wrap)?;
        let output_digests = self.digests(&outputs).map_err(wrap)?;
        self.records.push(StageRecord {
            name: name.to_string(),
            params,
            inputs: input_digests,
            outputs: output_digests,
            skipped: false,
        });
        Ok(())
    }
}

fn load_corpus_and_vocab(config: &PipelineConfig) -> Result<(RawCorpus, Vocabulary)> {
    let raw = RawCorpus::read(&config.corpus)?;
    let vocab = build_vocab(&raw, config.min_count)?;
    Ok((raw, vocab))
}

fn cbow_params(config: &PipelineConfig, seed: u64) -> CbowParams {
    CbowParams {
        dim: config.dim,
        window: config.window,
        negative: config.negative,
        epochs: config.epochs,
        learning_rate: config.learning_rate,
        seed,
    }
}

/// Seed of topic space `k`; the global space uses `embed_seed` itself.
pub fn topic_embed_seed(config: &PipelineConfig, k: usize) -> u64 {
    derive_seed(config.embed_seed, k as u64 + 1)
}

/// Trains a CBOW space on a corpus file (one sentence per line; blank lines
/// separate documents).
pub fn embed_file(path: &Path, min_count: u64, params: &CbowParams) -> Result<EmbeddingMatrix> {
    let raw = RawCorpus::read(path)?;
    let vocab = build_vocab(&raw, min_count)?;
    train_cbow(&encode(&raw, &vocab), &vocab, params)
}

/// Selects anchors over the vocabulary shared by the global and all topic
/// spaces. Returns the shared vocabulary with the anchor set.
pub fn compute_anchors(
    global: &EmbeddingMatrix,
    topic_spaces: &[EmbeddingMatrix],
    count: usize,
    block_rows: usize,
) -> Result<(Vocabulary, AnchorSet)> {
    let mut vocabs: Vec<&Vocabulary> = vec![global.vocab()];
    vocabs.extend(topic_spaces.iter().map(|x| x.vocab()));
    let shared = crate::corpus::intersect_vocabs(&vocabs)?;
    let global_v = global.restrict(&shared)?.normalize_rows()?;
    let topics_v = topic_spaces
        .iter()
        .map(|x| x.restrict(&shared)?.normalize_rows())
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&EmbeddingMatrix> = topics_v.iter().collect();
    let scores = anchor_scores(&refs, &global_v, block_rows)?;
    let anchors = select_anchors(&scores, count).map_err(|_| {
        Error::InvalidArgument(format!(
            "requested {count} anchors but only {} words are shared by every space",
            shared.len()
        ))
    })?;
    Ok((shared, anchors))
}

/// Runs every stage, reusing up-to-date results, and writes the manifest.
pub fn run_pipeline(config: &PipelineConfig) -> Result<RunManifest> {
    for w in config.validate()? {
        warn!("{w}");
    }
    let started = now_unix();
    let dir = config.output_dir.as_path();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let corpus_path = fs::canonicalize(&config.corpus).map_err(|e| Error::io(&config.corpus, e))?;
    let corpus_str = corpus_path.display().to_string();
    let manifest_path = dir.join(MANIFEST_FILE);
    let previous = RunManifest::read(&manifest_path).ok();
    let mut runner = Runner {
        dir,
        previous,
        records: Vec::new(),
    };
    let k = config.topics;
    let lda_vocab_file = format!("{LDA_FILE}.vocab.tsv");
    let subs: Vec<String> = (0..k).map(sub_corpus_file).collect();
    let tdsms: Vec<String> = (0..k).map(topic_space_file).collect();

    runner.stage(
        "lda-train",
        json!({"min_count": config.min_count, "topics": k, "alpha": config.alpha_value(),
               "beta": config.beta, "iterations": config.lda_iterations, "seed": config.lda_seed}),
        vec![corpus_str.clone()],
        vec![LDA_FILE.into(), lda_vocab_file.clone()],
        || {
            let (raw, vocab) = load_corpus_and_vocab(config)?;
            let params = LdaParams {
                topics: k,
                alpha: config.alpha_value(),
                beta: config.beta,
                iterations: config.lda_iterations,
                seed: config.lda_seed,
            };
            train_lda(&encode(&raw, &vocab), &vocab, &params)?.write(dir.join(LDA_FILE))
        },
    )?;

    runner.stage(
        "partition",
        json!({"threshold": config.threshold, "infer_iterations": config.infer_iterations,
               "seed": config.partition_seed}),
        vec![corpus_str.clone(), LDA_FILE.into(), lda_vocab_file.clone()],
        subs.clone(),
        || {
            let lda = TopicModel::read(dir.join(LDA_FILE))?;
            let raw = RawCorpus::read(&config.corpus)?;
            let corpus = encode(&raw, lda.vocab());
            let part = partition_corpus(&lda, &corpus, config.threshold, config.infer_iterations, config.partition_seed)?;
            for (k, sub) in part.sub_corpora.iter().enumerate() {
                info!("topic {k}: {} sentences", sub.len());
                write_sentences(dir.join(sub_corpus_file(k)), sub, lda.vocab())?;
            }
            Ok(())
        },
    )?;

    let embed_params = json!({"min_count": config.min_count, "dim": config.dim, "window": config.window,
        "negative": config.negative, "epochs": config.epochs, "learning_rate": config.learning_rate,
        "seed": config.embed_seed});
    runner.stage("embed-global", embed_params.clone(), vec![corpus_str.clone()], vec![GLOBAL_FILE.into()], || {
        embed_file(&config.corpus, config.min_count, &cbow_params(config, config.embed_seed))?
            .write_text(dir.join(GLOBAL_FILE))
    })?;

    runner.stage("embed-topics", embed_params, subs.clone(), tdsms.clone(), || {
        for t in 0..k {
            let params = cbow_params(config, topic_embed_seed(config, t));
            let x = embed_file(&dir.join(sub_corpus_file(t)), config.min_count, &params).map_err(|e| {
                Error::InvalidArgument(format!("topic {t}: {e}"))
            })?;
            x.write_text(dir.join(topic_space_file(t)))?;
        }
        Ok(())
    })?;

    let spaces_in: Vec<String> = std::iter::once(GLOBAL_FILE.to_string()).chain(tdsms.iter().cloned()).collect();
    runner.stage(
        "anchors",
        json!({"count": config.anchors}),
        spaces_in.clone(),
        vec![ANCHORS_FILE.into()],
        || {
            let global = EmbeddingMatrix::read_text(dir.join(GLOBAL_FILE))?;
            let spaces = read_spaces(dir, k)?;
            let (shared, anchors) = compute_anchors(&global, &spaces, config.anchors, config.block_rows)?;
            info!("{} shared words, {} anchors", shared.len(), anchors.len());
            anchors.write(dir.join(ANCHORS_FILE), &shared)
        },
    )?;

    let align_in: Vec<String> = std::iter::once(ANCHORS_FILE.to_string()).chain(spaces_in).collect();
    runner.stage("align", json!({}), align_in, vec![UNIFIED_FILE.into()], || {
        let global = EmbeddingMatrix::read_text(dir.join(GLOBAL_FILE))?;
        let spaces = read_spaces(dir, k)?;
        let anchors = AnchorSet::read_words(dir.join(ANCHORS_FILE))?;
        let words: Vec<&str> = anchors.iter().map(|(w, _)| w.as_str()).collect();
        let (mut model, maps) = build_unified(&spaces, &global, &words)?;
        for m in &maps {
            info!("topic {}: orthogonality error {:.2e}", m.topic, m.orthogonality_error());
        }
        model.meta.seeds = lineage(config);
        model.write(dir.join(UNIFIED_FILE))
    })?;

    if let Some(n) = config.components {
        runner.stage(
            "smooth",
            json!({"components": n, "seed": config.smooth_seed, "max_iters": config.gmm_max_iters,
                   "tol": config.gmm_tol}),
            vec![UNIFIED_FILE.into()],
            vec![SMOOTHED_FILE.into()],
            || {
                let mut model = UnifiedModel::read(dir.join(UNIFIED_FILE))?;
                let params = GmmParams {
                    seed: config.smooth_seed,
                    max_iters: config.gmm_max_iters,
                    tol: config.gmm_tol,
                };
                let smoothed = smooth_model(&model, n, &params)?;
                model.set_smoothed(smoothed)?;
                model.meta.seeds.insert("smooth".into(), config.smooth_seed);
                model.write(dir.join(SMOOTHED_FILE))
            },
        )?;
    }

    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        started_unix: started,
        finished_unix: now_unix(),
        stages: runner.records,
    };
    manifest.write(&manifest_path)?;
    Ok(manifest)
}

fn read_spaces(dir: &Path, k: usize) -> Result<Vec<EmbeddingMatrix>> {
    (0..k).map(|t| EmbeddingMatrix::read_text(dir.join(topic_space_file(t)))).collect()
}

fn lineage(config: &PipelineConfig) -> BTreeMap<String, u64> {
    BTreeMap::from([
        ("lda".to_string(), config.lda_seed),
        ("partition".to_string(), config.partition_seed),
        ("embed".to_string(), config.embed_seed),
    ])
}
