//! LDA topic model trained with collapsed Gibbs sampling, per-sentence
//! posterior inference with the topic-word distributions held fixed, and
//! soft partitioning of a corpus into topic sub-corpora.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Sentence, Vocabulary};
use crate::error::{Error, Result};
use crate::linalg::argmax;
use crate::{derive_seed, rng_from_seed};

#[derive(Clone, Debug, PartialEq)]
pub struct LdaParams {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaParams {
    /// Standard heuristics: `alpha = 50 / K`, `beta = 0.01`, 1000 sweeps.
    pub fn new(topics: usize) -> Self {
        LdaParams {
            topics,
            alpha: 50.0 / topics.max(1) as f64,
            beta: 0.01,
            iterations: 1000,
            seed: 0,
        }
    }
}

pub const DEFAULT_INFER_ITERATIONS: usize = 50;

/// K topic-word distributions over a vocabulary plus their Dirichlet priors.
#[derive(Clone, Debug, PartialEq)]
pub struct TopicModel {
    num_topics: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
    /// Row-major K x |V|.
    phi: Vec<f64>,
    vocab: Vocabulary,
}

/// A length-K probability vector over topics.
#[derive(Clone, Debug, PartialEq)]
pub struct TopicPosterior(pub Vec<f64>);

impl TopicPosterior {
    pub fn uniform(k: usize) -> Self {
        TopicPosterior(vec![1.0 / k as f64; k])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Draws an index with probability proportional to `weights`.
fn sample_index<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        u -= w;
        if u < 0.0 {
            return i;
        }
    }
    // rounding left u marginally non-negative; take the last positive weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Trains LDA on the documents of `corpus` (sentences of a document are
/// concatenated) by collapsed Gibbs sampling. `phi` is estimated from the
/// final sample.
pub fn train_lda(corpus: &Corpus, vocab: &Vocabulary, params: &LdaParams) -> Result<TopicModel> {
    let k = params.topics;
    if k < 1 {
        return Err(Error::InvalidArgument("number of topics must be at least 1".into()));
    }
    if params.iterations < 1 {
        return Err(Error::InvalidArgument("iterations must be at least 1".into()));
    }
    if !(params.alpha > 0.0 && params.beta > 0.0) {
        return Err(Error::InvalidArgument("alpha and beta must be positive".into()));
    }
    let docs: Vec<Vec<usize>> = corpus
        .documents
        .iter()
        .map(|d| d.tokens().map(|t| t as usize).collect::<Vec<_>>())
        .filter(|d: &Vec<usize>| !d.is_empty())
        .collect();
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let v = vocab.len();
    if let Some(&bad) = docs.iter().flatten().find(|&&w| w >= v) {
        return Err(Error::InvalidArgument(format!("token id {bad} outside vocabulary of size {v}")));
    }

    let mut rng = rng_from_seed(params.seed);
    let mut doc_topic = vec![0u32; docs.len() * k];
    let mut topic_word = vec![0u32; k * v];
    let mut topic_total = vec![0u32; k];
    let mut assignments: Vec<Vec<usize>> = Vec::with_capacity(docs.len());
    for (d, doc) in docs.iter().enumerate() {
        let z: Vec<usize> = doc.iter().map(|_| rng.random_range(0..k)).collect();
        for (&w, &t) in doc.iter().zip(&z) {
            doc_topic[d * k + t] += 1;
            topic_word[t * v + w] += 1;
            topic_total[t] += 1;
        }
        assignments.push(z);
    }

    let vbeta = v as f64 * params.beta;
    let mut weights = vec![0.0; k];
    for _ in 0..params.iterations {
        for (d, doc) in docs.iter().enumerate() {
            let z = &mut assignments[d];
            for (i, &w) in doc.iter().enumerate() {
                let old = z[i];
                doc_topic[d * k + old] -= 1;
                topic_word[old * v + w] -= 1;
                topic_total[old] -= 1;
                for (t, weight) in weights.iter_mut().enumerate() {
                    *weight = (doc_topic[d * k + t] as f64 + params.alpha)
                        * (topic_word[t * v + w] as f64 + params.beta)
                        / (topic_total[t] as f64 + vbeta);
                }
                let new = sample_index(&mut rng, &weights);
                z[i] = new;
                doc_topic[d * k + new] += 1;
                topic_word[new * v + w] += 1;
                topic_total[new] += 1;
            }
        }
    }

    let mut phi = vec![0.0; k * v];
    for t in 0..k {
        let denom = topic_total[t] as f64 + vbeta;
        for w in 0..v {
            phi[t * v + w] = (topic_word[t * v + w] as f64 + params.beta) / denom;
        }
    }
    Ok(TopicModel {
        num_topics: k,
        alpha: params.alpha,
        beta: params.beta,
        seed: params.seed,
        phi,
        vocab: vocab.clone(),
    })
}

impl TopicModel {
    /// Assembles a model from explicit topic-word rows; each row is
    /// renormalized to sum to one.
    pub fn from_phi(rows: Vec<Vec<f64>>, vocab: Vocabulary, alpha: f64, beta: f64) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidArgument("at least one topic required".into()));
        }
        if !(alpha > 0.0 && beta > 0.0) {
            return Err(Error::InvalidArgument("alpha and beta must be positive".into()));
        }
        let mut phi = Vec::with_capacity(k * vocab.len());
        for row in rows {
            if row.len() != vocab.len() {
                return Err(Error::DimensionMismatch {
                    expected: vocab.len(),
                    found: row.len(),
                });
            }
            let sum: f64 = row.iter().sum();
            if row.iter().any(|&p| p.is_nan() || p < 0.0) || sum.is_nan() || sum <= 0.0 {
                return Err(Error::InvalidArgument("topic rows must be non-negative with positive mass".into()));
            }
            phi.extend(row.iter().map(|p| p / sum));
        }
        Ok(TopicModel {
            num_topics: k,
            alpha,
            beta,
            seed: 0,
            phi,
            vocab,
        })
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn topic(&self, k: usize) -> &[f64] {
        let v = self.vocab.len();
        &self.phi[k * v..(k + 1) * v]
    }

    pub fn prob(&self, k: usize, word: usize) -> f64 {
        self.phi[k * self.vocab.len() + word]
    }

    /// The `n` most probable words of topic `k`.
    pub fn top_words(&self, k: usize, n: usize) -> Vec<(&str, f64)> {
        let row = self.topic(k);
        let mut ids: Vec<usize> = (0..row.len()).collect();
        ids.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        ids.into_iter().take(n).map(|i| (self.vocab.word(i), row[i])).collect()
    }

    /// Encodes token strings against the model vocabulary, dropping unknowns.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Sentence {
        crate::corpus::encode_sentence(tokens, &self.vocab)
    }

    /// Infers the topic mixture of a token sequence by Gibbs sampling with
    /// `phi` fixed. The returned posterior is `(m_k + alpha) / (n + K alpha)`
    /// averaged over the last half of the sweeps; empty input gives the
    /// uniform distribution.
    pub fn infer_posterior(&self, tokens: &[u32], iterations: usize, seed: u64) -> TopicPosterior {
        let k = self.num_topics;
        if tokens.is_empty() || k == 1 {
            return TopicPosterior::uniform(k);
        }
        let iterations = iterations.max(1);
        let mut rng = rng_from_seed(seed);
        let mut counts = vec![0usize; k];
        let mut z: Vec<usize> = tokens
            .iter()
            .map(|_| {
                let t = rng.random_range(0..k);
                counts[t] += 1;
                t
            })
            .collect();
        let burn_in = iterations / 2;
        let denom = tokens.len() as f64 + k as f64 * self.alpha;
        let mut acc = vec![0.0; k];
        let mut weights = vec![0.0; k];
        for it in 0..iterations {
            for (i, &w) in tokens.iter().enumerate() {
                counts[z[i]] -= 1;
                for (t, weight) in weights.iter_mut().enumerate() {
                    *weight = (counts[t] as f64 + self.alpha) * self.prob(t, w as usize);
                }
                let t = sample_index(&mut rng, &weights);
                z[i] = t;
                counts[t] += 1;
            }
            if it >= burn_in {
                for (a, &c) in acc.iter_mut().zip(&counts) {
                    *a += (c as f64 + self.alpha) / denom;
                }
            }
        }
        let sweeps = (iterations - burn_in) as f64;
        let mut p: Vec<f64> = acc.into_iter().map(|a| a / sweeps).collect();
        let sum: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= sum);
        TopicPosterior(p)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let vocab_name = vocab_file_name(path);
        self.vocab.write(path.with_file_name(&vocab_name))?;
        let header = ModelHeader {
            topics: self.num_topics,
            alpha: self.alpha,
            beta: self.beta,
            vocab_size: self.vocab.len(),
            seed: self.seed,
            vocab: vocab_name,
        };
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(out, "{}", serde_json::to_string(&header)?).map_err(io)?;
        for t in 0..self.num_topics {
            let row: Vec<String> = self.topic(t).iter().map(|p| p.to_string()).collect();
            writeln!(out, "{}", row.join(" ")).map_err(io)?;
        }
        out.flush().map_err(io)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines();
        let header: ModelHeader = serde_json::from_str(lines.next().unwrap_or(""))
            .map_err(|e| Error::parse(path, 1, e.to_string()))?;
        let vocab_path: PathBuf = path.with_file_name(&header.vocab);
        let vocab = Vocabulary::read(&vocab_path)?;
        if vocab.len() != header.vocab_size {
            return Err(Error::parse(path, 1, format!(
                "header declares {} words but {} has {}",
                header.vocab_size,
                vocab_path.display(),
                vocab.len()
            )));
        }
        let mut phi = Vec::with_capacity(header.topics * vocab.len());
        let mut rows = 0;
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let before = phi.len();
            for field in line.split_whitespace() {
                phi.push(field.parse::<f64>().map_err(|e| Error::parse(path, i + 2, e.to_string()))?);
            }
            if phi.len() - before != vocab.len() {
                return Err(Error::parse(path, i + 2, format!(
                    "expected {} probabilities, found {}",
                    vocab.len(),
                    phi.len() - before
                )));
            }
            rows += 1;
        }
        if rows != header.topics {
            return Err(Error::parse(path, 1, format!("expected {} topics, found {rows}", header.topics)));
        }
        Ok(TopicModel {
            num_topics: header.topics,
            alpha: header.alpha,
            beta: header.beta,
            seed: header.seed,
            phi,
            vocab,
        })
    }
}

fn vocab_file_name(model_path: &Path) -> String {
    let name = model_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "lda".into());
    format!("{name}.vocab.tsv")
}

#[derive(Serialize, Deserialize)]
struct ModelHeader {
    topics: usize,
    alpha: f64,
    beta: f64,
    vocab_size: usize,
    seed: u64,
    vocab: String,
}

/// Topics a sentence joins: every topic above `threshold`, or the argmax
/// topic (lowest index on ties) when none qualifies.
pub fn topics_above(posterior: &TopicPosterior, threshold: f64) -> Vec<usize> {
    let chosen: Vec<usize> = posterior
        .probs()
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p > threshold)
        .map(|(k, _)| k)
        .collect();
    if chosen.is_empty() {
        argmax(posterior.probs()).into_iter().collect()
    } else {
        chosen
    }
}

/// Soft-partitioned corpus: one sentence list per topic.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Partition {
    pub sub_corpora: Vec<Vec<Sentence>>,
}

/// Infers a posterior for every sentence and copies it into each topic
/// sub-corpus whose posterior exceeds `threshold`. Sentence `i` (in corpus
/// order) is inferred with a seed derived from `(seed, i)`, so the result
/// does not depend on scheduling.
pub fn partition_corpus(
    model: &TopicModel,
    corpus: &Corpus,
    threshold: f64,
    iterations: usize,
    seed: u64,
) -> Result<Partition> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidArgument(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    let sentences: Vec<&Sentence> = corpus.sentences().collect();
    let memberships: Vec<Vec<usize>> = sentences
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let posterior = model.infer_posterior(s, iterations, derive_seed(seed, i as u64));
            topics_above(&posterior, threshold)
        })
        .collect();
    let mut sub_corpora = vec![Vec::new(); model.num_topics()];
    for (sentence, topics) in sentences.into_iter().zip(memberships) {
        for k in topics {
            sub_corpora[k].push(sentence.clone());
        }
    }
    Ok(Partition { sub_corpora })
}
