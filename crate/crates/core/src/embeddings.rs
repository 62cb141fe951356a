//! Dense word embeddings: a CBOW trainer with negative sampling, the
//! word2vec text format, row normalization and vocabulary restriction.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::Rng;

use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm};
use crate::rng_from_seed;

/// A `|V| x d` matrix with one row per vocabulary word.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingMatrix {
    vocab: Vocabulary,
    dim: usize,
    data: Vec<f64>,
    normalized: bool,
}

impl EmbeddingMatrix {
    pub fn new(vocab: Vocabulary, dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != vocab.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: vocab.len() * dim,
                found: data.len(),
            });
        }
        Ok(EmbeddingMatrix {
            vocab,
            dim,
            data,
            normalized: false,
        })
    }

    /// Builds a matrix from `(word, vector)` rows in order.
    pub fn from_rows<S: Into<String>>(rows: Vec<(S, Vec<f64>)>) -> Result<Self> {
        let dim = rows.first().map(|r| r.1.len()).unwrap_or(0);
        let mut words = Vec::with_capacity(rows.len());
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (w, v) in rows {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            words.push(w.into());
            data.extend(v);
        }
        Self::new(Vocabulary::from_words(words)?, dim, data)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn row(&self, id: usize) -> &[f64] {
        &self.data[id * self.dim..(id + 1) * self.dim]
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vocab.id(word).map(|id| self.row(id))
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Divides every row by its Euclidean norm. Fails, naming the words,
    /// if any row is zero.
    pub fn normalize_rows(&self) -> Result<Self> {
        let zero: Vec<String> = self
            .rows()
            .enumerate()
            .filter(|(_, r)| norm(r) == 0.0)
            .map(|(i, _)| self.vocab.word(i).to_string())
            .collect();
        if !zero.is_empty() {
            return Err(Error::ZeroRows(zero));
        }
        let mut data = self.data.clone();
        for row in data.chunks_exact_mut(self.dim) {
            let n = norm(row);
            row.iter_mut().for_each(|x| *x /= n);
        }
        Ok(EmbeddingMatrix {
            vocab: self.vocab.clone(),
            dim: self.dim,
            data,
            normalized: true,
        })
    }

    /// Selects the rows of `target` words, in `target`'s id order.
    pub fn restrict(&self, target: &Vocabulary) -> Result<Self> {
        let mut data = Vec::with_capacity(target.len() * self.dim);
        for w in target.words() {
            let row = self.get(w).ok_or_else(|| Error::MissingWord(w.clone()))?;
            data.extend_from_slice(row);
        }
        Ok(EmbeddingMatrix {
            vocab: target.clone(),
            dim: self.dim,
            data,
            normalized: self.normalized,
        })
    }

    /// Writes the word2vec text format: a `|V| d` header, then one
    /// `word v1 .. vd` line per word. Values use the shortest decimal that
    /// reads back to the identical `f64`.
    pub fn write_text(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(out, "{} {}", self.len(), self.dim).map_err(io)?;
        for (i, row) in self.rows().enumerate() {
            write!(out, "{}", self.vocab.word(i)).map_err(io)?;
            for x in row {
                write!(out, " {x}").map_err(io)?;
            }
            writeln!(out).map_err(io)?;
        }
        out.flush().map_err(io)
    }

    pub fn read_text(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .transpose()
            .map_err(|e| Error::io(path, e))?
            .ok_or_else(|| Error::parse(path, 1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [n, dim] = fields[..] else {
            return Err(Error::parse(path, 1, "header must be `count dim`"));
        };
        let n: usize = n.parse().map_err(|_| Error::parse(path, 1, "bad word count"))?;
        let dim: usize = dim.parse().map_err(|_| Error::parse(path, 1, "bad dimension"))?;
        let mut words = Vec::with_capacity(n);
        let mut data = Vec::with_capacity(n * dim);
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let word = fields.next().unwrap_or_default().to_string();
            let before = data.len();
            for f in fields {
                let x: f64 = f
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("non-numeric value {f:?}")))?;
                data.push(x);
            }
            if data.len() - before != dim {
                return Err(Error::parse(path, lineno, format!(
                    "expected {dim} values for {word:?}, found {}",
                    data.len() - before
                )));
            }
            words.push(word);
        }
        if words.len() != n {
            return Err(Error::parse(path, 1, format!("header declares {n} words, found {}", words.len())));
        }
        let vocab = Vocabulary::from_words(words).map_err(|e| Error::parse(path, 0, e.to_string()))?;
        Self::new(vocab, dim, data)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CbowParams {
    pub dim: usize,
    pub window: usize,
    pub negative: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for CbowParams {
    fn default() -> Self {
        CbowParams {
            dim: 300,
            window: 5,
            negative: 5,
            epochs: 5,
            learning_rate: 0.025,
            seed: 1,
        }
    }
}

/// Mean negative-sampling loss per training position, one entry per epoch.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainingReport {
    pub epoch_loss: Vec<f64>,
}

/// `ln(sigmoid(x)) = -softplus(-x)`, stable for large `|x|`.
fn log_sigmoid(x: f64) -> f64 {
    x.min(0.0) - (-x.abs()).exp().ln_1p()
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Cumulative unigram^0.75 distribution for drawing noise words.
struct NoiseTable {
    cumulative: Vec<f64>,
}

impl NoiseTable {
    fn new(freq: &[u64]) -> Self {
        let mut acc = 0.0;
        let cumulative = freq
            .iter()
            .map(|&c| {
                acc += (c as f64).powf(0.75);
                acc
            })
            .collect();
        NoiseTable { cumulative }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().unwrap();
        let u = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1)
    }
}

pub fn train_cbow(corpus: &Corpus, vocab: &Vocabulary, params: &CbowParams) -> Result<EmbeddingMatrix> {
    train_cbow_with_report(corpus, vocab, params).map(|(m, _)| m)
}

/// CBOW with negative sampling, single-threaded and fully determined by the
/// seed. Each position averages the input vectors of its fixed window,
/// scores the center word against `negative` noise words, and the summed
/// error is pushed back into every context vector. The learning rate decays
/// linearly over all positions of all epochs. Returns the input vectors.
pub fn train_cbow_with_report(
    corpus: &Corpus,
    vocab: &Vocabulary,
    params: &CbowParams,
) -> Result<(EmbeddingMatrix, TrainingReport)> {
    let dim = params.dim;
    if dim < 2 {
        return Err(Error::InvalidArgument("embedding dimension must be at least 2".into()));
    }
    let total_tokens = corpus.num_tokens();
    if total_tokens < 2 {
        return Err(Error::InvalidArgument(format!(
            "CBOW needs at least 2 tokens, corpus has {total_tokens}"
        )));
    }
    let v = vocab.len();
    let mut freq = vec![0u64; v];
    for &w in corpus.sentences().flatten() {
        let w = w as usize;
        if w >= v {
            return Err(Error::InvalidArgument(format!("token id {w} outside vocabulary of size {v}")));
        }
        freq[w] += 1;
    }
    let noise = NoiseTable::new(&freq);

    let mut rng = rng_from_seed(params.seed);
    let mut input: Vec<f64> = (0..v * dim).map(|_| (rng.random::<f64>() - 0.5) / dim as f64).collect();
    let mut output = vec![0.0; v * dim];

    let total_steps = (params.epochs * total_tokens).max(1) as f64;
    let mut step = 0usize;
    let mut hidden = vec![0.0; dim];
    let mut hidden_err = vec![0.0; dim];
    let mut context: Vec<usize> = Vec::with_capacity(2 * params.window);
    let mut report = TrainingReport::default();

    for _ in 0..params.epochs {
        let mut loss = 0.0;
        let mut positions = 0usize;
        for sentence in corpus.sentences() {
            for (i, &center) in sentence.iter().enumerate() {
                let lr = params.learning_rate * (1.0 - step as f64 / total_steps).max(1e-4);
                step += 1;
                let lo = i.saturating_sub(params.window);
                let hi = (i + params.window + 1).min(sentence.len());
                context.clear();
                context.extend((lo..hi).filter(|&j| j != i).map(|j| sentence[j] as usize));
                if context.is_empty() {
                    continue;
                }
                hidden.iter_mut().for_each(|h| *h = 0.0);
                for &c in &context {
                    axpy(1.0, &input[c * dim..(c + 1) * dim], &mut hidden);
                }
                let scale = 1.0 / context.len() as f64;
                hidden.iter_mut().for_each(|h| *h *= scale);
                hidden_err.iter_mut().for_each(|e| *e = 0.0);

                let center = center as usize;
                for d in 0..=params.negative {
                    let (target, label) = if d == 0 {
                        (center, 1.0)
                    } else {
                        let t = noise.sample(&mut rng);
                        if t == center {
                            continue;
                        }
                        (t, 0.0)
                    };
                    let out = &mut output[target * dim..(target + 1) * dim];
                    let f = dot(&hidden, out);
                    loss -= if label > 0.0 { log_sigmoid(f) } else { log_sigmoid(-f) };
                    let g = (label - sigmoid(f)) * lr;
                    axpy(g, out, &mut hidden_err);
                    axpy(g, &hidden, out);
                }
                for &c in &context {
                    axpy(1.0, &hidden_err, &mut input[c * dim..(c + 1) * dim]);
                }
                positions += 1;
            }
        }
        report.epoch_loss.push(if positions > 0 { loss / positions as f64 } else { 0.0 });
    }
    Ok((EmbeddingMatrix::new(vocab.clone(), dim, input)?, report))
}
