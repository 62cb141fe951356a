//! Unsupervised semantic anchors.
//!
//! For a word `i`, its similarity row in a normalized space is the vector of
//! cosines to every word of the shared vocabulary. Rows are invariant under
//! any orthogonal change of basis, so they can be compared across spaces
//! that were never aligned. A word's score is the Euclidean distance
//! between its similarity row averaged over the topic spaces and its row in
//! the global space; the lowest-scoring words become anchors.
//!
//! Full `|V| x |V|` similarity matrices are never built: rows are produced
//! in blocks, so peak memory is `O(block_rows * |V|)`.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::Vocabulary;
use crate::embeddings::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::linalg::dot;

pub const DEFAULT_ANCHOR_COUNT: usize = 5000;
pub const DEFAULT_BLOCK_ROWS: usize = 256;

/// Cosines between word `i` and every word of a normalized matrix.
pub fn similarity_row(x: &EmbeddingMatrix, i: usize) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    similarity_row_into(x, i, &mut out);
    out
}

fn similarity_row_into(x: &EmbeddingMatrix, i: usize, out: &mut [f64]) {
    let xi = x.row(i);
    for (o, xj) in out.iter_mut().zip(x.rows()) {
        *o = dot(xi, xj);
    }
}

fn check_spaces(topics: &[&EmbeddingMatrix], global: &EmbeddingMatrix) -> Result<()> {
    if topics.is_empty() {
        return Err(Error::InvalidArgument("at least one topic space required".into()));
    }
    for (k, x) in topics.iter().enumerate() {
        if x.dim() != global.dim() {
            return Err(Error::DimensionMismatch {
                expected: global.dim(),
                found: x.dim(),
            });
        }
        if x.vocab().words() != global.vocab().words() {
            return Err(Error::VocabularyMismatch(format!(
                "topic space {k} is not restricted to the global vocabulary order"
            )));
        }
    }
    for x in topics.iter().copied().chain(std::iter::once(global)) {
        if !x.is_normalized() {
            return Err(Error::InvalidArgument("anchor scoring needs row-normalized matrices".into()));
        }
    }
    Ok(())
}

/// Stability score of every word: `|| mean_k s_k^i - s_g^i ||_2`.
///
/// All matrices must be normalized and share one vocabulary order. Rows are
/// processed in blocks of `block_rows`; blocks run in parallel but every
/// score is a sequential reduction over its own row, so the output does not
/// depend on scheduling.
pub fn anchor_scores(
    topics: &[&EmbeddingMatrix],
    global: &EmbeddingMatrix,
    block_rows: usize,
) -> Result<Vec<f64>> {
    check_spaces(topics, global)?;
    let n = global.len();
    let block_rows = block_rows.max(1);
    let inv_k = 1.0 / topics.len() as f64;
    let blocks: Vec<Vec<f64>> = (0..n.div_ceil(block_rows))
        .into_par_iter()
        .map(|b| {
            let lo = b * block_rows;
            let hi = (lo + block_rows).min(n);
            let mut mean = vec![0.0; n];
            let mut row = vec![0.0; n];
            (lo..hi)
                .map(|i| {
                    mean.iter_mut().for_each(|m| *m = 0.0);
                    for x in topics {
                        similarity_row_into(x, i, &mut row);
                        mean.iter_mut().zip(&row).for_each(|(m, s)| *m += s);
                    }
                    similarity_row_into(global, i, &mut row);
                    mean.iter()
                        .zip(&row)
                        .map(|(m, g)| {
                            let d = m * inv_k - g;
                            d * d
                        })
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        })
        .collect();
    Ok(blocks.concat())
}

/// Anchor words with their scores, ascending by score then word id.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorSet {
    pub entries: Vec<(usize, f64)>,
}

impl AnchorSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(id, _)| id)
    }

    pub fn words<'v>(&self, vocab: &'v Vocabulary) -> Vec<&'v str> {
        self.ids().map(|id| vocab.word(id)).collect()
    }

    /// Writes `word<TAB>score` lines in anchor order.
    pub fn write(&self, path: impl AsRef<Path>, vocab: &Vocabulary) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        for &(id, score) in &self.entries {
            writeln!(out, "{}\t{}", vocab.word(id), score).map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }

    /// Reads an anchor file as `(word, score)` pairs.
    pub fn read_words(path: impl AsRef<Path>) -> Result<Vec<(String, f64)>> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, line)| {
                let (w, s) = line
                    .split_once('\t')
                    .ok_or_else(|| Error::parse(path, i + 1, "expected word<TAB>score"))?;
                let s = s.trim().parse().map_err(|_| Error::parse(path, i + 1, "bad score"))?;
                Ok((w.to_string(), s))
            })
            .collect()
    }
}

/// The `count` lowest-scoring words.
pub fn select_anchors(scores: &[f64], count: usize) -> Result<AnchorSet> {
    if count > scores.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {count} anchors from a vocabulary of {}",
            scores.len()
        )));
    }
    let mut entries: Vec<(usize, f64)> = scores.iter().copied().enumerate().collect();
    entries.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    entries.truncate(count);
    Ok(AnchorSet { entries })
}
