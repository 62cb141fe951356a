//! Orthogonal Procrustes maps from topic spaces to the global space, the
//! unified multi-topic model they produce, and the cross-domain queries run
//! on it (topic neighbors, cross-topic similarity, PCA export).

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::corpus::Vocabulary;
use crate::embeddings::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::linalg::{cosine, squared_distance};
use crate::smoothing::SmoothedWord;

/// Orthogonal `d x d` matrix mapping topic space `topic` into the global space.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMap {
    pub topic: usize,
    pub matrix: DMatrix<f64>,
}

impl OrthogonalMap {
    pub fn identity(topic: usize, dim: usize) -> Self {
        OrthogonalMap {
            topic,
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `M x`
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok((&self.matrix * DVector::from_column_slice(x)).as_slice().to_vec())
    }

    /// Largest entry of `|M M^T - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let d = self.dim();
        (&self.matrix * self.matrix.transpose() - DMatrix::<f64>::identity(d, d)).amax()
    }

    /// `sum_j || M a_j - b_j ||^2` over row-stacked correspondences.
    pub fn objective(&self, source: &DMatrix<f64>, target: &DMatrix<f64>) -> f64 {
        objective(&self.matrix, source, target)
    }
}

/// Procrustes objective for an arbitrary `d x d` matrix.
pub fn objective(m: &DMatrix<f64>, source: &DMatrix<f64>, target: &DMatrix<f64>) -> f64 {
    (source * m.transpose() - target).norm_squared()
}

/// Solves `min_M sum_j ||M a_j - b_j||^2` subject to `M M^T = I`, where the
/// rows of `source` are the `a_j` and the rows of `target` the `b_j`.
/// Closed form: `M = U V^T` with `U S V^T` the SVD of `target^T source`.
pub fn procrustes(source: &DMatrix<f64>, target: &DMatrix<f64>) -> Result<OrthogonalMap> {
    if source.shape() != target.shape() {
        return Err(Error::DimensionMismatch {
            expected: target.nrows() * target.ncols(),
            found: source.nrows() * source.ncols(),
        });
    }
    let (n, d) = source.shape();
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("Procrustes needs at least one anchor".into()));
    }
    if n < d {
        warn!("fitting a {d}x{d} orthogonal map on only {n} anchors; the solution is underdetermined");
    }
    let cross = target.transpose() * source;
    let svd = cross.try_svd(true, true, 1e-15, 10_000).ok_or(Error::SvdFailure)?;
    let (u, v_t) = svd.u.zip(svd.v_t).ok_or(Error::SvdFailure)?;
    Ok(OrthogonalMap {
        topic: 0,
        matrix: u * v_t,
    })
}

/// Row-stacks the vectors of `words` from `x`.
pub fn stack_rows(x: &EmbeddingMatrix, words: &[&str]) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(words.len(), x.dim());
    for (r, w) in words.iter().enumerate() {
        let row = x.get(w).ok_or_else(|| Error::MissingWord(w.to_string()))?;
        for (c, &v) in row.iter().enumerate() {
            m[(r, c)] = v;
        }
    }
    Ok(m)
}

/// Aligned topic vectors of one word, sorted by topic id.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordTopics {
    topics: Vec<usize>,
    data: Vec<f64>,
}

impl WordTopics {
    pub fn topics(&self) -> &[usize] {
        &self.topics
    }

    pub fn iter(&self, dim: usize) -> impl Iterator<Item = (usize, &[f64])> {
        self.topics.iter().copied().zip(self.data.chunks_exact(dim))
    }

    fn get(&self, topic: usize, dim: usize) -> Option<&[f64]> {
        self.topics
            .binary_search(&topic)
            .ok()
            .map(|i| &self.data[i * dim..(i + 1) * dim])
    }

    fn insert(&mut self, topic: usize, vector: &[f64]) {
        match self.topics.binary_search(&topic) {
            Ok(i) => {
                let d = vector.len();
                self.data[i * d..(i + 1) * d].copy_from_slice(vector);
            }
            Err(i) => {
                let d = vector.len();
                self.topics.insert(i, topic);
                self.data.splice(i * d..i * d, vector.iter().copied());
            }
        }
    }
}

/// Provenance recorded in the unified model header.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub anchor_count: usize,
    #[serde(default)]
    pub seeds: BTreeMap<String, u64>,
}

/// Every word of the union of the topic vocabularies with its available
/// aligned topic vectors, optionally with per-word smoothed vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct UnifiedModel {
    vocab: Vocabulary,
    num_topics: usize,
    dim: usize,
    words: Vec<WordTopics>,
    pub meta: ModelMeta,
    smoothed: Option<Vec<SmoothedWord>>,
}

impl UnifiedModel {
    /// Assembles a model from `(word, topic, vector)` records. Words appear
    /// in order of first occurrence.
    pub fn from_records<'a, I>(num_topics: usize, dim: usize, records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, usize, &'a [f64])>,
    {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut order: Vec<String> = Vec::new();
        let mut words: Vec<WordTopics> = Vec::new();
        for (word, topic, vector) in records {
            if topic >= num_topics {
                return Err(Error::InvalidArgument(format!("topic {topic} out of range for K = {num_topics}")));
            }
            if vector.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: vector.len(),
                });
            }
            let id = *ids.entry(word.to_string()).or_insert_with(|| {
                order.push(word.to_string());
                words.push(WordTopics::default());
                words.len() - 1
            });
            words[id].insert(topic, vector);
        }
        Ok(UnifiedModel {
            vocab: Vocabulary::from_words(order)?,
            num_topics,
            dim,
            words,
            meta: ModelMeta::default(),
            smoothed: None,
        })
    }

    /// Wraps a single embedding space as a one-topic model (the global
    /// baseline).
    pub fn from_global(x: &EmbeddingMatrix) -> Result<Self> {
        let words: Vec<&str> = x.vocab().words().iter().map(String::as_str).collect();
        Self::from_records(1, x.dim(), words.into_iter().zip(x.rows()).map(|(w, r)| (w, 0, r)))
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn word_topics(&self, id: usize) -> &WordTopics {
        &self.words[id]
    }

    pub fn topics_of(&self, word: &str) -> Option<&WordTopics> {
        self.vocab.id(word).map(|id| &self.words[id])
    }

    pub fn vector(&self, word: &str, topic: usize) -> Option<&[f64]> {
        self.topics_of(word)?.get(topic, self.dim)
    }

    /// Availability of each topic vector for `word`.
    pub fn mask(&self, word: &str) -> Option<Vec<bool>> {
        let wt = self.topics_of(word)?;
        let mut mask = vec![false; self.num_topics];
        for &k in wt.topics() {
            mask[k] = true;
        }
        Some(mask)
    }

    /// Number of stored `(word, topic)` vectors.
    pub fn num_vectors(&self) -> usize {
        self.words.iter().map(|w| w.topics.len()).sum()
    }

    pub fn smoothed(&self) -> Option<&[SmoothedWord]> {
        self.smoothed.as_deref()
    }

    pub fn smoothed_word(&self, word: &str) -> Option<&SmoothedWord> {
        let id = self.vocab.id(word)?;
        self.smoothed.as_ref().map(|s| &s[id])
    }

    pub fn set_smoothed(&mut self, smoothed: Vec<SmoothedWord>) -> Result<()> {
        if smoothed.len() != self.words.len() {
            return Err(Error::DimensionMismatch {
                expected: self.words.len(),
                found: smoothed.len(),
            });
        }
        self.smoothed = Some(smoothed);
        Ok(())
    }

    /// Writes a JSON header line followed by one `word topic v1 .. vd` line
    /// per available pair. Smoothed models add `~c word n v1 .. vd`
    /// component records and `~a word topic n` assignment records.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        let io = |e| Error::io(path, e);
        let header = FileHeader {
            format: FORMAT_TAG.into(),
            topics: self.num_topics,
            dim: self.dim,
            vocab_size: self.vocab.len(),
            vectors: self.num_vectors(),
            anchor_count: self.meta.anchor_count,
            seeds: self.meta.seeds.clone(),
            smoothed: self.smoothed.is_some(),
        };
        writeln!(out, "{}", serde_json::to_string(&header)?).map_err(io)?;
        for (id, wt) in self.words.iter().enumerate() {
            let word = self.vocab.word(id);
            for (k, v) in wt.iter(self.dim) {
                write!(out, "{word} {k}").map_err(io)?;
                for x in v {
                    write!(out, " {x}").map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
        }
        if let Some(smoothed) = &self.smoothed {
            for (id, s) in smoothed.iter().enumerate() {
                let word = self.vocab.word(id);
                for (n, v) in s.vectors().enumerate() {
                    write!(out, "~c {word} {n}").map_err(io)?;
                    for x in v {
                        write!(out, " {x}").map_err(io)?;
                    }
                    writeln!(out).map_err(io)?;
                }
                for &(k, n) in s.assignment() {
                    writeln!(out, "~a {word} {k} {n}").map_err(io)?;
                }
            }
        }
        out.flush().map_err(io)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let first = lines
            .next()
            .transpose()
            .map_err(|e| Error::io(path, e))?
            .ok_or_else(|| Error::parse(path, 1, "missing header"))?;
        let header: FileHeader = serde_json::from_str(&first).map_err(|e| Error::parse(path, 1, e.to_string()))?;
        if header.format != FORMAT_TAG {
            return Err(Error::parse(path, 1, format!("unknown format {:?}", header.format)));
        }
        let d = header.dim;
        let mut records: Vec<(String, usize, Vec<f64>)> = Vec::new();
        let mut components: HashMap<String, Vec<(usize, Vec<f64>)>> = HashMap::new();
        let mut assignments: HashMap<String, Vec<(usize, usize)>> = HashMap::new();
        let parse_vec = |fields: &[&str], lineno: usize| -> Result<Vec<f64>> {
            if fields.len() != d {
                return Err(Error::parse(path, lineno, format!("expected {d} values, found {}", fields.len())));
            }
            fields
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| Error::parse(path, lineno, format!("non-numeric value {f:?}"))))
                .collect()
        };
        let parse_idx = |f: &str, lineno: usize| -> Result<usize> {
            f.parse::<usize>().map_err(|_| Error::parse(path, lineno, format!("bad index {f:?}")))
        };
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let line = line.map_err(|e| Error::io(path, e))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                [] => {}
                ["~c", word, n, rest @ ..] => {
                    let v = parse_vec(rest, lineno)?;
                    components.entry(word.to_string()).or_default().push((parse_idx(n, lineno)?, v));
                }
                ["~a", word, k, n] => {
                    let pair = (parse_idx(k, lineno)?, parse_idx(n, lineno)?);
                    assignments.entry(word.to_string()).or_default().push(pair);
                }
                [word, k, rest @ ..] => {
                    records.push((word.to_string(), parse_idx(k, lineno)?, parse_vec(rest, lineno)?));
                }
                _ => return Err(Error::parse(path, lineno, "malformed record")),
            }
        }
        let mut model = Self::from_records(
            header.topics,
            d,
            records.iter().map(|(w, k, v)| (w.as_str(), *k, v.as_slice())),
        )
        .map_err(|e| Error::parse(path, 0, e.to_string()))?;
        if model.vocab.len() != header.vocab_size {
            return Err(Error::parse(path, 1, format!(
                "header declares {} words, found {}",
                header.vocab_size,
                model.vocab.len()
            )));
        }
        model.meta = ModelMeta {
            anchor_count: header.anchor_count,
            seeds: header.seeds,
        };
        if header.smoothed {
            let mut smoothed = Vec::with_capacity(model.vocab.len());
            for w in model.vocab.words() {
                let mut comps = components.remove(w).unwrap_or_default();
                comps.sort_by_key(|c| c.0);
                let vectors: Vec<Vec<f64>> = comps.into_iter().map(|(_, v)| v).collect();
                let assignment = assignments.remove(w).unwrap_or_default();
                smoothed.push(
                    SmoothedWord::new(vectors, assignment).map_err(|e| Error::parse(path, 0, format!("{w}: {e}")))?,
                );
            }
            model.smoothed = Some(smoothed);
        }
        Ok(model)
    }
}

const FORMAT_TAG: &str = "topicvec-unified";

#[derive(Serialize, Deserialize)]
struct FileHeader {
    format: String,
    topics: usize,
    dim: usize,
    vocab_size: usize,
    vectors: usize,
    anchor_count: usize,
    #[serde(default)]
    seeds: BTreeMap<String, u64>,
    #[serde(default)]
    smoothed: bool,
}

/// Fits one orthogonal map per topic space on the anchor words and projects
/// every normalized topic vector into the global space.
///
/// `topic_spaces` are the raw topic embeddings (each over its own
/// vocabulary); rows are unit-normalized before fitting and projecting, so
/// every unified vector has unit length.
pub fn build_unified(
    topic_spaces: &[EmbeddingMatrix],
    global: &EmbeddingMatrix,
    anchor_words: &[&str],
) -> Result<(UnifiedModel, Vec<OrthogonalMap>)> {
    if topic_spaces.is_empty() {
        return Err(Error::InvalidArgument("at least one topic space required".into()));
    }
    if anchor_words.is_empty() {
        return Err(Error::InvalidArgument("no anchors given".into()));
    }
    let global = global.normalize_rows()?;
    let target = stack_rows(&global, anchor_words)?;
    let d = global.dim();

    let mut totals: HashMap<&str, u64> = HashMap::new();
    for x in topic_spaces {
        if x.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.dim(),
            });
        }
        for (i, w) in x.vocab().words().iter().enumerate() {
            *totals.entry(w.as_str()).or_default() += x.vocab().count(i);
        }
    }
    let mut union: Vec<(&str, u64)> = totals.into_iter().collect();
    union.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let vocab = Vocabulary::from_counts(union.iter().map(|&(w, c)| (w.to_string(), c)).collect())?;
    let mut words = vec![WordTopics::default(); vocab.len()];

    let mut maps = Vec::with_capacity(topic_spaces.len());
    for (k, x) in topic_spaces.iter().enumerate() {
        let x = x.normalize_rows()?;
        let source = stack_rows(&x, anchor_words).map_err(|e| match e {
            Error::MissingWord(w) => Error::InvalidArgument(format!("anchor {w:?} missing from topic space {k}")),
            other => other,
        })?;
        let mut map = procrustes(&source, &target)?;
        map.topic = k;
        // X' = X M^T, row by row
        let projected = DMatrix::from_row_slice(x.len(), d, x.as_slice()) * map.matrix.transpose();
        for (i, w) in x.vocab().words().iter().enumerate() {
            let row: Vec<f64> = projected.row(i).iter().copied().collect();
            let id = vocab.id(w).expect("union contains every topic word");
            words[id].topics.push(k);
            words[id].data.extend(row);
        }
        maps.push(map);
    }
    let model = UnifiedModel {
        vocab,
        num_topics: topic_spaces.len(),
        dim: d,
        words,
        meta: ModelMeta {
            anchor_count: anchor_words.len(),
            seeds: BTreeMap::new(),
        },
        smoothed: None,
    };
    Ok((model, maps))
}

/// The `n` words whose topic-`topic` vectors are most similar to `word`'s,
/// by descending cosine with word-id tie-break. The query is excluded.
pub fn topic_neighbors(model: &UnifiedModel, word: &str, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
    let query = model.vector(word, topic).ok_or_else(|| Error::MissingVector {
        word: word.to_string(),
        topic,
    })?;
    let qid = model.vocab.id(word).expect("vector implies word");
    let mut scored: Vec<(usize, f64)> = model
        .words
        .iter()
        .enumerate()
        .filter(|&(id, _)| id != qid)
        .filter_map(|(id, wt)| wt.get(topic, model.dim).map(|v| (id, cosine(query, v))))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(scored
        .into_iter()
        .take(n)
        .map(|(id, c)| (model.vocab.word(id).to_string(), c))
        .collect())
}

/// Cosine between two topic vectors of the same word.
pub fn cross_topic_similarity(model: &UnifiedModel, word: &str, j: usize, k: usize) -> Result<f64> {
    let missing = |topic| Error::MissingVector {
        word: word.to_string(),
        topic,
    };
    let a = model.vector(word, j).ok_or_else(|| missing(j))?;
    let b = model.vector(word, k).ok_or_else(|| missing(k))?;
    Ok(cosine(a, b))
}

/// One projected point of a PCA export.
#[derive(Clone, Debug, PartialEq)]
pub struct PcaRow {
    pub word: String,
    pub topic: usize,
    pub coords: [f64; 2],
}

/// Projects points onto their first two principal components.
///
/// Points are mean-centered; components are eigenvectors of the covariance
/// in descending eigenvalue order, each signed so its largest-magnitude
/// loading is positive.
pub fn pca_2d(points: &[&[f64]]) -> Result<Vec<[f64; 2]>> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(format!("PCA needs at least 2 points, got {}", points.len())));
    }
    let d = points[0].len();
    if d < 2 {
        return Err(Error::InvalidArgument("PCA to 2 components needs dimension >= 2".into()));
    }
    let n = points.len();
    let mut x = DMatrix::zeros(n, d);
    for (r, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.len() });
        }
        for (c, &v) in p.iter().enumerate() {
            x[(r, c)] = v;
        }
    }
    let mean = x.row_mean();
    for mut row in x.row_iter_mut() {
        row -= &mean;
    }
    let cov = x.transpose() * &x / (n - 1) as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let mut components = Vec::with_capacity(2);
    for &idx in &order[..2] {
        let mut v = eig.eigenvectors.column(idx).into_owned();
        let pivot = v.iter().copied().fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
        if pivot < 0.0 {
            v.neg_mut();
        }
        components.push(v);
    }
    Ok(x
        .row_iter()
        .map(|row| [row.dot(&components[0].transpose()), row.dot(&components[1].transpose())])
        .collect())
}

/// PCA of every available topic vector of the selected words.
pub fn pca_export(model: &UnifiedModel, words: &[&str]) -> Result<Vec<PcaRow>> {
    let mut labels = Vec::new();
    let mut points: Vec<&[f64]> = Vec::new();
    for &w in words {
        let Some(wt) = model.topics_of(w) else {
            warn!("{w:?} has no vectors; skipped in PCA export");
            continue;
        };
        for (k, v) in wt.iter(model.dim) {
            labels.push((w.to_string(), k));
            points.push(v);
        }
    }
    let coords = pca_2d(&points)?;
    Ok(labels
        .into_iter()
        .zip(coords)
        .map(|((word, topic), coords)| PcaRow { word, topic, coords })
        .collect())
}

pub fn write_pca_csv<W: Write>(out: &mut W, rows: &[PcaRow]) -> std::io::Result<()> {
    writeln!(out, "word,topic,pc1,pc2")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.word, r.topic, r.coords[0], r.coords[1])?;
    }
    Ok(())
}

pub fn write_neighbors_csv<W: Write>(out: &mut W, neighbors: &[(String, f64)]) -> std::io::Result<()> {
    writeln!(out, "rank,word,cosine")?;
    for (i, (w, c)) in neighbors.iter().enumerate() {
        writeln!(out, "{},{w},{c}", i + 1)?;
    }
    Ok(())
}

/// Residual of a fitted map: mean squared distance between projected
/// source rows and their targets.
pub fn mean_residual(map: &OrthogonalMap, source: &DMatrix<f64>, target: &DMatrix<f64>) -> f64 {
    let projected = source * map.matrix.transpose();
    let n = source.nrows().max(1) as f64;
    projected
        .row_iter()
        .zip(target.row_iter())
        .map(|(a, b)| squared_distance(a.transpose().as_slice(), b.transpose().as_slice()))
        .sum::<f64>()
        / n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_anchor_sets_give_identity() {
        let a = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.6, 0.8, -0.8, 0.6]);
        let m = procrustes(&a, &a).unwrap();
        assert!((m.matrix - DMatrix::<f64>::identity(2, 2)).amax() < 1e-9);
    }

    #[test]
    fn recovers_quarter_turn() {
        let source = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let rot = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let target = &source * rot.transpose();
        let m = procrustes(&source, &target).unwrap();
        assert!((&m.matrix - &rot).amax() < 1e-12);
        let p = m.project(&[1.0, 0.0]).unwrap();
        assert!((p[0] - 0.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
        assert!(m.project(&[1.0]).is_err());
    }

    #[test]
    fn identity_projection_and_norms() {
        let id = OrthogonalMap::identity(0, 3);
        assert_eq!(id.project(&[1.0, -2.0, 3.0]).unwrap(), vec![1.0, -2.0, 3.0]);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = DMatrix::<f64>::zeros(3, 2);
        let b = DMatrix::<f64>::zeros(3, 3);
        assert!(procrustes(&a, &b).is_err());
    }

    fn toy_model() -> UnifiedModel {
        let v = |x: &[f64]| x.to_vec();
        let recs: Vec<(&str, usize, Vec<f64>)> = vec![
            ("bank", 0, v(&[1.0, 0.0])),
            ("bank", 1, v(&[0.0, 1.0])),
            ("money", 0, v(&[0.9, 0.1])),
            ("cash", 0, v(&[0.7, 0.7])),
            ("river", 1, v(&[0.1, 0.9])),
        ];
        UnifiedModel::from_records(2, 2, recs.iter().map(|(w, k, x)| (*w, *k, x.as_slice()))).unwrap()
    }

    #[test]
    fn neighbors_rank_by_cosine_and_skip_query() {
        let m = toy_model();
        assert!(topic_neighbors(&m, "bank", 0, 0).unwrap().is_empty());
        let n = topic_neighbors(&m, "bank", 0, 5).unwrap();
        assert_eq!(n.iter().map(|x| x.0.as_str()).collect::<Vec<_>>(), ["money", "cash"]);
        assert!(topic_neighbors(&m, "river", 0, 3).is_err());
        assert_eq!(m.mask("river").unwrap(), [false, true]);
    }

    #[test]
    fn cross_topic_similarity_cases() {
        let m = toy_model();
        assert!((cross_topic_similarity(&m, "bank", 0, 0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cross_topic_similarity(&m, "bank", 0, 1).unwrap(), 0.0);
        assert!(cross_topic_similarity(&m, "money", 0, 1).is_err());
    }

    #[test]
    fn pca_axis_aligned_points() {
        let pts: Vec<Vec<f64>> = vec![vec![2.0, 0.0], vec![-2.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        let c = pca_2d(&refs).unwrap();
        for (p, q) in pts.iter().zip(&c) {
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12, "{p:?} {q:?}");
        }
    }

    #[test]
    fn pca_collinear_points_have_flat_second_axis() {
        let pts: Vec<Vec<f64>> = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![-1.0, -2.0, -3.0]];
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        for c in pca_2d(&refs).unwrap() {
            assert!(c[1].abs() < 1e-9);
        }
        assert!(pca_2d(&refs[..1]).is_err());
    }

    #[test]
    fn pca_export_emits_one_row_per_pair() {
        let m = toy_model();
        let rows = pca_export(&m, &["bank", "river", "nope"]).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!((rows[1].word.as_str(), rows[1].topic), ("bank", 1));
        let mut buf = Vec::new();
        write_pca_csv(&mut buf, &rows).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("word,topic,pc1,pc2\nbank,0,"));
    }

    #[test]
    fn model_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.model");
        let mut m = toy_model();
        m.meta.anchor_count = 3;
        m.meta.seeds.insert("lda".into(), 7);
        m.write(&path).unwrap();
        assert_eq!(UnifiedModel::read(&path).unwrap(), m);

        fs::write(&path, "not json\n").unwrap();
        assert!(UnifiedModel::read(&path).is_err());
    }
}
