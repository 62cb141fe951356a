//! Document and sentence feature vectors built from unified topic vectors.

use std::fs;
use std::io::Write;
use std::path::Path;

use log::warn;

use crate::alignment::UnifiedModel;
use crate::error::{Error, Result};
use crate::linalg::{argmax, axpy};
use crate::topics::TopicModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureMode {
    /// Posterior-weighted sum of each word's topic vectors.
    AvgC,
    /// Plain mean of each word's topic vectors.
    Avg,
    /// Each word's vector for the document's most probable topic.
    MaxC,
}

impl std::str::FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "avgc" => Ok(FeatureMode::AvgC),
            "avg" => Ok(FeatureMode::Avg),
            "maxc" => Ok(FeatureMode::MaxC),
            other => Err(Error::InvalidArgument(format!("unknown feature mode {other:?}"))),
        }
    }
}

/// Averages per-word vectors over the words of `tokens` that have any
/// topic vector, given the document's topic posterior.
///
/// Per word, sums run over its available topics only: AvgC renormalizes the
/// posterior over them, Avg divides by their count, and MaxC takes the
/// available topic with the largest posterior. A document without a single
/// covered word yields the zero vector.
pub fn doc_features_with_posterior<S: AsRef<str>>(
    tokens: &[S],
    model: &UnifiedModel,
    posterior: &[f64],
    mode: FeatureMode,
) -> Vec<f64> {
    let d = model.dim();
    let mut out = vec![0.0; d];
    let mut covered = 0usize;
    for token in tokens {
        let Some(wt) = model.topics_of(token.as_ref()) else {
            continue;
        };
        let topics = wt.topics();
        if topics.is_empty() {
            continue;
        }
        covered += 1;
        let probs: Vec<f64> = topics.iter().map(|&k| posterior.get(k).copied().unwrap_or(0.0)).collect();
        let mass: f64 = probs.iter().sum();
        match mode {
            FeatureMode::AvgC => {
                for ((_, v), p) in wt.iter(d).zip(&probs) {
                    let w = if mass > 0.0 { p / mass } else { 1.0 / topics.len() as f64 };
                    axpy(w, v, &mut out);
                }
            }
            FeatureMode::Avg => {
                let w = 1.0 / topics.len() as f64;
                for (_, v) in wt.iter(d) {
                    axpy(w, v, &mut out);
                }
            }
            FeatureMode::MaxC => {
                let best = argmax(&probs).expect("non-empty");
                let (_, v) = wt.iter(d).nth(best).expect("index in range");
                axpy(1.0, v, &mut out);
            }
        }
    }
    if covered == 0 {
        warn!("document has no word with a vector; emitting zero features");
        return out;
    }
    out.iter_mut().for_each(|x| *x /= covered as f64);
    out
}

/// As [`doc_features_with_posterior`], inferring `p(k|D)` with the LDA model.
pub fn doc_features<S: AsRef<str>>(
    tokens: &[S],
    model: &UnifiedModel,
    lda: &TopicModel,
    infer_iterations: usize,
    seed: u64,
    mode: FeatureMode,
) -> Vec<f64> {
    let ids = lda.encode(tokens);
    let posterior = lda.infer_posterior(&ids, infer_iterations, seed);
    doc_features_with_posterior(tokens, model, posterior.probs(), mode)
}

/// A labelled feature vector.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRecord {
    pub label: usize,
    pub vector: Vec<f64>,
}

impl FeatureRecord {
    /// Concatenates the features of a sentence pair.
    pub fn concat(label: usize, a: &[f64], b: &[f64]) -> Self {
        FeatureRecord {
            label,
            vector: a.iter().chain(b).copied().collect(),
        }
    }
}

/// Writes `label,v1,...,vd` rows under a header line.
pub fn write_feature_csv(path: impl AsRef<Path>, records: &[FeatureRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let io = |e| Error::io(path, e);
    let d = records.first().map(|r| r.vector.len()).unwrap_or(0);
    let header: Vec<String> = std::iter::once("label".to_string())
        .chain((1..=d).map(|i| format!("v{i}")))
        .collect();
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for r in records {
        if r.vector.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: r.vector.len(),
            });
        }
        write!(out, "{}", r.label).map_err(io)?;
        for x in &r.vector {
            write!(out, ",{x}").map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn read_feature_csv(path: impl AsRef<Path>) -> Result<Vec<FeatureRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut records: Vec<FeatureRecord> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() || (i == 0 && line.starts_with("label")) {
            continue;
        }
        let mut fields = line.split(',');
        let label = fields
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| Error::parse(path, lineno, "bad label"))?;
        let vector = fields
            .map(|f| match f.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(Error::parse(path, lineno, format!("bad value {f:?}"))),
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = records.first() {
            if first.vector.len() != vector.len() {
                return Err(Error::parse(path, lineno, format!(
                    "expected {} values, found {}",
                    first.vector.len(),
                    vector.len()
                )));
            }
        }
        records.push(FeatureRecord { label, vector });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> UnifiedModel {
        let recs: Vec<(&str, usize, Vec<f64>)> = vec![
            ("a", 0, vec![1.0, 0.0]),
            ("a", 1, vec![0.0, 1.0]),
            ("b", 0, vec![0.6, 0.8]),
            ("b", 1, vec![-1.0, 0.0]),
            ("c", 1, vec![0.0, -1.0]),
        ];
        UnifiedModel::from_records(2, 2, recs.iter().map(|(w, k, v)| (*w, *k, v.as_slice()))).unwrap()
    }

    #[test]
    fn avg_of_single_word_is_topic_mean() {
        let f = doc_features_with_posterior(&["a"], &model(), &[0.9, 0.1], FeatureMode::Avg);
        assert_eq!(f, [0.5, 0.5]);
    }

    #[test]
    fn maxc_uses_argmax_topic() {
        let f = doc_features_with_posterior(&["a", "b"], &model(), &[0.9, 0.1], FeatureMode::MaxC);
        assert!((f[0] - 0.8).abs() < 1e-15 && (f[1] - 0.4).abs() < 1e-15);
        // c only has topic 1
        let f = doc_features_with_posterior(&["c"], &model(), &[0.9, 0.1], FeatureMode::MaxC);
        assert_eq!(f, [0.0, -1.0]);
    }

    #[test]
    fn all_oov_gives_zero_vector() {
        let f = doc_features_with_posterior(&["zz", "yy"], &model(), &[0.5, 0.5], FeatureMode::AvgC);
        assert_eq!(f, [0.0, 0.0]);
    }

    #[test]
    fn feature_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let recs = vec![
            FeatureRecord { label: 0, vector: vec![0.5, -1.25] },
            FeatureRecord::concat(3, &[1.0], &[2.0]),
        ];
        write_feature_csv(&path, &recs).unwrap();
        assert!(fs::read_to_string(&path).unwrap().starts_with("label,v1,v2\n0,0.5,-1.25\n"));
        assert_eq!(read_feature_csv(&path).unwrap(), recs);
        fs::write(&path, "label,v1\n0,1\n1,1,2\n").unwrap();
        assert!(read_feature_csv(&path).is_err());
    }
}
