//! One-vs-rest logistic regression trained by SGD, with weighted-average
//! precision, recall, F1 and accuracy.

use rand::seq::SliceRandom;

use super::features::FeatureRecord;
use crate::error::{Error, Result};
use crate::linalg::{argmax, dot};
use crate::rng_from_seed;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainParams {
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            epochs: 100,
            learning_rate: 0.1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearClassifier {
    classes: Vec<usize>,
    /// One row per class: weights then bias.
    weights: Vec<Vec<f64>>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl LinearClassifier {
    pub fn train(records: &[FeatureRecord], params: &TrainParams) -> Result<Self> {
        let mut classes: Vec<usize> = records.iter().map(|r| r.label).collect();
        classes.sort_unstable();
        classes.dedup();
        if classes.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "classifier needs at least 2 classes, found {}",
                classes.len()
            )));
        }
        let d = records[0].vector.len();
        if let Some(r) = records.iter().find(|r| r.vector.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: r.vector.len(),
            });
        }
        let mut weights = vec![vec![0.0; d + 1]; classes.len()];
        let mut order: Vec<usize> = (0..records.len()).collect();
        let mut rng = rng_from_seed(params.seed);
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                let r = &records[i];
                for (c, w) in weights.iter_mut().enumerate() {
                    let y = if r.label == classes[c] { 1.0 } else { 0.0 };
                    let g = params.learning_rate * (y - sigmoid(dot(&w[..d], &r.vector) + w[d]));
                    for (wi, xi) in w[..d].iter_mut().zip(&r.vector) {
                        *wi += g * xi;
                    }
                    w[d] += g;
                }
            }
        }
        Ok(LinearClassifier { classes, weights })
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn classify(&self, vector: &[f64]) -> usize {
        let d = self.weights[0].len() - 1;
        let scores: Vec<f64> = self.weights.iter().map(|w| dot(&w[..d], vector) + w[d]).collect();
        self.classes[argmax(&scores).expect("at least two classes")]
    }

    pub fn evaluate(&self, records: &[FeatureRecord]) -> ClassificationReport {
        let gold: Vec<usize> = records.iter().map(|r| r.label).collect();
        let pred: Vec<usize> = records.iter().map(|r| self.classify(&r.vector)).collect();
        ClassificationReport::from_labels(&gold, &pred)
    }
}

/// Support-weighted averages over the gold classes.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub support: usize,
}

impl ClassificationReport {
    pub fn from_labels(gold: &[usize], pred: &[usize]) -> Self {
        let n = gold.len();
        let mut classes: Vec<usize> = gold.to_vec();
        classes.sort_unstable();
        classes.dedup();
        let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
        for &c in &classes {
            let tp = gold.iter().zip(pred).filter(|&(&g, &q)| g == c && q == c).count() as f64;
            let predicted = pred.iter().filter(|&&q| q == c).count() as f64;
            let support = gold.iter().filter(|&&g| g == c).count() as f64;
            let prec = if predicted > 0.0 { tp / predicted } else { 0.0 };
            let rec = tp / support;
            let f1 = if prec + rec > 0.0 { 2.0 * prec * rec / (prec + rec) } else { 0.0 };
            let w = support / n as f64;
            p += w * prec;
            r += w * rec;
            f += w * f1;
        }
        let correct = gold.iter().zip(pred).filter(|(g, q)| g == q).count();
        ClassificationReport {
            precision: p,
            recall: r,
            f1: f,
            accuracy: if n > 0 { correct as f64 / n as f64 } else { 0.0 },
            support: n,
        }
    }
}

impl std::fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:>9} {:>9} {:>9} {:>9}", "Precision", "Recall", "F1", "Accuracy")?;
        write!(
            f,
            "{:>9.1} {:>9.1} {:>9.1} {:>9.1}",
            100.0 * self.precision,
            100.0 * self.recall,
            100.0 * self.f1,
            100.0 * self.accuracy
        )
    }
}
