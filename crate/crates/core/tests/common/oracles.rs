//! Independent reference implementations used as test oracles.

use rand::Rng;
use topicvec::alignment::UnifiedModel;
use topicvec::rng_from_seed;

pub struct Fixture {
    pub model: UnifiedModel,
    pub words: Vec<String>,
    /// Per word, per topic, the vector if present.
    pub vectors: Vec<Vec<Option<Vec<f64>>>>,
}

pub fn fixture(seed: u64, k: usize, d: usize, n_words: usize) -> Fixture {
    let mut rng = rng_from_seed(seed);
    let words: Vec<String> = (0..n_words).map(|i| format!("w{i}")).collect();
    let mut vectors = Vec::new();
    let mut records = Vec::new();
    for w in &words {
        let mut per = vec![None; k];
        let forced = rng.random_range(0..k);
        for (t, slot) in per.iter_mut().enumerate() {
            if t == forced || rng.random_bool(0.6) {
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                records.push((w.clone(), t, v.clone()));
                *slot = Some(v);
            }
        }
        vectors.push(per);
    }
    let model = UnifiedModel::from_records(k, d, records.iter().map(|(w, t, v)| (w.as_str(), *t, v.as_slice()))).unwrap();
    Fixture { model, words, vectors }
}

pub fn oracle_cos(a: &[f64], b: &[f64]) -> f64 {
    let mut ab = 0.0;
    let mut aa = 0.0;
    let mut bb = 0.0;
    for i in 0..a.len() {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    ab / (aa.sqrt() * bb.sqrt())
}

pub fn available(v: &[Option<Vec<f64>>], p: &[f64]) -> Vec<(f64, Vec<f64>)> {
    let mass: f64 = (0..v.len()).filter(|&t| v[t].is_some()).map(|t| p[t]).sum();
    (0..v.len())
        .filter_map(|t| v[t].as_ref().map(|x| (p[t] / mass, x.clone())))
        .collect()
}

pub fn oracle_avg(a: &[Option<Vec<f64>>], pa: &[f64], b: &[Option<Vec<f64>>], pb: &[f64]) -> f64 {
    let k = a.len() as f64;
    let mut s = 0.0;
    for (p, x) in available(a, pa) {
        for (q, y) in available(b, pb) {
            s += p * q * oracle_cos(&x, &y);
        }
    }
    s / (k * k)
}

pub fn oracle_max(a: &[Option<Vec<f64>>], pa: &[f64], b: &[Option<Vec<f64>>], pb: &[f64]) -> f64 {
    let best = |v: &[Option<Vec<f64>>], p: &[f64]| {
        let mut bt = None;
        for t in 0..v.len() {
            if v[t].is_some() && bt.is_none_or(|b: usize| p[t] > p[b]) {
                bt = Some(t);
            }
        }
        v[bt.unwrap()].clone().unwrap()
    };
    oracle_cos(&best(a, pa), &best(b, pb))
}

pub fn random_posterior<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Ranks by counting, averaging over ties.
pub fn oracle_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn oracle_spearman(x: &[f64], y: &[f64]) -> f64 {
    let rx = oracle_ranks(x);
    let ry = oracle_ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Full similarity matrices, then the row distance.
pub fn dense_anchor_scores(topics: &[Vec<Vec<f64>>], global: &[Vec<f64>]) -> Vec<f64> {
    let sim = |x: &[Vec<f64>]| -> Vec<Vec<f64>> {
        x.iter()
            .map(|a| x.iter().map(|b| a.iter().zip(b).map(|(p, q)| p * q).sum()).collect())
            .collect()
    };
    let sg = sim(global);
    let sk: Vec<Vec<Vec<f64>>> = topics.iter().map(|x| sim(x)).collect();
    let n = global.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mean = sk.iter().map(|s| s[i][j]).sum::<f64>() / sk.len() as f64;
                    (mean - sg[i][j]).powi(2)
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}
