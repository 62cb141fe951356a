#![allow(dead_code)]

pub mod oracles;

use rand::seq::IndexedRandom;
use rand::Rng;
use topicvec::rng_from_seed;

pub const MONEY: &[&str] = &[
    "money", "loan", "cash", "deposit", "credit", "account", "interest", "teller", "payment", "mortgage",
];
pub const WATER: &[&str] = &[
    "river", "water", "shore", "fish", "boat", "stream", "flood", "mud", "reed", "current",
];
pub const NEUTRAL: &[&[&str]] = &[
    &["monday", "tuesday", "wednesday", "thursday", "friday", "weekend"],
    &["red", "green", "blue", "yellow", "purple", "orange"],
    &["one", "two", "three", "four", "five", "six"],
    &["cat", "dog", "horse", "sheep", "goat", "cow"],
    &["bread", "cheese", "apple", "soup", "rice", "tea"],
];
pub const POLYSEME: &str = "bank";

/// Two themes sharing one polysemous word and a set of neutral word
/// clusters. Each document has one theme; about a third of its sentences
/// contain only words from one neutral cluster.
pub fn themed_corpus(seed: u64, docs: usize) -> String {
    let mut rng = rng_from_seed(seed);
    let mut out = String::new();
    for d in 0..docs {
        let theme = if d % 2 == 0 { MONEY } else { WATER };
        for _ in 0..10 {
            let cluster = NEUTRAL.choose(&mut rng).unwrap();
            let mut sent: Vec<&str> = Vec::with_capacity(8);
            if rng.random_bool(0.3) {
                for _ in 0..8 {
                    sent.push(cluster.choose(&mut rng).unwrap());
                }
            } else {
                for _ in 0..6 {
                    sent.push(theme.choose(&mut rng).unwrap());
                }
                for _ in 0..2 {
                    sent.push(cluster.choose(&mut rng).unwrap());
                }
                if rng.random_bool(0.5) {
                    let i = rng.random_range(0..6);
                    sent[i] = POLYSEME;
                }
            }
            out.push_str(&sent.join(" "));
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// Documents drawn from one of two disjoint word sets (`w0..w{half}` and
/// `w{half}..w{2 half}`), alternating.
pub fn two_topic_corpus(docs: usize, half: usize, doc_len: usize, seed: u64) -> (topicvec::corpus::RawCorpus, Vec<usize>) {
    let mut rng = rng_from_seed(seed);
    let mut documents = Vec::new();
    let mut labels = Vec::new();
    for d in 0..docs {
        let t = d % 2;
        let sentence: Vec<String> = (0..doc_len)
            .map(|_| format!("w{}", t * half + rng.random_range(0..half)))
            .collect();
        documents.push(vec![sentence]);
        labels.push(t);
    }
    (topicvec::corpus::RawCorpus { documents }, labels)
}

pub fn random_unit_rows<R: Rng>(rng: &mut R, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
        .collect()
}

pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// A random orthogonal matrix: Q of the QR decomposition of a Gaussian
/// matrix, with column signs fixed by R's diagonal.
pub fn random_orthogonal<R: Rng>(rng: &mut R, d: usize) -> nalgebra::DMatrix<f64> {
    let g = nalgebra::DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}
