//! AvgSimC and MaxSimC over multi-prototype word representations.

use crate::alignment::UnifiedModel;
use crate::corpus::encode_sentence;
use crate::derive_seed;
use crate::embeddings::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::linalg::{argmax, cosine};
use crate::topics::{TopicModel, TopicPosterior, DEFAULT_INFER_ITERATIONS};

/// The prototype vectors of one word in one context, each weighted by its
/// posterior probability. Weights sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Senses<'a> {
    /// Prototype ids (topic or component), ascending.
    pub ids: Vec<usize>,
    pub vectors: Vec<&'a [f64]>,
    pub probs: Vec<f64>,
}

impl Senses<'_> {
    /// The prototype with the highest posterior, lowest id on ties.
    pub fn best(&self) -> usize {
        argmax(&self.probs).expect("senses are never empty")
    }
}

/// Anything that turns a word plus a topic posterior into weighted senses.
pub trait SenseModel {
    /// The `K` of the `1/K^2` factor in AvgSimC.
    fn num_prototypes(&self) -> usize;

    /// `None` when the word has no vector at all.
    fn senses<'a>(&'a self, word: &str, topic_posterior: &[f64]) -> Option<Senses<'a>>;
}

/// Restricts `p` to `ids` and renormalizes; uniform when they carry no mass.
fn renormalize(p: &[f64], ids: &[usize]) -> Vec<f64> {
    let mut out: Vec<f64> = ids.iter().map(|&k| p.get(k).copied().unwrap_or(0.0)).collect();
    let total: f64 = out.iter().sum();
    if total > 0.0 {
        out.iter_mut().for_each(|x| *x /= total);
    } else {
        out.iter_mut().for_each(|x| *x = 1.0 / ids.len() as f64);
    }
    out
}

/// Aligned topic vectors; the posterior is renormalized over the word's
/// available topics.
pub struct TopicSenses<'m>(pub &'m UnifiedModel);

impl SenseModel for TopicSenses<'_> {
    fn num_prototypes(&self) -> usize {
        self.0.num_topics()
    }

    fn senses<'a>(&'a self, word: &str, topic_posterior: &[f64]) -> Option<Senses<'a>> {
        let wt = self.0.topics_of(word)?;
        let (ids, vectors): (Vec<usize>, Vec<&[f64]>) = wt.iter(self.0.dim()).unzip();
        if ids.is_empty() {
            return None;
        }
        let probs = renormalize(topic_posterior, &ids);
        Some(Senses { ids, vectors, probs })
    }
}

/// GMM-smoothed vectors, weighted through the topic-to-component map.
pub struct SmoothedSenses<'m> {
    model: &'m UnifiedModel,
    components: usize,
}

impl<'m> SmoothedSenses<'m> {
    pub fn new(model: &'m UnifiedModel) -> Result<Self> {
        let smoothed = model
            .smoothed()
            .ok_or_else(|| Error::InvalidArgument("model carries no smoothed vectors".into()))?;
        let components = smoothed.iter().map(|s| s.components()).max().unwrap_or(1);
        Ok(SmoothedSenses { model, components })
    }
}

impl SenseModel for SmoothedSenses<'_> {
    fn num_prototypes(&self) -> usize {
        self.components
    }

    fn senses<'a>(&'a self, word: &str, topic_posterior: &[f64]) -> Option<Senses<'a>> {
        let s = self.model.smoothed_word(word)?;
        let probs = s.component_posterior(topic_posterior).ok()?;
        Some(Senses {
            ids: (0..s.components()).collect(),
            vectors: s.vectors().collect(),
            probs,
        })
    }
}

/// Falls back to a single global vector for words the inner model lacks.
pub struct GlobalBackoff<'g, M> {
    pub inner: M,
    pub global: &'g EmbeddingMatrix,
}

impl<M: SenseModel> SenseModel for GlobalBackoff<'_, M> {
    fn num_prototypes(&self) -> usize {
        self.inner.num_prototypes()
    }

    fn senses<'a>(&'a self, word: &str, topic_posterior: &[f64]) -> Option<Senses<'a>> {
        self.inner.senses(word, topic_posterior).or_else(|| {
            self.global.get(word).map(|v| Senses {
                ids: vec![0],
                vectors: vec![v],
                probs: vec![1.0],
            })
        })
    }
}

/// `1/K^2 sum_j sum_k p_j p'_k cos(x_j, x'_k)`.
///
/// The terms are summed in sorted order, so swapping the two arguments
/// gives a bit-identical result.
pub fn avg_sim_c(a: &Senses, b: &Senses, num_prototypes: usize) -> f64 {
    let mut terms = Vec::with_capacity(a.vectors.len() * b.vectors.len());
    for (va, pa) in a.vectors.iter().zip(&a.probs) {
        for (vb, pb) in b.vectors.iter().zip(&b.probs) {
            terms.push(pa * pb * cosine(va, vb));
        }
    }
    terms.sort_by(f64::total_cmp);
    let k = num_prototypes as f64;
    terms.iter().sum::<f64>() / (k * k)
}

/// Cosine of the two maximum-posterior prototypes.
pub fn max_sim_c(a: &Senses, b: &Senses) -> f64 {
    cosine(a.vectors[a.best()], b.vectors[b.best()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    AvgSimC,
    MaxSimC,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "avgsimc" => Ok(Metric::AvgSimC),
            "maxsimc" => Ok(Metric::MaxSimC),
            other => Err(Error::InvalidArgument(format!("unknown metric {other:?}"))),
        }
    }
}

/// Scores words in context: infers the context's topic posterior with the
/// LDA model and applies a metric over a sense model.
pub struct ContextScorer<'a, M> {
    pub model: M,
    pub lda: &'a TopicModel,
    pub infer_iterations: usize,
    pub seed: u64,
    /// Leave the target word out of the context passed to LDA.
    pub exclude_target: bool,
}

fn hash_tokens<S: AsRef<str>>(tokens: &[S]) -> u64 {
    // FNV-1a, so identical contexts always get identical posteriors
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for t in tokens {
        for b in t.as_ref().bytes().chain(std::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl<'a, M: SenseModel> ContextScorer<'a, M> {
    pub fn new(model: M, lda: &'a TopicModel) -> Self {
        ContextScorer {
            model,
            lda,
            infer_iterations: DEFAULT_INFER_ITERATIONS,
            seed: 0,
            exclude_target: false,
        }
    }

    /// Topic posterior of a context whose target sits at `target`.
    pub fn posterior<S: AsRef<str>>(&self, context: &[S], target: usize) -> TopicPosterior {
        let tokens: Vec<&str> = context
            .iter()
            .enumerate()
            .filter(|&(i, _)| !(self.exclude_target && i == target))
            .map(|(_, t)| t.as_ref())
            .collect();
        let ids = encode_sentence(&tokens, self.lda.vocab());
        self.lda
            .infer_posterior(&ids, self.infer_iterations, derive_seed(self.seed, hash_tokens(&tokens)))
    }

    /// Similarity of `(w1, c1)` and `(w2, c2)`; `None` if either word has
    /// no vector.
    pub fn score<S: AsRef<str>>(
        &self,
        metric: Metric,
        (w1, c1, t1): (&str, &[S], usize),
        (w2, c2, t2): (&str, &[S], usize),
    ) -> Option<f64> {
        let p1 = self.posterior(c1, t1);
        let p2 = self.posterior(c2, t2);
        let s1 = self.model.senses(w1, p1.probs())?;
        let s2 = self.model.senses(w2, p2.probs())?;
        Some(match metric {
            Metric::AvgSimC => avg_sim_c(&s1, &s2, self.model.num_prototypes()),
            Metric::MaxSimC => max_sim_c(&s1, &s2),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(recs: &[(&str, usize, Vec<f64>)], k: usize) -> UnifiedModel {
        UnifiedModel::from_records(k, recs[0].2.len(), recs.iter().map(|(w, t, v)| (*w, *t, v.as_slice()))).unwrap()
    }

    #[test]
    fn identical_word_single_topic_scores_one() {
        let m = model(&[("bank", 0, vec![0.3, 0.4])], 1);
        let ts = TopicSenses(&m);
        let s = ts.senses("bank", &[1.0]).unwrap();
        assert!((avg_sim_c(&s, &s, 1) - 1.0).abs() < 1e-15);
        assert!((max_sim_c(&s, &s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn peaked_posteriors_pick_single_term() {
        let m = model(
            &[
                ("a", 0, vec![1.0, 0.0]),
                ("a", 1, vec![0.0, 1.0]),
                ("b", 0, vec![0.6, 0.8]),
                ("b", 1, vec![-1.0, 0.0]),
            ],
            2,
        );
        let ts = TopicSenses(&m);
        let a = ts.senses("a", &[1.0, 0.0]).unwrap();
        let b = ts.senses("b", &[1.0, 0.0]).unwrap();
        assert!((avg_sim_c(&a, &b, 2) - 0.25 * 0.6).abs() < 1e-15);
        assert!((max_sim_c(&a, &b) - 0.6).abs() < 1e-15);

        let a1 = ts.senses("a", &[0.0, 1.0]).unwrap();
        let b0 = ts.senses("b", &[0.0, 0.0]).unwrap();
        assert_eq!(b0.probs, [0.5, 0.5]);
        assert!((max_sim_c(&a1, &ts.senses("b", &[0.9, 0.1]).unwrap()) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn posterior_renormalized_over_available_topics() {
        let m = model(&[("a", 1, vec![1.0, 0.0]), ("a", 2, vec![0.0, 1.0])], 3);
        let ts = TopicSenses(&m);
        let s = ts.senses("a", &[0.5, 0.25, 0.25]).unwrap();
        assert_eq!(s.ids, [1, 2]);
        assert_eq!(s.probs, [0.5, 0.5]);
        assert!(TopicSenses(&m).senses("zzz", &[1.0, 0.0, 0.0]).is_none());
    }

    #[test]
    fn backoff_supplies_global_vector() {
        let m = model(&[("a", 0, vec![1.0, 0.0])], 1);
        let g = EmbeddingMatrix::from_rows(vec![("b", vec![0.0, 2.0])]).unwrap();
        let b = GlobalBackoff { inner: TopicSenses(&m), global: &g };
        let expected: &[f64] = &[0.0, 2.0];
        assert_eq!(b.senses("b", &[1.0]).unwrap().vectors, [expected]);
        assert!(b.senses("c", &[1.0]).is_none());
    }

    #[test]
    fn metric_names_parse() {
        assert_eq!("AvgSimC".parse::<Metric>().unwrap(), Metric::AvgSimC);
        assert_eq!("maxsimc".parse::<Metric>().unwrap(), Metric::MaxSimC);
        assert!("cos".parse::<Metric>().is_err());
    }
}
