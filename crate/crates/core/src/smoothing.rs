//! Per-word Gaussian mixture smoothing of aligned topic vectors.
//!
//! A word's available topic vectors are clustered into `N` diagonal
//! Gaussians (k-means++ seeding, Lloyd refinement, then EM); the normalized
//! component means replace the topic vectors, and each topic is mapped to
//! the component with its largest responsibility.

use log::warn;
use rand::Rng;
use rayon::prelude::*;

use crate::alignment::UnifiedModel;
use crate::error::{Error, Result};
use crate::linalg::{argmax, norm, squared_distance};
use crate::{derive_seed, rng_from_seed};

pub const VARIANCE_FLOOR: f64 = 1e-6;
const KMEANS_MAX_ITERS: usize = 50;
const LN_2PI: f64 = 1.837_877_066_409_345_3;

#[derive(Clone, Debug, PartialEq)]
pub struct GmmParams {
    pub seed: u64,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for GmmParams {
    fn default() -> Self {
        GmmParams {
            seed: 0,
            max_iters: 200,
            tol: 1e-6,
        }
    }
}

/// A fitted diagonal-covariance mixture over one word's topic vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct WordGmm {
    pub requested_components: usize,
    pub weights: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
    /// Per point, one responsibility per component.
    pub responsibilities: Vec<Vec<f64>>,
    /// Per point, the component with the largest responsibility.
    pub labels: Vec<usize>,
    /// Log-likelihood after initialization and after every EM step.
    pub log_likelihood_trace: Vec<f64>,
}

impl WordGmm {
    pub fn components(&self) -> usize {
        self.weights.len()
    }

    pub fn log_likelihood(&self) -> f64 {
        *self.log_likelihood_trace.last().expect("fitted model has a trace")
    }

    /// Component means, unit-normalized. A zero mean is returned unchanged.
    pub fn smoothed_vectors(&self) -> Vec<Vec<f64>> {
        self.means
            .iter()
            .map(|m| {
                let n = norm(m);
                if n == 0.0 {
                    warn!("zero component mean left unnormalized");
                    m.clone()
                } else {
                    m.iter().map(|x| x / n).collect()
                }
            })
            .collect()
    }
}

fn count_distinct(points: &[&[f64]]) -> usize {
    let mut sorted: Vec<&[f64]> = points.to_vec();
    let cmp = |a: &&[f64], b: &&[f64]| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    sorted.sort_by(cmp);
    sorted.dedup_by(|a, b| cmp(a, b).is_eq());
    sorted.len()
}

fn nearest(centers: &[Vec<f64>], p: &[f64]) -> (usize, f64) {
    centers
        .iter()
        .enumerate()
        .map(|(c, m)| (c, squared_distance(m, p)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

/// k-means++ seeding followed by Lloyd iterations. Returns the centers and
/// the label of each point.
pub fn kmeans<R: Rng>(points: &[&[f64]], k: usize, max_iters: usize, rng: &mut R) -> (Vec<Vec<f64>>, Vec<usize>) {
    let m = points.len();
    let mut centers: Vec<Vec<f64>> = vec![points[rng.random_range(0..m)].to_vec()];
    let mut dist: Vec<f64> = points.iter().map(|p| squared_distance(&centers[0], p)).collect();
    while centers.len() < k {
        let total: f64 = dist.iter().sum();
        let next = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut pick = dist.iter().rposition(|&d| d > 0.0).unwrap_or(0);
            for (i, &d) in dist.iter().enumerate() {
                if d > 0.0 && u < d {
                    pick = i;
                    break;
                }
                u -= d;
            }
            pick
        } else {
            rng.random_range(0..m)
        };
        centers.push(points[next].to_vec());
        for (d, p) in dist.iter_mut().zip(points) {
            *d = d.min(squared_distance(&centers[centers.len() - 1], p));
        }
    }

    let dim = points[0].len();
    let mut labels = vec![usize::MAX; m];
    for _ in 0..max_iters {
        let mut changed = false;
        for (l, p) in labels.iter_mut().zip(points) {
            let (c, _) = nearest(&centers, p);
            if *l != c {
                *l = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (&l, p) in labels.iter().zip(points) {
            counts[l] += 1;
            sums[l].iter_mut().zip(p.iter()).for_each(|(s, x)| *s += x);
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    (centers, labels)
}

struct Mixture {
    weights: Vec<f64>,
    means: Vec<Vec<f64>>,
    variances: Vec<Vec<f64>>,
}

fn m_step(points: &[&[f64]], resp: &[Vec<f64>], n: usize) -> Mixture {
    let dim = points[0].len();
    let mut nk = vec![10.0 * f64::EPSILON; n];
    let mut means = vec![vec![0.0; dim]; n];
    for (r, p) in resp.iter().zip(points) {
        for c in 0..n {
            nk[c] += r[c];
            means[c].iter_mut().zip(p.iter()).for_each(|(s, x)| *s += r[c] * x);
        }
    }
    for c in 0..n {
        means[c].iter_mut().for_each(|s| *s /= nk[c]);
    }
    let mut variances = vec![vec![0.0; dim]; n];
    for (r, p) in resp.iter().zip(points) {
        for c in 0..n {
            for ((v, x), mu) in variances[c].iter_mut().zip(p.iter()).zip(&means[c]) {
                *v += r[c] * (x - mu) * (x - mu);
            }
        }
    }
    for c in 0..n {
        variances[c].iter_mut().for_each(|v| *v = (*v / nk[c]).max(VARIANCE_FLOOR));
    }
    let total: f64 = nk.iter().sum();
    Mixture {
        weights: nk.iter().map(|x| x / total).collect(),
        means,
        variances,
    }
}

/// Returns the total log-likelihood and fills `resp`.
fn e_step(points: &[&[f64]], mix: &Mixture, resp: &mut [Vec<f64>]) -> f64 {
    let n = mix.weights.len();
    let log_norm: Vec<f64> = mix
        .variances
        .iter()
        .map(|var| -0.5 * var.iter().map(|v| LN_2PI + v.ln()).sum::<f64>())
        .collect();
    let mut ll = 0.0;
    let mut logp = vec![0.0; n];
    for (r, p) in resp.iter_mut().zip(points) {
        for c in 0..n {
            let maha: f64 = p
                .iter()
                .zip(&mix.means[c])
                .zip(&mix.variances[c])
                .map(|((x, mu), v)| (x - mu) * (x - mu) / v)
                .sum();
            logp[c] = mix.weights[c].ln() + log_norm[c] - 0.5 * maha;
        }
        let max = logp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + logp.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
        for c in 0..n {
            r[c] = (logp[c] - lse).exp();
        }
        ll += lse;
    }
    ll
}

/// Fits an `n_components` diagonal Gaussian mixture to `points`.
///
/// When fewer distinct points than components exist, the component count
/// is reduced to the number of distinct points. Means are initialized by
/// k-means; EM stops once the log-likelihood gains less than `tol` or after
/// `max_iters` steps.
pub fn fit_gmm(points: &[&[f64]], n_components: usize, params: &GmmParams) -> Result<WordGmm> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("cannot fit a mixture to zero points".into()));
    }
    if n_components == 0 {
        return Err(Error::InvalidArgument("at least one component required".into()));
    }
    let dim = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    let n = n_components.min(count_distinct(points));
    let mut rng = rng_from_seed(params.seed);
    let (_, labels) = kmeans(points, n, KMEANS_MAX_ITERS, &mut rng);
    let mut resp: Vec<Vec<f64>> = labels
        .iter()
        .map(|&l| {
            let mut r = vec![0.0; n];
            r[l] = 1.0;
            r
        })
        .collect();
    let mut mix = m_step(points, &resp, n);
    let mut trace = vec![e_step(points, &mix, &mut resp)];
    for _ in 0..params.max_iters {
        let next = m_step(points, &resp, n);
        let mut next_resp = resp.clone();
        let ll = e_step(points, &next, &mut next_resp);
        let gain = ll - trace[trace.len() - 1];
        mix = next;
        resp = next_resp;
        trace.push(ll);
        if gain < params.tol {
            break;
        }
    }
    let labels = resp.iter().map(|r| argmax(r).unwrap_or(0)).collect();
    Ok(WordGmm {
        requested_components: n_components,
        weights: mix.weights,
        means: mix.means,
        variances: mix.variances,
        responsibilities: resp,
        labels,
        log_likelihood_trace: trace,
    })
}

/// Smoothed vectors of one word and the topic-to-component table.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothedWord {
    vectors: Vec<Vec<f64>>,
    assignment: Vec<(usize, usize)>,
}

impl SmoothedWord {
    pub fn new(vectors: Vec<Vec<f64>>, mut assignment: Vec<(usize, usize)>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidArgument("smoothed word without components".into()));
        }
        if let Some(&(_, n)) = assignment.iter().find(|&&(_, n)| n >= vectors.len()) {
            return Err(Error::InvalidArgument(format!("assignment to missing component {n}")));
        }
        assignment.sort_unstable();
        Ok(SmoothedWord { vectors, assignment })
    }

    pub fn components(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.iter().map(Vec::as_slice)
    }

    pub fn vector(&self, n: usize) -> &[f64] {
        &self.vectors[n]
    }

    /// `(topic, component)` pairs sorted by topic.
    pub fn assignment(&self) -> &[(usize, usize)] {
        &self.assignment
    }

    pub fn component_posterior(&self, topic_posterior: &[f64]) -> Result<Vec<f64>> {
        component_posterior(&self.assignment, self.components(), topic_posterior)
    }
}

/// Maps a topic posterior to components: each component collects the mass
/// of the topics assigned to it, renormalized over the word's available
/// topics. Uniform when those topics carry no mass.
pub fn component_posterior(
    assignment: &[(usize, usize)],
    components: usize,
    topic_posterior: &[f64],
) -> Result<Vec<f64>> {
    if assignment.is_empty() || components == 0 {
        return Err(Error::InvalidArgument("empty topic-to-component assignment".into()));
    }
    let mut p = vec![0.0; components];
    for &(k, n) in assignment {
        p[n] += topic_posterior.get(k).copied().unwrap_or(0.0);
    }
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        p.iter_mut().for_each(|x| *x /= total);
    } else {
        p.iter_mut().for_each(|x| *x = 1.0 / components as f64);
    }
    Ok(p)
}

/// Fits one mixture per word of the unified model. Word `i` uses a seed
/// derived from `(params.seed, i)`, so fits are independent of scheduling.
pub fn smooth_model(model: &UnifiedModel, n_components: usize, params: &GmmParams) -> Result<Vec<SmoothedWord>> {
    let dim = model.dim();
    (0..model.vocab().len())
        .into_par_iter()
        .map(|id| {
            let wt = model.word_topics(id);
            let (topics, points): (Vec<usize>, Vec<&[f64]>) = wt.iter(dim).unzip();
            let word_params = GmmParams {
                seed: derive_seed(params.seed, id as u64),
                ..params.clone()
            };
            let gmm = fit_gmm(&points, n_components, &word_params)?;
            let assignment = topics.into_iter().zip(gmm.labels.iter().copied()).collect();
            SmoothedWord::new(gmm.smoothed_vectors(), assignment)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refs(points: &[Vec<f64>]) -> Vec<&[f64]> {
        points.iter().map(Vec::as_slice).collect()
    }

    #[test]
    fn single_component_is_centroid_with_sample_variance() {
        let pts = vec![vec![1.0, 2.0], vec![3.0, 2.0], vec![5.0, 2.0]];
        let g = fit_gmm(&refs(&pts), 1, &GmmParams::default()).unwrap();
        assert_eq!(g.components(), 1);
        assert!((g.means[0][0] - 3.0).abs() < 1e-12 && (g.means[0][1] - 2.0).abs() < 1e-12);
        assert!((g.variances[0][0] - 8.0 / 3.0).abs() < 1e-9);
        assert_eq!(g.variances[0][1], VARIANCE_FLOOR);
        assert!((g.weights[0] - 1.0).abs() < 1e-9);
        let s = g.smoothed_vectors();
        let n = (9.0f64 + 4.0).sqrt();
        assert!((s[0][0] - 3.0 / n).abs() < 1e-12 && (s[0][1] - 2.0 / n).abs() < 1e-12);
    }

    #[test]
    fn degenerate_points_reduce_components() {
        let pts = vec![vec![0.5, -0.5]];
        let g = fit_gmm(&refs(&pts), 3, &GmmParams::default()).unwrap();
        assert_eq!(g.components(), 1);
        assert_eq!(g.requested_components, 3);
        assert!(g.means[0].iter().zip(&pts[0]).all(|(a, b)| (a - b).abs() < 1e-12));

        let dup = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(fit_gmm(&refs(&dup), 3, &GmmParams::default()).unwrap().components(), 2);
        assert!(fit_gmm(&[], 2, &GmmParams::default()).is_err());
    }

    #[test]
    fn responsibilities_sum_to_one() {
        let pts: Vec<Vec<f64>> = (0..12).map(|i| vec![(i as f64).sin(), (i as f64 * 0.7).cos(), i as f64 * 0.1]).collect();
        let g = fit_gmm(&refs(&pts), 3, &GmmParams { seed: 4, ..GmmParams::default() }).unwrap();
        for r in &g.responsibilities {
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        assert!((g.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(g.weights.iter().all(|&w| w > 0.0));
        assert!(g.variances.iter().flatten().all(|&v| v >= VARIANCE_FLOOR));
        let again = fit_gmm(&refs(&pts), 3, &GmmParams { seed: 4, ..GmmParams::default() }).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn component_posterior_rule() {
        assert_eq!(component_posterior(&[(0, 0), (1, 0)], 1, &[0.3, 0.7]).unwrap(), [1.0]);
        let p = component_posterior(&[(0, 0), (1, 0), (2, 1)], 2, &[0.2, 0.3, 0.5]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        // topic 2 unavailable: renormalize over {0, 1}
        let p = component_posterior(&[(0, 0), (1, 1)], 2, &[0.1, 0.3, 0.6]).unwrap();
        assert!((p[0] - 0.25).abs() < 1e-15 && (p[1] - 0.75).abs() < 1e-15);
        let p = component_posterior(&[(0, 0), (1, 1)], 2, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(p, [0.5, 0.5]);
        assert!(component_posterior(&[], 1, &[1.0]).is_err());
    }

    #[test]
    fn smooth_model_assigns_every_available_topic() {
        let recs: Vec<(&str, usize, Vec<f64>)> = vec![
            ("a", 0, vec![1.0, 0.0]),
            ("a", 1, vec![0.99, 0.1]),
            ("a", 2, vec![0.0, 1.0]),
            ("b", 1, vec![0.6, 0.8]),
        ];
        let m = UnifiedModel::from_records(3, 2, recs.iter().map(|(w, k, v)| (*w, *k, v.as_slice()))).unwrap();
        let s = smooth_model(&m, 2, &GmmParams::default()).unwrap();
        assert_eq!(s[0].components(), 2);
        let topics: Vec<usize> = s[0].assignment().iter().map(|a| a.0).collect();
        assert_eq!(topics, [0, 1, 2]);
        assert_eq!(s[0].assignment()[0].1, s[0].assignment()[1].1);
        assert_ne!(s[0].assignment()[0].1, s[0].assignment()[2].1);
        assert_eq!(s[1].components(), 1);
        assert_eq!(s[1].assignment(), [(1, 0)]);
    }
}
