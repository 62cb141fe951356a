//! Multi-topic word embeddings in a single vector space.
//!
//! The pipeline learns an LDA topic model, soft-partitions the corpus into
//! one sub-corpus per topic, trains a CBOW embedding space on each of them
//! and on the whole corpus, and maps every topic space onto the global space
//! with an orthogonal transform fitted on automatically selected anchor
//! words. Each word then owns up to `K` comparable topic vectors, which can
//! be merged with a per-word Gaussian mixture and scored with contextual
//! similarity metrics.
//!
//! Modules follow the stages:
//!
//! - [`corpus`]: tokenization, vocabularies, encoded corpora.
//! - [`topics`]: collapsed Gibbs LDA, posterior inference, soft partitioning.
//! - [`embeddings`]: CBOW with negative sampling and word2vec text I/O.
//! - [`anchors`]: similarity-distribution stability scores and anchor selection.
//! - [`alignment`]: orthogonal Procrustes maps and the unified model.
//! - [`smoothing`]: per-word Gaussian mixtures over topic vectors.
//! - [`evaluation`]: AvgSimC/MaxSimC, Spearman, SCWS, document features.
//! - [`pipeline`]: configuration, orchestration and run manifests.

pub mod alignment;
pub mod anchors;
pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod evaluation;
pub mod linalg;
pub mod pipeline;
pub mod smoothing;
pub mod topics;

pub use error::{Error, Result};

/// Builds the deterministic random number generator used everywhere a seed
/// is accepted.
pub fn rng_from_seed(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a stream index so independent work items get
/// independent but reproducible generators.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
