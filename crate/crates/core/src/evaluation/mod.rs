//! Contextual word similarity, rank correlation, the SCWS harness,
//! document features and a small linear classifier.

mod classifier;
mod features;
mod scws;
mod similarity;
mod spearman;

pub use classifier::{ClassificationReport, LinearClassifier, TrainParams};
pub use features::{doc_features, doc_features_with_posterior, read_feature_csv, write_feature_csv, FeatureMode, FeatureRecord};
pub use scws::{parse_scws, parse_scws_str, run_scws, ContextualPair, ScwsReport};
pub use similarity::{
    avg_sim_c, max_sim_c, ContextScorer, GlobalBackoff, Metric, SenseModel, Senses, SmoothedSenses, TopicSenses,
};
pub use spearman::{fractional_ranks, pearson, spearman};
