use std::fs;
use std::path::{Path, PathBuf};

use topicvec::alignment::UnifiedModel;
use topicvec::pipeline::{run_pipeline, PipelineConfig, RunManifest, MANIFEST_FILE, SMOOTHED_FILE, UNIFIED_FILE};
use topicvec::Error;

fn tiny_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/tiny_corpus.txt")
}

fn config(out: &Path) -> PipelineConfig {
    PipelineConfig {
        corpus: tiny_corpus(),
        output_dir: out.to_path_buf(),
        topics: 2,
        dim: 16,
        alpha: Some(0.1),
        lda_iterations: 100,
        anchors: 20,
        components: Some(2),
        ..PipelineConfig::default()
    }
}

#[test]
fn smoke_run_then_idempotent_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let first = run_pipeline(&cfg).unwrap();
    let names: Vec<&str> = first.stages.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["lda-train", "partition", "embed-global", "embed-topics", "anchors", "align", "smooth"]);
    assert!(first.stages.iter().all(|s| !s.skipped));
    for s in &first.stages {
        for f in &s.outputs {
            assert!(dir.path().join(&f.path).exists(), "{}", f.path);
        }
    }
    RunManifest::read_verified(dir.path().join(MANIFEST_FILE)).unwrap();
    let model = UnifiedModel::read(dir.path().join(SMOOTHED_FILE)).unwrap();
    assert!(model.smoothed().is_some());
    assert_eq!(model.meta.anchor_count, 20);

    let second = run_pipeline(&cfg).unwrap();
    assert!(second.stages.iter().all(|s| s.skipped));

    // a changed smoothing seed reruns only the last stage
    let third = run_pipeline(&PipelineConfig { smooth_seed: 99, ..cfg }).unwrap();
    let ran: Vec<&str> = third.stages.iter().filter(|s| !s.skipped).map(|s| s.name.as_str()).collect();
    assert_eq!(ran, ["smooth"]);
}

#[test]
fn tampering_is_detected_and_repaired() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    run_pipeline(&cfg).unwrap();
    let anchors = dir.path().join("anchors.tsv");
    let original = fs::read(&anchors).unwrap();
    fs::write(&anchors, b"bank\t0\n").unwrap();
    let err = RunManifest::read_verified(dir.path().join(MANIFEST_FILE)).unwrap_err();
    assert!(err.to_string().contains("anchors.tsv"), "{err}");

    let rerun = run_pipeline(&cfg).unwrap();
    assert!(!rerun.stage("anchors").unwrap().skipped);
    assert!(rerun.stage("align").unwrap().skipped);
    assert_eq!(fs::read(&anchors).unwrap(), original);
}

#[test]
fn invalid_threshold_fails_before_any_work() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = PipelineConfig { threshold: 1.5, ..config(&out) };
    assert!(matches!(run_pipeline(&cfg), Err(Error::Config(_))));
    assert!(!out.exists());
}

#[test]
fn failing_stage_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig {
        anchors: 100_000,
        components: None,
        ..config(dir.path())
    };
    match run_pipeline(&cfg) {
        Err(Error::Stage { stage, .. }) => assert_eq!(stage, "anchors"),
        other => panic!("{other:?}"),
    }
    // earlier stages keep their outputs
    assert!(dir.path().join("global.vec").exists());
    assert!(!dir.path().join(UNIFIED_FILE).exists());
}

#[test]
fn missing_corpus_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig {
        corpus: dir.path().join("nope.txt"),
        ..config(dir.path())
    };
    assert!(matches!(run_pipeline(&cfg), Err(Error::Io { .. })));
}
