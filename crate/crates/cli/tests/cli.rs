use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tiny_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/tiny_corpus.txt")
}

fn topicvec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topicvec"))
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("TOPICVEC_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = topicvec(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL: &[&str] = &[
    "--set", "topics=2", "--set", "dim=16", "--set", "alpha=0.1", "--set", "lda_iterations=100",
    "--set", "anchors=20",
];

#[test]
fn pipeline_run_and_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let corpus = format!("corpus={}", s(&tiny_corpus()));
    let mut args = vec!["pipeline", "run", "--set", &corpus, "--output-dir", s(&out), "--seed", "5"];
    args.extend_from_slice(SMALL);
    let stdout = ok(&args);
    assert!(stdout.contains("align\tdone"), "{stdout}");
    let again = ok(&args);
    assert!(again.lines().all(|l| l.ends_with("skipped")), "{again}");

    let manifest = out.join("manifest.json");
    assert!(ok(&["pipeline", "validate", "--manifest", s(&manifest)]).contains("manifest ok"));
    fs::write(out.join("global.vec"), "1 2\nx 0 1\n").unwrap();
    let tampered = topicvec(&["pipeline", "validate", "--manifest", s(&manifest)]);
    assert!(!tampered.status.success());
    assert!(String::from_utf8_lossy(&tampered.stderr).contains("global.vec"));

    let model = out.join("unified.model");
    let sim: f64 = ok(&["analyze", "cross-sim", "--model", s(&model), "--word", "cat", "--j", "0", "--k", "1"])
        .trim()
        .parse()
        .unwrap();
    assert!((-1.0..=1.0).contains(&sim));
    let neighbors = ok(&["analyze", "neighbors", "--model", s(&model), "--word", "cat", "--topic", "0", "--n", "3"]);
    assert_eq!(neighbors.lines().count(), 4);
    assert!(neighbors.starts_with("rank,word,cosine\n1,"));
    let pca = ok(&["analyze", "pca", "--model", s(&model), "--words", "bank,cat"]);
    assert!(pca.starts_with("word,topic,pc1,pc2\n"));
    assert!(pca.lines().count() >= 3);
}

#[test]
fn stepwise_commands_match_pipeline_layout() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    let corpus = tiny_corpus();
    ok(&["lda-train", "--corpus", s(&corpus), "--output", s(&p("lda.model")), "--topics", "2", "--alpha", "0.1", "--iterations", "100", "--seed", "1"]);
    let parts = ok(&["partition", "--corpus", s(&corpus), "--model", s(&p("lda.model")), "--output-dir", s(dir.path())]);
    assert_eq!(parts.lines().count(), 2);
    ok(&["embed-train", "--corpus", s(&corpus), "--output", s(&p("global.vec")), "--dim", "8"]);
    for k in 0..2 {
        let sub = p(&format!("sub_{k:03}.txt"));
        ok(&["embed-train", "--corpus", s(&sub), "--output", s(&p(&format!("tdsm_{k:03}.vec"))), "--dim", "8", "--seed", &k.to_string()]);
    }
    let glob = format!("{}/tdsm_*.vec", s(dir.path()));
    ok(&["anchors", "--global", s(&p("global.vec")), "--topics", &glob, "--count", "10", "--output", s(&p("anchors.tsv"))]);
    assert_eq!(fs::read_to_string(p("anchors.tsv")).unwrap().lines().count(), 10);
    let aligned = ok(&["align", "--global", s(&p("global.vec")), "--topics", &glob, "--anchors", s(&p("anchors.tsv")), "--output", s(&p("unified.model"))]);
    assert!(aligned.contains("topic vectors"));
    ok(&["smooth", "--model", s(&p("unified.model")), "--components", "1", "--output", s(&p("smoothed.model"))]);

    let scws = "1\tbank\tn\tmoney\tn\tthe <b> bank </b> loan cash\t<b> money </b> credit\t8.0\n\
                2\tbank\tn\triver\tn\tfish <b> bank </b> shore\tboat <b> river </b>\t7.0\n\
                3\tcat\tn\tdog\tn\tred <b> cat </b> cow\t<b> dog </b> goat\t6.0\n\
                4\tcat\tn\tzebra\tn\t<b> cat </b>\t<b> zebra </b>\t1.0\n";
    fs::write(p("scws.txt"), scws).unwrap();
    let report = ok(&["eval-scws", "--data", s(&p("scws.txt")), "--model", s(&p("unified.model")), "--lda", s(&p("lda.model")), "--metric", "maxsimc", "--predictions", s(&p("pred.csv"))]);
    assert!(report.contains("pairs 4 covered 3"), "{report}");
    assert_eq!(fs::read_to_string(p("pred.csv")).unwrap().lines().count(), 4);
    let backoff = ok(&["eval-scws", "--data", s(&p("scws.txt")), "--model", s(&p("smoothed.model")), "--smoothed", "--lda", s(&p("lda.model")), "--backoff-global", s(&p("global.vec")), "--exclude-target"]);
    assert!(backoff.contains("pairs 4 covered 3"), "{backoff}");

    let docs = "0\tcash loan bank credit\n1\triver water bank fish\n0\tmoney deposit teller\n1\tboat shore stream\n";
    fs::write(p("docs.tsv"), docs).unwrap();
    ok(&["features", "--input", s(&p("docs.tsv")), "--model", s(&p("unified.model")), "--lda", s(&p("lda.model")), "--output", s(&p("f.csv")), "--mode", "avgc"]);
    let csv = fs::read_to_string(p("f.csv")).unwrap();
    assert!(csv.starts_with("label,v1,"));
    assert_eq!(csv.lines().count(), 5);
    let table = ok(&["classify", "--train", s(&p("f.csv"))]);
    assert!(table.contains("Precision") && table.contains("Accuracy"));
}

#[test]
fn invalid_config_is_reported_per_field() {
    let out = topicvec(&["pipeline", "validate", "--set", "threshold=1.5", "--set", "topics=0"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("threshold") && err.contains("topics"), "{err}");
    assert!(ok(&["pipeline", "validate"]).contains("configuration ok"));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(
        &cfg,
        format!("corpus = {}\ntopics = 2\ndim = 8\nalpha = 0.1\nlda_iterations = 50\nanchors = 10\n", s(&tiny_corpus())),
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_topicvec"))
        .args(["pipeline", "run", "--config", s(&cfg)])
        .env("TOPICVEC_OUTPUT_DIR", dir.path().join("envout"))
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("envout/unified.model").exists());
}
