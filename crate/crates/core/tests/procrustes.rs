mod common;

use common::{gaussian, random_orthogonal};
use nalgebra::DMatrix;
use proptest::prelude::*;
use topicvec::alignment::{build_unified, mean_residual, objective, procrustes};
use topicvec::embeddings::EmbeddingMatrix;
use topicvec::rng_from_seed;

fn gaussian_matrix(seed: u64, n: usize, d: usize) -> DMatrix<f64> {
    let mut rng = rng_from_seed(seed);
    DMatrix::from_fn(n, d, |_, _| gaussian(&mut rng))
}

#[test]
fn recovers_planted_map() {
    for (seed, d) in [(1, 2), (2, 7), (3, 30)] {
        let a = gaussian_matrix(seed, 4 * d, d);
        let m = random_orthogonal(&mut rng_from_seed(seed + 100), d);
        let b = &a * m.transpose();
        let fit = procrustes(&a, &b).unwrap();
        assert!((&fit.matrix - &m).amax() < 1e-9, "d={d}");
        assert!(mean_residual(&fit, &a, &b) < 1e-18);
        assert!(fit.orthogonality_error() < 1e-12);
    }
}

/// In two dimensions every orthogonal map is a rotation or a reflection by
/// some angle, so a fine angle grid bounds the optimum from above.
#[test]
fn two_dimensional_optimum_beats_angle_grid() {
    for seed in 0..5 {
        let a = gaussian_matrix(seed, 12, 2);
        let b = gaussian_matrix(seed + 50, 12, 2);
        let best = objective(&procrustes(&a, &b).unwrap().matrix, &a, &b);
        let mut grid_best = f64::INFINITY;
        for step in 0..20_000 {
            let t = step as f64 * std::f64::consts::TAU / 20_000.0;
            let (s, c) = t.sin_cos();
            for m in [
                DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
                DMatrix::from_row_slice(2, 2, &[c, s, s, -c]),
            ] {
                grid_best = grid_best.min(objective(&m, &a, &b));
            }
        }
        assert!(best <= grid_best + 1e-12, "{best} > {grid_best}");
        assert!(grid_best - best < 1e-3);
    }
}

#[test]
fn shape_mismatch_and_empty_rejected() {
    assert!(procrustes(&DMatrix::zeros(3, 2), &DMatrix::zeros(2, 2)).is_err());
    assert!(procrustes(&DMatrix::zeros(0, 2), &DMatrix::zeros(0, 2)).is_err());
}

fn space(words: &[&str], rows: &DMatrix<f64>) -> EmbeddingMatrix {
    EmbeddingMatrix::from_rows(
        words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.to_string(), rows.row(i).iter().copied().collect()))
            .collect(),
    )
    .unwrap()
}

/// Topic spaces that are exact rotations of the global space map back onto
/// it, so each word's aligned vectors equal its global vector.
#[test]
fn exact_rotations_collapse_onto_global() {
    let d = 5;
    let words: Vec<String> = (0..20).map(|i| format!("w{i:02}")).collect();
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    let g = gaussian_matrix(9, 20, d);
    let global = space(&refs, &g).normalize_rows().unwrap();
    let gn = DMatrix::from_row_slice(20, d, global.as_slice());
    let topics: Vec<EmbeddingMatrix> = (0..3)
        .map(|k| space(&refs, &(&gn * random_orthogonal(&mut rng_from_seed(k), d))))
        .collect();
    let (model, maps) = build_unified(&topics, &global, &refs[..12]).unwrap();
    assert_eq!(model.num_topics(), 3);
    for m in &maps {
        assert!(m.orthogonality_error() < 1e-12);
    }
    for w in &refs {
        let target = global.get(w).unwrap();
        for k in 0..3 {
            let v = model.vector(w, k).unwrap();
            let err = v.iter().zip(target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{w} topic {k}: {err}");
        }
    }
}

#[test]
fn missing_anchor_names_topic() {
    let g = space(&["a", "b"], &DMatrix::identity(2, 2));
    let t = space(&["a", "c"], &DMatrix::identity(2, 2));
    let err = build_unified(&[t], &g, &["a", "b"]).unwrap_err();
    assert!(err.to_string().contains("topic space 0"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fitted_map_is_orthogonal_and_no_worse_than_random(seed in any::<u64>(), d in 2usize..12, extra in 0usize..10) {
        let n = d + extra;
        let a = gaussian_matrix(seed, n, d);
        let b = gaussian_matrix(seed ^ 0xabc, n, d);
        let fit = procrustes(&a, &b).unwrap();
        prop_assert!(fit.orthogonality_error() < 1e-10);
        let best = fit.objective(&a, &b);
        let mut rng = rng_from_seed(seed ^ 7);
        for _ in 0..5 {
            let r = random_orthogonal(&mut rng, d);
            prop_assert!(best <= objective(&r, &a, &b) + 1e-9);
        }
        prop_assert!(best <= objective(&DMatrix::identity(d, d), &a, &b) + 1e-9);
    }
}
