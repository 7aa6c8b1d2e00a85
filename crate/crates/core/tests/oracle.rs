use std::collections::BTreeMap;

use landauer_core::analytic::{delta_s, system_weights, Multiplicities};
use landauer_core::oracle::{
    choose_truncation, partial_trace, purity, von_neumann_entropy, verify_point, DensityMatrix, Subsystem,
};
use landauer_core::su11::{build_joint_density, SqueezeParams};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_ket(rng: &mut ChaCha8Rng, labels: &[usize]) -> BTreeMap<usize, Complex64> {
    labels
        .iter()
        .map(|&k| (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect()
}

#[test]
fn rank_one_shortcut_matches_dense_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let kets = [
        random_ket(&mut rng, &[0, 1, 2]),
        random_ket(&mut rng, &[5, 6]),
        random_ket(&mut rng, &[9]),
        random_ket(&mut rng, &[2, 3]),
    ];
    let weights = [0.3, 0.25, 0.1, 0.35];
    let rho = DensityMatrix::from_mixture(weights.iter().copied().zip(kets.iter()));
    let mut fast = rho.eigenvalues();
    let (_, dense) = rho.to_dense();
    let mut slow: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
    fast.sort_by(f64::total_cmp);
    slow.sort_by(f64::total_cmp);
    // the dense solve has zero eigenvalues for the rank deficiency
    let fast_nz: Vec<f64> = fast.into_iter().filter(|x| x.abs() > 1e-12).collect();
    let slow_nz: Vec<f64> = slow.into_iter().filter(|x| x.abs() > 1e-12).collect();
    assert_eq!(fast_nz.len(), slow_nz.len());
    for (a, b) in fast_nz.iter().zip(&slow_nz) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn dense_and_block_storage_agree() {
    let t = choose_truncation(0.7, 0.6, 1e-10).unwrap();
    let p = SqueezeParams::new(0.6, 0.9, 0.3, 2.0).unwrap();
    let rho = build_joint_density(0.7, &p, &t).unwrap();
    rho.validate(1e-9).unwrap();
    let (basis, dense) = rho.to_dense();
    let rebuilt = DensityMatrix::from_dense(basis, dense.clone()).unwrap();
    assert!((purity(&rebuilt) - purity(&rho)).abs() < 1e-12);
    assert!((purity(&rho) - (dense.clone() * dense).trace().re).abs() < 1e-12);
    let sys = partial_trace(&rho, Subsystem::System);
    let m = Multiplicities::from_squeeze(0.7, 0.6).unwrap();
    let w = system_weights(&m, sys.dim());
    for (k, wk) in w.iter().enumerate().take(20) {
        assert!((sys.entry(k, k).re - wk).abs() < 1e-10);
    }
}

#[test]
fn product_thermal_state_entropy() {
    let a = DensityMatrix::thermal(0.5, 34);
    let b = DensityMatrix::thermal(0.2, 22);
    let joint = a.tensor(&b);
    let s = von_neumann_entropy(&joint).unwrap();
    let expect = delta_s(&Multiplicities::new(0.0, 0.5).unwrap()) + delta_s(&Multiplicities::new(0.0, 0.2).unwrap());
    assert!((s - expect).abs() < 1e-8, "{s} vs {expect}");
    let back = partial_trace(&joint, Subsystem::Environment);
    assert!((back.entry(3, 3) - b.entry(3, 3)).norm() < 1e-14);
}

#[test]
fn invalid_matrices_are_rejected() {
    let bad = DMatrix::from_row_slice(2, 2, &[
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.1),
        Complex64::new(0.0, 0.1),
        Complex64::new(0.5, 0.0),
    ]);
    let rho = DensityMatrix::from_dense(vec![0usize, 1], bad).unwrap();
    assert!(rho.validate(1e-9).is_err());
    assert!(DensityMatrix::from_dense(vec![0usize, 0], DMatrix::identity(2, 2)).is_err());
}

#[test]
fn verification_point_records_agreement() {
    let rec = verify_point(1.0, 0.5, 1.0, 1e-8, 1e-12).unwrap();
    assert!(rec.passed, "{rec:?}");
    assert!(rec.error.is_none());
    let oracle = rec.purity_oracle.unwrap();
    assert!((oracle - 1.0 / 3.0).abs() < 1e-10);
}
