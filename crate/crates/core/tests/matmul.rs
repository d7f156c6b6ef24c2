mod common;

use common::*;
use rand::Rng;
use skewmm::matmul::{freivalds_rounds, MulReport};
use skewmm::structure::{random_layered, LayerSet};
use skewmm::{
    det_mul, freivalds, mat_to_skew, mc_mul, naive_mul, skew_to_mat, FreivaldsOutcome, RatMatrix,
    SkewPoly,
};

fn layers(v: &[usize]) -> LayerSet {
    v.iter().copied().collect()
}

fn deterministic_fields(r: &MulReport) -> MulReport {
    MulReport {
        wall_time: Default::default(),
        ..r.clone()
    }
}

#[test]
fn deterministic_matches_naive_on_dense_inputs() {
    let mut r = rng(51);
    for p in [3u64, 5, 7, 11, 13] {
        let c = ctx(p);
        for _ in 0..3 {
            let a = rand_matrix(c.n(), &mut r);
            let b = rand_int_matrix(c.n(), &mut r);
            let (m, report) = det_mul(&c, &a, &b).unwrap();
            assert_eq!(m, naive_mul(&a, &b).unwrap(), "p={p}");
            let sumset = mat_to_skew(&c, &a)
                .unwrap()
                .support()
                .sum_with(&mat_to_skew(&c, &b).unwrap().support(), c.n());
            assert_eq!(report.t_used, sumset.len());
        }
    }
}

#[test]
fn deterministic_t_used_is_the_layer_sumset() {
    let c = ctx(11);
    for (i, k, expect) in [
        (vec![0, 2], vec![1], 2),
        (vec![0], vec![0, 1, 2], 3),
        (vec![1, 3], vec![0, 2], 3),
        (vec![0, 5], vec![0, 5], 2),
        (vec![9], vec![9], 1),
    ] {
        let a = random_layered(&c, &layers(&i), 3, 4).unwrap();
        let b = random_layered(&c, &layers(&k), 4, 4).unwrap();
        let (m, report) = det_mul(&c, &a, &b).unwrap();
        assert_eq!(m, naive_mul(&a, &b).unwrap());
        assert_eq!(report.t_used, expect, "I={i:?} K={k:?}");
    }
}

#[test]
fn zero_operand_gives_zero() {
    let c = ctx(7);
    let a = rand_matrix(6, &mut rng(1));
    let z = RatMatrix::zeros(6, 6);
    let (m, report) = det_mul(&c, &a, &z).unwrap();
    assert!(m.is_zero());
    assert_eq!(report.t_used, 0);
    let (m, _) = mc_mul(&c, &z, &a, 0.1, 1).unwrap();
    assert!(m.is_zero());
}

#[test]
fn monte_carlo_is_correct_and_stops_early() {
    let mut r = rng(61);
    for p in [5u64, 7, 11, 13] {
        let c = ctx(p);
        for seed in 0..4 {
            let i: Vec<usize> = (0..1 + seed as usize % 2).map(|_| r.random_range(0..c.n())).collect();
            let k: Vec<usize> = (0..1 + seed as usize % 3).map(|_| r.random_range(0..c.n())).collect();
            let a = random_layered(&c, &layers(&i), seed, 5).unwrap();
            let b = random_layered(&c, &layers(&k), seed + 100, 5).unwrap();
            let (m, report) = mc_mul(&c, &a, &b, 0.05, seed).unwrap();
            let expect = naive_mul(&a, &b).unwrap();
            assert_eq!(m, expect, "p={p} seed={seed}");
            let t = mat_to_skew(&c, &expect).unwrap().sparsity();
            assert!(!report.fallback);
            assert_eq!(report.t_used, t);
            assert!(report.final_bound < 2 * t.max(1), "p={p} T={} t={t}", report.final_bound);
        }
    }
}

#[test]
fn monte_carlo_handles_dense_products() {
    let mut r = rng(71);
    let c = ctx(7);
    let a = rand_int_matrix(6, &mut r);
    let b = rand_int_matrix(6, &mut r);
    let (m, report) = mc_mul(&c, &a, &b, 0.05, 9).unwrap();
    assert_eq!(m, naive_mul(&a, &b).unwrap());
    assert_eq!(report.final_bound, 6);
}

#[test]
fn seeded_runs_repeat_exactly() {
    let c = ctx(11);
    let a = random_layered(&c, &layers(&[1, 4]), 5, 6).unwrap();
    let b = random_layered(&c, &layers(&[0, 2]), 6, 6).unwrap();
    let (m1, r1) = mc_mul(&c, &a, &b, 0.01, 77).unwrap();
    let (m2, r2) = mc_mul(&c, &a, &b, 0.01, 77).unwrap();
    assert_eq!(m1, m2);
    assert_eq!(deterministic_fields(&r1), deterministic_fields(&r2));
    let (_, d1) = det_mul(&c, &a, &b).unwrap();
    let (_, d2) = det_mul(&c, &a, &b).unwrap();
    assert_eq!(deterministic_fields(&d1), deterministic_fields(&d2));
}

#[test]
fn evaluation_cost_is_linear_in_t() {
    let c = ctx(13);
    let n = c.n() as u64;
    for t in 1..=6usize {
        let k: Vec<usize> = (0..t).collect();
        let a = random_layered(&c, &layers(&[0]), 1, 3).unwrap();
        let b = random_layered(&c, &layers(&k), 2, 3).unwrap();
        let (_, report) = det_mul(&c, &a, &b).unwrap();
        assert_eq!(report.t_used, t);
        // t×n points times two n×n matrices under the cubic kernel
        assert_eq!(report.eval_mul_count, 2 * t as u64 * n * n);
    }
}

#[test]
fn cancellation_shrinks_the_product() {
    let c = ctx(13);
    let one_minus_x = SkewPoly::from_rational_terms(&c, &[(0, q(1)), (1, q(-1))]);
    let geometric = SkewPoly::from_rational_terms(&c, &(0..=9).map(|j| (j, q(1))).collect::<Vec<_>>());
    let a = skew_to_mat(&one_minus_x);
    let b = skew_to_mat(&geometric);
    let expect = naive_mul(&a, &b).unwrap();
    let (m, det) = det_mul(&c, &a, &b).unwrap();
    assert_eq!(m, expect);
    assert_eq!(det.t_used, 11);
    let (m, mc) = mc_mul(&c, &a, &b, 0.05, 3).unwrap();
    assert_eq!(m, expect);
    assert_eq!(mc.final_bound, 2);
    assert_eq!(mc.t_used, 2);
}

#[test]
fn freivalds_detects_a_single_wrong_entry() {
    let mut r = rng(81);
    let a = rand_int_matrix(6, &mut r);
    let b = rand_int_matrix(6, &mut r);
    let good = naive_mul(&a, &b).unwrap();
    let mut bad = good.clone();
    bad[(2, 4)] = &bad[(2, 4)] + &q(1);
    assert_eq!(freivalds_rounds(0.001).unwrap(), 10);
    let mut rejected = 0;
    for seed in 0..200 {
        assert_eq!(freivalds(&good, &a, &b, 0.5, seed).unwrap(), FreivaldsOutcome::Equal);
        if freivalds(&bad, &a, &b, 0.5, seed).unwrap() == FreivaldsOutcome::NotEqual {
            rejected += 1;
        }
    }
    assert!((70..=130).contains(&rejected), "{rejected}");
    assert_eq!(freivalds(&bad, &a, &b, 1e-9, 5).unwrap(), FreivaldsOutcome::NotEqual);
}

#[test]
fn bad_arguments_are_errors() {
    let c = ctx(7);
    let a = RatMatrix::identity(6);
    assert!(det_mul(&c, &a, &RatMatrix::identity(4)).is_err());
    assert!(mc_mul(&c, &a, &a, 0.0, 1).is_err());
    assert!(mc_mul(&c, &a, &a, 1.5, 1).is_err());
    assert!(freivalds(&a, &a, &a, 1.0, 1).is_err());
}
