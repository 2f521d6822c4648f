mod common;

use common::*;
use gptlab::nonlocal::{check_lo, is_no_signalling};
use gptlab::orthograph::DEFAULT_VERTEX_CAP;
use gptlab::quantum::{
    behavior_from_quantum, born, is_projector, ket, naimark_dilate, sequential_discriminator, CMatrix, DensityMatrix,
    Povm,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

const TOL: f64 = 1e-9;

/// Pure states `|i⟩`, `(|i⟩ + |j⟩)/√2` and `(|i⟩ + i|j⟩)/√2`, whose
/// projectors span the Hermitian matrices.
fn tomographic_frame(d: usize) -> Vec<DensityMatrix> {
    let mut frame: Vec<DensityMatrix> = (0..d).map(|i| DensityMatrix::pure(&ket(d, i)).unwrap()).collect();
    for i in 0..d {
        for j in i + 1..d {
            for phase in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let v = (ket(d, i) + ket(d, j) * phase).unscale(2f64.sqrt());
                frame.push(DensityMatrix::pure(&v).unwrap());
            }
        }
    }
    frame
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn naimark_dilation_reproduces_the_povm(seed in any::<u64>(), d in 2usize..=4, outcomes in 2usize..=5) {
        let mut r = rng(seed);
        let m = random_povm(&mut r, d, outcomes);
        let n = naimark_dilate(&m).unwrap();
        let big = n.projectors[0].nrows();
        let total = n.projectors.iter().fold(CMatrix::zeros(big, big), |acc, p| acc + p);
        prop_assert!(max_abs(&(total - CMatrix::identity(big, big))) <= TOL);
        for p in &n.projectors {
            prop_assert!(max_abs(&(p * p - p)) <= TOL);
        }
        for rho in tomographic_frame(d) {
            let want = m.probabilities(&rho).unwrap();
            let got = n.statistics(&rho).unwrap();
            for (a, b) in want.iter().zip(&got) {
                prop_assert!((a - b).abs() <= TOL, "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn sequential_tests_discriminate_orthogonal_supports(seed in any::<u64>(), d in 2usize..=5) {
        let mut r = rng(seed);
        let (mut projectors, mut vectors) = random_projective(&mut r, d);
        if projectors.len() > 1 && r.random_bool(0.5) {
            projectors.pop();
            vectors.pop();
        }
        let m = sequential_discriminator(&projectors).unwrap();
        prop_assert_eq!(m.len(), projectors.len() + 1);
        let total = m.elements().iter().fold(CMatrix::zeros(d, d), |acc, e| acc + e);
        prop_assert!(max_abs(&(total - CMatrix::identity(d, d))) <= TOL);
        for (i, basis) in vectors.iter().enumerate() {
            let rho = random_pure_in(&mut r, basis);
            let p = m.probabilities(&rho).unwrap();
            for (j, pj) in p.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((pj - want).abs() <= TOL, "state {} outcome {}: {}", i, j, pj);
            }
        }
    }

    #[test]
    fn born_rule_is_affine_in_the_state(seed in any::<u64>(), d in 2usize..=4, alpha in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let (a, b) = (random_density(&mut r, d), random_density(&mut r, d));
        let (projectors, _) = random_projective(&mut r, d);
        let mixed = a.mix(&b, alpha).unwrap();
        for p in &projectors {
            prop_assert!(is_projector(p));
            let lhs = born(p, &mixed).unwrap();
            let rhs = alpha * born(p, &a).unwrap() + (1.0 - alpha) * born(p, &b).unwrap();
            prop_assert!((lhs - rhs).abs() <= TOL);
        }
    }
}

/// Two parties, two inputs each, every input a random rank-one basis.
fn random_quantum_behavior(seed: u64, da: usize, db: usize) -> gptlab::nonlocal::Behavior {
    let mut r = rng(seed);
    let rho = random_density(&mut r, da * db);
    let mut measure = |d: usize| -> Vec<Povm> {
        (0..2)
            .map(|_| {
                let u = random_unitary(&mut r, d);
                Povm::new((0..d).map(|i| u.column(i) * u.column(i).adjoint()).collect()).unwrap()
            })
            .collect()
    };
    let povms = vec![measure(da), measure(db)];
    behavior_from_quantum(&rho, &povms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn quantum_behaviors_do_not_signal_and_pass_level_one(seed in any::<u64>(), da in 2usize..=3, db in 2usize..=3) {
        let b = random_quantum_behavior(seed, da, db);
        prop_assert!(is_no_signalling(&b).holds);
        let rep = check_lo(&b, 1, DEFAULT_VERTEX_CAP).unwrap();
        prop_assert!(rep.satisfied && rep.max_clique_value.to_f64() <= 1.0 + TOL, "{}", rep.max_clique_value);
    }
}

proptest! {
    // each level-two search on a full-support qubit behavior takes seconds
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn qubit_behaviors_pass_level_two(seed in any::<u64>()) {
        let rep = check_lo(&random_quantum_behavior(seed, 2, 2), 2, DEFAULT_VERTEX_CAP).unwrap();
        prop_assert!(rep.satisfied && rep.max_clique_value.to_f64() <= 1.0 + TOL, "{}", rep.max_clique_value);
    }
}
