mod common;

use common::*;
use gptlab::gpt::{GptSystem, Measurement, State};
use gptlab::nonlocal::{
    behavior_from_model, check_lo, check_lo_with, coarse_grain_behavior, is_no_signalling, Behavior,
};
use gptlab::numerics::Scalar;
use gptlab::orthograph::DEFAULT_VERTEX_CAP;
use gptlab::zoo::{classical_system, polygon_system, pr_box, square_bit};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

fn scenario(rng: &mut StdRng, parties: usize) -> (Vec<usize>, Vec<usize>) {
    let inputs = (0..parties).map(|_| rng.random_range(1..=2)).collect();
    let outputs = (0..parties).map(|_| rng.random_range(2..=3)).collect();
    (inputs, outputs)
}

/// A mixture of product states `φ_1 ⊗ … ⊗ φ_N` of pure states.
fn separable_state(rng: &mut StdRng, systems: &[GptSystem]) -> State {
    let terms = rng.random_range(1..=3);
    let weights = random_convex(rng, terms);
    let mut total: Option<State> = None;
    for w in &weights {
        let mut s = systems[0].pure_state(rng.random_range(0..systems[0].pure_states().len())).clone();
        for sys in &systems[1..] {
            s = s.kron(sys.pure_state(rng.random_range(0..sys.pure_states().len())));
        }
        let s = s.scaled(w);
        total = Some(match total {
            Some(t) => t.plus(&s),
            None => s,
        });
    }
    total.expect("at least one term")
}

/// Classical measurement reading out the basis in a shuffled order.
fn basis_measurement(rng: &mut StdRng, sys: &GptSystem) -> Measurement {
    let mut effects: Vec<_> = sys.effect_generators()[..sys.dim()].to_vec();
    effects.shuffle(rng);
    Measurement::new(effects)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coarse_graining_keeps_level_one(seed in any::<u64>(), parties in 2usize..=3) {
        let mut r = rng(seed);
        let (inputs, outputs) = scenario(&mut r, parties);
        let b = if parties == 2 && r.random_bool(0.3) {
            let t = Scalar::ratio(r.random_range(0..=4), 4);
            mixture(&[relabelled_pr_box(&mut r), random_local(&mut r, &[2, 2], &[2, 2])], &[t.clone(), Scalar::one() - t])
        } else {
            random_local(&mut r, &inputs, &outputs)
        };
        prop_assume!(check_lo(&b, 1, DEFAULT_VERTEX_CAP).unwrap().satisfied);
        let partitions: Vec<Vec<Vec<usize>>> = b.outputs().iter().map(|&m| random_partition(&mut r, m)).collect();
        let coarse = coarse_grain_behavior(&b, &partitions).unwrap();
        prop_assert!(check_lo(&coarse, 1, DEFAULT_VERTEX_CAP).unwrap().satisfied);
    }

    #[test]
    fn bipartite_level_one_is_no_signalling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (inputs, outputs) = scenario(&mut r, 2);
        let b = match r.random_range(0..3) {
            0 => random_local(&mut r, &inputs, &outputs),
            1 => random_table(&mut r, &inputs, &outputs),
            _ => relabelled_pr_box(&mut r),
        };
        let lo = check_lo(&b, 1, DEFAULT_VERTEX_CAP).unwrap();
        prop_assert_eq!(lo.satisfied, is_no_signalling(&b).holds);
    }

    #[test]
    fn classical_models_satisfy_the_first_two_levels(seed in any::<u64>()) {
        let mut r = rng(seed);
        let systems: Vec<GptSystem> = (0..2).map(|_| classical_system(r.random_range(2..=3)).unwrap()).collect();
        let state = separable_state(&mut r, &systems);
        let measurements: Vec<Vec<Measurement>> =
            systems.iter().map(|s| (0..2).map(|_| basis_measurement(&mut r, s)).collect()).collect();
        let b = behavior_from_model(&systems, &state, &measurements).unwrap();
        for k in 1..=2 {
            let rep = check_lo(&b, k, DEFAULT_VERTEX_CAP).unwrap();
            prop_assert!(rep.satisfied, "level {} value {}", k, rep.max_clique_value);
        }
    }

    #[test]
    fn model_behaviors_do_not_signal(seed in any::<u64>(), parties in 2usize..=3) {
        let mut r = rng(seed);
        let zoo = [classical_system(2).unwrap(), classical_system(3).unwrap(), square_bit(), polygon_system(3).unwrap()];
        let systems: Vec<GptSystem> = (0..parties).map(|_| zoo[r.random_range(0..zoo.len())].clone()).collect();
        let state = separable_state(&mut r, &systems);
        let measurements: Vec<Vec<Measurement>> =
            systems.iter().map(|s| (0..2).map(|_| split_measurement(&mut r, s)).collect()).collect();
        let b = behavior_from_model(&systems, &state, &measurements).unwrap();
        prop_assert!(is_no_signalling(&b).holds);
    }
}

#[test]
fn level_two_violations_persist_at_level_three() {
    let mut r = rng(11);
    let mut boxes: Vec<Behavior> = vec![pr_box()];
    boxes.extend((0..3).map(|_| relabelled_pr_box(&mut r)));
    for b in &boxes {
        assert!(!check_lo(b, 2, DEFAULT_VERTEX_CAP).unwrap().satisfied);
        let three = check_lo_with(b, 3, DEFAULT_VERTEX_CAP, true).unwrap();
        assert!(!three.satisfied, "{:?}", b.table());
    }
}
