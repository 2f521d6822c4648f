mod common;

use common::*;
use gptlab::contextual::{
    check_ce, exclusivity_graph, weight_from_model, EffectValuedWeight, Hypergraph, ProbabilityWeight,
};
use gptlab::deciders::{Decider, SpikyEffect};
use gptlab::gpt::{Effect, GptSystem};
use gptlab::numerics::Scalar;
use gptlab::orthograph::DEFAULT_VERTEX_CAP;
use gptlab::quantum::{pq_weight, CMatrix};
use gptlab::zoo::classical_system;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

/// An effect-valued weight together with the pure parts of every answer.
struct Model {
    evw: EffectValuedWeight,
    parts: Vec<SpikyEffect>,
}

/// Classical system read out through several coarse-grainings of its basis;
/// answers are the distinct blocks.
fn classical_model(rng: &mut StdRng) -> Model {
    let n = rng.random_range(3..=4);
    let sys = classical_system(n).unwrap();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut edges = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        let mut edge = Vec::new();
        for block in random_partition(rng, n) {
            let v = blocks.iter().position(|b| *b == block).unwrap_or_else(|| {
                blocks.push(block.clone());
                blocks.len() - 1
            });
            if !edge.contains(&v) {
                edge.push(v);
            }
        }
        edges.push(edge);
    }
    let basis = |i: usize| sys.effect(i).clone();
    let parts: Vec<SpikyEffect> =
        blocks.iter().map(|b| SpikyEffect { parts: b.iter().map(|&i| basis(i)).collect() }).collect();
    let effects = parts.iter().map(SpikyEffect::total).collect();
    let h = Hypergraph::numbered(blocks.len(), edges).unwrap();
    Model { evw: EffectValuedWeight::new(h, sys, effects).unwrap(), parts }
}

/// Answers are normalized pure effects; questions are sets of them that sum
/// to the unit.
fn pure_model(rng: &mut StdRng, sys: &GptSystem) -> Option<Model> {
    let dec = Decider::new(sys);
    let pure: Vec<Effect> = dec.normalized_pure_effects().unwrap().into_iter().map(|(e, _)| e).collect();
    let exact: Vec<Vec<usize>> = (1u32..1 << pure.len())
        .map(|mask| (0..pure.len()).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|set| {
            let total = set.iter().skip(1).fold(pure[set[0]].clone(), |acc, &i| acc.plus(&pure[i]));
            total.minus(sys.unit()).is_zero()
        })
        .collect();
    if exact.is_empty() {
        return None;
    }
    let chosen: Vec<&Vec<usize>> =
        (0..rng.random_range(1..=3)).map(|_| &exact[rng.random_range(0..exact.len())]).collect();
    let mut used: Vec<usize> = chosen.iter().flat_map(|s| s.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let edges: Vec<Vec<usize>> =
        chosen.iter().map(|s| s.iter().map(|i| used.binary_search(i).unwrap()).collect()).collect();
    let mut distinct: Vec<Vec<usize>> = Vec::new();
    for e in edges {
        if !distinct.contains(&e) {
            distinct.push(e);
        }
    }
    let effects: Vec<Effect> = used.iter().map(|&i| pure[i].clone()).collect();
    let parts = effects.iter().cloned().map(SpikyEffect::pure).collect();
    let h = Hypergraph::numbered(used.len(), distinct).unwrap();
    Some(Model { evw: EffectValuedWeight::new(h, sys.clone(), effects).unwrap(), parts })
}

/// Every family of pairwise mutually exclusive answers completes to a
/// measurement.
fn spiky_exclusive_sets_coexist(m: &Model) -> bool {
    let dec = Decider::new(m.evw.system());
    let effects = m.evw.effects();
    let n = effects.len();
    let exclusive: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && dec.mutually_exclusive(&[effects[i].clone(), effects[j].clone()]).unwrap().holds)
                .collect()
        })
        .collect();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    while let Some(set) = stack.pop() {
        let spiky: Vec<SpikyEffect> = set.iter().map(|&v| m.parts[v].clone()).collect();
        if !dec.coexist_mutually_exclusive_spiky(&spiky).unwrap().holds {
            return false;
        }
        let last = *set.last().unwrap();
        for (v, _) in exclusive.iter().enumerate().skip(last + 1) {
            if set.iter().all(|&u| exclusive[u][v]) {
                let mut next = set.clone();
                next.push(v);
                stack.push(next);
            }
        }
    }
    true
}

fn model_weight(rng: &mut StdRng, m: &Model) -> ProbabilityWeight {
    let sys = m.evw.system();
    let state = sys.mix(&random_convex(rng, sys.pure_states().len()));
    weight_from_model(&m.evw, &state).unwrap()
}

/// Orthonormal bases of `C^d`, each sharing one vector with the previous;
/// answers are the distinct rays and questions the bases.
fn chained_bases(rng: &mut StdRng, d: usize, len: usize) -> (Hypergraph, Vec<CMatrix>) {
    let mut projectors: Vec<CMatrix> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut basis = random_unitary(rng, d);
    let mut shared: Option<usize> = None;
    for _ in 0..len {
        let mut edge = Vec::new();
        for c in 0..d {
            if let (0, Some(s)) = (c, shared) {
                edge.push(s);
                continue;
            }
            let v = basis.column(c).into_owned();
            projectors.push(&v * v.adjoint());
            edge.push(projectors.len() - 1);
        }
        let keep = rng.random_range(1..d);
        shared = Some(edge[keep]);
        let v = basis.column(keep).into_owned();
        let mut seed = random_complex(rng, d, d);
        seed.set_column(0, &v);
        let q = seed.qr().q();
        basis = DMatrix::from_fn(d, d, |i, j| q[(i, j)]);
        edges.push(edge);
    }
    (Hypergraph::numbered(projectors.len(), edges).unwrap(), projectors)
}

fn ce_value(w: &ProbabilityWeight) -> (bool, Scalar) {
    let r = check_ce(w, 1, DEFAULT_VERTEX_CAP).unwrap();
    (r.satisfied, r.max_clique_value)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn coexisting_spiky_answers_give_consistent_exclusivity(seed in any::<u64>(), idx in 0..9usize) {
        let mut r = rng(seed);
        let model = if idx == 8 {
            Some(classical_model(&mut r))
        } else {
            pure_model(&mut r, &exact_zoo_systems()[idx])
        };
        prop_assume!(model.is_some());
        let model = model.unwrap();
        if spiky_exclusive_sets_coexist(&model) {
            for _ in 0..3 {
                let (ok, v) = ce_value(&model_weight(&mut r, &model));
                prop_assert!(ok, "{} gives {}", model.evw.system().name(), v);
            }
        }
    }

    #[test]
    fn classical_and_quantum_weights_satisfy_level_one(seed in any::<u64>(), d in 2usize..=4, len in 1usize..=4) {
        let mut r = rng(seed);
        let model = classical_model(&mut r);
        let (ok, v) = ce_value(&model_weight(&mut r, &model));
        prop_assert!(ok, "classical value {}", v);
        let (h, projectors) = chained_bases(&mut r, d, len);
        let w = pq_weight(&h, &projectors, &random_density(&mut r, d)).unwrap();
        let (ok, v) = ce_value(&w);
        prop_assert!(ok, "quantum value {}", v);
    }

    #[test]
    fn mixtures_of_consistent_weights_stay_consistent(seed in any::<u64>(), t in 0i64..=8) {
        let mut r = rng(seed);
        let t = Scalar::ratio(t, 8);
        let model = classical_model(&mut r);
        let (a, b) = (model_weight(&mut r, &model), model_weight(&mut r, &model));
        prop_assert!(ce_value(&a.mix(&b, &t).unwrap()).0);
        let (h, projectors) = chained_bases(&mut r, 3, 3);
        let a = pq_weight(&h, &projectors, &random_density(&mut r, 3)).unwrap();
        let b = pq_weight(&h, &projectors, &random_density(&mut r, 3)).unwrap();
        prop_assert!(ce_value(&a.mix(&b, &t).unwrap()).0);
    }

    #[test]
    fn adding_a_question_keeps_every_exclusivity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = classical_model(&mut r).evw.hypergraph().clone();
        let extra = random_partition(&mut r, h.len()).swap_remove(0);
        let bigger = h.with_edge(extra).unwrap();
        let (g, g2) = (exclusivity_graph(&h), exclusivity_graph(&bigger));
        for (u, v) in g.edges() {
            prop_assert!(g2.has_edge(u, v));
        }
    }

    #[test]
    fn some_question_always_reaches_one(seed in any::<u64>(), d in 2usize..=4, len in 1usize..=3) {
        let mut r = rng(seed);
        let model = classical_model(&mut r);
        let (_, v) = ce_value(&model_weight(&mut r, &model));
        prop_assert!(v >= Scalar::one());
        let (h, projectors) = chained_bases(&mut r, d, len);
        let (_, v) = ce_value(&pq_weight(&h, &projectors, &random_density(&mut r, d)).unwrap());
        prop_assert!(v.to_f64() >= 1.0 - 1e-9);
    }
}
