use std::f64::consts::PI;

use num_complex::Complex64;

use super::{polygon_system, ZooError};
use crate::contextual::{Hypergraph, ProbabilityWeight};
use crate::gpt::pair;
use crate::nonlocal::{Behavior, NonlocalGame};
use crate::numerics::{Ball, Certainty, Scalar, Sign, DEFAULT_PRECISION_BITS};
use crate::quantum::{behavior_from_quantum, pq_weight, projector_onto, CMatrix, CVector, DensityMatrix, Povm};
use crate::verdict::Verdict;

fn chsh_wins(x: &[usize], y: &[usize]) -> bool {
    (y[0] ^ y[1]) == (x[0] & x[1])
}

/// `p(y₁y₂|x₁x₂) = 1/2` when `y₁ ⊕ y₂ = x₁x₂`, else 0.
pub fn pr_box() -> Behavior {
    Behavior::from_fn(vec![2, 2], vec![2, 2], |x, y| if chsh_wins(x, y) { Scalar::ratio(1, 2) } else { Scalar::zero() })
        .expect("valid table")
}

/// Uniform inputs; win iff `y₁ ⊕ y₂ = x₁x₂`.
pub fn chsh_game() -> NonlocalGame {
    NonlocalGame::from_fn(
        vec![2, 2],
        vec![2, 2],
        |_| Scalar::ratio(1, 4),
        |x, y| if chsh_wins(x, y) { Scalar::one() } else { Scalar::zero() },
    )
    .expect("valid game")
}

/// The 16 deterministic local strategies of the CHSH scenario.
pub fn chsh_deterministic_strategies() -> Vec<Behavior> {
    (0..16usize)
        .map(|bits| {
            let r = vec![vec![bits & 1, bits >> 1 & 1], vec![bits >> 2 & 1, bits >> 3 & 1]];
            Behavior::deterministic(vec![2, 2], vec![2, 2], &r).expect("binary strategy")
        })
        .collect()
}

/// Qubit measurement along polarization angle `θ`: outcome 0 projects onto
/// `cos θ|0⟩ + sin θ|1⟩`.
fn polarization(theta: f64) -> Povm {
    let v = |t: f64| CVector::from_vec(vec![Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0)]);
    Povm::new(vec![projector_onto(&v(theta)), projector_onto(&v(theta + PI / 2.0))]).expect("basis measurement")
}

/// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2` measured at angles `{0, π/4}` for Alice and
/// `{π/8, −π/8}` for Bob. Outcomes agree with probability
/// `cos²(θ_A − θ_B)`, so `p = (1 ± 1/√2)/4` and the CHSH payoff is
/// `cos²(π/8)`.
pub fn tsirelson_behavior() -> Behavior {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let phi = CVector::from_vec(vec![h, z, z, h]);
    let rho = DensityMatrix::pure(&phi).expect("normalized");
    let alice = vec![polarization(0.0), polarization(PI / 4.0)];
    let bob = vec![polarization(PI / 8.0), polarization(-PI / 8.0)];
    behavior_from_quantum(&rho, &[alice, bob]).expect("consistent dimensions")
}

/// Answers `0..5` with questions `{i, i+1 mod 5}`.
pub fn pentagon_hypergraph() -> Hypergraph {
    Hypergraph::numbered(5, (0..5).map(|i| vec![i, (i + 1) % 5]).collect()).expect("valid hypergraph")
}

/// The weight `w ≡ 1/2` on the pentagon.
pub fn pentagon_half_weight() -> ProbabilityWeight {
    ProbabilityWeight::new(pentagon_hypergraph(), vec![Scalar::ratio(1, 2); 5]).expect("edges sum to 1")
}

/// Five qutrit rays `v_k` on a cone around `|2⟩` with consecutive rays
/// orthogonal, plus the ray completing each consecutive pair to a basis.
/// Answers `0..5` are the `v_k`, answers `5..10` the completions; question
/// `k` is `{k, k+1, 5+k}`. Returns the hypergraph, the projectors, and the
/// weight of the state `|2⟩`, which is `1/√5` on every `v_k`.
pub fn kcbs_model() -> (Hypergraph, Vec<CMatrix>, ProbabilityWeight) {
    let c = (PI / 5.0).cos();
    let cos2 = c / (1.0 + c);
    let (ct, st) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    let ray = |k: usize| {
        let a = 4.0 * PI * k as f64 / 5.0;
        CVector::from_vec(vec![
            Complex64::new(st * a.cos(), 0.0),
            Complex64::new(st * a.sin(), 0.0),
            Complex64::new(ct, 0.0),
        ])
    };
    let mut projectors: Vec<CMatrix> = (0..5).map(|k| projector_onto(&ray(k))).collect();
    for k in 0..5 {
        let rest = CMatrix::identity(3, 3) - &projectors[k] - &projectors[(k + 1) % 5];
        projectors.push(rest);
    }
    let labels = (0..5).map(|k| format!("v{k}")).chain((0..5).map(|k| format!("c{k}"))).collect();
    let edges = (0..5).map(|k| vec![k, (k + 1) % 5, 5 + k]).collect();
    let h = Hypergraph::new(labels, edges).expect("valid hypergraph");
    let psi = CVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let rho = DensityMatrix::pure(&psi).expect("normalized");
    let w = pq_weight(&h, &projectors, &rho).expect("every question is a basis");
    (h, projectors, w)
}

/// Both sides of the odd-polygon overflow: the trigonometric form
/// `2cos(3π/2n)cos(π/2n) > 2cos²(3π/2n)` and the pairing sum
/// `s = (a_y|φ_{y−1}) + (a_{y+(n+1)/2}|φ_{y−1})` compared with 1.
#[derive(Clone, Debug)]
pub struct OverflowWitness {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub s: Scalar,
}

/// `cos(pπ/q)`, exact when the reduced denominator is 1, 2, 3, 4 or 6.
fn cos_pi_frac(p: i64, q: i64) -> Scalar {
    let g = num_integer::gcd(p, q);
    let (p, q) = (p / g, q / g);
    let r = (p.rem_euclid(2 * q), q);
    let half = crate::numerics::ratio(1, 2);
    let zero = crate::numerics::ratio(0, 1);
    match r {
        (0, 1) => Scalar::one(),
        (1, 1) => Scalar::from_int(-1),
        (1, 2) | (3, 2) => Scalar::zero(),
        (1, 3) | (5, 3) => Scalar::ratio(1, 2),
        (2, 3) | (4, 3) => Scalar::ratio(-1, 2),
        (1, 4) | (7, 4) => Scalar::quad(zero, half, 2),
        (3, 4) | (5, 4) => Scalar::quad(zero, -half, 2),
        (1, 6) | (11, 6) => Scalar::quad(zero, half, 3),
        (5, 6) | (7, 6) => Scalar::quad(zero, -half, 3),
        _ => Scalar::Approx(Ball::cos_pi_frac(p, q, DEFAULT_PRECISION_BITS)),
    }
}

/// Decides `x > 0`, refusing when an enclosure cannot settle the sign.
fn strictly_positive(x: &Scalar, what: &'static str) -> Result<bool, ZooError> {
    match x.sign() {
        Sign::Positive => Ok(true),
        Sign::Negative => Ok(false),
        Sign::Zero if x.is_exact() => Ok(false),
        Sign::Zero => Err(ZooError::Indeterminate(what)),
    }
}

/// Whether the orthogonal pair `{a_0, a_{(n+1)/2}}` of the odd `n`-gon
/// overflows on `φ_{n−1}`. Both forms are evaluated and must agree.
pub fn odd_polygon_overflow(n: usize) -> Result<Verdict<OverflowWitness>, ZooError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(ZooError::Parameter { model: "odd polygon", requirement: "odd n ≥ 3", got: n });
    }
    let q = 2 * n as i64;
    let c3 = cos_pi_frac(3, q);
    let c1 = cos_pi_frac(1, q);
    let two = Scalar::from_int(2);
    let lhs = &two * &(&c3 * &c1);
    let rhs = &two * &(&c3 * &c3);
    let raw = strictly_positive(&(&lhs - &rhs), "trigonometric form")?;

    let sys = polygon_system(n)?;
    let state = sys.pure_state(n - 1);
    let s = pair(sys.effect(0), state)? + pair(sys.effect(n.div_ceil(2)), state)?;
    let from_pairings = strictly_positive(&(&s - &Scalar::one()), "pairing sum")?;
    if raw != from_pairings {
        return Err(ZooError::Disagreement { n });
    }
    let certainty = if lhs.is_exact() && rhs.is_exact() && s.is_exact() {
        Certainty::Exact
    } else {
        Certainty::CertifiedWithinPrecision
    };
    Ok(Verdict::new(raw, OverflowWitness { lhs, rhs, s }, certainty))
}
