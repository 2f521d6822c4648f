//! Systems as cones: states, effects, measurements, the pairing `(e|ρ)`,
//! minimal tensor products and coarse-graining.

mod io;
pub mod linalg;

use std::fmt;

use crate::numerics::{Certainty, Field, LinearProgram, LpResult, Relation, Scalar};

pub use io::SystemFileError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GptError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    SystemMismatch { expected: usize, found: usize },
    #[error("incompatible scalar fields Q(sqrt {0}) and Q(sqrt {1})")]
    IncompatibleFields(u32, u32),
    #[error("not a partition of {outcomes} outcomes: {reason}")]
    NotAPartition { outcomes: usize, reason: String },
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("ensemble is not normalized: total weight {0}")]
    UnnormalizedEnsemble(String),
}

/// A vector in the state space.
#[derive(Clone, Debug, PartialEq)]
pub struct State(pub Vec<Scalar>);

/// A covector pairing with states.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect(pub Vec<Scalar>);

macro_rules! vector_api {
    ($t:ident) => {
        impl $t {
            pub fn new(coords: Vec<Scalar>) -> Self {
                $t(coords)
            }

            pub fn from_rationals(coords: &[(i64, i64)]) -> Self {
                $t(coords.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect())
            }

            pub fn coords(&self) -> &[Scalar] {
                &self.0
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn scaled(&self, s: &Scalar) -> Self {
                $t(linalg::scale(&self.0, s))
            }

            pub fn plus(&self, other: &$t) -> Self {
                $t(linalg::add(&self.0, &other.0))
            }

            pub fn minus(&self, other: &$t) -> Self {
                $t(linalg::sub(&self.0, &other.0))
            }

            pub fn kron(&self, other: &$t) -> Self {
                $t(linalg::kron(&self.0, &other.0))
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Scalar::is_zero)
            }

            pub fn certainty(&self) -> Certainty {
                certainty_of(&self.0)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    };
}

vector_api!(State);
vector_api!(Effect);

pub fn certainty_of(values: &[Scalar]) -> Certainty {
    values.iter().fold(Certainty::Exact, |c, v| c.and(v.certainty()))
}

/// `(e|ρ)`.
pub fn pair(e: &Effect, s: &State) -> Result<Scalar, GptError> {
    if e.dim() != s.dim() {
        return Err(GptError::SystemMismatch { expected: e.dim(), found: s.dim() });
    }
    Ok(linalg::dot(&e.0, &s.0))
}

/// An ordered list of effects with outcome labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub effects: Vec<Effect>,
    pub labels: Vec<String>,
}

impl Measurement {
    pub fn new(effects: Vec<Effect>) -> Self {
        let labels = (0..effects.len()).map(|i| i.to_string()).collect();
        Measurement { effects, labels }
    }

    pub fn with_labels(effects: Vec<Effect>, labels: Vec<String>) -> Self {
        assert_eq!(effects.len(), labels.len(), "one label per outcome");
        Measurement { effects, labels }
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn total(&self) -> Option<Effect> {
        let mut it = self.effects.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.plus(e)))
    }
}

/// Sub-normalized states whose weights sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    states: Vec<State>,
}

impl Ensemble {
    pub fn new(system: &GptSystem, states: Vec<State>) -> Result<Self, GptError> {
        let mut total = Scalar::zero();
        for s in &states {
            system.check_dim(s.dim())?;
            total = total + pair(system.unit(), s)?;
        }
        if total != Scalar::one() {
            return Err(GptError::UnnormalizedEnsemble(total.to_string()));
        }
        Ok(Ensemble { states })
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }
}

/// A finite-dimensional system: a polyhedral state cone generated by pure
/// states, an effect cone generated by `effect_generators`, and the unit.
#[derive(Clone, Debug)]
pub struct GptSystem {
    name: String,
    dim: usize,
    field_k: u32,
    pure_states: Vec<State>,
    effect_generators: Vec<Effect>,
    unit: Effect,
}

impl GptSystem {
    /// Builds a system and checks its invariants.
    pub fn new(
        name: impl Into<String>,
        pure_states: Vec<State>,
        effect_generators: Vec<Effect>,
        unit: Effect,
    ) -> Result<Self, GptError> {
        let dim = unit.dim();
        let field_k = common_field(
            pure_states
                .iter()
                .flat_map(|s| s.0.iter())
                .chain(effect_generators.iter().flat_map(|e| e.0.iter()))
                .chain(unit.0.iter()),
        )?;
        let system = GptSystem { name: name.into(), dim, field_k, pure_states, effect_generators, unit };
        system.validate()?;
        Ok(system)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field_k(&self) -> u32 {
        self.field_k
    }

    pub fn pure_states(&self) -> &[State] {
        &self.pure_states
    }

    pub fn pure_state(&self, i: usize) -> &State {
        &self.pure_states[i]
    }

    pub fn effect_generators(&self) -> &[Effect] {
        &self.effect_generators
    }

    pub fn effect(&self, i: usize) -> &Effect {
        &self.effect_generators[i]
    }

    pub fn unit(&self) -> &Effect {
        &self.unit
    }

    pub fn zero_effect(&self) -> Effect {
        Effect(vec![Scalar::zero(); self.dim])
    }

    /// Exact when every stored coordinate is a field element.
    pub fn certainty(&self) -> Certainty {
        self.pure_states
            .iter()
            .map(State::certainty)
            .chain(self.effect_generators.iter().map(Effect::certainty))
            .fold(self.unit.certainty(), Certainty::and)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<(), GptError> {
        if found == self.dim {
            Ok(())
        } else {
            Err(GptError::SystemMismatch { expected: self.dim, found })
        }
    }

    /// Pairing table `(g_i|φ_j)` of effect generators against pure states.
    pub fn pairing_table(&self) -> Vec<Vec<Scalar>> {
        self.effect_generators
            .iter()
            .map(|e| self.pure_states.iter().map(|s| linalg::dot(&e.0, &s.0)).collect())
            .collect()
    }

    /// Pairings of `e` with every pure state.
    pub fn profile(&self, e: &Effect) -> Result<Vec<Scalar>, GptError> {
        self.check_dim(e.dim())?;
        Ok(self.pure_states.iter().map(|s| linalg::dot(&e.0, &s.0)).collect())
    }

    /// `0 ≤ (e|φ) ≤ 1` for every pure state `φ`.
    pub fn is_valid_effect(&self, e: &Effect) -> bool {
        match self.profile(e) {
            Ok(values) => values.iter().all(|v| !v.is_negative_value() && v.cmp_value(&Scalar::one()).is_le()),
            Err(_) => false,
        }
    }

    /// Every effect valid and the effects sum to the unit exactly.
    pub fn is_measurement(&self, effects: &[Effect]) -> bool {
        if effects.is_empty() || !effects.iter().all(|e| self.is_valid_effect(e)) {
            return false;
        }
        let total = Measurement::new(effects.to_vec()).total().expect("nonempty");
        total.minus(&self.unit).is_zero()
    }

    pub fn measurement(&self, effects: Vec<Effect>) -> Option<Measurement> {
        self.is_measurement(&effects).then(|| Measurement::new(effects))
    }

    /// A state is deterministic when `(u|ρ) = 1`.
    pub fn is_deterministic(&self, s: &State) -> bool {
        s.dim() == self.dim && linalg::dot(&self.unit.0, &s.0) == Scalar::one()
    }

    /// Convex weights over pure states reproducing `s`, if `s` is a
    /// deterministic element of the state cone.
    pub fn convex_decomposition(&self, s: &State) -> Option<Vec<Scalar>> {
        if s.dim() != self.dim {
            return None;
        }
        let m = self.pure_states.len();
        let mut lp = LinearProgram::<Scalar>::new(m);
        for k in 0..self.dim {
            let row = self.pure_states.iter().map(|p| p.0[k].clone()).collect();
            lp.add_constraint(row, Relation::Eq, s.0[k].clone());
        }
        lp.add_constraint(vec![Scalar::one(); m], Relation::Eq, Scalar::one());
        match lp.feasible().ok()? {
            LpResult::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn mix(&self, weights: &[Scalar]) -> State {
        let mut coords = vec![Scalar::zero(); self.dim];
        for (w, s) in weights.iter().zip(&self.pure_states) {
            if !w.is_zero() {
                coords = linalg::add(&coords, &linalg::scale(&s.0, w));
            }
        }
        State(coords)
    }

    /// Checks the system invariants: `(u|φ) = 1` on pure states,
    /// `(g|φ) ≥ 0` for generators, and `u` in the effect cone.
    pub fn validate(&self) -> Result<(), GptError> {
        if self.dim == 0 {
            return Err(GptError::InvalidSystem("dimension must be positive".into()));
        }
        if self.pure_states.is_empty() {
            return Err(GptError::InvalidSystem("no pure states".into()));
        }
        for (i, s) in self.pure_states.iter().enumerate() {
            self.check_dim(s.dim())?;
            if linalg::dot(&self.unit.0, &s.0) != Scalar::one() {
                return Err(GptError::InvalidSystem(format!("unit does not give 1 on pure state {i}")));
            }
        }
        for (j, g) in self.effect_generators.iter().enumerate() {
            self.check_dim(g.dim())?;
            for (i, s) in self.pure_states.iter().enumerate() {
                if linalg::dot(&g.0, &s.0).is_negative_value() {
                    return Err(GptError::InvalidSystem(format!("effect generator {j} is negative on pure state {i}")));
                }
            }
        }
        if !self.effect_generators.is_empty() && !self.unit_in_effect_cone() {
            return Err(GptError::InvalidSystem("unit is not in the effect cone".into()));
        }
        Ok(())
    }

    fn unit_in_effect_cone(&self) -> bool {
        if self.effect_generators.iter().any(|g| g.minus(&self.unit).is_zero()) {
            return true;
        }
        let n = self.effect_generators.len();
        let mut lp = LinearProgram::<Scalar>::new(n);
        for k in 0..self.dim {
            let row = self.effect_generators.iter().map(|g| g.0[k].clone()).collect();
            lp.add_constraint(row, Relation::Eq, self.unit.0[k].clone());
        }
        matches!(lp.feasible(), Ok(LpResult::Optimal { .. }))
    }

    /// The unit is the only functional equal to 1 on every pure state
    /// exactly when the pure states span the whole space.
    pub fn has_unique_unit(&self) -> bool {
        let rows: Vec<Vec<Scalar>> = self.pure_states.iter().map(|s| s.0.clone()).collect();
        linalg::rank(&rows) == self.dim
    }
}

fn common_field<'a>(values: impl Iterator<Item = &'a Scalar>) -> Result<u32, GptError> {
    let mut k = 1;
    for v in values {
        match v.field_k() {
            Some(1) | None => {}
            Some(j) if k == 1 => k = j,
            Some(j) if j != k => return Err(GptError::IncompatibleFields(k, j)),
            Some(_) => {}
        }
    }
    Ok(k)
}

/// Minimal tensor product: product pure states, product effect generators,
/// unit `u_a ⊗ u_b`.
pub fn tensor_system(a: &GptSystem, b: &GptSystem) -> Result<GptSystem, GptError> {
    if a.field_k != 1 && b.field_k != 1 && a.field_k != b.field_k {
        return Err(GptError::IncompatibleFields(a.field_k, b.field_k));
    }
    let pure_states = a.pure_states.iter().flat_map(|s| b.pure_states.iter().map(move |t| s.kron(t))).collect();
    let effect_generators =
        a.effect_generators.iter().flat_map(|e| b.effect_generators.iter().map(move |f| e.kron(f))).collect();
    GptSystem::new(format!("{} ⊗ {}", a.name, b.name), pure_states, effect_generators, a.unit.kron(&b.unit))
}

/// Merges outcomes of `m` block by block.
pub fn coarse_grain(m: &Measurement, partition: &[Vec<usize>]) -> Result<Measurement, GptError> {
    let n = m.len();
    let mut seen = vec![false; n];
    for block in partition {
        if block.is_empty() {
            return Err(GptError::NotAPartition { outcomes: n, reason: "empty block".into() });
        }
        for &z in block {
            if z >= n {
                return Err(GptError::NotAPartition { outcomes: n, reason: format!("outcome {z} out of range") });
            }
            if std::mem::replace(&mut seen[z], true) {
                return Err(GptError::NotAPartition { outcomes: n, reason: format!("outcome {z} repeated") });
            }
        }
    }
    if let Some(z) = seen.iter().position(|s| !s) {
        return Err(GptError::NotAPartition { outcomes: n, reason: format!("outcome {z} missing") });
    }
    let mut effects = Vec::with_capacity(partition.len());
    let mut labels = Vec::with_capacity(partition.len());
    for block in partition {
        let mut e = m.effects[block[0]].clone();
        for &z in &block[1..] {
            e = e.plus(&m.effects[z]);
        }
        effects.push(e);
        labels.push(block.iter().map(|&z| m.labels[z].clone()).collect::<Vec<_>>().join("+"));
    }
    Ok(Measurement::with_labels(effects, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classical(n: usize) -> GptSystem {
        let basis = |i: usize| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect();
        let states = (0..n).map(|i| State(basis(i))).collect();
        let mut effects: Vec<Effect> = (0..n).map(|i| Effect(basis(i))).collect();
        let unit = Effect(vec![Scalar::one(); n]);
        effects.push(unit.clone());
        GptSystem::new(format!("classical({n})"), states, effects, unit).unwrap()
    }

    #[test]
    fn unit_pairs_to_one() {
        let sys = classical(3);
        let s = sys.mix(&[Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::ratio(1, 6)]);
        assert_eq!(pair(sys.unit(), &s).unwrap(), Scalar::one());
        assert!(sys.is_deterministic(&s));
        assert!(pair(sys.unit(), &State::from_rationals(&[(1, 1)])).is_err());
    }

    #[test]
    fn validity_and_measurements() {
        let sys = classical(3);
        assert!(sys.is_valid_effect(sys.unit()));
        assert!(!sys.is_valid_effect(&sys.unit().scaled(&Scalar::from_int(2))));
        assert!(sys.is_measurement(&[sys.unit().clone()]));
        let basis: Vec<Effect> = sys.effect_generators()[..3].to_vec();
        assert!(sys.is_measurement(&basis));
        assert!(!sys.is_measurement(&basis[..2]));
    }

    #[test]
    fn coarse_graining_sums_blocks() {
        let sys = classical(3);
        let m = Measurement::new(sys.effect_generators()[..3].to_vec());
        let merged = coarse_grain(&m, &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(merged.effects[0], Effect::from_rationals(&[(1, 1), (0, 1), (0, 1)]));
        assert_eq!(merged.effects[1], Effect::from_rationals(&[(0, 1), (1, 1), (1, 1)]));
        assert_eq!(merged.labels, vec!["0", "1+2"]);
        let all = coarse_grain(&m, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(all.effects[0], *sys.unit());
        let same = coarse_grain(&m, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(same.effects, m.effects);
        assert!(coarse_grain(&m, &[vec![0], vec![0, 1, 2]]).is_err());
        assert!(coarse_grain(&m, &[vec![0], vec![1]]).is_err());
    }

    #[test]
    fn tensor_of_bits_is_four_level() {
        let bit = classical(2);
        let two = tensor_system(&bit, &bit).unwrap();
        assert_eq!(two.dim(), 4);
        assert_eq!(two.pure_states().len(), 4);
        assert!(two.has_unique_unit());
        for s in two.pure_states() {
            assert_eq!(pair(two.unit(), s).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn invalid_systems_are_rejected() {
        let states = vec![State::from_rationals(&[(1, 1), (1, 2)])];
        let unit = Effect::from_rationals(&[(0, 1), (1, 1)]);
        assert!(GptSystem::new("bad", states, vec![], unit).is_err());
    }

    #[test]
    fn ensembles_must_be_normalized() {
        let sys = classical(2);
        let half = sys.pure_state(0).scaled(&Scalar::ratio(1, 2));
        let other = sys.pure_state(1).scaled(&Scalar::ratio(1, 2));
        assert!(Ensemble::new(&sys, vec![half.clone(), other]).is_ok());
        assert!(Ensemble::new(&sys, vec![half]).is_err());
    }
}
