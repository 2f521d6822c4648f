//! LP-backed decision procedures for purity, orthogonality,
//! distinguishability, Sufficient Orthogonality, mutual exclusivity, Pure
//! State Identification, maximality, extremality and sharpness.
//!
//! All procedures live on [`Decider`], which fixes a system and an
//! [`EffectMode`]. The free functions use the no-restriction reading.

mod builder;

use std::cell::OnceCell;

use itertools::Itertools;

use crate::gpt::{linalg, pair, Effect, GptError, GptSystem, Measurement, State};
use crate::numerics::{Certainty, Field, LpError, LpResult, Relation, Scalar};
pub use crate::verdict::EffectMode;
use builder::LpBuilder;

pub type Verdict = crate::verdict::Verdict<Witness>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeciderError {
    #[error(transparent)]
    System(#[from] GptError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("expected {expected} items, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("effect {index} is not valid on this system")]
    InvalidEffect { index: usize },
    #[error("state {index} is not deterministic")]
    NotDeterministic { index: usize },
    #[error("effect {index} is not pure")]
    ImpureInput { index: usize },
    #[error("the effects are not orthogonal (no state attains 1 on effect {index} while the others vanish)")]
    NonOrthogonalInput { index: usize },
    #[error("spiky effect {index} is not a sum of pure orthogonal effects")]
    NonSpikyInput { index: usize },
    #[error("no state gives probability 1 on the effect")]
    NotNormalized,
    #[error("the input states are not perfectly distinguishable")]
    InputNotDistinguishable,
    #[error("sharpness is only decided for pure measurements; effect {index} is not pure")]
    PureOnly { index: usize },
    #[error("the effects do not sum to the unit")]
    NotAMeasurement,
    #[error("effect generators are required for dimension {dim} (facet enumeration stops at 4)")]
    FacetEnumerationUnavailable { dim: usize },
    #[error("the pure states do not span the space, so the effect cone has no extreme rays")]
    DegenerateStateCone,
    #[error("{0} is only decided in the no-restriction reading")]
    UnsupportedMode(&'static str),
}

/// Evidence attached to a [`Verdict`].
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    None,
    /// States realizing the claim (biorthogonal partners, identified state).
    States(Vec<State>),
    /// Effects realizing the claim (biorthogonal partners).
    Effects(Vec<Effect>),
    /// A full measurement, e.g. a discriminating or completing one.
    Measurement(Measurement),
    /// A decomposition of an effect into non-parallel cone generators.
    Decomposition {
        generators: Vec<Effect>,
        weights: Vec<Scalar>,
    },
    /// A Farkas certificate from an infeasible LP; `index` names the subproblem.
    Certificate {
        index: usize,
        multipliers: Vec<Scalar>,
    },
    /// The pairing `(m_effect|ρ_state)` that breaks biorthogonality.
    Pairing {
        effect: usize,
        state: usize,
        value: Scalar,
    },
    /// A pure state on which the total probability exceeds one.
    Overflow {
        state_index: usize,
        state: State,
        total: Scalar,
    },
    /// Two effects that cannot sit in a common measurement.
    Incompatible {
        first: usize,
        second: usize,
        detail: Box<Witness>,
    },
    /// Indices of the pure states attaining probability one.
    Face(Vec<usize>),
    /// A pure state that extends the set, with the discriminating measurement.
    Extension {
        state_index: usize,
        measurement: Measurement,
    },
    /// Indices of pure states tight at the effect and their rank.
    Tight {
        states: Vec<usize>,
        rank: usize,
    },
    /// A pure orthogonal set that does not coexist.
    SoViolation {
        effects: Vec<Effect>,
        generator_indices: Vec<Option<usize>>,
        detail: Box<Witness>,
    },
}

/// A spiky effect given as its pure orthogonal parts.
#[derive(Clone, Debug, PartialEq)]
pub struct SpikyEffect {
    pub parts: Vec<Effect>,
}

impl SpikyEffect {
    pub fn pure(e: Effect) -> Self {
        SpikyEffect { parts: vec![e] }
    }

    pub fn total(&self) -> Effect {
        Measurement::new(self.parts.clone()).total().expect("spiky effect has parts")
    }
}

pub struct Decider<'s> {
    system: &'s GptSystem,
    mode: EffectMode,
    rays: OnceCell<Result<Vec<Effect>, DeciderError>>,
}

impl<'s> Decider<'s> {
    pub fn new(system: &'s GptSystem) -> Self {
        Decider::with_mode(system, EffectMode::NoRestriction)
    }

    pub fn with_mode(system: &'s GptSystem, mode: EffectMode) -> Self {
        Decider { system, mode, rays: OnceCell::new() }
    }

    pub fn system(&self) -> &GptSystem {
        self.system
    }

    pub fn mode(&self) -> EffectMode {
        self.mode
    }

    fn verdict(&self, holds: bool, witness: Witness, inputs: Certainty) -> Verdict {
        crate::verdict::Verdict::new(holds, witness, self.system.certainty().and(inputs)).in_mode(self.mode)
    }

    fn profile(&self, e: &Effect) -> Result<Vec<Scalar>, DeciderError> {
        Ok(self.system.profile(e)?)
    }

    fn check_valid(&self, effects: &[Effect]) -> Result<(), DeciderError> {
        for (index, e) in effects.iter().enumerate() {
            self.system.check_dim(e.dim())?;
            if !self.is_valid(e)? {
                return Err(DeciderError::InvalidEffect { index });
            }
        }
        Ok(())
    }

    fn check_deterministic(&self, states: &[State]) -> Result<(), DeciderError> {
        for (index, s) in states.iter().enumerate() {
            self.system.check_dim(s.dim())?;
            if !self.system.is_deterministic(s) {
                return Err(DeciderError::NotDeterministic { index });
            }
        }
        Ok(())
    }

    /// Validity of an effect in the current mode.
    pub fn is_valid(&self, e: &Effect) -> Result<bool, DeciderError> {
        self.system.check_dim(e.dim())?;
        match self.mode {
            EffectMode::NoRestriction => Ok(self.system.is_valid_effect(e)),
            EffectMode::Generated => {
                Ok(self.in_generated_cone(e)?.is_ok() && self.in_generated_cone(&self.system.unit().minus(e))?.is_ok())
            }
        }
    }

    /// `Ok(coefficients)` if `e` is a conic combination of the generators,
    /// `Err(certificate)` otherwise.
    fn in_generated_cone(&self, e: &Effect) -> Result<Result<Vec<Scalar>, Vec<Scalar>>, DeciderError> {
        cone_membership(self.system.effect_generators(), e)
    }

    /// Extreme rays of the effect cone, normalized so their largest pairing is 1.
    pub fn effect_rays(&self) -> Result<&[Effect], DeciderError> {
        let rays = self.rays.get_or_init(|| match self.mode {
            EffectMode::Generated => Ok(self.system.effect_generators().to_vec()),
            EffectMode::NoRestriction => {
                if self.system.dim() <= 4 {
                    facet_rays(self.system)
                } else if self.system.effect_generators().is_empty() {
                    Err(DeciderError::FacetEnumerationUnavailable { dim: self.system.dim() })
                } else {
                    Ok(self.system.effect_generators().to_vec())
                }
            }
        });
        rays.as_ref().map(Vec::as_slice).map_err(Clone::clone)
    }

    /// Extreme-ray membership of the effect cone.
    pub fn is_pure_effect(&self, e: &Effect) -> Result<Verdict, DeciderError> {
        self.check_valid(std::slice::from_ref(e))?;
        let cert = e.certainty();
        if e.is_zero() {
            return Ok(self.verdict(false, Witness::None, cert));
        }
        let rays = self.effect_rays()?;
        let others: Vec<Effect> =
            rays.iter().filter(|g| !linalg::positively_parallel(e.coords(), g.coords())).cloned().collect();
        Ok(match cone_membership(&others, e)? {
            Ok(weights) => {
                let (generators, weights): (Vec<Effect>, Vec<Scalar>) =
                    others.into_iter().zip(weights).filter(|(_, w)| !w.is_zero()).unzip();
                self.verdict(false, Witness::Decomposition { generators, weights }, cert)
            }
            Err(multipliers) => self.verdict(true, Witness::Certificate { index: 0, multipliers }, cert),
        })
    }

    /// `(m_y|ρ_{y'}) = δ_{y,y'}`.
    pub fn are_biorthogonal(&self, effects: &[Effect], states: &[State]) -> Result<Verdict, DeciderError> {
        if effects.len() != states.len() {
            return Err(DeciderError::LengthMismatch { expected: effects.len(), found: states.len() });
        }
        let cert = inputs_certainty(effects, states);
        for (y, e) in effects.iter().enumerate() {
            for (yp, s) in states.iter().enumerate() {
                let value = pair(e, s)?;
                let target = if y == yp { Scalar::one() } else { Scalar::zero() };
                if value != target {
                    return Ok(self.verdict(false, Witness::Pairing { effect: y, state: yp, value }, cert));
                }
            }
        }
        Ok(self.verdict(true, Witness::None, cert))
    }

    /// Whether some deterministic states `ρ_y` satisfy `(m_{y'}|ρ_y) = δ`;
    /// one LP over convex weights on pure states per `y`.
    pub fn is_orthogonal_effect_set(&self, effects: &[Effect]) -> Result<Verdict, DeciderError> {
        self.check_valid(effects)?;
        let cert = inputs_certainty(effects, &[]);
        let sys = self.system;
        let table: Vec<Vec<Scalar>> = effects.iter().map(|e| sys.profile(e)).collect::<Result<_, _>>()?;
        let m = sys.pure_states().len();
        let mut states = Vec::with_capacity(effects.len());
        for y in 0..effects.len() {
            let mut b = LpBuilder::default();
            let start = b.vars(m, false);
            b.constrain((0..m).map(|i| (start + i, Scalar::one())).collect(), Relation::Eq, Scalar::one());
            for (yp, row) in table.iter().enumerate() {
                let rhs = if yp == y { Scalar::one() } else { Scalar::zero() };
                let terms =
                    row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (start + i, v.clone())).collect();
                b.constrain(terms, Relation::Eq, rhs);
            }
            match b.build().feasible()? {
                LpResult::Optimal { point, .. } => states.push(sys.mix(&point)),
                LpResult::Infeasible { certificate } => {
                    return Ok(self.verdict(false, Witness::Certificate { index: y, multipliers: certificate }, cert));
                }
                LpResult::Unbounded { .. } => unreachable!("feasibility LPs have no objective"),
            }
        }
        Ok(self.verdict(true, Witness::States(states), cert))
    }

    /// Whether valid effects `m_y` with `(m_y|ρ_{y'}) = δ` exist; one LP per `y`.
    pub fn are_states_orthogonal(&self, states: &[State]) -> Result<Verdict, DeciderError> {
        self.check_deterministic(states)?;
        let cert = inputs_certainty(&[], states);
        let mut effects = Vec::with_capacity(states.len());
        for y in 0..states.len() {
            let mut b = LpBuilder::default();
            let f = b.effect(self.system, self.mode, true);
            for (yp, s) in states.iter().enumerate() {
                let rhs = if yp == y { Scalar::one() } else { Scalar::zero() };
                b.constrain(f.pairing(s), Relation::Eq, rhs);
            }
            match b.build().feasible()? {
                LpResult::Optimal { point, .. } => effects.push(f.extract(&point, self.system.dim())),
                LpResult::Infeasible { certificate } => {
                    return Ok(self.verdict(false, Witness::Certificate { index: y, multipliers: certificate }, cert));
                }
                LpResult::Unbounded { .. } => unreachable!("feasibility LPs have no objective"),
            }
        }
        Ok(self.verdict(true, Witness::Effects(effects), cert))
    }

    /// A single measurement `{m_y}` with `(m_y|ρ_{y'}) = δ`.
    pub fn perfectly_distinguishable(&self, states: &[State]) -> Result<Verdict, DeciderError> {
        self.check_deterministic(states)?;
        let cert = inputs_certainty(&[], states);
        let d = self.system.dim();
        let mut b = LpBuilder::default();
        let vars: Vec<_> = states.iter().map(|_| b.effect(self.system, self.mode, false)).collect();
        for k in 0..d {
            let terms = vars.iter().flat_map(|v| v.coordinate(k)).collect();
            b.constrain(terms, Relation::Eq, self.system.unit().coords()[k].clone());
        }
        for (y, f) in vars.iter().enumerate() {
            for (yp, s) in states.iter().enumerate() {
                let rhs = if yp == y { Scalar::one() } else { Scalar::zero() };
                b.constrain(f.pairing(s), Relation::Eq, rhs);
            }
        }
        Ok(match b.build().feasible()? {
            LpResult::Optimal { point, .. } => {
                let effects = vars.iter().map(|v| v.extract(&point, d)).collect();
                self.verdict(true, Witness::Measurement(Measurement::new(effects)), cert)
            }
            LpResult::Infeasible { certificate } => {
                self.verdict(false, Witness::Certificate { index: 0, multipliers: certificate }, cert)
            }
            LpResult::Unbounded { .. } => unreachable!("feasibility LPs have no objective"),
        })
    }

    /// Whether `u − Σ effects` is a valid effect. On success the witness is
    /// the completed measurement, rest effect last.
    fn completes(&self, effects: &[Effect]) -> Result<(bool, Witness), DeciderError> {
        let sys = self.system;
        let total = effects.iter().fold(sys.zero_effect(), |acc, e| acc.plus(e));
        let rest = sys.unit().minus(&total);
        let ok = match self.mode {
            EffectMode::NoRestriction => {
                let totals = self.profile(&total)?;
                let worst = totals
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.cmp_value(&Scalar::one()).is_gt())
                    .max_by(|a, b| a.1.cmp_value(b.1).then(b.0.cmp(&a.0)));
                if let Some((i, t)) = worst {
                    let w = Witness::Overflow { state_index: i, state: sys.pure_state(i).clone(), total: t.clone() };
                    return Ok((false, w));
                }
                true
            }
            EffectMode::Generated => {
                if let Err(multipliers) = self.in_generated_cone(&rest)? {
                    return Ok((false, Witness::Certificate { index: 0, multipliers }));
                }
                true
            }
        };
        let mut all = effects.to_vec();
        all.push(rest);
        Ok((ok, Witness::Measurement(Measurement::new(all))))
    }

    /// Sufficient Orthogonality for one set: pure, orthogonal, and completable.
    pub fn sufficient_orthogonality(&self, effects: &[Effect]) -> Result<Verdict, DeciderError> {
        self.check_valid(effects)?;
        for (index, e) in effects.iter().enumerate() {
            if !self.is_pure_effect(e)?.holds {
                return Err(DeciderError::ImpureInput { index });
            }
        }
        let orth = self.is_orthogonal_effect_set(effects)?;
        if !orth.holds {
            let index = match orth.witness {
                Witness::Certificate { index, .. } => index,
                _ => 0,
            };
            return Err(DeciderError::NonOrthogonalInput { index });
        }
        let (holds, witness) = self.completes(effects)?;
        Ok(self.verdict(holds, witness, inputs_certainty(effects, &[])))
    }

    /// Pure effects of the system normalized to maximum pairing 1, with the
    /// index of the matching effect generator when there is one.
    pub fn normalized_pure_effects(&self) -> Result<Vec<(Effect, Option<usize>)>, DeciderError> {
        let sys = self.system;
        let mut out: Vec<(Effect, Option<usize>)> = Vec::new();
        let push = |out: &mut Vec<(Effect, Option<usize>)>, e: Effect, idx: Option<usize>| {
            if !out.iter().any(|(f, _)| linalg::positively_parallel(f.coords(), e.coords())) {
                out.push((e, idx));
            }
        };
        for (i, g) in sys.effect_generators().iter().enumerate() {
            if let Some(n) = normalize(sys, g)? {
                if self.is_valid(&n)? && self.is_pure_effect(&n)?.holds {
                    let idx = g.minus(&n).is_zero().then_some(i);
                    push(&mut out, n, idx);
                }
            }
        }
        if self.mode == EffectMode::NoRestriction {
            for r in self.effect_rays()? {
                if let Some(n) = normalize(sys, r)? {
                    push(&mut out, n, None);
                }
            }
        }
        Ok(out)
    }

    /// Sufficient Orthogonality for the whole system: every orthogonal set
    /// of normalized pure effects (at most `dim` of them) completes.
    pub fn satisfies_sufficient_orthogonality(&self) -> Result<Verdict, DeciderError> {
        let candidates = self.normalized_pure_effects()?;
        let max = self.system.dim().min(candidates.len());
        for size in 2..=max {
            for subset in (0..candidates.len()).combinations(size) {
                let effects: Vec<Effect> = subset.iter().map(|&i| candidates[i].0.clone()).collect();
                if !self.is_orthogonal_effect_set(&effects)?.holds {
                    continue;
                }
                let (holds, detail) = self.completes(&effects)?;
                if !holds {
                    let generator_indices = subset.iter().map(|&i| candidates[i].1).collect();
                    let w = Witness::SoViolation { effects, generator_indices, detail: Box::new(detail) };
                    return Ok(self.verdict(false, w, Certainty::Exact));
                }
            }
        }
        Ok(self.verdict(true, Witness::None, Certainty::Exact))
    }

    /// Pairwise joint completability: `u − m − m'` valid for all pairs.
    pub fn mutually_exclusive(&self, effects: &[Effect]) -> Result<Verdict, DeciderError> {
        self.check_valid(effects)?;
        let cert = inputs_certainty(effects, &[]);
        for (i, j) in (0..effects.len()).tuple_combinations() {
            let (ok, detail) = self.completes(&[effects[i].clone(), effects[j].clone()])?;
            if !ok {
                let w = Witness::Incompatible { first: i, second: j, detail: Box::new(detail) };
                return Ok(self.verdict(false, w, cert));
            }
        }
        Ok(self.verdict(true, Witness::None, cert))
    }

    /// Whether a family of spiky effects completes to one measurement.
    pub fn coexist_mutually_exclusive_spiky(&self, effects: &[SpikyEffect]) -> Result<Verdict, DeciderError> {
        for (index, s) in effects.iter().enumerate() {
            if s.parts.is_empty() {
                return Err(DeciderError::NonSpikyInput { index });
            }
            self.check_valid(&s.parts).map_err(|_| DeciderError::NonSpikyInput { index })?;
            for p in &s.parts {
                if !self.is_pure_effect(p)?.holds {
                    return Err(DeciderError::NonSpikyInput { index });
                }
            }
            if !self.is_orthogonal_effect_set(&s.parts)?.holds {
                return Err(DeciderError::NonSpikyInput { index });
            }
        }
        let totals: Vec<Effect> = effects.iter().map(SpikyEffect::total).collect();
        self.check_valid(&totals)?;
        let (holds, witness) = self.completes(&totals)?;
        Ok(self.verdict(holds, witness, inputs_certainty(&totals, &[])))
    }

    /// Pure State Identification for one effect: exactly one pure state
    /// attains probability one.
    pub fn identifies_pure_state(&self, e: &Effect) -> Result<Verdict, DeciderError> {
        self.check_valid(std::slice::from_ref(e))?;
        let face: Vec<usize> =
            self.profile(e)?.iter().enumerate().filter(|(_, v)| **v == Scalar::one()).map(|(i, _)| i).collect();
        let cert = e.certainty();
        match face.as_slice() {
            [] => Err(DeciderError::NotNormalized),
            [i] => Ok(self.verdict(true, Witness::States(vec![self.system.pure_state(*i).clone()]), cert)),
            _ => Ok(self.verdict(false, Witness::Face(face), cert)),
        }
    }

    /// No pure state can be added while keeping the set distinguishable.
    pub fn is_maximal_distinguishable_set(&self, states: &[State]) -> Result<Verdict, DeciderError> {
        if !self.perfectly_distinguishable(states)?.holds {
            return Err(DeciderError::InputNotDistinguishable);
        }
        let cert = inputs_certainty(&[], states);
        let rows: Vec<Vec<Scalar>> = states.iter().map(|s| s.coords().to_vec()).collect();
        let base_rank = linalg::rank(&rows);
        for (i, phi) in self.system.pure_states().iter().enumerate() {
            let mut extended_rows = rows.clone();
            extended_rows.push(phi.coords().to_vec());
            if linalg::rank(&extended_rows) == base_rank {
                continue;
            }
            let mut extended = states.to_vec();
            extended.push(phi.clone());
            let v = self.perfectly_distinguishable(&extended)?;
            if v.holds {
                let Witness::Measurement(measurement) = v.witness else { unreachable!() };
                return Ok(self.verdict(false, Witness::Extension { state_index: i, measurement }, cert));
            }
        }
        Ok(self.verdict(true, Witness::None, cert))
    }

    /// Vertex of `{f : 0 ≤ (f|φ) ≤ 1}`: the tight pure states span the space.
    pub fn is_extremal_effect(&self, e: &Effect) -> Result<Verdict, DeciderError> {
        if self.mode != EffectMode::NoRestriction {
            return Err(DeciderError::UnsupportedMode("extremality"));
        }
        self.check_valid(std::slice::from_ref(e))?;
        let tight: Vec<usize> = self
            .profile(e)?
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero() || **v == Scalar::one())
            .map(|(i, _)| i)
            .collect();
        let rows: Vec<Vec<Scalar>> = tight.iter().map(|&i| self.system.pure_state(i).coords().to_vec()).collect();
        let rank = linalg::rank(&rows);
        let holds = rank == self.system.dim();
        Ok(self.verdict(holds, Witness::Tight { states: tight, rank }, e.certainty()))
    }

    /// For pure measurements, sharpness coincides with orthogonality; the
    /// witness states define the repeatable measure-and-prepare test.
    pub fn is_sharp_pure_measurement(&self, m: &Measurement) -> Result<Verdict, DeciderError> {
        self.check_valid(&m.effects)?;
        for (index, e) in m.effects.iter().enumerate() {
            if !self.is_pure_effect(e)?.holds {
                return Err(DeciderError::PureOnly { index });
            }
        }
        if !self.system.is_measurement(&m.effects) {
            return Err(DeciderError::NotAMeasurement);
        }
        self.is_orthogonal_effect_set(&m.effects)
    }
}

fn inputs_certainty(effects: &[Effect], states: &[State]) -> Certainty {
    effects
        .iter()
        .map(Effect::certainty)
        .chain(states.iter().map(State::certainty))
        .fold(Certainty::Exact, Certainty::and)
}

/// `Ok(weights)` with `e = Σ w_i g_i`, `w ≥ 0`, or `Err(certificate)`.
fn cone_membership(gens: &[Effect], e: &Effect) -> Result<Result<Vec<Scalar>, Vec<Scalar>>, DeciderError> {
    let d = e.dim();
    let mut b = LpBuilder::default();
    let start = b.vars(gens.len(), false);
    for k in 0..d {
        let terms = gens
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.coords()[k].is_zero())
            .map(|(i, g)| (start + i, g.coords()[k].clone()))
            .collect();
        b.constrain(terms, Relation::Eq, e.coords()[k].clone());
    }
    Ok(match b.build().feasible()? {
        LpResult::Optimal { point, .. } => Ok(point),
        LpResult::Infeasible { certificate } => Err(certificate),
        LpResult::Unbounded { .. } => unreachable!("feasibility LPs have no objective"),
    })
}

/// Scales `e` so its largest pairing with a pure state is 1.
fn normalize(sys: &GptSystem, e: &Effect) -> Result<Option<Effect>, DeciderError> {
    let profile = sys.profile(e)?;
    let max = profile.into_iter().reduce(Scalar::max_of);
    Ok(match max {
        Some(m) if m.is_positive_value() => Some(e.scaled(&(Scalar::one() / m))),
        _ => None,
    })
}

/// Extreme rays of the dual of the state cone by exhaustive facet search:
/// every `(d−1)`-subset of pure states with a one-dimensional orthogonal
/// complement whose normal has constant sign on the pure states.
fn facet_rays(sys: &GptSystem) -> Result<Vec<Effect>, DeciderError> {
    let d = sys.dim();
    let states = sys.pure_states();
    let rows: Vec<Vec<Scalar>> = states.iter().map(|s| s.coords().to_vec()).collect();
    if linalg::rank(&rows) < d {
        return Err(DeciderError::DegenerateStateCone);
    }
    let mut rays: Vec<Effect> = Vec::new();
    for subset in (0..states.len()).combinations(d - 1) {
        let sub: Vec<Vec<Scalar>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let null = linalg::nullspace(&sub, d);
        if null.len() != 1 {
            continue;
        }
        let normal = Effect(null.into_iter().next().expect("one vector"));
        let values: Vec<Scalar> = states.iter().map(|s| linalg::dot(normal.coords(), s.coords())).collect();
        let ray = if values.iter().all(|v| !v.is_negative_value()) {
            normal
        } else if values.iter().all(|v| !v.is_positive_value()) {
            normal.scaled(&Scalar::from_int(-1))
        } else {
            continue;
        };
        let Some(ray) = normalize(sys, &ray)? else { continue };
        if !rays.iter().any(|r| linalg::positively_parallel(r.coords(), ray.coords())) {
            rays.push(ray);
        }
    }
    Ok(rays)
}

pub fn is_pure_effect(e: &Effect, sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).is_pure_effect(e)
}

pub fn are_biorthogonal(effects: &[Effect], states: &[State], sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).are_biorthogonal(effects, states)
}

pub fn is_orthogonal_effect_set(effects: &[Effect], sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).is_orthogonal_effect_set(effects)
}

pub fn are_states_orthogonal(states: &[State], sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).are_states_orthogonal(states)
}

pub fn perfectly_distinguishable(states: &[State], sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).perfectly_distinguishable(states)
}

pub fn sufficient_orthogonality(effects: &[Effect], sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).sufficient_orthogonality(effects)
}

pub fn mutually_exclusive(effects: &[Effect], sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).mutually_exclusive(effects)
}

pub fn coexist_mutually_exclusive_spiky(effects: &[SpikyEffect], sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).coexist_mutually_exclusive_spiky(effects)
}

pub fn identifies_pure_state(e: &Effect, sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).identifies_pure_state(e)
}

pub fn is_maximal_distinguishable_set(states: &[State], sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).is_maximal_distinguishable_set(states)
}

pub fn is_extremal_effect(e: &Effect, sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).is_extremal_effect(e)
}

pub fn is_sharp_pure_measurement(m: &Measurement, sys: &GptSystem) -> Result<Verdict, DeciderError> {
    Decider::new(sys).is_sharp_pure_measurement(m)
}
