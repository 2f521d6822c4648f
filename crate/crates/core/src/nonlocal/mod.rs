//! Multi-party behaviors `p(y|x)`, nonlocal games, No-Signalling, and the
//! Local Orthogonality hierarchy.

mod io;

pub use io::BehaviorFileError;

use itertools::Itertools;

use crate::gpt::{pair, tensor_system, GptError, GptSystem, Measurement, State};
use crate::numerics::{Certainty, Scalar, Sign};
use crate::orthograph::{level_clique, GraphError, WeightedGraph};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NonlocalError {
    #[error("scenario needs at least one party, got inputs {inputs:?} outputs {outputs:?}")]
    Scenario { inputs: Vec<usize>, outputs: Vec<usize> },
    #[error("table has {found} entries, scenario needs {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("p({y:?}|{x:?}) is negative")]
    Negative { x: Vec<usize>, y: Vec<usize> },
    #[error("outputs for input {x:?} sum to {total}, not 1")]
    Unnormalized { x: Vec<usize>, total: String },
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("{0}")]
    Arity(String),
    #[error("party {party}, input {input} is not a measurement on its system")]
    NotAMeasurement { party: usize, input: usize },
    #[error("state is not deterministic on the product system")]
    NotDeterministic,
    #[error("party {party}: {reason}")]
    NotAPartition { party: usize, reason: String },
    #[error("input distribution: {0}")]
    InputDistribution(String),
    #[error(transparent)]
    System(#[from] GptError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Number of strings over the alphabets `sizes`.
fn count(sizes: &[usize]) -> usize {
    sizes.iter().product()
}

/// Mixed-radix encoding, first party most significant.
fn encode(digits: &[usize], sizes: &[usize]) -> usize {
    digits.iter().zip(sizes).fold(0, |acc, (d, s)| acc * s + d)
}

fn decode(mut index: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        out[i] = index % sizes[i];
        index /= sizes[i];
    }
    out
}

fn strings(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..count(sizes)).map(move |i| decode(i, sizes))
}

/// Conditional distribution `p(y|x)` over `N` parties, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct Behavior {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    table: Vec<Scalar>,
}

impl Behavior {
    /// `table[ix · |Y| + iy]` holds `p(y|x)` with `ix`, `iy` the
    /// mixed-radix codes of `x` and `y`.
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>, table: Vec<Scalar>) -> Result<Self, NonlocalError> {
        if inputs.is_empty() || inputs.len() != outputs.len() || inputs.contains(&0) || outputs.contains(&0) {
            return Err(NonlocalError::Scenario { inputs, outputs });
        }
        let expected = count(&inputs) * count(&outputs);
        if table.len() != expected {
            return Err(NonlocalError::TableSize { expected, found: table.len() });
        }
        let b = Behavior { inputs, outputs, table };
        b.check()?;
        Ok(b)
    }

    pub fn from_fn(
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        mut p: impl FnMut(&[usize], &[usize]) -> Scalar,
    ) -> Result<Self, NonlocalError> {
        let table = strings(&inputs).flat_map(|x| strings(&outputs).map(|y| p(&x, &y)).collect::<Vec<_>>()).collect();
        Behavior::new(inputs, outputs, table)
    }

    fn check(&self) -> Result<(), NonlocalError> {
        let ny = count(&self.outputs);
        for (ix, row) in self.table.chunks(ny).enumerate() {
            let x = decode(ix, &self.inputs);
            if let Some(iy) = row.iter().position(|p| p.sign() == Sign::Negative) {
                return Err(NonlocalError::Negative { x, y: decode(iy, &self.outputs) });
            }
            let total: Scalar = row.iter().sum();
            if !(&total - &Scalar::one()).is_zero() {
                return Err(NonlocalError::Unnormalized { x, total: total.to_token() });
            }
        }
        Ok(())
    }

    pub fn parties(&self) -> usize {
        self.inputs.len()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn table(&self) -> &[Scalar] {
        &self.table
    }

    pub fn prob(&self, x: &[usize], y: &[usize]) -> &Scalar {
        &self.table[encode(x, &self.inputs) * count(&self.outputs) + encode(y, &self.outputs)]
    }

    pub fn input_strings(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        strings(&self.inputs)
    }

    pub fn output_strings(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        strings(&self.outputs)
    }

    pub fn certainty(&self) -> Certainty {
        crate::gpt::certainty_of(&self.table)
    }

    /// Marginal of the parties in `subset` (ascending) for full input `x`.
    pub fn marginal(&self, subset: &[usize], x: &[usize], y_subset: &[usize]) -> Scalar {
        self.output_strings()
            .filter(|y| subset.iter().zip(y_subset).all(|(&i, &v)| y[i] == v))
            .map(|y| self.prob(x, &y).clone())
            .sum()
    }

    pub fn same_scenario_as(&self, other: &Behavior) -> bool {
        self.inputs == other.inputs && self.outputs == other.outputs
    }
}

/// An input/output pair `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl Event {
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>) -> Self {
        assert_eq!(inputs.len(), outputs.len(), "one input and one output per party");
        Event { inputs, outputs }
    }

    pub fn fits(&self, b: &Behavior) -> bool {
        self.inputs.len() == b.parties()
            && self.inputs.iter().zip(&b.inputs).all(|(x, n)| x < n)
            && self.outputs.iter().zip(&b.outputs).all(|(y, m)| y < m)
    }
}

impl std::fmt::Display for Event {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}|{}", self.inputs.iter().join(","), self.outputs.iter().join(","))
    }
}

/// Some party receives the same input in both events and answers differently.
pub fn locally_orthogonal(e: &Event, f: &Event) -> bool {
    e.inputs.iter().zip(&f.inputs).zip(e.outputs.iter().zip(&f.outputs)).any(|((x, xp), (y, yp))| x == xp && y != yp)
}

/// Input distribution `q(x)` and payoff table `ω(x, y)`.
#[derive(Clone, Debug)]
pub struct NonlocalGame {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    q: Vec<Scalar>,
    omega: Vec<Scalar>,
}

impl NonlocalGame {
    pub fn new(
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        q: Vec<Scalar>,
        omega: Vec<Scalar>,
    ) -> Result<Self, NonlocalError> {
        if inputs.is_empty() || inputs.len() != outputs.len() {
            return Err(NonlocalError::Scenario { inputs, outputs });
        }
        let (nx, ny) = (count(&inputs), count(&outputs));
        if q.len() != nx {
            return Err(NonlocalError::TableSize { expected: nx, found: q.len() });
        }
        if omega.len() != nx * ny {
            return Err(NonlocalError::TableSize { expected: nx * ny, found: omega.len() });
        }
        if q.iter().any(|v| v.sign() == Sign::Negative) {
            return Err(NonlocalError::InputDistribution("negative weight".into()));
        }
        let total: Scalar = q.iter().sum();
        if !(&total - &Scalar::one()).is_zero() {
            return Err(NonlocalError::InputDistribution(format!("sums to {}", total.to_token())));
        }
        Ok(NonlocalGame { inputs, outputs, q, omega })
    }

    pub fn from_fn(
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        mut q: impl FnMut(&[usize]) -> Scalar,
        mut omega: impl FnMut(&[usize], &[usize]) -> Scalar,
    ) -> Result<Self, NonlocalError> {
        let qs = strings(&inputs).map(|x| q(&x)).collect();
        let ws = strings(&inputs).flat_map(|x| strings(&outputs).map(|y| omega(&x, &y)).collect::<Vec<_>>()).collect();
        NonlocalGame::new(inputs, outputs, qs, ws)
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }
}

/// `Σ_x q(x) Σ_y ω(x,y) p(y|x)`.
pub fn payoff(g: &NonlocalGame, b: &Behavior) -> Result<Scalar, NonlocalError> {
    if g.inputs != b.inputs || g.outputs != b.outputs {
        return Err(NonlocalError::AlphabetMismatch(format!(
            "game {:?}/{:?}, behavior {:?}/{:?}",
            g.inputs, g.outputs, b.inputs, b.outputs
        )));
    }
    let ny = count(&b.outputs);
    let mut total = Scalar::zero();
    for (ix, qx) in g.q.iter().enumerate() {
        if qx.is_zero() {
            continue;
        }
        let inner: Scalar = (0..ny).map(|iy| &g.omega[ix * ny + iy] * &b.table[ix * ny + iy]).sum();
        total = &total + &(qx * &inner);
    }
    Ok(total)
}

/// Evaluates `p(y|x) = (m^{x_1}_{y_1} ⊗ … ⊗ m^{x_N}_{y_N} | ρ)` on the
/// tensor product of `systems`. `measurements[i][x]` is party `i`'s
/// measurement for input `x`.
pub fn behavior_from_model(
    systems: &[GptSystem],
    state: &State,
    measurements: &[Vec<Measurement>],
) -> Result<Behavior, NonlocalError> {
    if systems.is_empty() || systems.len() != measurements.len() {
        return Err(NonlocalError::Arity(format!(
            "{} systems but {} parties of measurements",
            systems.len(),
            measurements.len()
        )));
    }
    let mut product = systems[0].clone();
    for s in &systems[1..] {
        product = tensor_system(&product, s)?;
    }
    if state.dim() != product.dim() || !product.is_deterministic(state) {
        return Err(NonlocalError::NotDeterministic);
    }
    let mut outputs = Vec::new();
    for (party, (sys, ms)) in systems.iter().zip(measurements).enumerate() {
        let first = ms.first().ok_or_else(|| NonlocalError::Arity(format!("party {party} has no inputs")))?;
        for (input, m) in ms.iter().enumerate() {
            if m.len() != first.len() {
                return Err(NonlocalError::Arity(format!(
                    "party {party}: input {input} has {} outcomes, input 0 has {}",
                    m.len(),
                    first.len()
                )));
            }
            if !sys.is_measurement(&m.effects) {
                return Err(NonlocalError::NotAMeasurement { party, input });
            }
        }
        outputs.push(first.len());
    }
    let inputs: Vec<usize> = measurements.iter().map(Vec::len).collect();
    let mut err = None;
    let b = Behavior::from_fn(inputs, outputs, |x, y| {
        let mut e = measurements[0][x[0]].effects[y[0]].clone();
        for i in 1..x.len() {
            e = e.kron(&measurements[i][x[i]].effects[y[i]]);
        }
        pair(&e, state).unwrap_or_else(|g| {
            err = Some(g);
            Scalar::zero()
        })
    });
    match err {
        Some(g) => Err(g.into()),
        None => b,
    }
}

/// Why a behavior fails No-Signalling: the marginal of `parties` on
/// `outputs` changes when only the other parties' inputs change.
#[derive(Clone, Debug, PartialEq)]
pub struct SignallingWitness {
    pub parties: Vec<usize>,
    pub first_input: Vec<usize>,
    pub second_input: Vec<usize>,
    pub outputs: Vec<usize>,
    pub first_marginal: Scalar,
    pub second_marginal: Scalar,
}

/// Checks every bipartition `A | B` in both directions: the marginal on `A`
/// must not depend on the inputs of `B`.
pub fn is_no_signalling(b: &Behavior) -> Verdict<Option<SignallingWitness>> {
    let n = b.parties();
    let certainty = b.certainty();
    // subsets containing party 0 enumerate the bipartitions once each
    for mask in 1u64..(1 << n) - 1 {
        if mask & 1 == 0 {
            continue;
        }
        let side: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let rest: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        for (a, other) in [(&side, &rest), (&rest, &side)] {
            if let Some(w) = signalling_into(b, a, other) {
                return Verdict::new(false, Some(w), certainty);
            }
        }
    }
    Verdict::new(true, None, certainty)
}

fn signalling_into(b: &Behavior, a: &[usize], other: &[usize]) -> Option<SignallingWitness> {
    let a_in: Vec<usize> = a.iter().map(|&i| b.inputs[i]).collect();
    let a_out: Vec<usize> = a.iter().map(|&i| b.outputs[i]).collect();
    let o_in: Vec<usize> = other.iter().map(|&i| b.inputs[i]).collect();
    let full = |xa: &[usize], xo: &[usize]| {
        let mut x = vec![0; b.parties()];
        for (&i, &v) in a.iter().zip(xa) {
            x[i] = v;
        }
        for (&i, &v) in other.iter().zip(xo) {
            x[i] = v;
        }
        x
    };
    let base_other = vec![0; other.len()];
    for xa in strings(&a_in) {
        let x0 = full(&xa, &base_other);
        for ya in strings(&a_out) {
            let m0 = b.marginal(a, &x0, &ya);
            for xo in strings(&o_in).skip(1) {
                let x1 = full(&xa, &xo);
                let m1 = b.marginal(a, &x1, &ya);
                if !(&m0 - &m1).is_zero() {
                    return Some(SignallingWitness {
                        parties: a.to_vec(),
                        first_input: x0,
                        second_input: x1,
                        outputs: ya,
                        first_marginal: m0,
                        second_marginal: m1,
                    });
                }
            }
        }
    }
    None
}

/// Graph of events with edges between locally orthogonal pairs, weighted
/// by `p(e)`.
#[derive(Clone, Debug)]
pub struct LoGraph {
    pub graph: WeightedGraph,
    pub events: Vec<Event>,
}

/// Events with `p(e) = 0` are left out unless `retain_zero` is set.
pub fn lo_graph(b: &Behavior, retain_zero: bool) -> LoGraph {
    let mut events = Vec::new();
    let mut weights = Vec::new();
    for x in b.input_strings() {
        for y in b.output_strings() {
            let p = b.prob(&x, &y).clone();
            if retain_zero || !p.is_zero() {
                events.push(Event::new(x.clone(), y));
                weights.push(p);
            }
        }
    }
    let labels = events.iter().map(Event::to_string).collect();
    let mut graph = WeightedGraph::with_labels(labels, weights).expect("probabilities are non-negative");
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            if locally_orthogonal(&events[i], &events[j]) {
                graph.add_edge(i, j).expect("distinct vertices");
            }
        }
    }
    LoGraph { graph, events }
}

#[derive(Clone, Debug)]
pub struct LoReport {
    pub level: usize,
    pub satisfied: bool,
    pub max_clique_value: Scalar,
    /// The maximizing clique; each member lists one event per copy.
    pub witness: Vec<Vec<Event>>,
    pub certainty: Certainty,
    pub vertices: usize,
}

/// Level-`k` Local Orthogonality: the maximum weight of a clique in the
/// `k`-fold disjunctive power of the LO graph must not exceed 1.
pub fn check_lo(b: &Behavior, k: usize, cap: usize) -> Result<LoReport, NonlocalError> {
    check_lo_with(b, k, cap, false)
}

/// As [`check_lo`]; with `early_stop` the search ends at the first clique
/// heavier than 1 and the reported value is only a lower bound.
pub fn check_lo_with(b: &Behavior, k: usize, cap: usize, early_stop: bool) -> Result<LoReport, NonlocalError> {
    assert!(k >= 1, "level must be at least 1");
    let lo = lo_graph(b, false);
    let r = level_clique(&lo.graph, k, cap, early_stop)?;
    let witness = r.members.iter().map(|m| m.iter().map(|&i| lo.events[i].clone()).collect()).collect();
    let satisfied = (&r.value - &Scalar::one()).sign() != Sign::Positive;
    let certainty = r.value.certainty().and(b.certainty());
    Ok(LoReport { level: k, satisfied, max_clique_value: r.value, witness, certainty, vertices: r.vertices })
}

/// Merges outputs party by party: `partitions[i]` splits `Y_i` into blocks,
/// and block `j` becomes the new output `j`.
pub fn coarse_grain_behavior(b: &Behavior, partitions: &[Vec<Vec<usize>>]) -> Result<Behavior, NonlocalError> {
    if partitions.len() != b.parties() {
        return Err(NonlocalError::Arity(format!("{} partitions for {} parties", partitions.len(), b.parties())));
    }
    let mut maps = Vec::new();
    for (party, blocks) in partitions.iter().enumerate() {
        let m = b.outputs[party];
        let mut target = vec![None; m];
        for (j, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(NonlocalError::NotAPartition { party, reason: "empty block".into() });
            }
            for &z in block {
                if z >= m {
                    return Err(NonlocalError::NotAPartition { party, reason: format!("output {z} out of range") });
                }
                if target[z].replace(j).is_some() {
                    return Err(NonlocalError::NotAPartition { party, reason: format!("output {z} repeated") });
                }
            }
        }
        if let Some(z) = target.iter().position(Option::is_none) {
            return Err(NonlocalError::NotAPartition { party, reason: format!("output {z} missing") });
        }
        maps.push(target.into_iter().map(Option::unwrap).collect::<Vec<usize>>());
    }
    let outputs: Vec<usize> = partitions.iter().map(Vec::len).collect();
    let ny = count(&outputs);
    let mut table = vec![Scalar::zero(); count(&b.inputs) * ny];
    for x in b.input_strings() {
        let ix = encode(&x, &b.inputs);
        for z in b.output_strings() {
            let y: Vec<usize> = z.iter().zip(&maps).map(|(v, m)| m[*v]).collect();
            let slot = ix * ny + encode(&y, &outputs);
            table[slot] = &table[slot] + b.prob(&x, &z);
        }
    }
    Behavior::new(b.inputs.clone(), outputs, table)
}

impl Behavior {
    /// Deterministic local strategy: party `i` answers `f_i(x_i)`.
    pub fn deterministic(
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        responses: &[Vec<usize>],
    ) -> Result<Behavior, NonlocalError> {
        if responses.len() != inputs.len() || responses.iter().zip(&inputs).any(|(r, n)| r.len() != *n) {
            return Err(NonlocalError::Arity("one response per party and input".into()));
        }
        if responses.iter().zip(&outputs).any(|(r, m)| r.iter().any(|y| y >= m)) {
            return Err(NonlocalError::AlphabetMismatch("response outside the output alphabet".into()));
        }
        Behavior::from_fn(inputs, outputs, |x, y| {
            if x.iter().zip(y).zip(responses).all(|((xi, yi), r)| r[*xi] == *yi) {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }
}
