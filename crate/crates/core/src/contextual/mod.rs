//! Test-space hypergraphs, probability weights, contextual games, and the
//! Consistent Exclusivity hierarchy.

mod io;

pub use io::ContextualFileError;

use crate::gpt::{pair, Effect, GptError, GptSystem, State};
use crate::numerics::{Certainty, Scalar, Sign};
use crate::orthograph::{level_clique, GraphError, WeightedGraph};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ContextualError {
    #[error("hyperedge {0} is empty")]
    EmptyEdge(usize),
    #[error("vertex `{0}` lies in no hyperedge")]
    UncoveredVertex(String),
    #[error("vertex index {index} out of range in hyperedge {edge}")]
    VertexOutOfRange { edge: usize, index: usize },
    #[error("vertex {vertex} repeated in hyperedge {edge}")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("expected {expected} values, got {found}")]
    Length { expected: usize, found: usize },
    #[error("not a probability weight: {0}")]
    NotAWeight(String),
    #[error("effects on hyperedge {0} do not form a measurement")]
    NotAMeasurement(usize),
    #[error("state is not deterministic on the weight's system")]
    NotDeterministic,
    #[error("game and weight live on different hypergraphs")]
    HypergraphMismatch,
    #[error("input distribution: {0}")]
    InputDistribution(String),
    #[error("response table for hyperedge {0}: {1}")]
    Response(usize, String),
    #[error(transparent)]
    System(#[from] GptError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Answers (vertices) grouped into questions (hyperedges).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: Vec<String>,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Vec<usize>>) -> Result<Self, ContextualError> {
        let n = vertices.len();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(ContextualError::DuplicateLabel(v.clone()));
            }
        }
        let mut covered = vec![false; n];
        for (e, edge) in edges.iter().enumerate() {
            if edge.is_empty() {
                return Err(ContextualError::EmptyEdge(e));
            }
            for (j, &v) in edge.iter().enumerate() {
                if v >= n {
                    return Err(ContextualError::VertexOutOfRange { edge: e, index: v });
                }
                if edge[..j].contains(&v) {
                    return Err(ContextualError::RepeatedVertex { edge: e, vertex: v });
                }
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(ContextualError::UncoveredVertex(vertices[v].clone()));
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Vertices labelled `0..n`.
    pub fn numbered(n: usize, edges: Vec<Vec<usize>>) -> Result<Self, ContextualError> {
        Hypergraph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn from_labels(vertices: Vec<String>, edges: &[Vec<String>]) -> Result<Self, ContextualError> {
        let edges = edges
            .iter()
            .map(|edge| edge.iter().map(|l| Self::find(&vertices, l)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Hypergraph::new(vertices, edges)
    }

    fn find(vertices: &[String], label: &str) -> Result<usize, ContextualError> {
        vertices.iter().position(|v| v == label).ok_or_else(|| ContextualError::UnknownVertex(label.to_string()))
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ContextualError> {
        Self::find(&self.vertices, label)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn with_edge(&self, edge: Vec<usize>) -> Result<Hypergraph, ContextualError> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Hypergraph::new(self.vertices.clone(), edges)
    }
}

/// Why a vertex map fails to be a probability weight.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightViolation {
    OutOfRange { vertex: usize, value: Scalar },
    EdgeSum { edge: usize, total: Scalar },
}

impl std::fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightViolation::OutOfRange { vertex, value } => write!(f, "w({vertex}) = {value} outside [0, 1]"),
            WeightViolation::EdgeSum { edge, total } => write!(f, "hyperedge {edge} sums to {total}"),
        }
    }
}

/// Range `0 ≤ w ≤ 1` and `Σ_{y∈x} w(y) = 1` on every hyperedge, decided exactly.
pub fn is_probability_weight(w: &[Scalar], h: &Hypergraph) -> Verdict<Option<WeightViolation>> {
    let certainty = crate::gpt::certainty_of(w);
    assert_eq!(w.len(), h.len(), "one value per vertex");
    for (vertex, value) in w.iter().enumerate() {
        if value.sign() == Sign::Negative || (value - &Scalar::one()).sign() == Sign::Positive {
            return Verdict::new(false, Some(WeightViolation::OutOfRange { vertex, value: value.clone() }), certainty);
        }
    }
    for (edge, members) in h.edges.iter().enumerate() {
        let total: Scalar = members.iter().map(|&v| w[v].clone()).sum();
        if !(&total - &Scalar::one()).is_zero() {
            return Verdict::new(false, Some(WeightViolation::EdgeSum { edge, total }), certainty);
        }
    }
    Verdict::new(true, None, certainty)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityWeight {
    hypergraph: Hypergraph,
    w: Vec<Scalar>,
}

impl ProbabilityWeight {
    pub fn new(hypergraph: Hypergraph, w: Vec<Scalar>) -> Result<Self, ContextualError> {
        if w.len() != hypergraph.len() {
            return Err(ContextualError::Length { expected: hypergraph.len(), found: w.len() });
        }
        let v = is_probability_weight(&w, &hypergraph);
        if let Some(why) = v.witness {
            return Err(ContextualError::NotAWeight(why.to_string()));
        }
        Ok(ProbabilityWeight { hypergraph, w })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.w
    }

    pub fn weight(&self, v: usize) -> &Scalar {
        &self.w[v]
    }

    pub fn certainty(&self) -> Certainty {
        crate::gpt::certainty_of(&self.w)
    }

    /// `t·self + (1−t)·other` on the same hypergraph.
    pub fn mix(&self, other: &ProbabilityWeight, t: &Scalar) -> Result<ProbabilityWeight, ContextualError> {
        if self.hypergraph != other.hypergraph {
            return Err(ContextualError::HypergraphMismatch);
        }
        let s = &Scalar::one() - t;
        let w = self.w.iter().zip(&other.w).map(|(a, b)| &(t * a) + &(&s * b)).collect();
        ProbabilityWeight::new(self.hypergraph.clone(), w)
    }
}

/// Edge between two answers iff some question contains both.
pub fn exclusivity_graph(h: &Hypergraph) -> WeightedGraph {
    weighted_graph(h, vec![Scalar::one(); h.len()])
}

pub fn weighted_exclusivity_graph(w: &ProbabilityWeight) -> WeightedGraph {
    weighted_graph(&w.hypergraph, w.w.clone())
}

fn weighted_graph(h: &Hypergraph, weights: Vec<Scalar>) -> WeightedGraph {
    let mut g = WeightedGraph::with_labels(h.vertices.clone(), weights).expect("weights are non-negative");
    for edge in &h.edges {
        for (i, &u) in edge.iter().enumerate() {
            for &v in &edge[i + 1..] {
                g.add_edge(u, v).expect("distinct vertices in range");
            }
        }
    }
    g
}

#[derive(Clone, Debug)]
pub struct CeReport {
    pub level: usize,
    pub satisfied: bool,
    pub max_clique_value: Scalar,
    /// Mutually exclusive vertex strings, one vertex per copy.
    pub witness: Vec<Vec<usize>>,
    pub certainty: Certainty,
    pub vertices: usize,
}

/// Level-`k` Consistent Exclusivity.
pub fn check_ce(w: &ProbabilityWeight, k: usize, cap: usize) -> Result<CeReport, ContextualError> {
    check_ce_with(w, k, cap, false)
}

pub fn check_ce_with(
    w: &ProbabilityWeight,
    k: usize,
    cap: usize,
    early_stop: bool,
) -> Result<CeReport, ContextualError> {
    assert!(k >= 1, "level must be at least 1");
    let g = weighted_exclusivity_graph(w);
    // zero-weight answers cannot change the optimum
    let keep: Vec<usize> = (0..g.len()).filter(|&v| !g.weight(v).is_zero()).collect();
    let pruned = g.induced(&keep);
    let r = level_clique(&pruned, k, cap, early_stop)?;
    let witness = r.members.iter().map(|m| m.iter().map(|&i| keep[i]).collect()).collect();
    let satisfied = (&r.value - &Scalar::one()).sign() != Sign::Positive;
    let certainty = r.value.certainty().and(w.certainty());
    Ok(CeReport { level: k, satisfied, max_clique_value: r.value, witness, certainty, vertices: r.vertices })
}

/// A single effect per answer such that every question is a measurement.
#[derive(Clone, Debug)]
pub struct EffectValuedWeight {
    hypergraph: Hypergraph,
    system: GptSystem,
    effects: Vec<Effect>,
}

impl EffectValuedWeight {
    pub fn new(hypergraph: Hypergraph, system: GptSystem, effects: Vec<Effect>) -> Result<Self, ContextualError> {
        if effects.len() != hypergraph.len() {
            return Err(ContextualError::Length { expected: hypergraph.len(), found: effects.len() });
        }
        for (i, edge) in hypergraph.edges.iter().enumerate() {
            let m: Vec<Effect> = edge.iter().map(|&v| effects[v].clone()).collect();
            if !system.is_measurement(&m) {
                return Err(ContextualError::NotAMeasurement(i));
            }
        }
        Ok(EffectValuedWeight { hypergraph, system, effects })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn system(&self) -> &GptSystem {
        &self.system
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }
}

/// `w(y) = (ŵ(y) | ρ)`.
pub fn weight_from_model(evw: &EffectValuedWeight, state: &State) -> Result<ProbabilityWeight, ContextualError> {
    if state.dim() != evw.system.dim() {
        return Err(GptError::SystemMismatch { expected: evw.system.dim(), found: state.dim() }.into());
    }
    if !evw.system.is_deterministic(state) {
        return Err(ContextualError::NotDeterministic);
    }
    let w = evw.effects.iter().map(|e| pair(e, state)).collect::<Result<Vec<_>, _>>()?;
    ProbabilityWeight::new(evw.hypergraph.clone(), w)
}

/// Question distribution `q(x)` and payoff `ω(x, y)` for `y ∈ x`;
/// `omega[x][j]` belongs to the `j`-th answer of hyperedge `x`.
#[derive(Clone, Debug)]
pub struct ContextualGame {
    hypergraph: Hypergraph,
    q: Vec<Scalar>,
    omega: Vec<Vec<Scalar>>,
}

impl ContextualGame {
    pub fn new(hypergraph: Hypergraph, q: Vec<Scalar>, omega: Vec<Vec<Scalar>>) -> Result<Self, ContextualError> {
        let m = hypergraph.edges.len();
        for (found, expected) in [(q.len(), m), (omega.len(), m)] {
            if found != expected {
                return Err(ContextualError::Length { expected, found });
            }
        }
        for (row, edge) in omega.iter().zip(&hypergraph.edges) {
            if row.len() != edge.len() {
                return Err(ContextualError::Length { expected: edge.len(), found: row.len() });
            }
        }
        if q.iter().any(|v| v.sign() == Sign::Negative) {
            return Err(ContextualError::InputDistribution("negative weight".into()));
        }
        let total: Scalar = q.iter().sum();
        if !(&total - &Scalar::one()).is_zero() {
            return Err(ContextualError::InputDistribution(format!("sums to {total}")));
        }
        Ok(ContextualGame { hypergraph, q, omega })
    }

    /// Builds the table from `ω(x, vertex)`.
    pub fn from_fn(
        hypergraph: Hypergraph,
        q: Vec<Scalar>,
        mut omega: impl FnMut(usize, usize) -> Scalar,
    ) -> Result<Self, ContextualError> {
        let table =
            hypergraph.edges.iter().enumerate().map(|(x, edge)| edge.iter().map(|&y| omega(x, y)).collect()).collect();
        ContextualGame::new(hypergraph, q, table)
    }

    /// `c(y) = Σ_x q(x) ω(x, y)`.
    pub fn vertex_payoffs(&self) -> Vec<Scalar> {
        let mut c = vec![Scalar::zero(); self.hypergraph.len()];
        for ((qx, edge), row) in self.q.iter().zip(&self.hypergraph.edges).zip(&self.omega) {
            for (&y, w) in edge.iter().zip(row) {
                c[y] = &c[y] + &(qx * w);
            }
        }
        c
    }
}

/// `Σ_y c(y) w(y)`.
pub fn payoff_contextual(g: &ContextualGame, w: &ProbabilityWeight) -> Result<Scalar, ContextualError> {
    if g.hypergraph != w.hypergraph {
        return Err(ContextualError::HypergraphMismatch);
    }
    Ok(g.vertex_payoffs().iter().zip(&w.w).map(|(c, p)| c * p).sum())
}

/// A shared answer whose probability depends on the question asked.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseConflict {
    pub vertex: usize,
    pub first_edge: usize,
    pub second_edge: usize,
    pub first: Scalar,
    pub second: Scalar,
}

/// `table[x][j] = p(y_j | x)` for the `j`-th answer of hyperedge `x`. On
/// success the common values form the returned weight.
pub fn response_noncontextual_check(
    h: &Hypergraph,
    table: &[Vec<Scalar>],
) -> Result<(Verdict<Option<ResponseConflict>>, Option<ProbabilityWeight>), ContextualError> {
    if table.len() != h.edges.len() {
        return Err(ContextualError::Length { expected: h.edges.len(), found: table.len() });
    }
    for (x, (row, edge)) in table.iter().zip(&h.edges).enumerate() {
        if row.len() != edge.len() {
            return Err(ContextualError::Response(x, format!("{} values for {} answers", row.len(), edge.len())));
        }
        if row.iter().any(|p| p.sign() == Sign::Negative) {
            return Err(ContextualError::Response(x, "negative probability".into()));
        }
        let total: Scalar = row.iter().sum();
        if !(&total - &Scalar::one()).is_zero() {
            return Err(ContextualError::Response(x, format!("sums to {total}")));
        }
    }
    let certainty = crate::gpt::certainty_of(&table.concat());
    let mut seen: Vec<Option<(usize, Scalar)>> = vec![None; h.len()];
    for (x, (row, edge)) in table.iter().zip(&h.edges).enumerate() {
        for (&y, p) in edge.iter().zip(row) {
            match &seen[y] {
                None => seen[y] = Some((x, p.clone())),
                Some((x0, p0)) => {
                    if !(p0 - p).is_zero() {
                        let conflict = ResponseConflict {
                            vertex: y,
                            first_edge: *x0,
                            second_edge: x,
                            first: p0.clone(),
                            second: p.clone(),
                        };
                        return Ok((Verdict::new(false, Some(conflict), certainty), None));
                    }
                }
            }
        }
    }
    let w = seen.into_iter().map(|s| s.expect("every vertex is covered").1).collect();
    let weight = ProbabilityWeight::new(h.clone(), w)?;
    Ok((Verdict::new(true, None, certainty), Some(weight)))
}
