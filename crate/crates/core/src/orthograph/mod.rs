//! Weighted graphs, exact maximum-weight clique, and the disjunctive product.

mod clique;

pub use clique::{max_weight_clique, CliqueResult};

use crate::numerics::Scalar;

/// Product graphs larger than this are refused unless the caller overrides.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("product would have {required} vertices, above the cap of {cap}")]
    ResourceCapExceeded { required: u128, cap: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("weight of vertex {0} is negative")]
    NegativeWeight(usize),
}

/// Undirected simple graph with a non-negative weight on every vertex.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    labels: Vec<String>,
    weights: Vec<Scalar>,
    adj: Vec<Vec<u64>>,
}

pub(crate) fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl WeightedGraph {
    pub fn new(weights: Vec<Scalar>) -> Result<Self, GraphError> {
        let labels = (0..weights.len()).map(|i| i.to_string()).collect();
        WeightedGraph::with_labels(labels, weights)
    }

    pub fn with_labels(labels: Vec<String>, weights: Vec<Scalar>) -> Result<Self, GraphError> {
        assert_eq!(labels.len(), weights.len(), "one label per vertex");
        if let Some(i) = weights.iter().position(|w| w.sign() == crate::numerics::Sign::Negative) {
            return Err(GraphError::NegativeWeight(i));
        }
        let n = weights.len();
        Ok(WeightedGraph { labels, weights, adj: vec![vec![0; words(n)]; n] })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight(&self, v: usize) -> &Scalar {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn set_weights(&mut self, weights: Vec<Scalar>) -> Result<(), GraphError> {
        assert_eq!(weights.len(), self.len(), "one weight per vertex");
        if let Some(i) = weights.iter().position(|w| w.sign() == crate::numerics::Sign::Negative) {
            return Err(GraphError::NegativeWeight(i));
        }
        self.weights = weights;
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.len();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange(x));
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u][v / 64] |= 1 << (v % 64);
        self.adj[v][u / 64] |= 1 << (u % 64);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u][v / 64] &= !(1 << (v % 64));
        self.adj[v][u / 64] &= !(1 << (u % 64));
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] & (1 << (v % 64)) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.iter().map(|w| w.count_ones() as usize).sum::<usize>()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    pub fn clique_weight(&self, vertices: &[usize]) -> Scalar {
        vertices.iter().map(|&v| &self.weights[v]).sum()
    }

    /// Induced subgraph on `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> WeightedGraph {
        let mut g = WeightedGraph {
            labels: keep.iter().map(|&v| self.labels[v].clone()).collect(),
            weights: keep.iter().map(|&v| self.weights[v].clone()).collect(),
            adj: vec![vec![0; words(keep.len())]; keep.len()],
        };
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j).expect("indices in range");
                }
            }
        }
        g
    }

    /// Same graph with vertex `v` of the result being vertex `perm[v]` here.
    pub fn relabeled(&self, perm: &[usize]) -> WeightedGraph {
        self.induced(perm)
    }
}

/// Vertices of the product are pairs `(u, v)` numbered `u·|V2| + v`; two
/// distinct pairs are adjacent iff `u ~ u′` in `g1` or `v ~ v′` in `g2`.
/// Weights multiply.
pub fn disjunctive_product(g1: &WeightedGraph, g2: &WeightedGraph) -> WeightedGraph {
    let (n1, n2) = (g1.len(), g2.len());
    let n = n1 * n2;
    let w = words(n);
    let mut labels = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for u in 0..n1 {
        for v in 0..n2 {
            labels.push(format!("({},{})", g1.labels[u], g2.labels[v]));
            weights.push(&g1.weights[u] * &g2.weights[v]);
        }
    }
    // rows of the product: N(u)×V2 ∪ V1×N(v)
    let mut adj = vec![vec![0u64; w]; n];
    let set = |row: &mut [u64], i: usize| row[i / 64] |= 1 << (i % 64);
    for u in 0..n1 {
        let mut first = vec![0u64; w];
        for up in 0..n1 {
            if g1.has_edge(u, up) {
                for vp in 0..n2 {
                    set(&mut first, up * n2 + vp);
                }
            }
        }
        for v in 0..n2 {
            let row = &mut adj[u * n2 + v];
            row.copy_from_slice(&first);
            for vp in 0..n2 {
                if g2.has_edge(v, vp) {
                    for up in 0..n1 {
                        set(row, up * n2 + vp);
                    }
                }
            }
        }
    }
    WeightedGraph { labels, weights, adj }
}

/// The `k`-fold disjunctive power, refusing results above `cap` vertices.
pub fn disjunctive_power(g: &WeightedGraph, k: usize, cap: usize) -> Result<WeightedGraph, GraphError> {
    assert!(k >= 1, "level must be at least 1");
    let required = (g.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(GraphError::ResourceCapExceeded { required, cap });
    }
    let mut out = g.clone();
    for _ in 1..k {
        out = disjunctive_product(&out, g);
    }
    Ok(out)
}

/// Maximum clique of the `k`-fold power, members decoded into one base
/// vertex per copy.
#[derive(Clone, Debug)]
pub struct LevelClique {
    pub value: Scalar,
    pub members: Vec<Vec<usize>>,
    pub vertices: usize,
    pub early_stopped: bool,
}

/// Shared engine of the LO and CE hierarchies. With `early_stop` the search
/// ends at the first clique heavier than 1.
pub fn level_clique(g: &WeightedGraph, k: usize, cap: usize, early_stop: bool) -> Result<LevelClique, GraphError> {
    let power = disjunctive_power(g, k, cap)?;
    let one = Scalar::one();
    let r = max_weight_clique(&power, early_stop.then_some(&one));
    let n = g.len();
    let members = r
        .witness
        .iter()
        .map(|&v| {
            let mut idx = vec![0; k];
            let mut rest = v;
            for slot in idx.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            idx
        })
        .collect();
    Ok(LevelClique { value: r.value, members, vertices: power.len(), early_stopped: r.early_stopped })
}
