//! Exact maximum-weight clique by branch and bound.
//!
//! Vertices are ordered by non-decreasing weight. At every node the
//! candidate weights are spread over independent sets, splitting a vertex
//! across several sets when its weight exceeds a set's level. A clique
//! meets each set at most once, so the sum of the levels bounds what the
//! node can still add. Vertices that fit under the gap to the incumbent
//! are never branched on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{words, WeightedGraph};
use crate::numerics::{Scalar, Sign, FLOAT_TOLERANCE};

#[derive(Clone, Debug)]
pub struct CliqueResult {
    pub value: Scalar,
    /// Vertex indices of a maximizing clique, ascending.
    pub witness: Vec<usize>,
    /// Zero-weight vertices removed before the search.
    pub pruned_zero: usize,
    /// True when the search stopped at the first clique above the threshold;
    /// `value` is then a lower bound on the optimum.
    pub early_stopped: bool,
}

trait Weight: Clone {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    /// `self > other`, beyond tolerance for floats.
    fn beats(&self, other: &Self) -> bool;
    /// Strictly `self < other`.
    fn below(&self, other: &Self) -> bool;
    fn positive(&self) -> bool;
}

impl Weight for u128 {
    fn zero() -> Self {
        0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self.saturating_sub(*other)
    }
    fn beats(&self, other: &Self) -> bool {
        self > other
    }
    fn below(&self, other: &Self) -> bool {
        self < other
    }
    fn positive(&self) -> bool {
        *self > 0
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn beats(&self, other: &Self) -> bool {
        *self > other + FLOAT_TOLERANCE * other.abs().max(1.0)
    }
    fn below(&self, other: &Self) -> bool {
        self < other
    }
    fn positive(&self) -> bool {
        *self > 0.0
    }
}

impl Weight for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn beats(&self, other: &Self) -> bool {
        (self - other).sign() == Sign::Positive
    }
    fn below(&self, other: &Self) -> bool {
        (other - self).sign() == Sign::Positive
    }
    fn positive(&self) -> bool {
        self.sign() == Sign::Positive
    }
}

struct Search<'a, W> {
    adj: Vec<Vec<u64>>,
    weights: &'a [W],
    best: W,
    best_set: Vec<usize>,
    current: Vec<usize>,
    threshold: Option<W>,
    stopped: bool,
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter().position(|w| *w != 0).map(|i| i * 64 + set[i].trailing_zeros() as usize)
}

impl<W: Weight> Search<'_, W> {
    fn expand(&mut self, cur: W, mut p: Vec<u64>) {
        if cur.beats(&self.best) {
            self.best = cur.clone();
            self.best_set = self.current.clone();
            if let Some(t) = &self.threshold {
                if self.best.beats(t) {
                    self.stopped = true;
                    return;
                }
            }
        }
        let target = self.best.minus(&cur);
        let branch = self.split_colouring(&p, &target);
        for &v in branch.iter().rev() {
            let next: Vec<u64> = p.iter().zip(&self.adj[v]).map(|(a, n)| a & n).collect();
            self.current.push(v);
            self.expand(cur.add(&self.weights[v]), next);
            self.current.pop();
            if self.stopped {
                return;
            }
            p[v / 64] &= !(1 << (v % 64));
        }
    }

    /// Covers `p` by weighted independent sets, splitting a vertex's weight
    /// over several sets when needed. Vertices whose weight fits under
    /// `target` are covered; the rest are returned for branching. Every
    /// clique heavier than `target` contains a returned vertex.
    fn split_colouring(&self, p: &[u64], target: &W) -> Vec<usize> {
        let words = p.len();
        let mut members: Vec<u64> = Vec::new();
        let mut levels: Vec<W> = Vec::new();
        let mut total = W::zero();
        let mut branch = Vec::new();
        let mut rest = p.to_vec();
        while let Some(v) = first_bit(&rest) {
            let (word, bit) = (v / 64, 1u64 << (v % 64));
            rest[word] &= !bit;
            let adj = &self.adj[v];
            let mut r = self.weights[v].clone();
            let mut i = 0;
            while i < levels.len() && r.positive() {
                let class = &members[i * words..(i + 1) * words];
                if class.iter().zip(adj).all(|(c, n)| c & n == 0) {
                    if r.below(&levels[i]) {
                        members.extend_from_within(i * words..(i + 1) * words);
                        levels.push(levels[i].minus(&r));
                        levels[i] = r;
                        r = W::zero();
                    } else {
                        r = r.minus(&levels[i]);
                    }
                    members[i * words + word] |= bit;
                }
                i += 1;
            }
            if r.positive() {
                let grown = total.add(&r);
                if grown.beats(target) {
                    branch.push(v);
                } else {
                    members.extend(std::iter::repeat_n(0, words));
                    members[levels.len() * words + word] |= bit;
                    levels.push(r);
                    total = grown;
                }
            }
        }
        branch
    }
}

fn run<W: Weight>(g: &WeightedGraph, keep: &[usize], weights: &[W], threshold: Option<W>) -> (Vec<usize>, bool) {
    let n = keep.len();
    let mut adj = vec![vec![0u64; words(n)]; n];
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(keep[i], keep[j]) {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut all = vec![0u64; words(n)];
    for i in 0..n {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut s =
        Search { adj, weights, best: W::zero(), best_set: Vec::new(), current: Vec::new(), threshold, stopped: false };
    s.expand(W::zero(), all);
    let mut witness: Vec<usize> = s.best_set.iter().map(|&i| keep[i]).collect();
    witness.sort_unstable();
    (witness, s.stopped)
}

/// Integer weights over a common denominator, if every weight is rational
/// and the sums fit in 128 bits.
fn integer_weights(ws: &[&Scalar]) -> Option<Vec<u128>> {
    let rats: Vec<_> = ws.iter().map(|w| w.as_rational()).collect::<Option<_>>()?;
    let den = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<u128> = rats.iter().map(|q| (q.numer() * (&den / q.denom())).to_u128()).collect::<Option<_>>()?;
    let total = scaled.iter().try_fold(0u128, |acc, w| acc.checked_add(*w))?;
    (total < u128::MAX / 2).then_some(scaled)
}

/// Exact maximum-weight clique. With `early_stop = Some(t)` the search
/// returns as soon as it holds a clique heavier than `t`.
pub fn max_weight_clique(g: &WeightedGraph, early_stop: Option<&Scalar>) -> CliqueResult {
    let mut keep: Vec<usize> = (0..g.len()).filter(|&v| g.weight(v).sign() == Sign::Positive).collect();
    let pruned_zero = g.len() - keep.len();
    keep.sort_by(|&a, &b| g.weight(a).partial_cmp(g.weight(b)).expect("total").then(a.cmp(&b)));
    let ws: Vec<&Scalar> = keep.iter().map(|&v| g.weight(v)).collect();

    let any_float = ws.iter().any(|w| matches!(w, Scalar::Float(_)));
    let (witness, early_stopped) = if any_float {
        let fw: Vec<f64> = ws.iter().map(|w| w.to_f64()).collect();
        run(g, &keep, &fw, early_stop.map(Scalar::to_f64))
    } else if let Some(iw) = integer_weights(&ws) {
        let threshold = early_stop.map(|t| {
            // compare against ⌊t·den⌋ so that "beats" means strictly above t
            let rats: Vec<_> = ws.iter().filter_map(|w| w.as_rational()).collect();
            let den = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let scaled = t.to_ball(64).map(|b| b.bounds().1).expect("exact threshold")
                * crate::numerics::Rational::from_integer(den);
            scaled.floor().to_integer().to_u128().unwrap_or(u128::MAX)
        });
        run(g, &keep, &iw, threshold)
    } else {
        let sw: Vec<Scalar> = ws.iter().map(|w| (*w).clone()).collect();
        run(g, &keep, &sw, early_stop.cloned())
    };
    let value = if witness.is_empty() { Scalar::zero() } else { g.clique_weight(&witness) };
    CliqueResult { value, witness, pruned_zero, early_stopped }
}

impl CliqueResult {
    pub fn exceeds_one(&self) -> bool {
        (&self.value - &Scalar::one()).sign() == Sign::Positive
    }
}
