//! Oracles and generators shared by the integration tests. Every oracle here
//! is written from scratch and shares no code with the library.

#![allow(dead_code)]

use gptlab::gpt::{Effect, GptSystem, Measurement};
use gptlab::nonlocal::Behavior;
use gptlab::numerics::{LinearProgram, LpResult, Rational, Relation, Scalar, Sign};
use gptlab::quantum::{CMatrix, CVector, DensityMatrix, Povm};
use gptlab::zoo::{classical_system, polygon_system, square_bit};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

// ---------------------------------------------------------------------------
// Linear programs: vertex enumeration

/// `maximize c·x` over `x ≥ 0` with integer rows `a·x (≤|≥|=) b`.
#[derive(Clone, Debug)]
pub struct SmallLp {
    pub n: usize,
    pub rows: Vec<(Vec<i64>, Relation, i64)>,
    pub c: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOracle {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

type Q = num_rational::Ratio<i128>;

/// Solves the square system `A x = b` by fraction-free Gauss–Jordan
/// elimination: returns numerators and the common denominator `det`, or
/// `None` when `A` is singular.
fn solve_square(a: &[Vec<i64>], b: &[i64]) -> Option<(Vec<i128>, i128)> {
    let n = a.len();
    let mut m: Vec<Vec<i128>> =
        a.iter().zip(b).map(|(row, &r)| row.iter().chain([&r]).map(|&v| v as i128).collect()).collect();
    let mut prev = 1i128;
    for k in 0..n {
        let p = (k..n).find(|&i| m[i][k] != 0)?;
        m.swap(k, p);
        for i in 0..n {
            if i == k {
                continue;
            }
            for j in 0..=n {
                if j != k {
                    m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
                }
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    let x = (0..n).map(|i| m[i][n]).collect();
    Some(if prev < 0 { ((0..n).map(|i| -m[i][n]).collect(), -prev) } else { (x, prev) })
}

/// Indices of a maximal linearly independent subset of `rows`.
fn independent_rows(rows: &[&Vec<i64>], n: usize) -> Vec<usize> {
    let mut basis: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut keep = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v: Vec<Q> = row.iter().map(|&x| Q::from_integer(x as i128)).collect();
        for (b, &p) in basis.iter().zip(&pivots) {
            let f = v[p];
            if f != Q::from_integer(0) {
                for j in 0..n {
                    v[j] -= b[j] * f;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| *x != Q::from_integer(0)) {
            let s = v[p];
            for x in &mut v {
                *x /= s;
            }
            basis.push(v);
            pivots.push(p);
            keep.push(i);
        }
    }
    keep
}

fn combinations(pool: usize, size: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, pool: usize, size: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if chosen.len() == size {
            visit(chosen);
            return;
        }
        for i in start..pool {
            if pool - i < size - chosen.len() {
                break;
            }
            chosen.push(i);
            rec(i + 1, pool, size, chosen, visit);
            chosen.pop();
        }
    }
    rec(0, pool, size, &mut Vec::with_capacity(size), visit);
}

/// Maximizes `c·x` over the vertices of `{x ≥ 0, rows}`; `None` when there
/// are no vertices, i.e. the set is empty.
fn best_vertex(n: usize, rows: &[(Vec<i64>, Relation, i64)], c: &[i64]) -> Option<Q> {
    let eq: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| r.1 == Relation::Eq).map(|(i, _)| i).collect();
    let eq_rows: Vec<&Vec<i64>> = eq.iter().map(|&i| &rows[i].0).collect();
    let forced: Vec<usize> = independent_rows(&eq_rows, n).into_iter().map(|i| eq[i]).collect();
    let mut planes: Vec<(Vec<i64>, i64)> = Vec::new();
    for (a, rel, b) in rows {
        if *rel != Relation::Eq {
            planes.push((a.clone(), *b));
        }
    }
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        planes.push((e, 0));
    }
    if forced.len() > n {
        return None;
    }
    let mut best: Option<Q> = None;
    combinations(planes.len(), n - forced.len(), &mut |set| {
        let chosen: Vec<(&Vec<i64>, i64)> = forced
            .iter()
            .map(|&i| (&rows[i].0, rows[i].2))
            .chain(set.iter().map(|&i| (&planes[i].0, planes[i].1)))
            .collect();
        let a: Vec<Vec<i64>> = chosen.iter().map(|(r, _)| (*r).clone()).collect();
        let b: Vec<i64> = chosen.iter().map(|(_, v)| *v).collect();
        let Some((x, det)) = solve_square(&a, &b) else { return };
        if x.iter().any(|v| *v < 0) {
            return;
        }
        let feasible = rows.iter().all(|(a, rel, b)| {
            let lhs: i128 = a.iter().zip(&x).map(|(&ai, xi)| xi * ai as i128).sum();
            let rhs = *b as i128 * det;
            match rel {
                Relation::Le => lhs <= rhs,
                Relation::Ge => lhs >= rhs,
                Relation::Eq => lhs == rhs,
            }
        });
        if !feasible {
            return;
        }
        let value = Q::new(c.iter().zip(&x).map(|(&ci, xi)| xi * ci as i128).sum(), det);
        if best.is_none_or(|b| value > b) {
            best = Some(value);
        }
    });
    best
}

/// Reference answer for a small LP by enumerating basic solutions.
/// Unboundedness is read off the recession cone truncated by `Σd ≤ 1`.
pub fn lp_oracle(lp: &SmallLp) -> LpOracle {
    let Some(best) = best_vertex(lp.n, &lp.rows, &lp.c) else {
        return LpOracle::Infeasible;
    };
    let mut cone: Vec<(Vec<i64>, Relation, i64)> = lp.rows.iter().map(|(a, r, _)| (a.clone(), *r, 0)).collect();
    cone.push((vec![1; lp.n], Relation::Le, 1));
    match best_vertex(lp.n, &cone, &lp.c) {
        Some(v) if v > Q::from_integer(0) => LpOracle::Unbounded,
        _ => LpOracle::Optimal(Rational::new((*best.numer()).into(), (*best.denom()).into())),
    }
}

pub fn random_lp(rng: &mut StdRng, max_vars: usize, max_rows: usize) -> SmallLp {
    let n = rng.random_range(1..=max_vars);
    let m = rng.random_range(1..=max_rows);
    let rows = (0..m)
        .map(|_| {
            let a: Vec<i64> = (0..n).map(|_| if rng.random_bool(0.3) { 0 } else { rng.random_range(-5..=5) }).collect();
            let rel = match rng.random_range(0..20) {
                0..=11 => Relation::Le,
                12..=16 => Relation::Ge,
                _ => Relation::Eq,
            };
            (a, rel, rng.random_range(-4..=10))
        })
        .collect();
    let c = (0..n).map(|_| rng.random_range(-5..=5)).collect();
    SmallLp { n, rows, c }
}

// ---------------------------------------------------------------------------
// Cliques

/// Maximum clique weight by dynamic programming over all vertex subsets.
/// `adj[v]` is the neighbourhood bitmask of `v`.
pub fn clique_by_subsets(adj: &[u32], w: &[u64]) -> u64 {
    let n = adj.len();
    assert!(n <= 20);
    let size = 1usize << n;
    let mut weight = vec![0u64; size];
    let mut clique = vec![false; size];
    clique[0] = true;
    let mut best = 0;
    for mask in 1..size {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if clique[rest] && (rest as u32) & !adj[v] == 0 {
            clique[mask] = true;
            weight[mask] = weight[rest] + w[v];
            best = best.max(weight[mask]);
        }
    }
    best
}

/// Maximum clique weight by enumerating maximal cliques (Bron–Kerbosch
/// with pivoting). Weights are non-negative rationals; `n ≤ 128`.
pub fn clique_by_maximal_cliques(adj: &[u128], w: &[Rational]) -> (Rational, Vec<usize>) {
    fn bits(mut s: u128) -> impl Iterator<Item = usize> {
        std::iter::from_fn(move || {
            (s != 0).then(|| {
                let v = s.trailing_zeros() as usize;
                s &= s - 1;
                v
            })
        })
    }
    fn go(r: u128, mut p: u128, mut x: u128, adj: &[u128], w: &[Rational], best: &mut (Rational, u128)) {
        if p == 0 && x == 0 {
            let total: Rational = bits(r).map(|v| w[v].clone()).sum();
            if total > best.0 {
                *best = (total, r);
            }
            return;
        }
        let pivot = bits(p | x).max_by_key(|&u| (p & adj[u]).count_ones()).expect("nonempty");
        for v in bits(p & !adj[pivot]) {
            go(r | 1 << v, p & adj[v], x & adj[v], adj, w, best);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let n = adj.len();
    assert!(n <= 128);
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut best = (Rational::from_integer(0.into()), 0u128);
    go(0, all, 0, adj, w, &mut best);
    (best.0, bits(best.1).collect())
}

/// Two events `(x, y)` clash when some party has the same input and a
/// different output.
pub fn events_clash(x1: &[usize], y1: &[usize], x2: &[usize], y2: &[usize]) -> bool {
    (0..x1.len()).any(|i| x1[i] == x2[i] && y1[i] != y2[i])
}

/// Positive-probability events of `b` with their probabilities as exact
/// rationals.
pub fn positive_events(b: &Behavior) -> Vec<(Vec<usize>, Vec<usize>, Rational)> {
    let mut out = Vec::new();
    for x in b.input_strings() {
        for y in b.output_strings() {
            let p = b.prob(&x, &y).as_rational().expect("rational behavior").clone();
            if p > Rational::from_integer(0.into()) {
                out.push((x.clone(), y, p));
            }
        }
    }
    out
}

/// Maximum over cliques of the `k`-copy orthogonality graph of `b`, built
/// here from the definition and searched with [`clique_by_maximal_cliques`].
pub fn lo_value_oracle(b: &Behavior, k: usize) -> Rational {
    let events = positive_events(b);
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        tuples = tuples.iter().flat_map(|t| (0..events.len()).map(move |e| [t.clone(), vec![e]].concat())).collect();
    }
    let adj: Vec<u128> = tuples
        .iter()
        .map(|s| {
            tuples.iter().enumerate().fold(0u128, |acc, (j, t)| {
                let hit = s != t
                    && s.iter()
                        .zip(t)
                        .any(|(&a, &c)| events_clash(&events[a].0, &events[a].1, &events[c].0, &events[c].1));
                if hit {
                    acc | 1 << j
                } else {
                    acc
                }
            })
        })
        .collect();
    let w: Vec<Rational> = tuples.iter().map(|t| t.iter().map(|&e| events[e].2.clone()).product()).collect();
    clique_by_maximal_cliques(&adj, &w).0
}

/// Maximum over cliques of the `k`-copy exclusivity graph of the cycle
/// `C_n` with constant weight `w`.
pub fn cycle_value_oracle(n: usize, w: &Rational, k: usize) -> Rational {
    let adjacent = |a: usize, b: usize| (a + 1) % n == b || (b + 1) % n == a;
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        tuples = tuples.iter().flat_map(|t| (0..n).map(move |v| [t.clone(), vec![v]].concat())).collect();
    }
    let adj: Vec<u128> = tuples
        .iter()
        .map(|s| {
            tuples.iter().enumerate().fold(0u128, |acc, (j, t)| {
                if s != t && s.iter().zip(t).any(|(&a, &c)| adjacent(a, c)) {
                    acc | 1 << j
                } else {
                    acc
                }
            })
        })
        .collect();
    let weight: Rational = (0..k).map(|_| w.clone()).product();
    clique_by_maximal_cliques(&adj, &vec![weight; tuples.len()]).0
}

// ---------------------------------------------------------------------------
// Behaviors

/// A deterministic strategy with uniformly random responses.
pub fn random_deterministic(rng: &mut StdRng, inputs: &[usize], outputs: &[usize]) -> Behavior {
    let responses: Vec<Vec<usize>> =
        inputs.iter().zip(outputs).map(|(&nx, &ny)| (0..nx).map(|_| rng.random_range(0..ny)).collect()).collect();
    Behavior::deterministic(inputs.to_vec(), outputs.to_vec(), &responses).unwrap()
}

/// Random rational convex weights with `parts` entries.
pub fn random_convex(rng: &mut StdRng, parts: usize) -> Vec<Scalar> {
    let raw: Vec<i64> = (0..parts).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    raw.iter().map(|&r| Scalar::ratio(r, total)).collect()
}

pub fn mixture(parts: &[Behavior], weights: &[Scalar]) -> Behavior {
    let len = parts[0].table().len();
    let table = (0..len)
        .map(|i| parts.iter().zip(weights).fold(Scalar::zero(), |acc, (b, t)| &acc + &(t * &b.table()[i])))
        .collect();
    Behavior::new(parts[0].inputs().to_vec(), parts[0].outputs().to_vec(), table).unwrap()
}

/// A convex mixture of a few deterministic strategies.
pub fn random_local(rng: &mut StdRng, inputs: &[usize], outputs: &[usize]) -> Behavior {
    let k = rng.random_range(1..=4);
    let parts: Vec<Behavior> = (0..k).map(|_| random_deterministic(rng, inputs, outputs)).collect();
    mixture(&parts, &random_convex(rng, k))
}

/// Independent random rational distributions for every input string;
/// signalling for almost every draw.
pub fn random_table(rng: &mut StdRng, inputs: &[usize], outputs: &[usize]) -> Behavior {
    let nx: usize = inputs.iter().product();
    let ny: usize = outputs.iter().product();
    let mut table = Vec::with_capacity(nx * ny);
    for _ in 0..nx {
        let raw: Vec<i64> = (0..ny).map(|_| if rng.random_bool(0.3) { 0 } else { rng.random_range(1..=6) }).collect();
        let raw = if raw.iter().all(|&r| r == 0) { vec![1; ny] } else { raw };
        let total: i64 = raw.iter().sum();
        table.extend(raw.iter().map(|&r| Scalar::ratio(r, total)));
    }
    Behavior::new(inputs.to_vec(), outputs.to_vec(), table).unwrap()
}

/// The PR box relabelled by random local bit flips.
pub fn relabelled_pr_box(rng: &mut StdRng) -> Behavior {
    let (a, b, c) = (rng.random_range(0..2), rng.random_range(0..2), rng.random_range(0..2));
    Behavior::from_fn(vec![2, 2], vec![2, 2], |x, y| {
        if (y[0] ^ y[1]) == ((x[0] & x[1]) ^ (a & x[0]) ^ (b & x[1]) ^ c) {
            Scalar::ratio(1, 2)
        } else {
            Scalar::zero()
        }
    })
    .unwrap()
}

/// A random partition of `0..n` into consecutive-free blocks.
pub fn random_partition(rng: &mut StdRng, n: usize) -> Vec<Vec<usize>> {
    let blocks = rng.random_range(1..=n);
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    for (k, v) in order.into_iter().enumerate() {
        let b = if k < blocks { k } else { rng.random_range(0..blocks) };
        parts[b].push(v);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    parts
}

// ---------------------------------------------------------------------------
// Systems

/// Zoo systems with exact coordinates.
pub fn exact_zoo_systems() -> Vec<GptSystem> {
    let mut out: Vec<GptSystem> = (2..=4).map(|n| classical_system(n).unwrap()).collect();
    out.push(square_bit());
    out.extend((3..=6).map(|n| polygon_system(n).unwrap()));
    out
}

/// A measurement built from one pure effect `a`: `{t·a, (1 − t)·a, u − a}`.
pub fn split_measurement(rng: &mut StdRng, sys: &GptSystem) -> Measurement {
    let pure = sys.effect_generators().len() - 1;
    let a = sys.effect(rng.random_range(0..pure));
    let t = Scalar::ratio(rng.random_range(1..=7), 8);
    let effects = vec![a.scaled(&t), a.scaled(&(Scalar::one() - &t)), sys.unit().minus(a)];
    sys.measurement(effects).expect("pure effect splits the unit")
}

/// Strictly positive `λ` with `Σ λ_i e_i = u`, if any.
pub fn positive_decomposition(sys: &GptSystem, effects: &[Effect]) -> Option<Vec<Scalar>> {
    let m = effects.len();
    let mut objective = vec![Scalar::zero(); m + 1];
    objective[m] = Scalar::one();
    let mut lp = LinearProgram::new(m + 1).maximize(objective);
    for k in 0..sys.dim() {
        let mut row: Vec<Scalar> = effects.iter().map(|e| e.coords()[k].clone()).collect();
        row.push(Scalar::zero());
        lp = lp.with_constraint(row, Relation::Eq, sys.unit().coords()[k].clone());
    }
    for i in 0..m {
        let mut row = vec![Scalar::zero(); m + 1];
        row[i] = Scalar::one();
        row[m] = Scalar::from_int(-1);
        lp = lp.with_constraint(row, Relation::Ge, Scalar::zero());
    }
    let mut cap = vec![Scalar::zero(); m + 1];
    cap[m] = Scalar::one();
    lp = lp.with_constraint(cap, Relation::Le, Scalar::one());
    match lp.solve().expect("well-formed program") {
        LpResult::Optimal { value, point } if value.sign() == Sign::Positive => Some(point[..m].to_vec()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Quantum

pub fn random_complex(rng: &mut StdRng, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-like unitary from the QR decomposition of a Gaussian matrix.
pub fn random_unitary(rng: &mut StdRng, d: usize) -> CMatrix {
    random_complex(rng, d, d).qr().q()
}

pub fn random_density(rng: &mut StdRng, d: usize) -> DensityMatrix {
    let g = random_complex(rng, d, d);
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m.unscale(tr.re)).unwrap()
}

pub fn random_pure_in(rng: &mut StdRng, basis: &[CVector]) -> DensityMatrix {
    let mut v = basis[0].clone() * Complex64::new(0.0, 0.0);
    for b in basis {
        v += b * Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    DensityMatrix::pure(&v.unscale(v.norm())).unwrap()
}

/// `S^{-1/2}`-normalized Gaussian positive operators of random rank; draws
/// whose sum is singular are discarded.
pub fn random_povm(rng: &mut StdRng, d: usize, outcomes: usize) -> Povm {
    loop {
        let ops = (0..outcomes)
            .map(|_| {
                let rank = rng.random_range(1..=d);
                let g = random_complex(rng, d, rank);
                &g * g.adjoint()
            })
            .collect();
        if let Ok(p) = Povm::from_unnormalized(ops) {
            return p;
        }
    }
}

/// Random projective measurement: the columns of a random unitary, grouped.
pub fn random_projective(rng: &mut StdRng, d: usize) -> (Vec<CMatrix>, Vec<Vec<CVector>>) {
    let u = random_unitary(rng, d);
    let groups = random_partition(rng, d);
    let vectors: Vec<Vec<CVector>> =
        groups.iter().map(|g| g.iter().map(|&i| u.column(i).into_owned()).collect()).collect();
    let projectors =
        vectors.iter().map(|vs| vs.iter().map(|v| v * v.adjoint()).fold(CMatrix::zeros(d, d), |a, b| a + b)).collect();
    (projectors, vectors)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
