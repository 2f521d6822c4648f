//! Finite-dimensional quantum theory over `f64` complex matrices: density
//! matrices, POVMs, the Born rule, Naimark dilation, Lüders instruments,
//! and sequential discrimination of orthogonal projectors.
//!
//! All comparisons use `|lhs − rhs| ≤ TOLERANCE · max(1, scale)`.

mod linalg;

pub use linalg::{hermitian_sqrt, ket, projector_onto, CMatrix, CVector};

use num_complex::Complex64;

use crate::contextual::{ContextualError, Hypergraph, ProbabilityWeight};
use crate::nonlocal::{Behavior, NonlocalError};
use crate::numerics::{Certainty, Scalar};
use crate::verdict::Verdict;
use linalg::{approx_eq, eigen, is_hermitian, max_abs};

pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumError {
    #[error("expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix has eigenvalue {min_eigenvalue}, below zero")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trace is {0}, not 1")]
    Trace(f64),
    #[error("elements sum to the identity only up to {0}")]
    Normalization(f64),
    #[error("Born probability has imaginary part {0}")]
    NonReal(f64),
    #[error("Born probability {0} lies outside [0, 1]")]
    OutOfRange(f64),
    #[error("element {0} is not a projector")]
    NotProjector(usize),
    #[error("projectors {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("no operators given")]
    Empty,
    #[error("no state gives probability 1 to this effect")]
    NotNormalized,
    #[error("{0}")]
    Arity(String),
    #[error(transparent)]
    Behavior(#[from] NonlocalError),
    #[error(transparent)]
    Contextual(#[from] ContextualError),
}

fn check_square(m: &CMatrix) -> Result<usize, QuantumError> {
    if m.nrows() != m.ncols() {
        return Err(QuantumError::NotSquare);
    }
    Ok(m.nrows())
}

fn check_dim(expected: usize, m: &CMatrix) -> Result<(), QuantumError> {
    if m.nrows() != expected || m.ncols() != expected {
        return Err(QuantumError::Dimension { expected, found: m.nrows() });
    }
    Ok(())
}

/// Hermitian and positive semidefinite within tolerance.
fn check_positive(m: &CMatrix) -> Result<(), QuantumError> {
    check_square(m)?;
    if !is_hermitian(m) {
        return Err(QuantumError::NotHermitian);
    }
    let (values, _) = eigen(m);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -TOLERANCE * max_abs(m).max(1.0) {
        return Err(QuantumError::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self, QuantumError> {
        check_positive(&m)?;
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TOLERANCE || tr.im.abs() > TOLERANCE {
            return Err(QuantumError::Trace(tr.re));
        }
        Ok(DensityMatrix { m })
    }

    /// `|ψ⟩⟨ψ|` for the normalized `ψ`.
    pub fn pure(psi: &CVector) -> Result<Self, QuantumError> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(QuantumError::Trace(0.0));
        }
        let v = psi.unscale(norm);
        DensityMatrix::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix { m: CMatrix::identity(d, d).unscale(d as f64) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { m: self.m.kronecker(&other.m) }
    }

    /// `t·self + (1−t)·other`.
    pub fn mix(&self, other: &DensityMatrix, t: f64) -> Result<DensityMatrix, QuantumError> {
        check_dim(self.dim(), &other.m)?;
        DensityMatrix::new(self.m.scale(t) + other.m.scale(1.0 - t))
    }
}

#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let d = check_square(elements.first().ok_or(QuantumError::Empty)?)?;
        let mut total = CMatrix::zeros(d, d);
        for e in &elements {
            check_dim(d, e)?;
            check_positive(e)?;
            total += e;
        }
        let dev = max_abs(&(total - CMatrix::identity(d, d)));
        if dev > TOLERANCE {
            return Err(QuantumError::Normalization(dev));
        }
        Ok(Povm { elements })
    }

    /// Normalizes positive operators `A_y` to `S^{-1/2} A_y S^{-1/2}` with
    /// `S = Σ A_y`; `S` must be invertible.
    pub fn from_unnormalized(ops: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let d = check_square(ops.first().ok_or(QuantumError::Empty)?)?;
        let mut total = CMatrix::zeros(d, d);
        for a in &ops {
            check_dim(d, a)?;
            check_positive(a)?;
            total += a;
        }
        let (values, vectors) = eigen(&total);
        if values.iter().any(|v| *v <= TOLERANCE) {
            return Err(QuantumError::NotPositive {
                min_eigenvalue: values.iter().copied().fold(f64::INFINITY, f64::min),
            });
        }
        let inv = CMatrix::from_diagonal(&CVector::from_iterator(
            d,
            values.iter().map(|v| Complex64::new(1.0 / v.sqrt(), 0.0)),
        ));
        let s = &vectors * inv * vectors.adjoint();
        Povm::new(ops.iter().map(|a| &s * a * &s).collect())
    }

    /// Measurement in the standard basis.
    pub fn computational(d: usize) -> Povm {
        Povm { elements: (0..d).map(|i| projector_onto(&ket(d, i))).collect() }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn element(&self, y: usize) -> &CMatrix {
        &self.elements[y]
    }

    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>, QuantumError> {
        self.elements.iter().map(|p| born(p, rho)).collect()
    }
}

/// `Tr[Pρ]`, real within tolerance and clamped to `[0, 1]`.
pub fn born(p: &CMatrix, rho: &DensityMatrix) -> Result<f64, QuantumError> {
    check_dim(rho.dim(), p)?;
    let tr = (p * &rho.m).trace();
    let scale = max_abs(p).max(1.0);
    if tr.im.abs() > TOLERANCE * scale {
        return Err(QuantumError::NonReal(tr.im));
    }
    if tr.re < -TOLERANCE * scale || tr.re > 1.0 + TOLERANCE * scale {
        return Err(QuantumError::OutOfRange(tr.re));
    }
    Ok(tr.re.clamp(0.0, 1.0))
}

/// `p(y|x) = Tr[(⊗_i P^{(i,x_i)}_{y_i}) ρ]`, with `povms[i][x]` party `i`'s
/// measurement for input `x` and `ρ` ordered like the parties.
pub fn behavior_from_quantum(rho: &DensityMatrix, povms: &[Vec<Povm>]) -> Result<Behavior, QuantumError> {
    if povms.is_empty() || povms.iter().any(Vec::is_empty) {
        return Err(QuantumError::Arity("every party needs at least one input".into()));
    }
    let mut outputs = Vec::new();
    let mut total_dim = 1;
    for (party, ms) in povms.iter().enumerate() {
        let (d, n) = (ms[0].dim(), ms[0].len());
        if ms.iter().any(|m| m.dim() != d || m.len() != n) {
            return Err(QuantumError::Arity(format!("party {party}: inputs disagree on dimension or outcome count")));
        }
        outputs.push(n);
        total_dim *= d;
    }
    if rho.dim() != total_dim {
        return Err(QuantumError::Dimension { expected: total_dim, found: rho.dim() });
    }
    let inputs: Vec<usize> = povms.iter().map(Vec::len).collect();
    let mut err = None;
    let b = Behavior::from_fn(inputs, outputs, |x, y| {
        let mut op = povms[0][x[0]].elements[y[0]].clone();
        for i in 1..x.len() {
            op = op.kronecker(&povms[i][x[i]].elements[y[i]]);
        }
        match born(&op, rho) {
            Ok(p) => Scalar::float(p),
            Err(e) => {
                err = Some(e);
                Scalar::zero()
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(b?),
    }
}

/// `P² = P` within tolerance.
pub fn is_projector(p: &CMatrix) -> bool {
    p.is_square() && is_hermitian(p) && approx_eq(&(p * p), p)
}

/// Idempotent elements with pairwise vanishing products.
pub fn is_projective(m: &Povm) -> bool {
    m.elements.iter().all(is_projector)
        && (0..m.len()).all(|i| (i + 1..m.len()).all(|j| max_abs(&(&m.elements[i] * &m.elements[j])) <= TOLERANCE))
}

/// Unitary dilation of a POVM: `Tr[P_y ρ] = Tr[M_y (ρ ⊗ σ)]` with
/// `σ = |0⟩⟨0|` on an ancilla of dimension `n`.
#[derive(Clone, Debug)]
pub struct NaimarkDilation {
    pub dim: usize,
    pub ancilla_dim: usize,
    pub ancilla: CVector,
    pub unitary: CMatrix,
    pub projectors: Vec<CMatrix>,
}

impl NaimarkDilation {
    /// Outcome statistics of the projective measurement on `ρ ⊗ σ`.
    pub fn statistics(&self, rho: &DensityMatrix) -> Result<Vec<f64>, QuantumError> {
        check_dim(self.dim, &rho.m)?;
        let joint = DensityMatrix { m: rho.m.kronecker(&projector_onto(&self.ancilla)) };
        self.projectors.iter().map(|m| born(m, &joint)).collect()
    }

    pub fn measurement(&self) -> Povm {
        Povm { elements: self.projectors.clone() }
    }
}

/// Builds `V = Σ_y √P_y ⊗ |y⟩`, completes it to a unitary `U` with
/// `U(ψ ⊗ |0⟩) = Vψ`, and returns `M_y = U†(I ⊗ |y⟩⟨y|)U`.
pub fn naimark_dilate(m: &Povm) -> Result<NaimarkDilation, QuantumError> {
    let (d, n) = (m.dim(), m.len());
    let roots = m.elements.iter().map(hermitian_sqrt).collect::<Result<Vec<_>, _>>()?;
    let big = d * n;
    let mut v = CMatrix::zeros(big, d);
    for (y, r) in roots.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                v[(i * n + y, j)] = r[(i, j)];
            }
        }
    }
    let unitary = linalg::complete_isometry(&v, |j| j * n);
    let projectors = (0..n)
        .map(|y| {
            let mut flag = CMatrix::zeros(n, n);
            flag[(y, y)] = Complex64::new(1.0, 0.0);
            let lifted = CMatrix::identity(d, d).kronecker(&flag);
            unitary.adjoint() * lifted * &unitary
        })
        .collect();
    Ok(NaimarkDilation { dim: d, ancilla_dim: n, ancilla: ket(n, 0), unitary, projectors })
}

/// Quantum instrument given by Kraus operators per outcome.
#[derive(Clone, Debug)]
pub struct Instrument {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<CMatrix>>,
}

impl Instrument {
    pub fn new(kraus: Vec<Vec<CMatrix>>) -> Result<Self, QuantumError> {
        let first = kraus.iter().flatten().next().ok_or(QuantumError::Empty)?;
        let (dim_out, dim_in) = first.shape();
        if kraus.iter().flatten().any(|k| k.shape() != (dim_out, dim_in)) {
            return Err(QuantumError::Arity("Kraus operators differ in shape".into()));
        }
        let inst = Instrument { dim_in, dim_out, kraus };
        let (values, _) = eigen(&inst.total_effect());
        if let Some(top) = values.iter().copied().reduce(f64::max) {
            if top > 1.0 + TOLERANCE {
                return Err(QuantumError::Normalization(top - 1.0));
            }
        }
        Ok(inst)
    }

    /// `Σ_k K†K` for outcome `y`.
    pub fn effect(&self, y: usize) -> CMatrix {
        self.kraus[y].iter().fold(CMatrix::zeros(self.dim_in, self.dim_in), |acc, k| acc + k.adjoint() * k)
    }

    fn total_effect(&self) -> CMatrix {
        (0..self.kraus.len()).fold(CMatrix::zeros(self.dim_in, self.dim_in), |acc, y| acc + self.effect(y))
    }

    pub fn is_trace_preserving(&self) -> bool {
        approx_eq(&self.total_effect(), &CMatrix::identity(self.dim_in, self.dim_in))
    }

    /// Probability of `y` and the normalized post-measurement state, if
    /// the probability is nonzero.
    pub fn apply(&self, y: usize, rho: &DensityMatrix) -> Result<(f64, Option<DensityMatrix>), QuantumError> {
        check_dim(self.dim_in, &rho.m)?;
        let out = self.kraus[y]
            .iter()
            .fold(CMatrix::zeros(self.dim_out, self.dim_out), |acc, k| acc + k * &rho.m * k.adjoint());
        let p = out.trace().re;
        if p <= TOLERANCE {
            return Ok((p.max(0.0), None));
        }
        Ok((p, Some(DensityMatrix { m: out.unscale(p) })))
    }
}

/// Two-outcome Lüders test: outcome 0 applies `P`, outcome 1 applies `I − P`.
pub fn luders_binary_test(p: &CMatrix) -> Result<Instrument, QuantumError> {
    check_square(p)?;
    if !is_projector(p) {
        return Err(QuantumError::NotProjector(0));
    }
    let d = p.nrows();
    Instrument::new(vec![vec![p.clone()], vec![CMatrix::identity(d, d) - p]])
}

/// Runs the Lüders tests for `P_1, P_2, …` one after the other and stops at
/// the first positive answer. Outcome `m` has Kraus operator
/// `P_m (I − P_{m−1}) ⋯ (I − P_1)`; a final outcome collects the case where
/// every test failed.
pub fn sequential_discriminator(projectors: &[CMatrix]) -> Result<Povm, QuantumError> {
    let d = check_square(projectors.first().ok_or(QuantumError::Empty)?)?;
    for (i, p) in projectors.iter().enumerate() {
        check_dim(d, p)?;
        if !is_projector(p) {
            return Err(QuantumError::NotProjector(i));
        }
        for (j, q) in projectors.iter().enumerate().skip(i + 1) {
            if max_abs(&(p * q)) > TOLERANCE {
                return Err(QuantumError::NotOrthogonal(i, j));
            }
        }
    }
    let tests = projectors.iter().map(luders_binary_test).collect::<Result<Vec<_>, _>>()?;
    let mut miss = CMatrix::identity(d, d);
    let mut elements = Vec::with_capacity(projectors.len() + 1);
    for t in &tests {
        let hit = &t.kraus[0][0] * &miss;
        elements.push(hit.adjoint() * &hit);
        miss = &t.kraus[1][0] * miss;
    }
    elements.push(miss.adjoint() * &miss);
    Povm::new(elements)
}

/// Probability weight `w(y) = Tr[P_y ρ]` from one projector per answer;
/// every hyperedge must be a projective measurement.
pub fn pq_weight(
    h: &Hypergraph,
    assignment: &[CMatrix],
    rho: &DensityMatrix,
) -> Result<ProbabilityWeight, QuantumError> {
    if assignment.len() != h.len() {
        return Err(QuantumError::Arity(format!("{} projectors for {} answers", assignment.len(), h.len())));
    }
    for (i, p) in assignment.iter().enumerate() {
        check_dim(rho.dim(), p)?;
        if !is_projector(p) {
            return Err(QuantumError::NotProjector(i));
        }
    }
    for edge in h.edges() {
        let m = Povm::new(edge.iter().map(|&v| assignment[v].clone()).collect())?;
        if !is_projective(&m) {
            let (a, b) = edge
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| edge[i + 1..].iter().map(move |&b| (a, b)))
                .find(|&(a, b)| max_abs(&(&assignment[a] * &assignment[b])) > TOLERANCE)
                .unwrap_or((edge[0], edge[0]));
            return Err(QuantumError::NotOrthogonal(a, b));
        }
    }
    let w = assignment.iter().map(|p| born(p, rho).map(Scalar::float)).collect::<Result<Vec<_>, _>>()?;
    Ok(ProbabilityWeight::new(h.clone(), w)?)
}

fn float_verdict<W>(holds: bool, witness: W) -> Verdict<W> {
    Verdict::new(holds, witness, Certainty::CertifiedWithinPrecision)
}

/// Quantum effects `0 ≤ E ≤ I`.
pub fn is_effect(e: &CMatrix) -> bool {
    check_positive(e).is_ok() && check_positive(&(CMatrix::identity(e.nrows(), e.nrows()) - e)).is_ok()
}

/// Pure quantum effects are the multiples of rank-one projectors.
pub fn is_pure_effect(e: &CMatrix) -> Result<Verdict<usize>, QuantumError> {
    check_positive(e)?;
    let (values, _) = eigen(e);
    let scale = max_abs(e).max(1.0);
    let rank = values.iter().filter(|v| **v > TOLERANCE * scale).count();
    Ok(float_verdict(rank <= 1, rank))
}

/// Extremal points of the effect interval `[0, I]` are the projectors.
pub fn is_extremal_effect(e: &CMatrix) -> Result<Verdict<()>, QuantumError> {
    check_positive(e)?;
    Ok(float_verdict(is_projector(e), ()))
}

/// Pairwise test `I − E − F ≥ 0`; the witness names the first failing pair.
pub fn mutually_exclusive(effects: &[CMatrix]) -> Result<Verdict<Option<(usize, usize)>>, QuantumError> {
    let d = check_square(effects.first().ok_or(QuantumError::Empty)?)?;
    for e in effects {
        check_dim(d, e)?;
        check_positive(e)?;
    }
    for i in 0..effects.len() {
        for j in i + 1..effects.len() {
            let rest = CMatrix::identity(d, d) - &effects[i] - &effects[j];
            if check_positive(&rest).is_err() {
                return Ok(float_verdict(false, Some((i, j))));
            }
        }
    }
    Ok(float_verdict(true, None))
}

/// `E` identifies a pure state when its eigenvalue-1 eigenspace is one
/// dimensional; the witness is that state.
pub fn identifies_pure_state(e: &CMatrix) -> Result<Verdict<Option<DensityMatrix>>, QuantumError> {
    check_positive(e)?;
    let (values, vectors) = eigen(e);
    let top: Vec<usize> = (0..values.len()).filter(|&i| (values[i] - 1.0).abs() <= TOLERANCE).collect();
    if top.is_empty() {
        return Err(QuantumError::NotNormalized);
    }
    if top.len() > 1 {
        return Ok(float_verdict(false, None));
    }
    let psi = vectors.column(top[0]).into_owned();
    Ok(float_verdict(true, Some(DensityMatrix::pure(&psi)?)))
}
