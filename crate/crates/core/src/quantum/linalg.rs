use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{QuantumError, TOLERANCE};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Standard basis vector `|i⟩` in dimension `d`.
pub fn ket(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
pub fn projector_onto(psi: &CVector) -> CMatrix {
    let n2 = psi.norm_squared();
    (psi * psi.adjoint()).unscale(n2)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn approx_eq(a: &CMatrix, b: &CMatrix) -> bool {
    a.shape() == b.shape() && max_abs(&(a - b)) <= TOLERANCE * max_abs(a).max(max_abs(b)).max(1.0)
}

pub(crate) fn is_hermitian(m: &CMatrix) -> bool {
    m.is_square() && approx_eq(m, &m.adjoint())
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `m`.
pub(crate) fn eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).unscale(2.0);
    let e = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(&order.iter().map(|&i| e.eigenvectors.column(i)).collect::<Vec<_>>());
    (values, vectors)
}

/// Square root of a positive semidefinite matrix; eigenvalues down to
/// `−TOLERANCE` are clamped to zero.
pub fn hermitian_sqrt(m: &CMatrix) -> Result<CMatrix, QuantumError> {
    let (values, vectors) = eigen(m);
    let scale = max_abs(m).max(1.0);
    let roots = values
        .iter()
        .map(|&v| {
            if v < -TOLERANCE * scale {
                Err(QuantumError::NotPositive { min_eigenvalue: v })
            } else {
                Ok(Complex64::new(v.max(0.0).sqrt(), 0.0))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(&vectors * CMatrix::from_diagonal(&CVector::from_vec(roots)) * vectors.adjoint())
}

/// Unitary whose column `place(j)` is column `j` of the isometry `v`; the
/// remaining columns extend them to an orthonormal basis by Gram–Schmidt
/// over the standard basis, orthogonalizing twice.
pub(crate) fn complete_isometry(v: &CMatrix, place: impl Fn(usize) -> usize) -> CMatrix {
    let n = v.nrows();
    let basis: Vec<CVector> = (0..v.ncols()).map(|j| v.column(j).into_owned()).collect();
    let mut slots: Vec<Option<usize>> = vec![None; n];
    for j in 0..v.ncols() {
        slots[place(j)] = Some(j);
    }
    let mut extra = Vec::new();
    for k in 0..n {
        if basis.len() + extra.len() == n {
            break;
        }
        let mut w = ket(n, k);
        for _ in 0..2 {
            for b in basis.iter().chain(&extra) {
                let c = b.dotc(&w);
                w -= b * c;
            }
        }
        let norm = w.norm();
        if norm > 1e-6 {
            extra.push(w.unscale(norm));
        }
    }
    let mut u = CMatrix::zeros(n, n);
    let mut fill = extra.drain(..);
    for (col, slot) in slots.iter().enumerate() {
        let c = match slot {
            Some(j) => basis[*j].clone(),
            None => fill.next().expect("enough completing vectors"),
        };
        u.set_column(col, &c);
    }
    u
}
