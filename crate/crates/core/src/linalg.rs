//! Dense complex-matrix helpers used by the matrix layer.

use crate::error::{Error, Result};
use crate::CMatrix;
use num_complex::Complex64;

/// Relative hermiticity tolerance applied at validation boundaries.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Require a square matrix, returning its dimension.
pub fn require_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

/// `||X - X^dag||_F / max(1, ||X||_F)`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm() / frobenius(m).max(1.0)
}

/// Fail unless the matrix is Hermitian within [`HERMITICITY_TOL`].
pub fn require_hermitian(m: &CMatrix) -> Result<()> {
    require_square(m)?;
    let residual = hermiticity_residual(m);
    if residual > HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// `(X + X^dag)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|e| e * 0.5)
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending, with
/// eigenvector columns in matching order.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let mut values = Vec::with_capacity(n);
    let mut basis = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        values.push(se.eigenvalues[i]);
        basis.set_column(k, &se.eigenvectors.column(i));
    }
    (values, basis)
}

/// Apply a real function to a Hermitian matrix through its spectrum.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> Result<f64>) -> Result<CMatrix> {
    let (values, basis) = hermitian_eigen(m);
    let mapped: Result<Vec<f64>> = values.iter().map(|&x| f(x)).collect();
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        mapped?.into_iter().map(|x| Complex64::new(x, 0.0)),
    ));
    Ok(hermitize(&(&basis * d * basis.adjoint())))
}

/// `U^dag X U`.
pub fn conjugate_by(u: &CMatrix, x: &CMatrix) -> CMatrix {
    u.adjoint() * x * u
}

/// Identity of the given dimension.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}
