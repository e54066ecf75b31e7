//! Kubo-Ando means of positive operators and functions of the left/right
//! multiplication operators of a state.
//!
//! A catalog entry f induces the scalar mean m_f(x, y) = y f(x/y), extended
//! to the boundary by m_f(x, 0) = x f(0), m_f(0, y) = y f(0), m_f(0, 0) = 0,
//! and the matrix mean A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}.
//!
//! For a state rho with spectral decomposition (lambda, U), a two-variable
//! function s of the left and right multiplication operators acts as
//!
//! s(L, R)(X) = U (S . (U^dag X U)) U^dag,   S_ij = s(lambda_i, lambda_j),
//!
//! where `.` is the entrywise product. Eigenvalues at or below the
//! faithfulness threshold are treated as exact zeros; in mean mode their
//! rows and columns of S vanish, so on a rank-one state the mean
//! superoperator sends X to rho X rho.

use crate::error::{Error, Result};
use crate::fop::MonotoneFunction;
use crate::linalg;
use crate::CMatrix;
use num_complex::Complex64;

/// An eigenvalue is an exact zero when it does not exceed
/// `FAITHFULNESS_FACTOR * lambda_max`.
pub const FAITHFULNESS_FACTOR: f64 = 1e-12;

/// Cached eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    basis: CMatrix,
}

impl SpectralDecomposition {
    /// Decompose a Hermitian matrix; eigenvalues come out ascending.
    pub fn from_hermitian(m: &CMatrix) -> Result<Self> {
        linalg::require_hermitian(m)?;
        let (eigenvalues, basis) = linalg::hermitian_eigen(m);
        Ok(SpectralDecomposition { eigenvalues, basis })
    }

    /// Assemble from an explicit orthonormal basis and eigenvalues.
    /// Intended for tests that need control over degenerate subspaces.
    pub fn from_parts(basis: CMatrix, eigenvalues: Vec<f64>) -> Result<Self> {
        let n = linalg::require_square(&basis)?;
        if eigenvalues.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvalues for a {n}x{n} basis",
                eigenvalues.len()
            )));
        }
        let gram = basis.adjoint() * &basis;
        let defect = (gram - linalg::identity(n)).norm();
        if defect > 1e-9 {
            return Err(Error::Parameter(format!(
                "basis is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(SpectralDecomposition { basis, eigenvalues })
    }

    /// Hilbert space dimension.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in the stored order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary whose columns are the eigenvectors.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every eigenvalue clears the faithfulness threshold.
    pub fn is_faithful(&self) -> bool {
        self.min_eigenvalue() > self.zero_threshold()
    }

    /// Cutoff below which an eigenvalue counts as zero.
    pub fn zero_threshold(&self) -> f64 {
        FAITHFULNESS_FACTOR * self.max_eigenvalue().abs()
    }

    /// `U diag(lambda) U^dag`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        &self.basis * d * self.basis.adjoint()
    }
}

/// Two positive definite Hermitian matrices of equal dimension.
#[derive(Debug, Clone)]
pub struct PositiveMatrixPair {
    a: CMatrix,
    b: CMatrix,
}

impl PositiveMatrixPair {
    /// Validate hermiticity, equal dimensions, and strict positivity.
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        linalg::require_hermitian(&a)?;
        linalg::require_hermitian(&b)?;
        if a.nrows() != b.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols()
            )));
        }
        for m in [&a, &b] {
            let spec = SpectralDecomposition::from_hermitian(m)?;
            if !(spec.min_eigenvalue() > FAITHFULNESS_FACTOR * spec.max_eigenvalue().abs().max(1.0))
            {
                return Err(Error::NotPositive {
                    min_eigenvalue: spec.min_eigenvalue(),
                });
            }
        }
        Ok(PositiveMatrixPair { a, b })
    }

    /// First operand.
    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    /// Second operand.
    pub fn b(&self) -> &CMatrix {
        &self.b
    }
}

/// Scalar mean m_f(x, y) = y f(x/y) with its boundary extension.
pub fn scalar_mean(f: &MonotoneFunction<f64>, x: f64, y: f64) -> Result<f64> {
    if !(x >= 0.0 && y >= 0.0) {
        return Err(Error::Domain(format!(
            "mean arguments must be nonnegative, got ({x}, {y})"
        )));
    }
    let f0 = f.f_zero();
    Ok(if x == 0.0 && y == 0.0 {
        0.0
    } else if y == 0.0 {
        x * f0
    } else if x == 0.0 {
        y * f0
    } else {
        y * f.eval(x / y)?
    })
}

/// Matrix mean `A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn matrix_mean(f: &MonotoneFunction<f64>, pair: &PositiveMatrixPair) -> Result<CMatrix> {
    let root = linalg::hermitian_function(pair.a(), |x| Ok(x.max(0.0).sqrt()))?;
    let inv_root = linalg::hermitian_function(pair.a(), |x| {
        if x <= 0.0 {
            Err(Error::NotPositive { min_eigenvalue: x })
        } else {
            Ok(1.0 / x.sqrt())
        }
    })?;
    let middle = linalg::hermitize(&(&inv_root * pair.b() * &inv_root));
    let f_middle = linalg::hermitian_function(&middle, |x| {
        if x < -1e-10 {
            return Err(Error::NotPositive { min_eigenvalue: x });
        }
        f.eval(x.max(0.0))
    })?;
    Ok(linalg::hermitize(&(&root * f_middle * &root)))
}

/// Which two-variable function of (L, R) to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperopMode {
    /// The mean m_f(x, y).
    Mean,
    /// Its reciprocal 1/m_f(x, y); requires a faithful state.
    Cm,
    /// `(x - y)^2 / m_f(x, y)`; requires a faithful state.
    HatCm,
}

/// Apply m_f, 1/m_f, or the hat variant of the left/right multiplication
/// operators of the decomposed state to `x`.
pub fn superop_apply(
    f: &MonotoneFunction<f64>,
    spec: &SpectralDecomposition,
    x: &CMatrix,
    mode: SuperopMode,
) -> Result<CMatrix> {
    let n = linalg::require_square(x)?;
    if n != spec.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {n}x{n}, state is {0}x{0}",
            spec.dim()
        )));
    }
    let threshold = spec.zero_threshold();
    let clamped: Vec<f64> = spec
        .eigenvalues()
        .iter()
        .map(|&l| if l <= threshold { 0.0 } else { l })
        .collect();
    if mode != SuperopMode::Mean && clamped.contains(&0.0) {
        return Err(Error::SingularState {
            min_eigenvalue: spec.min_eigenvalue(),
        });
    }

    let mut coeff = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (li, lj) = (clamped[i], clamped[j]);
            coeff[(i, j)] = match mode {
                SuperopMode::Mean => {
                    if li == 0.0 || lj == 0.0 {
                        // rank-deficient states: the mean acts as zero off
                        // the support, so a pure state gives rho X rho
                        0.0
                    } else {
                        scalar_mean(f, li, lj)?
                    }
                }
                SuperopMode::Cm => 1.0 / scalar_mean(f, li, lj)?,
                SuperopMode::HatCm => {
                    let d = li - lj;
                    d * d / scalar_mean(f, li, lj)?
                }
            };
        }
    }

    let tilde = linalg::conjugate_by(spec.basis(), x);
    let mixed = CMatrix::from_fn(n, n, |i, j| tilde[(i, j)] * coeff[(i, j)]);
    let out = spec.basis() * mixed * spec.basis().adjoint();
    if linalg::hermiticity_residual(x) <= linalg::HERMITICITY_TOL {
        Ok(linalg::hermitize(&out))
    } else {
        Ok(out)
    }
}
