//! Density matrices, observables, tangent vectors, covariance structure, and
//! reproducible random sampling.

use crate::error::{Error, Result};
use crate::linalg;
use crate::means::SpectralDecomposition;
use crate::{CMatrix, CVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

const TRACE_TOL: f64 = 1e-12;
const PSD_SLACK: f64 = -1e-12;
const MAX_REDRAWS: usize = 10_000;

/// Hermitian positive semidefinite trace-one matrix with a cached
/// eigendecomposition.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
    spec: SpectralDecomposition,
    faithful: bool,
}

impl DensityMatrix {
    /// Validate hermiticity, unit trace, and positivity, then cache the
    /// eigendecomposition.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        linalg::require_square(&matrix)?;
        linalg::require_hermitian(&matrix)?;
        let t = matrix.trace();
        if (t - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidTrace {
                expected: 1.0,
                trace: t.re,
            });
        }
        let spec = SpectralDecomposition::from_hermitian(&matrix)?;
        if spec.min_eigenvalue() < PSD_SLACK {
            return Err(Error::NotPositive {
                min_eigenvalue: spec.min_eigenvalue(),
            });
        }
        let faithful = spec.is_faithful();
        Ok(DensityMatrix {
            matrix,
            spec,
            faithful,
        })
    }

    /// Diagonal state from a probability vector.
    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let m = CMatrix::from_diagonal(&CVector::from_iterator(
            probs.len(),
            probs.iter().map(|&p| Complex64::new(p, 0.0)),
        ));
        DensityMatrix::new(m)
    }

    /// Rank-one state from a (not necessarily normalized) ray.
    pub fn from_ray(v: &CVector) -> Result<Self> {
        let n2 = v.norm_squared();
        if n2 <= 0.0 {
            return Err(Error::Domain("zero vector has no ray".into()));
        }
        let m = (v * v.adjoint()).map(|e| e / n2);
        DensityMatrix::new(linalg::hermitize(&m))
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Cached eigendecomposition.
    pub fn spec(&self) -> &SpectralDecomposition {
        &self.spec
    }

    /// Hilbert space dimension.
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        self.spec.eigenvalues()
    }

    /// True when every eigenvalue clears the faithfulness threshold.
    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    /// `Re Tr(rho A)`.
    pub fn expectation(&self, a: &Observable) -> Result<f64> {
        self.check_dim(a.dim())?;
        Ok((&self.matrix * a.matrix()).trace().re)
    }

    /// `A - Tr(rho A) I`.
    pub fn center(&self, a: &Observable) -> Result<Observable> {
        let mean = self.expectation(a)?;
        let m = a.matrix() - linalg::identity(self.dim()).map(|e| e * mean);
        Observable::new(m)
    }

    /// `Tr(rho A B) - Tr(rho A) Tr(rho B)`, complex in general.
    pub fn covariance(&self, a: &Observable, b: &Observable) -> Result<Complex64> {
        self.check_dim(a.dim())?;
        self.check_dim(b.dim())?;
        let tab = (&self.matrix * a.matrix() * b.matrix()).trace();
        let ta = (&self.matrix * a.matrix()).trace();
        let tb = (&self.matrix * b.matrix()).trace();
        Ok(tab - ta * tb)
    }

    /// Real part of the covariance.
    pub fn sym_covariance(&self, a: &Observable, b: &Observable) -> Result<f64> {
        Ok(self.covariance(a, b)?.re)
    }

    /// `covariance(a, a)`, real up to roundoff.
    pub fn variance(&self, a: &Observable) -> Result<f64> {
        Ok(self.covariance(a, a)?.re)
    }

    /// `i [rho, A]`, the tangent direction of the unitary orbit through
    /// `rho` generated by `A`.
    pub fn commutator_tangent(&self, a: &Observable) -> Result<TangentVector> {
        self.check_dim(a.dim())?;
        let c = &self.matrix * a.matrix() - a.matrix() * &self.matrix;
        let m = linalg::hermitize(&c.map(|e| e * Complex64::i()));
        // the trace cancels exactly in theory; strip the roundoff residue
        let n = self.dim();
        let t = m.trace() / Complex64::new(n as f64, 0.0);
        TangentVector::new(&m - linalg::identity(n).map(|e| e * t))
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch(format!(
                "state is {}-dimensional, operator is {}-dimensional",
                self.dim(),
                other
            )));
        }
        Ok(())
    }
}

/// Hermitian matrix representing a physical quantity.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: CMatrix,
}

impl Observable {
    /// Validate hermiticity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        linalg::require_square(&matrix)?;
        linalg::require_hermitian(&matrix)?;
        Ok(Observable { matrix })
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Hilbert space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Traceless Hermitian matrix; element of the tangent space at a state.
#[derive(Debug, Clone)]
pub struct TangentVector {
    matrix: CMatrix,
}

impl TangentVector {
    /// Validate hermiticity and tracelessness.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        linalg::require_square(&matrix)?;
        linalg::require_hermitian(&matrix)?;
        let t = matrix.trace().norm();
        if t > 1e-10 * matrix.norm() {
            return Err(Error::Domain(format!(
                "tangent vector has trace {t:.3e}, expected 0"
            )));
        }
        Ok(TangentVector { matrix })
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }
}

/// Random-state ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// `G G^dag / Tr(G G^dag)` for a square complex Gaussian `G`.
    HilbertSchmidt,
    /// Flat simplex eigenvalues in the computational basis.
    DiagonalDirichlet,
    /// Rank-one projector onto a Haar-random ray.
    Pure,
}

/// Parameters for reproducible state sampling.
#[derive(Debug, Clone, Copy)]
pub struct SamplerConfig {
    pub dimension: usize,
    pub seed: u64,
    /// Redraw until min eigenvalue >= purity_floor / dimension
    /// (ignored for the pure ensemble).
    pub purity_floor: f64,
    pub ensemble: Ensemble,
}

impl SamplerConfig {
    /// Default purity floor 0.05.
    pub fn new(dimension: usize, seed: u64, ensemble: Ensemble) -> Result<Self> {
        let cfg = SamplerConfig {
            dimension,
            seed,
            purity_floor: 0.05,
            ensemble,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_purity_floor(mut self, floor: f64) -> Result<Self> {
        self.purity_floor = floor;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=16).contains(&self.dimension) {
            return Err(Error::Parameter(format!(
                "dimension {} outside [2, 16]",
                self.dimension
            )));
        }
        if !(self.purity_floor > 0.0 && self.purity_floor <= 1.0) {
            return Err(Error::Parameter(format!(
                "purity floor {} outside (0, 1]",
                self.purity_floor
            )));
        }
        Ok(())
    }
}

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Deterministic draw from the configured ensemble.
pub fn sample(config: &SamplerConfig) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    sample_with_rng(config, &mut rng)
}

/// Draw using a caller-provided generator (for sub-streamed trial loops).
pub fn sample_with_rng(config: &SamplerConfig, rng: &mut impl Rng) -> Result<DensityMatrix> {
    config.validate()?;
    let n = config.dimension;
    for _ in 0..MAX_REDRAWS {
        let rho = match config.ensemble {
            Ensemble::HilbertSchmidt => {
                let g = CMatrix::from_fn(n, n, |_, _| complex_normal(rng));
                let gg = &g * g.adjoint();
                let t = gg.trace().re;
                DensityMatrix::new(linalg::hermitize(&gg.map(|e| e / t)))?
            }
            Ensemble::DiagonalDirichlet => {
                let mut w: Vec<f64> = (0..n).map(|_| rng.sample(Exp1)).collect();
                let s: f64 = w.iter().sum();
                w.iter_mut().for_each(|x| *x /= s);
                DensityMatrix::from_diagonal(&w)?
            }
            Ensemble::Pure => {
                let v = CVector::from_fn(n, |_, _| complex_normal(rng));
                return DensityMatrix::from_ray(&v);
            }
        };
        if rho.spec().min_eigenvalue() >= config.purity_floor / n as f64 {
            return Ok(rho);
        }
    }
    Err(Error::Parameter(format!(
        "purity floor {} unreachable for the {:?} ensemble in dimension {n}",
        config.purity_floor, config.ensemble
    )))
}

/// Deterministic Hermitian draw: standard-normal real diagonal,
/// complex-normal off-diagonals, all times `scale`.
pub fn sample_observable(dimension: usize, seed: u64, scale: f64) -> Result<Observable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_observable_with_rng(dimension, scale, &mut rng)
}

/// Observable draw using a caller-provided generator.
pub fn sample_observable_with_rng(
    dimension: usize,
    scale: f64,
    rng: &mut impl Rng,
) -> Result<Observable> {
    if !(2..=16).contains(&dimension) {
        return Err(Error::Parameter(format!(
            "dimension {dimension} outside [2, 16]"
        )));
    }
    let mut m = CMatrix::zeros(dimension, dimension);
    for i in 0..dimension {
        let d: f64 = rng.sample(StandardNormal);
        m[(i, i)] = Complex64::new(d * scale, 0.0);
        for j in (i + 1)..dimension {
            let z = complex_normal(rng) * scale;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    Observable::new(m)
}

/// Row-major serialization schema for complex matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        MatrixJson {
            dim: n,
            re: (0..n)
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
                .collect(),
            im: (0..n)
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !ok(&self.re) || !ok(&self.im) {
            return Err(Error::Serialize(format!(
                "matrix payload does not match declared dimension {n}"
            )));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(self.re[i][j], self.im[i][j])
        }))
    }
}
