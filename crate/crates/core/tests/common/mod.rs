#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qfiw::fop::MonotoneFunction;
use qfiw::means::scalar_mean;
use qfiw::states::{sample, sample_observable, DensityMatrix, Ensemble, Observable, SamplerConfig};
use qfiw::CMatrix;

pub fn draw_state(dim: usize, seed: u64) -> DensityMatrix {
    sample(&SamplerConfig::new(dim, seed, Ensemble::HilbertSchmidt).unwrap()).unwrap()
}

pub fn draw_pure(dim: usize, seed: u64) -> DensityMatrix {
    sample(&SamplerConfig::new(dim, seed, Ensemble::Pure).unwrap()).unwrap()
}

pub fn draw_observable(dim: usize, seed: u64) -> Observable {
    sample_observable(dim, seed, 1.0).unwrap()
}

/// vec(X) by column stacking.
pub fn vectorize(x: &CMatrix) -> DVector<Complex64> {
    let n = x.nrows();
    DVector::from_iterator(
        n * n,
        (0..n)
            .flat_map(|c| (0..n).map(move |r| (r, c)))
            .map(|(r, c)| x[(r, c)]),
    )
}

pub fn unvectorize(v: &DVector<Complex64>, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| v[c * n + r])
}

/// The mean of the left and right multiplication operators of the state,
/// assembled as a dense n^2 x n^2 matrix from rank-one spectral
/// projectors: vec(u_i u_j^dag) is a joint eigenvector with eigenvalue
/// pair (lambda_i, lambda_j). Eigenvalues below the support threshold are
/// clamped to zero and axis pairs get weight zero.
pub fn mean_superop_matrix(f: &MonotoneFunction<f64>, rho: &DensityMatrix) -> DMatrix<Complex64> {
    let spec = rho.spec();
    let u = spec.basis();
    let lam = spec.eigenvalues();
    let cut = spec.zero_threshold();
    let n = rho.dim();
    let mut m = DMatrix::<Complex64>::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let li = if lam[i] <= cut { 0.0 } else { lam[i] };
            let lj = if lam[j] <= cut { 0.0 } else { lam[j] };
            if li == 0.0 || lj == 0.0 {
                continue;
            }
            let w = scalar_mean(f, li, lj).unwrap();
            let mut v = DVector::<Complex64>::zeros(n * n);
            for a in 0..n {
                for b in 0..n {
                    v[b * n + a] = u[(b, j)].conj() * u[(a, i)];
                }
            }
            let proj = &v * v.adjoint();
            m += proj.map(|e| e * w);
        }
    }
    m
}

/// Apply the explicit superoperator matrix to X.
pub fn mean_superop_oracle(f: &MonotoneFunction<f64>, rho: &DensityMatrix, x: &CMatrix) -> CMatrix {
    let m = mean_superop_matrix(f, rho);
    let y = m * vectorize(x);
    unvectorize(&y, x.nrows())
}

/// The printed table rows: function, its value at zero, and the closed
/// form of its transform.
#[allow(clippy::type_complexity)]
pub fn table_rows() -> Vec<(MonotoneFunction<f64>, f64, Box<dyn Fn(f64) -> f64>)> {
    let arithmetic = || Box::new(|x: f64| 0.5 * (1.0 + x)) as Box<dyn Fn(f64) -> f64>;
    let power_pair = |b: f64| {
        Box::new(move |x: f64| 0.5 * (x.powf(b) + x.powf(1.0 - b))) as Box<dyn Fn(f64) -> f64>
    };
    vec![
        (MonotoneFunction::rld(), 0.0, arithmetic()),
        (MonotoneFunction::wyd(-0.5).unwrap(), 0.0, arithmetic()),
        (MonotoneFunction::bkm(), 0.0, arithmetic()),
        (
            MonotoneFunction::wyd(0.1).unwrap(),
            0.1 * (1.0 - 0.1),
            power_pair(0.1),
        ),
        (
            MonotoneFunction::wyd(0.25).unwrap(),
            0.25 * (1.0 - 0.25),
            power_pair(0.25),
        ),
        (
            MonotoneFunction::wyd(0.49).unwrap(),
            0.49 * (1.0 - 0.49),
            power_pair(0.49),
        ),
        (MonotoneFunction::wy(), 0.25, Box::new(|x: f64| x.sqrt())),
        (
            MonotoneFunction::sld(),
            0.5,
            Box::new(|x: f64| 2.0 * x / (1.0 + x)),
        ),
    ]
}

/// Fourth-order series of the interpolation family around x = 1:
/// `1 + u/2 - c u^2/12 + c u^3/24` with `c = beta^2 - beta + 1`; the
/// logarithmic-mean function is the c = 1 case.
pub fn interpolation_series(beta: f64, u: f64) -> f64 {
    let c = beta * beta - beta + 1.0;
    1.0 + 0.5 * u - c * u * u / 12.0 + c * u * u * u / 24.0
}
