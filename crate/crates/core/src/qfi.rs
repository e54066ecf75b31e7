//! Monotone-metric inner products, the parallelogram area functional,
//! correlation functionals, and metric-adjusted skew information.
//!
//! All quantities are evaluated through eigenbasis coefficient sums
//!
//! sum_ij s(lambda_i, lambda_j) A~_ij conj(B~_ij),   A~ = U^dag A U,
//!
//! never by materializing superoperator matrices; the n^2 x n^2 form lives
//! only in the test oracles.

use crate::error::{Error, Result};
use crate::fop::MonotoneFunction;
use crate::linalg;
use crate::means::{scalar_mean, SpectralDecomposition};
use crate::states::{DensityMatrix, Observable, TangentVector};
use crate::CMatrix;
use num_complex::Complex64;

/// Tolerance for clamping provably nonnegative quantities.
const NEG_CLAMP: f64 = 1e-10;

/// A state paired with the monotone function selecting the metric.
#[derive(Debug, Clone)]
pub struct MetricContext {
    rho: DensityMatrix,
    f: MonotoneFunction<f64>,
}

/// sum over the support of s(lambda_i, lambda_j) A~_ij conj(B~_ij) where `s`
/// is the mean of `g`; rows and columns of eigenvalue zero drop out.
pub(crate) fn mean_weighted_sum(
    rho: &DensityMatrix,
    g: &MonotoneFunction<f64>,
    a: &CMatrix,
    b: &CMatrix,
) -> Result<Complex64> {
    let spec = rho.spec();
    let n = spec.dim();
    let threshold = spec.zero_threshold();
    let lam: Vec<f64> = spec
        .eigenvalues()
        .iter()
        .map(|&l| if l <= threshold { 0.0 } else { l })
        .collect();
    let at = linalg::conjugate_by(spec.basis(), a);
    let bt = linalg::conjugate_by(spec.basis(), b);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if lam[i] == 0.0 || lam[j] == 0.0 {
                continue;
            }
            let m = scalar_mean(g, lam[i], lam[j])?;
            acc += at[(i, j)] * bt[(i, j)].conj() * m;
        }
    }
    Ok(acc)
}

fn metric_sum(
    spec: &SpectralDecomposition,
    f: &MonotoneFunction<f64>,
    u: &CMatrix,
    v: &CMatrix,
) -> Result<Complex64> {
    let n = spec.dim();
    let ut = linalg::conjugate_by(spec.basis(), u);
    let vt = linalg::conjugate_by(spec.basis(), v);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let m = scalar_mean(f, spec.eigenvalues()[i], spec.eigenvalues()[j])?;
            acc += ut[(i, j)].conj() * vt[(i, j)] / m;
        }
    }
    Ok(acc)
}

impl MetricContext {
    pub fn new(rho: DensityMatrix, f: MonotoneFunction<f64>) -> Self {
        MetricContext { rho, f }
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn f(&self) -> &MonotoneFunction<f64> {
        &self.f
    }

    fn require_faithful(&self) -> Result<()> {
        if !self.rho.is_faithful() {
            return Err(Error::SingularState {
                min_eigenvalue: self.rho.spec().min_eigenvalue(),
            });
        }
        Ok(())
    }

    /// Metric inner product `Tr(u . c_f(L, R)(v))`; real for Hermitian
    /// tangent vectors.
    pub fn inner(&self, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        self.require_faithful()?;
        self.check_dim(u.matrix())?;
        self.check_dim(v.matrix())?;
        Ok(metric_sum(self.rho.spec(), &self.f, u.matrix(), v.matrix())?.re)
    }

    /// Squared metric norm.
    pub fn norm_sq(&self, u: &TangentVector) -> Result<f64> {
        self.inner(u, u)
    }

    /// Parallelogram area sqrt(g(u,u) g(v,v) - g(u,v)^2).
    pub fn area(&self, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        let guu = self.inner(u, u)?;
        let gvv = self.inner(v, v)?;
        let guv = self.inner(u, v)?;
        let radicand = guu * gvv - guv * guv;
        let scale = (guu * gvv).abs().max(1.0);
        if radicand < 0.0 {
            if radicand < -NEG_CLAMP * scale {
                return Err(Error::InternalConsistency(format!(
                    "area radicand {radicand:.3e} below the clamp window"
                )));
            }
            return Ok(0.0);
        }
        Ok(radicand.sqrt())
    }

    /// `Corr(A, B) = Tr(rho A B) - Tr(m_{f~}(L,R)(A) B)`, evaluated on the
    /// centered pair (the raw and centered forms agree).
    pub fn f_correlation(&self, a: &Observable, b: &Observable) -> Result<Complex64> {
        let a0 = self.rho.center(a)?;
        let b0 = self.rho.center(b)?;
        let second = (self.rho.matrix() * a0.matrix() * b0.matrix()).trace();
        let classical = mean_weighted_sum(&self.rho, &self.f.tilde(), a0.matrix(), b0.matrix())?;
        Ok(second - classical)
    }

    /// `I(A) = Var(A) - C(A_0)` under the mean of f~; clamped to 0 inside
    /// the floating-point guard, erroring beyond it.
    pub fn skew_information(&self, a: &Observable) -> Result<f64> {
        let value = self.f_correlation(a, a)?.re;
        let scale = self.rho.variance(a)?.abs().max(1.0);
        if value < 0.0 {
            if value < -NEG_CLAMP * scale {
                return Err(Error::InternalConsistency(format!(
                    "skew information {value:.3e} below the clamp window"
                )));
            }
            return Ok(0.0);
        }
        Ok(value)
    }

    /// `(quantum, classical) = (I(A), C(A_0))`; the parts must recombine to
    /// the variance.
    pub fn variance_split(&self, a: &Observable) -> Result<(f64, f64)> {
        let quantum = self.skew_information(a)?;
        let a0 = self.rho.center(a)?;
        let classical = mean_weighted_sum(&self.rho, &self.f.tilde(), a0.matrix(), a0.matrix())?.re;
        let var = self.rho.variance(a)?;
        let scale = var.abs().max(1.0);
        if (quantum + classical - var).abs() > 1e-10 * scale {
            return Err(Error::InternalConsistency(format!(
                "variance split {quantum:.6e} + {classical:.6e} misses {var:.6e}"
            )));
        }
        Ok((quantum, classical))
    }

    fn check_dim(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.rho.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state is {}-dimensional, operator is {}-dimensional",
                self.rho.dim(),
                m.nrows()
            )));
        }
        Ok(())
    }
}

/// `C(A_0, B_0) = Tr(m_g(L,R)(A_0) B_0)` on centered inputs; real for
/// Hermitian observables.
pub fn c_correlation(
    rho: &DensityMatrix,
    g: &MonotoneFunction<f64>,
    a: &Observable,
    b: &Observable,
) -> Result<f64> {
    let a0 = rho.center(a)?;
    let b0 = rho.center(b)?;
    Ok(mean_weighted_sum(rho, g, a0.matrix(), b0.matrix())?.re)
}

/// The raw variant of [`c_correlation`], without centering.
pub fn c_correlation_raw(
    rho: &DensityMatrix,
    g: &MonotoneFunction<f64>,
    a: &Observable,
    b: &Observable,
) -> Result<f64> {
    Ok(mean_weighted_sum(rho, g, a.matrix(), b.matrix())?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fop::{catalog, regular_catalog};
    use crate::means::{superop_apply, SuperopMode};
    use crate::states::{sample, sample_observable, Ensemble, SamplerConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_obs(values: &[f64]) -> Observable {
        Observable::new(CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&x| c(x, 0.0)),
        )))
        .unwrap()
    }

    fn draw(dim: usize, seed: u64) -> (DensityMatrix, Observable, Observable) {
        let rho =
            sample(&SamplerConfig::new(dim, seed, Ensemble::HilbertSchmidt).unwrap()).unwrap();
        let a = sample_observable(dim, seed.wrapping_add(1000), 1.0).unwrap();
        let b = sample_observable(dim, seed.wrapping_add(2000), 1.0).unwrap();
        (rho, a, b)
    }

    #[test]
    fn inner_on_the_maximally_mixed_state() {
        let rho = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let u = TangentVector::new(diag_obs(&[1.0, -1.0]).matrix().clone()).unwrap();
        for f in catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let val = ctx.inner(&u, &u).unwrap();
            assert!((val - 4.0).abs() < 1e-12, "{}: {val}", f.label());
        }
    }

    #[test]
    fn inner_commuting_case_is_fisher_information() {
        let rho = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let u = TangentVector::new(diag_obs(&[1.0, -1.0]).matrix().clone()).unwrap();
        let expected = 1.0 / 0.7 + 1.0 / 0.3;
        for f in catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let val = ctx.inner(&u, &u).unwrap();
            assert!((val - expected).abs() < 1e-12, "{}", f.label());
        }
    }

    #[test]
    fn inner_is_symmetric_and_nonnegative() {
        let (rho, a, b) = draw(4, 31);
        let u = rho.commutator_tangent(&a).unwrap();
        let v = rho.commutator_tangent(&b).unwrap();
        for f in catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let uv = ctx.inner(&u, &v).unwrap();
            let vu = ctx.inner(&v, &u).unwrap();
            assert!((uv - vu).abs() < 1e-10, "{}", f.label());
            assert!(ctx.norm_sq(&u).unwrap() >= -1e-10, "{}", f.label());
        }
    }

    #[test]
    fn inner_refuses_singular_states() {
        let rho = sample(&SamplerConfig::new(3, 8, Ensemble::Pure).unwrap()).unwrap();
        let a = sample_observable(3, 9, 1.0).unwrap();
        let u = rho.commutator_tangent(&a).unwrap();
        let ctx = MetricContext::new(rho, MonotoneFunction::sld());
        assert!(matches!(
            ctx.inner(&u, &u),
            Err(Error::SingularState { .. })
        ));
    }

    #[test]
    fn area_degenerates_on_proportional_vectors() {
        let (rho, a, _) = draw(3, 17);
        let u = rho.commutator_tangent(&a).unwrap();
        let two_a = Observable::new(a.matrix().map(|e| e * 2.0)).unwrap();
        let v = rho.commutator_tangent(&two_a).unwrap();
        let ctx = MetricContext::new(rho, MonotoneFunction::wy());
        assert!(ctx.area(&u, &v).unwrap() < 1e-7);
    }

    #[test]
    fn area_obeys_cauchy_schwarz() {
        let (rho, a, b) = draw(4, 23);
        let u = rho.commutator_tangent(&a).unwrap();
        let v = rho.commutator_tangent(&b).unwrap();
        for f in catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let area = ctx.area(&u, &v).unwrap();
            let bound = (ctx.norm_sq(&u).unwrap() * ctx.norm_sq(&v).unwrap()).sqrt();
            assert!(area <= bound + 1e-9, "{}", f.label());
        }
    }

    #[test]
    fn c_correlation_on_the_two_level_pair() {
        // rho = diag(l1, l2), A = -sigma_y is already centered; the
        // correlation reduces to twice the mean of the eigenvalue pair
        let (l1, l2) = (0.75, 0.25);
        let rho = DensityMatrix::from_diagonal(&[l1, l2]).unwrap();
        let a = Observable::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)],
        ))
        .unwrap();
        for f in regular_catalog::<f64>() {
            let ft = f.tilde();
            let got = c_correlation(&rho, &ft, &a, &a).unwrap();
            let expected = 2.0 * scalar_mean(&ft, l1, l2).unwrap();
            assert!((got - expected).abs() < 1e-12, "{}", f.label());
        }
    }

    #[test]
    fn c_correlation_with_arithmetic_mean_is_variance() {
        let (rho, a, _) = draw(3, 41);
        let arithmetic = MonotoneFunction::rld().tilde();
        let got = c_correlation(&rho, &arithmetic, &a, &a).unwrap();
        let var = rho.variance(&a).unwrap();
        assert!((got - var).abs() < 1e-10 * var.max(1.0));
    }

    #[test]
    fn c_correlation_vanishes_on_pure_states() {
        let rho = sample(&SamplerConfig::new(3, 77, Ensemble::Pure).unwrap()).unwrap();
        let a = sample_observable(3, 78, 1.0).unwrap();
        let b = sample_observable(3, 79, 1.0).unwrap();
        for f in catalog::<f64>() {
            let got = c_correlation(&rho, &f.tilde(), &a, &b).unwrap();
            assert!(got.abs() < 1e-10, "{}", f.label());
        }
    }

    #[test]
    fn skew_information_zero_for_commuting_observables() {
        let rho = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let a = diag_obs(&[2.0, -1.0, 0.5]);
        for f in catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            assert!(ctx.skew_information(&a).unwrap() < 1e-12, "{}", f.label());
        }
    }

    #[test]
    fn skew_information_vanishes_for_non_regular_entries() {
        let (rho, a, _) = draw(4, 53);
        for f in catalog::<f64>() {
            if f.is_regular() {
                continue;
            }
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let i = ctx.skew_information(&a).unwrap();
            assert!(i.abs() < 1e-10, "{}: {i}", f.label());
        }
    }

    #[test]
    fn skew_information_matches_metric_norm() {
        let (rho, a, _) = draw(3, 61);
        let u = rho.commutator_tangent(&a).unwrap();
        for f in regular_catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let lhs = ctx.skew_information(&a).unwrap();
            let rhs = f.f_zero() / 2.0 * ctx.norm_sq(&u).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * lhs.max(1.0), "{}", f.label());
        }
    }

    #[test]
    fn wyd_skew_information_closed_form() {
        let (rho, a, _) = draw(3, 67);
        for beta in [0.25, 0.49, 0.5] {
            let f = MonotoneFunction::wyd(beta).unwrap();
            let ctx = MetricContext::new(rho.clone(), f);
            let got = ctx.skew_information(&a).unwrap();
            let rb =
                linalg::hermitian_function(rho.matrix(), |x| Ok(x.max(0.0).powf(beta))).unwrap();
            let r1b = linalg::hermitian_function(rho.matrix(), |x| Ok(x.max(0.0).powf(1.0 - beta)))
                .unwrap();
            let c1 = linalg::commutator(&rb, a.matrix());
            let c2 = linalg::commutator(&r1b, a.matrix());
            let expected = -0.5 * (&c1 * &c2).trace().re;
            assert!(
                (got - expected).abs() < 1e-9 * expected.abs().max(1.0),
                "beta={beta}"
            );
        }
    }

    #[test]
    fn correlation_identities() {
        let (rho, a, b) = draw(4, 71);
        let u = rho.commutator_tangent(&a).unwrap();
        let v = rho.commutator_tangent(&b).unwrap();
        let tr_comm = (rho.matrix() * (a.matrix() * b.matrix() - b.matrix() * a.matrix())).trace();
        for f in catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let corr = ctx.f_correlation(&a, &b).unwrap();
            let re_expected = f.f_zero() / 2.0 * ctx.inner(&u, &v).unwrap();
            assert!(
                (corr.re - re_expected).abs() < 1e-9,
                "{}: re {} vs {}",
                f.label(),
                corr.re,
                re_expected
            );
            assert!((2.0 * corr.im - tr_comm.im).abs() < 1e-10, "{}", f.label());
            assert!(tr_comm.re.abs() < 1e-10);

            // raw form agrees with the centered route
            let raw_second = (rho.matrix() * a.matrix() * b.matrix()).trace();
            let raw_classical =
                mean_weighted_sum(&rho, &f.tilde(), a.matrix(), b.matrix()).unwrap();
            assert!(
                ((raw_second - raw_classical) - corr).norm() < 1e-9,
                "{}",
                f.label()
            );
        }
    }

    #[test]
    fn variance_split_frozen_two_level_value() {
        let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        let a = Observable::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let ctx = MetricContext::new(rho, MonotoneFunction::sld());
        let (quantum, classical) = ctx.variance_split(&a).unwrap();
        assert!((classical - 0.75).abs() < 1e-12);
        assert!((quantum - 0.25).abs() < 1e-12);
    }

    #[test]
    fn variance_split_properties() {
        let (rho, a, _) = draw(4, 83);
        let var = rho.variance(&a).unwrap();
        for f in catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let (q, cl) = ctx.variance_split(&a).unwrap();
            assert!(q >= 0.0 && cl >= -1e-10, "{}", f.label());
            assert!(
                (q + cl - var).abs() <= 1e-10 * var.max(1.0),
                "{}",
                f.label()
            );
            assert!(var >= q - 1e-10, "{}", f.label());
        }
        // scalar multiples of the identity carry no information at all
        let id = Observable::new(linalg::identity(4).map(|e| e * 2.5)).unwrap();
        let ctx = MetricContext::new(rho, MonotoneFunction::wy());
        let (q, cl) = ctx.variance_split(&id).unwrap();
        assert!(q.abs() < 1e-12 && cl.abs() < 1e-12);
    }

    #[test]
    fn skew_information_ordering_under_tilde() {
        let (rho, a, _) = draw(3, 89);
        let sld = MetricContext::new(rho.clone(), MonotoneFunction::sld())
            .skew_information(&a)
            .unwrap();
        for f in catalog::<f64>() {
            let i = MetricContext::new(rho.clone(), f.clone())
                .skew_information(&a)
                .unwrap();
            assert!(sld >= i - 1e-10, "{}", f.label());
        }
    }

    #[test]
    fn c_correlation_monotone_in_the_mean() {
        // pointwise-ordered means give ordered correlations
        let (rho, a, _) = draw(3, 97);
        let harmonic = MonotoneFunction::sld().tilde();
        let geometric = MonotoneFunction::wy().tilde();
        let arithmetic = MonotoneFunction::rld().tilde();
        let ch = c_correlation(&rho, &harmonic, &a, &a).unwrap();
        let cg = c_correlation(&rho, &geometric, &a, &a).unwrap();
        let ca = c_correlation(&rho, &arithmetic, &a, &a).unwrap();
        assert!(ch <= cg + 1e-10 && cg <= ca + 1e-10);
    }

    #[test]
    fn mean_superop_traces() {
        // Delta = m_{f~}(L,R): unit trace on the identity, kills centered
        // observables in trace, and is orthogonal to them
        let (rho, _, b) = draw(3, 101);
        let b0 = rho.center(&b).unwrap();
        for f in catalog::<f64>() {
            let ft = f.tilde();
            let di =
                superop_apply(&ft, rho.spec(), &linalg::identity(3), SuperopMode::Mean).unwrap();
            assert!((di.trace().re - 1.0).abs() < 1e-10, "{}", f.label());
            assert!(
                (b0.matrix() * &di).trace().re.abs() < 1e-10,
                "{}",
                f.label()
            );
            let db = superop_apply(&ft, rho.spec(), b0.matrix(), SuperopMode::Mean).unwrap();
            assert!(db.trace().re.abs() < 1e-10, "{}", f.label());
        }
    }

    #[test]
    fn commutator_metric_identity() {
        // f(0) <i[rho,A], i[rho,B]> = 2(Re Cov(A,B) - Tr(Delta(A_0) B_0))
        let (rho, a, b) = draw(4, 103);
        let u = rho.commutator_tangent(&a).unwrap();
        let v = rho.commutator_tangent(&b).unwrap();
        let a0 = rho.center(&a).unwrap();
        let b0 = rho.center(&b).unwrap();
        for f in regular_catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let lhs = f.f_zero() * ctx.inner(&u, &v).unwrap();
            let da0 =
                superop_apply(&f.tilde(), rho.spec(), a0.matrix(), SuperopMode::Mean).unwrap();
            let rhs = 2.0 * (rho.sym_covariance(&a, &b).unwrap() - (&da0 * b0.matrix()).trace().re);
            assert!(
                (lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0),
                "{}",
                f.label()
            );
        }
    }

    #[test]
    fn pure_state_equalities_smoke() {
        let rho = sample(&SamplerConfig::new(3, 107, Ensemble::Pure).unwrap()).unwrap();
        let a = sample_observable(3, 108, 1.0).unwrap();
        let b = sample_observable(3, 109, 1.0).unwrap();
        let var = rho.variance(&a).unwrap();
        let cov = rho.covariance(&a, &b).unwrap();
        for f in catalog::<f64>() {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let i = ctx.skew_information(&a).unwrap();
            assert!((i - var).abs() < 1e-9 * var.max(1.0), "{}", f.label());
            let corr = ctx.f_correlation(&a, &b).unwrap();
            assert!((corr - cov).norm() < 1e-9, "{}", f.label());
        }
    }
}
