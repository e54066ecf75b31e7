//! The uncertainty inequalities, their spectral gap decomposition, equality
//! analysis, and the constructions that show where weaker bounds fail.

use crate::error::{Error, Result};
use crate::fop::{FunctionGrid, MonotoneFunction};
use crate::linalg;
use crate::qfi::{c_correlation, MetricContext};
use crate::report::{default_tol, fingerprint, GapReport, Verdict};
use crate::states::{DensityMatrix, Observable};
use crate::CMatrix;
use num_complex::Complex64;

/// H evaluated at four positive reals. For regular f this is
/// `((x+y)(w+z) - ((x-y)^2/y)((w-z)^2/z) (f(0)/f(x/y)) (f(0)/f(w/z))) / 2`;
/// non-regular f collapse it to `(x+y)(w+z)/2`.
pub fn h_function(f: &MonotoneFunction<f64>, x: f64, y: f64, w: f64, z: f64) -> Result<f64> {
    for v in [x, y, w, z] {
        if !(v > 0.0) {
            return Err(Error::Domain(format!(
                "h function needs positive arguments, got ({x}, {y}, {w}, {z})"
            )));
        }
    }
    let pq = (x + y) * (w + z);
    if !f.is_regular() {
        return Ok(0.5 * pq);
    }
    let f0 = f.f_zero();
    let p = (x - y).powi(2) / y * (f0 / f.eval(x / y)?);
    let q = (w - z).powi(2) / z * (f0 / f.eval(w / z)?);
    Ok(0.5 * (pq - p * q))
}

/// Spectral decomposition of the main gap: the gap is `1/4 sum H . K` over
/// all eigenvalue index quadruples.
#[derive(Debug, Clone)]
pub struct HKDecomposition {
    n: usize,
    h_values: Vec<f64>,
    k_values: Vec<f64>,
    f_of_f: f64,
}

impl HKDecomposition {
    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn h(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.h_values[self.idx(i, j, k, l)]
    }

    pub fn k(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.k_values[self.idx(i, j, k, l)]
    }

    /// The reconstructed gap `1/4 sum H . K`.
    pub fn f_of_f(&self) -> f64 {
        self.f_of_f
    }

    pub fn min_k(&self) -> f64 {
        self.k_values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_h(&self) -> f64 {
        self.h_values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Coefficient arrays of the main gap in the state's eigenbasis.
pub fn hk_decompose(
    rho: &DensityMatrix,
    f: &MonotoneFunction<f64>,
    a: &Observable,
    b: &Observable,
) -> Result<HKDecomposition> {
    if !rho.is_faithful() {
        return Err(Error::SingularState {
            min_eigenvalue: rho.spec().min_eigenvalue(),
        });
    }
    let n = rho.dim();
    let a0 = rho.center(a)?;
    let b0 = rho.center(b)?;
    let at = linalg::conjugate_by(rho.spec().basis(), a0.matrix());
    let bt = linalg::conjugate_by(rho.spec().basis(), b0.matrix());
    let lam = rho.eigenvalues();

    let mut h_values = vec![0.0; n * n * n * n];
    let mut k_values = vec![0.0; n * n * n * n];
    let mut acc = 0.0;
    let mut k_extreme = 0.0_f64;
    let mut idx = 0;
    for i in 0..n {
        for j in 0..n {
            let re_ab_ij = (at[(i, j)] * bt[(j, i)]).re;
            let aij2 = at[(i, j)].norm_sqr();
            let bij2 = bt[(i, j)].norm_sqr();
            for k in 0..n {
                for l in 0..n {
                    let h = h_function(f, lam[i], lam[j], lam[k], lam[l])?;
                    if h <= 0.0 {
                        return Err(Error::InternalConsistency(format!(
                            "nonpositive h value {h:.3e} at eigenvalue quadruple"
                        )));
                    }
                    let re_ab_kl = (at[(k, l)] * bt[(l, k)]).re;
                    let kv = aij2 * bt[(k, l)].norm_sqr() + at[(k, l)].norm_sqr() * bij2
                        - 2.0 * re_ab_ij * re_ab_kl;
                    h_values[idx] = h;
                    k_values[idx] = kv;
                    k_extreme = k_extreme.max(kv.abs());
                    acc += h * kv;
                    idx += 1;
                }
            }
        }
    }
    let k_floor = -1e-12 * k_extreme.max(1.0);
    if k_values.iter().any(|&kv| kv < k_floor) {
        return Err(Error::InternalConsistency(format!(
            "k coefficient below {k_floor:.3e}"
        )));
    }
    Ok(HKDecomposition {
        n,
        h_values,
        k_values,
        f_of_f: 0.25 * acc,
    })
}

fn comm_trace(rho: &DensityMatrix, a: &Observable, b: &Observable) -> Complex64 {
    (rho.matrix() * (a.matrix() * b.matrix() - b.matrix() * a.matrix())).trace()
}

/// The main bound: covariance area squared against commutator area squared.
///
/// `lhs = Var(A)Var(B) - Cov(A,B)^2`; `rhs = ((f(0)/2) Area(i[rho,A],
/// i[rho,B]))^2`, cross-checked against the equivalent
/// `I(A) I(B) - (Re Corr(A,B))^2` form. The two must agree or the call
/// reports an internal inconsistency rather than a verdict.
pub fn main_gap(
    rho: &DensityMatrix,
    f: &MonotoneFunction<f64>,
    a: &Observable,
    b: &Observable,
    seed: Option<u64>,
) -> Result<GapReport> {
    let va = rho.variance(a)?;
    let vb = rho.variance(b)?;
    let cov = rho.sym_covariance(a, b)?;
    let lhs = va * vb - cov * cov;
    let scale = va * vb;

    let ctx = MetricContext::new(rho.clone(), f.clone());
    let ia = ctx.skew_information(a)?;
    let ib = ctx.skew_information(b)?;
    let re_corr = ctx.f_correlation(a, b)?.re;
    let corr_route = ia * ib - re_corr * re_corr;

    let rhs = if rho.is_faithful() {
        let area_route = if f.is_regular() {
            let u = rho.commutator_tangent(a)?;
            let v = rho.commutator_tangent(b)?;
            let area = ctx.area(&u, &v)?;
            (f.f_zero() / 2.0 * area).powi(2)
        } else {
            0.0
        };
        let agree_tol = 1e-9
            * scale
                .abs()
                .max(1.0)
                .max(area_route.abs())
                .max(corr_route.abs());
        if (area_route - corr_route).abs() > agree_tol {
            return Err(Error::InternalConsistency(format!(
                "area route {area_route:.9e} disagrees with correlation route {corr_route:.9e}"
            )));
        }
        area_route
    } else {
        corr_route
    };

    Ok(GapReport::new(
        "main",
        f.label(),
        rho.dim(),
        seed,
        lhs,
        rhs,
        default_tol(scale),
        fingerprint(rho.matrix()),
    ))
}

/// Outcome of the proportionality test on a centered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proportionality {
    Proportional,
    Strict,
}

/// Equality holds in the main bound exactly when the centered observables
/// are proportional; decided by the least-squares optimal real multiple.
pub fn equality_certificate(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<Proportionality> {
    let a0 = rho.center(a)?;
    let b0 = rho.center(b)?;
    let na = a0.matrix().norm();
    let nb = b0.matrix().norm();
    let scale = na.max(nb);
    // a centered multiple of the identity is zero up to trace roundoff
    if scale <= 1e-14 || nb <= 1e-10 * scale {
        return Ok(Proportionality::Proportional);
    }
    let c_star = (b0.matrix().adjoint() * a0.matrix()).trace().re / (nb * nb);
    let residual = (a0.matrix() - b0.matrix().map(|e| e * c_star)).norm();
    Ok(if residual <= 1e-10 * scale {
        Proportionality::Proportional
    } else {
        Proportionality::Strict
    })
}

/// The product form of the refined variance bound, with its two factors.
#[derive(Debug, Clone)]
pub struct RefinedGap {
    pub product: GapReport,
    pub factor_a: GapReport,
    pub factor_b: GapReport,
}

/// `Var(A)Var(B)` against `(I(A) + Ch(A_0))(I(B) + Ch(B_0))`, where `Ch`
/// is the correlation under the harmonic mean; factor reports carry the
/// per-observable variance bounds.
pub fn refined_heisenberg_gap(
    rho: &DensityMatrix,
    f: &MonotoneFunction<f64>,
    a: &Observable,
    b: &Observable,
    seed: Option<u64>,
) -> Result<RefinedGap> {
    let harmonic = MonotoneFunction::rld();
    let ctx = MetricContext::new(rho.clone(), f.clone());
    let fp = fingerprint(rho.matrix());

    let factor = |obs: &Observable, tag: &str| -> Result<(GapReport, f64)> {
        let var = rho.variance(obs)?;
        let bound = ctx.skew_information(obs)? + c_correlation(rho, &harmonic, obs, obs)?;
        let report = GapReport::new(
            format!("refined-factor-{tag}"),
            f.label(),
            rho.dim(),
            seed,
            var,
            bound,
            default_tol(var),
            fp.clone(),
        );
        Ok((report, bound))
    };
    let (factor_a, bound_a) = factor(a, "a")?;
    let (factor_b, bound_b) = factor(b, "b")?;

    let lhs = factor_a.lhs * factor_b.lhs;
    let rhs = bound_a * bound_b;
    let product = GapReport::new(
        "refined",
        f.label(),
        rho.dim(),
        seed,
        lhs,
        rhs,
        default_tol(lhs),
        fp,
    );
    Ok(RefinedGap {
        product,
        factor_a,
        factor_b,
    })
}

/// `Var(A)Var(B)` against `C(A_0) C(B_0) + |Tr(rho [A,B])|^2 / 4` with the
/// correlation taken under the mean of f itself. Guaranteed only when
/// f <= sqrt pointwise.
pub fn park_luo_gap(
    rho: &DensityMatrix,
    f: &MonotoneFunction<f64>,
    a: &Observable,
    b: &Observable,
    seed: Option<u64>,
) -> Result<GapReport> {
    let va = rho.variance(a)?;
    let vb = rho.variance(b)?;
    let lhs = va * vb;
    let rhs = c_correlation(rho, f, a, a)? * c_correlation(rho, f, b, b)?
        + 0.25 * comm_trace(rho, a, b).norm_sqr();
    Ok(GapReport::new(
        "park-luo",
        f.label(),
        rho.dim(),
        seed,
        lhs,
        rhs,
        default_tol(lhs),
        fingerprint(rho.matrix()),
    ))
}

/// A two-level configuration violating the square-mean product bound.
#[derive(Debug, Clone)]
pub struct ParkLuoWitness {
    /// Grid point where f exceeds sqrt.
    pub x0: f64,
    pub rho: DensityMatrix,
    pub a: Observable,
    pub b: Observable,
    pub report: GapReport,
}

/// `-sigma_y` as a matrix.
pub fn minus_sigma_y() -> Observable {
    Observable::new(CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 0.0),
        ],
    ))
    .expect("constant Hermitian matrix")
}

/// `sigma_x` as a matrix.
pub fn sigma_x() -> Observable {
    Observable::new(CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    ))
    .expect("constant Hermitian matrix")
}

/// Search the default grid for a point where `f(x) > sqrt(x)`; if one
/// exists, the two-level state with eigenvalue ratio at the worst such
/// point violates the product bound, and the violating report is returned.
pub fn witness_park_luo(f: &MonotoneFunction<f64>) -> Result<Option<ParkLuoWitness>> {
    let grid = FunctionGrid::<f64>::default_log();
    let mut best: Option<(f64, f64)> = None;
    for &x in grid.points() {
        let excess = (f.eval(x)?.powi(2) - x) / (1.0 + x).powi(2);
        if excess > 1e-9 && best.is_none_or(|(_, e)| excess > e) {
            best = Some((x, excess));
        }
    }
    let Some((x0, _)) = best else {
        return Ok(None);
    };
    let l2 = 1.0 / (1.0 + x0);
    let l1 = 1.0 - l2;
    let rho = DensityMatrix::from_diagonal(&[l1, l2])?;
    let a = minus_sigma_y();
    let b = sigma_x();
    let report = park_luo_gap(&rho, f, &a, &b, None)?;
    if report.verdict != Verdict::Violated {
        return Err(Error::InternalConsistency(format!(
            "{} exceeds sqrt at {x0:.6e} but the witness fails to violate",
            f.label()
        )));
    }
    Ok(Some(ParkLuoWitness {
        x0,
        rho,
        a,
        b,
        report,
    }))
}

/// The fixed two-level family: `rho = diag(l1, 1-l1)`, `A = -sigma_y`,
/// `B = sigma_x`. Both variances are exactly 1 on it.
pub fn independence_family(lambda1: f64) -> Result<(DensityMatrix, Observable, Observable)> {
    if !(lambda1 > 0.5 && lambda1 < 1.0) {
        return Err(Error::Parameter(format!(
            "lambda1 must lie in (1/2, 1), got {lambda1}"
        )));
    }
    let rho = DensityMatrix::from_diagonal(&[lambda1, 1.0 - lambda1])?;
    Ok((rho, minus_sigma_y(), sigma_x()))
}

/// Default eigenvalue sweep 0.55, 0.60, ..., 0.95.
pub fn default_lambda_sweep() -> Vec<f64> {
    (0..9).map(|k| 0.55 + 0.05 * k as f64).collect()
}

/// For each eigenvalue and each function: `I(A) I(B)` against
/// `|Tr(rho [A,B])|^2 / 4` on the fixed family. Every row is expected to
/// come back violated; that is the point.
pub fn independence_sweep(
    lambda1s: &[f64],
    fs: &[MonotoneFunction<f64>],
) -> Result<Vec<GapReport>> {
    let mut rows = Vec::with_capacity(lambda1s.len() * fs.len());
    for &l1 in lambda1s {
        let (rho, a, b) = independence_family(l1)?;
        let commutator_term = 0.25 * comm_trace(&rho, &a, &b).norm_sqr();
        let direct = (2.0 * l1 - 1.0).powi(2);
        if (rho.variance(&a)? - 1.0).abs() > 1e-12
            || (rho.variance(&b)? - 1.0).abs() > 1e-12
            || (commutator_term - direct).abs() > 1e-12
        {
            return Err(Error::InternalConsistency(format!(
                "fixed family values drifted at lambda1 = {l1}"
            )));
        }
        for f in fs {
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let lhs = ctx.skew_information(&a)? * ctx.skew_information(&b)?;
            rows.push(GapReport::new(
                "independence",
                f.label(),
                2,
                None,
                lhs,
                commutator_term,
                default_tol(1.0),
                fingerprint(rho.matrix()),
            ));
        }
    }
    Ok(rows)
}

/// The reverse reading on the same family with `A = B`: the commutator
/// term is zero while the skew product is positive for regular f.
pub fn independence_converse(lambda1: f64, f: &MonotoneFunction<f64>) -> Result<GapReport> {
    let (rho, a, _) = independence_family(lambda1)?;
    let ctx = MetricContext::new(rho.clone(), f.clone());
    let i = ctx.skew_information(&a)?;
    let lhs = 0.25 * comm_trace(&rho, &a, &a).norm_sqr();
    Ok(GapReport::new(
        "independence-converse",
        f.label(),
        2,
        None,
        lhs,
        i * i,
        default_tol(1.0),
        fingerprint(rho.matrix()),
    ))
}

/// Commuting observables whose state commutators still span a positive
/// area: the commutator uncertainty bound is zero while the metric area
/// bound is not.
pub fn commuting_positive_area(f: &MonotoneFunction<f64>) -> Result<GapReport> {
    if !f.is_regular() {
        return Err(Error::Parameter(format!(
            "{} has f(0) = 0; the area bound degenerates",
            f.label()
        )));
    }
    let (c5, s5) = (0.5_f64.cos(), 0.5_f64.sin());
    let (c7, s7) = (0.7_f64.cos(), 0.7_f64.sin());
    let r12 = nalgebra::DMatrix::from_row_slice(3, 3, &[c5, -s5, 0.0, s5, c5, 0.0, 0.0, 0.0, 1.0]);
    let r23 = nalgebra::DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, c7, -s7, 0.0, s7, c7]);
    let w = (r23 * r12).map(|x| Complex64::new(x, 0.0));
    let proj = |k: usize| {
        let mut d = CMatrix::zeros(3, 3);
        d[(k, k)] = Complex64::new(1.0, 0.0);
        linalg::hermitize(&(&w * d * w.adjoint()))
    };
    let a = Observable::new(proj(0))?;
    let b = Observable::new(proj(1))?;
    let rho = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2])?;

    if linalg::commutator(a.matrix(), b.matrix()).norm() > 1e-12 {
        return Err(Error::InternalConsistency(
            "construction lost commutativity".into(),
        ));
    }
    let rhs = 0.25 * comm_trace(&rho, &a, &b).norm_sqr();
    let ctx = MetricContext::new(rho.clone(), f.clone());
    let u = rho.commutator_tangent(&a)?;
    let v = rho.commutator_tangent(&b)?;
    let lhs = (f.f_zero() / 2.0 * ctx.area(&u, &v)?).powi(2);
    Ok(GapReport::new(
        "commuting-area",
        f.label(),
        3,
        None,
        lhs,
        rhs,
        default_tol(1.0),
        fingerprint(rho.matrix()),
    ))
}

/// On the fixed family the squared correlation exceeds the product of the
/// self-correlations: the correlation functional admits no Cauchy-Schwarz
/// bound. The report's gap is positive exactly when the witness works.
pub fn cauchy_schwarz_witness(f: &MonotoneFunction<f64>, lambda1: f64) -> Result<GapReport> {
    let (rho, a, b) = independence_family(lambda1)?;
    let ctx = MetricContext::new(rho.clone(), f.clone());
    let lhs = ctx.f_correlation(&a, &b)?.norm_sqr();
    let rhs = ctx.f_correlation(&a, &a)?.re * ctx.f_correlation(&b, &b)?.re;
    Ok(GapReport::new(
        "corr-cs",
        f.label(),
        2,
        None,
        lhs,
        rhs,
        default_tol(1.0),
        fingerprint(rho.matrix()),
    ))
}

/// Covariance-corrected and plain commutator uncertainty bounds.
#[derive(Debug, Clone)]
pub struct SchrodingerPair {
    pub schrodinger: GapReport,
    pub heisenberg: GapReport,
}

/// `Var(A)Var(B) - Cov(A,B)^2 >= |Tr(rho [A,B])|^2 / 4`, plus the weaker
/// form without the covariance subtraction.
pub fn schrodinger_gap(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
    seed: Option<u64>,
) -> Result<SchrodingerPair> {
    let va = rho.variance(a)?;
    let vb = rho.variance(b)?;
    let cov = rho.sym_covariance(a, b)?;
    let rhs = 0.25 * comm_trace(rho, a, b).norm_sqr();
    let fp = fingerprint(rho.matrix());
    let scale = va * vb;
    let schrodinger = GapReport::new(
        "schrodinger",
        "-",
        rho.dim(),
        seed,
        va * vb - cov * cov,
        rhs,
        default_tol(scale),
        fp.clone(),
    );
    let heisenberg = GapReport::new(
        "heisenberg",
        "-",
        rho.dim(),
        seed,
        va * vb,
        rhs,
        default_tol(scale),
        fp,
    );
    Ok(SchrodingerPair {
        schrodinger,
        heisenberg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fop::{catalog, regular_catalog};
    use crate::means::scalar_mean;
    use crate::states::{sample, sample_observable, Ensemble, SamplerConfig};

    fn draw(dim: usize, seed: u64) -> (DensityMatrix, Observable, Observable) {
        let rho =
            sample(&SamplerConfig::new(dim, seed, Ensemble::HilbertSchmidt).unwrap()).unwrap();
        let a = sample_observable(dim, seed.wrapping_add(1000), 1.0).unwrap();
        let b = sample_observable(dim, seed.wrapping_add(2000), 1.0).unwrap();
        (rho, a, b)
    }

    #[test]
    fn h_frozen_values() {
        let sld = MonotoneFunction::<f64>::sld();
        let h = h_function(&sld, 2.0, 1.0, 2.0, 1.0).unwrap();
        assert!((h - 40.0 / 9.0).abs() < 1e-14);
        let bkm = MonotoneFunction::<f64>::bkm();
        assert_eq!(h_function(&bkm, 1.0, 1.0, 1.0, 1.0).unwrap(), 2.0);
        let wy = MonotoneFunction::<f64>::wy();
        assert!(
            h_function(&sld, 2.0, 1.0, 3.0, 1.0).unwrap()
                < h_function(&wy, 2.0, 1.0, 3.0, 1.0).unwrap()
        );
        assert!(h_function(&sld, 0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn h_obeys_its_envelope() {
        let pts = [0.3, 1.0, 2.5];
        for f in catalog::<f64>() {
            for &x in &pts {
                for &y in &pts {
                    for &w in &pts {
                        for &z in &pts {
                            let h = h_function(&f, x, y, w, z).unwrap();
                            let lo = 2.0 * (x * y * (w * w + z * z) + w * z * (x * x + y * y))
                                / ((x + y) * (w + z));
                            let hi = 0.5 * (x + y) * (w + z);
                            assert!(h >= lo - 1e-12 * hi, "{} low", f.label());
                            assert!(h <= hi + 1e-12 * hi, "{} high", f.label());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn h_dual_route() {
        // H also splits through the tilde mean:
        // ((x+y) - mt(x,y)) mt(w,z) + ((w+z) - mt(w,z)) mt(x,y)
        let pts = [0.4, 1.0, 1.9, 3.7];
        for f in catalog::<f64>() {
            let ft = f.tilde();
            for &x in &pts {
                for &y in &pts {
                    for &w in &pts {
                        for &z in &pts {
                            let h = h_function(&f, x, y, w, z).unwrap();
                            let mxy = scalar_mean(&ft, x, y).unwrap();
                            let mwz = scalar_mean(&ft, w, z).unwrap();
                            let dual = ((x + y) - mxy) * mwz + ((w + z) - mwz) * mxy;
                            assert!((h - dual).abs() < 1e-12 * h.max(1.0), "{}", f.label());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn main_gap_holds_on_random_draws() {
        for seed in [1u64, 2, 3] {
            let (rho, a, b) = draw(3, seed * 131);
            for f in catalog::<f64>() {
                let r = main_gap(&rho, &f, &a, &b, Some(seed)).unwrap();
                assert!(r.passed(), "{}: gap {}", f.label(), r.gap);
                if !f.is_regular() {
                    assert_eq!(r.rhs, 0.0, "{}", f.label());
                }
            }
        }
    }

    #[test]
    fn main_gap_equality_for_proportional_pairs() {
        let (rho, a, _) = draw(3, 555);
        let b = Observable::new(a.matrix().map(|e| e * 1.7) + linalg::identity(3).map(|e| e * 0.4))
            .unwrap();
        for f in regular_catalog::<f64>() {
            let r = main_gap(&rho, &f, &a, &b, None).unwrap();
            assert_eq!(r.verdict, Verdict::Equality, "{}: {}", f.label(), r.gap);
            assert!(r.lhs.abs() < 1e-9 && r.rhs.abs() < 1e-9);
        }
    }

    #[test]
    fn hk_reconstructs_the_gap() {
        let (rho, a, b) = draw(3, 777);
        for f in catalog::<f64>() {
            let r = main_gap(&rho, &f, &a, &b, None).unwrap();
            let hk = hk_decompose(&rho, &f, &a, &b).unwrap();
            let rel = (hk.f_of_f() - r.gap).abs() / r.gap.abs().max(1.0);
            assert!(rel < 1e-8, "{}: {rel:.3e}", f.label());
            assert!(hk.min_k() >= -1e-12 * 10.0);
            assert!(hk.min_h() > 0.0);
        }
    }

    #[test]
    fn hk_kills_proportional_pairs() {
        let (rho, a, _) = draw(2, 888);
        let b = Observable::new(a.matrix().map(|e| e * -2.0)).unwrap();
        let hk = hk_decompose(&rho, &MonotoneFunction::wy(), &a, &b).unwrap();
        let max_k = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .flat_map(|(i, j)| (0..2).flat_map(move |k| (0..2).map(move |l| (i, j, k, l))))
            .map(|(i, j, k, l)| hk.k(i, j, k, l).abs())
            .fold(0.0_f64, f64::max);
        assert!(max_k < 1e-12);
    }

    #[test]
    fn hk_ordering_between_catalog_entries() {
        // H is smallest for the arithmetic-mean function and K >= 0, so its
        // reconstructed gap is the smallest: its bound is the tightest.
        let (rho, a, b) = draw(3, 999);
        let f_sld = hk_decompose(&rho, &MonotoneFunction::sld(), &a, &b)
            .unwrap()
            .f_of_f();
        let f_wy = hk_decompose(&rho, &MonotoneFunction::wy(), &a, &b)
            .unwrap()
            .f_of_f();
        assert!(f_sld <= f_wy + 1e-9, "sld {f_sld} wy {f_wy}");
    }

    #[test]
    fn certificate_classifies_pairs() {
        let (rho, a, _) = draw(3, 444);
        let b = Observable::new(a.matrix().map(|e| e * 2.0) + linalg::identity(3).map(|e| e * 3.0))
            .unwrap();
        assert_eq!(
            equality_certificate(&rho, &a, &b).unwrap(),
            Proportionality::Proportional
        );
        assert_eq!(
            equality_certificate(&rho, &a, &a).unwrap(),
            Proportionality::Proportional
        );
        let id = Observable::new(linalg::identity(3).map(|e| e * 0.7)).unwrap();
        assert_eq!(
            equality_certificate(&rho, &a, &id).unwrap(),
            Proportionality::Proportional
        );
        let (rho2, aa, bb) = independence_family(0.75).unwrap();
        assert_eq!(
            equality_certificate(&rho2, &aa, &bb).unwrap(),
            Proportionality::Strict
        );
    }

    #[test]
    fn strict_pairs_have_positive_gap() {
        let (rho, a, b) = draw(3, 1212);
        assert_eq!(
            equality_certificate(&rho, &a, &b).unwrap(),
            Proportionality::Strict
        );
        for f in regular_catalog::<f64>() {
            let r = main_gap(&rho, &f, &a, &b, None).unwrap();
            assert!(r.gap > 1e-10, "{}: {}", f.label(), r.gap);
        }
    }

    #[test]
    fn refined_bound_holds() {
        let (rho, a, b) = draw(4, 313);
        for f in catalog::<f64>() {
            let r = refined_heisenberg_gap(&rho, &f, &a, &b, None).unwrap();
            assert!(r.product.passed(), "{}", f.label());
            assert!(r.factor_a.passed() && r.factor_b.passed(), "{}", f.label());
            // dropping the harmonic correction weakens the bound
            let ctx = MetricContext::new(rho.clone(), f.clone());
            let skew_product =
                ctx.skew_information(&a).unwrap() * ctx.skew_information(&b).unwrap();
            assert!(r.product.rhs >= skew_product - 1e-10, "{}", f.label());
            assert!(r.product.lhs >= skew_product - 1e-9, "{}", f.label());
        }
    }

    #[test]
    fn park_luo_exact_equality_for_sqrt() {
        let (rho, a, b) = independence_family(0.75).unwrap();
        let r = park_luo_gap(&rho, &MonotoneFunction::sqrt(), &a, &b, None).unwrap();
        assert!(r.gap.abs() <= 1e-12, "gap {}", r.gap);
        assert_eq!(r.verdict, Verdict::Equality);
    }

    #[test]
    fn park_luo_violated_by_the_arithmetic_mean() {
        let (rho, a, b) = independence_family(0.75).unwrap();
        let r = park_luo_gap(&rho, &MonotoneFunction::sld(), &a, &b, None).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!((r.rhs - 1.25).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn park_luo_holds_for_sqrt_on_random_draws() {
        for seed in [5u64, 6, 7] {
            let (rho, a, b) = draw(3, seed * 211);
            let r = park_luo_gap(&rho, &MonotoneFunction::sqrt(), &a, &b, Some(seed)).unwrap();
            assert!(r.passed(), "gap {}", r.gap);
        }
    }

    #[test]
    fn witnesses_exist_exactly_for_functions_above_sqrt() {
        assert!(witness_park_luo(&MonotoneFunction::sqrt())
            .unwrap()
            .is_none());
        assert!(witness_park_luo(&MonotoneFunction::rld())
            .unwrap()
            .is_none());
        for f in [
            MonotoneFunction::sld(),
            MonotoneFunction::wy(),
            MonotoneFunction::bkm(),
            MonotoneFunction::power_bridge(0.75).unwrap(),
        ] {
            let w = witness_park_luo(&f)
                .unwrap()
                .unwrap_or_else(|| panic!("{} should yield a witness", f.label()));
            assert_eq!(w.report.verdict, Verdict::Violated, "{}", f.label());
            assert!(w.report.rhs > w.report.lhs, "{}", f.label());
        }
    }

    #[test]
    fn independence_rows_all_violate() {
        let rows = independence_sweep(&default_lambda_sweep(), &catalog()).unwrap();
        assert_eq!(rows.len(), 9 * catalog::<f64>().len());
        for r in &rows {
            assert_eq!(r.verdict, Verdict::Violated, "{} {}", r.f_label, r.gap);
        }
    }

    #[test]
    fn independence_frozen_value() {
        let rows = independence_sweep(&[0.75], &[MonotoneFunction::sld()]).unwrap();
        assert!((rows[0].lhs - 0.0625).abs() < 1e-12);
        assert!((rows[0].rhs - 0.25).abs() < 1e-12);
    }

    #[test]
    fn independence_converse_flips_for_regular_entries() {
        for f in regular_catalog::<f64>() {
            let r = independence_converse(0.75, &f).unwrap();
            assert_eq!(r.lhs, 0.0, "{}", f.label());
            assert!(r.rhs > 1e-3, "{}", f.label());
            assert_eq!(r.verdict, Verdict::Violated, "{}", f.label());
        }
    }

    #[test]
    fn commuting_pair_still_spans_area() {
        for f in regular_catalog::<f64>() {
            let r = commuting_positive_area(&f).unwrap();
            assert!(r.rhs.abs() < 1e-12, "{}", f.label());
            assert!(r.lhs > 1e-8, "{}: {}", f.label(), r.lhs);
        }
        assert!(commuting_positive_area(&MonotoneFunction::bkm()).is_err());
    }

    #[test]
    fn correlation_cauchy_schwarz_fails_on_the_family() {
        for f in catalog::<f64>() {
            let r = cauchy_schwarz_witness(&f, 0.8).unwrap();
            assert!(r.gap > 1e-6, "{}: {}", f.label(), r.gap);
        }
    }

    #[test]
    fn schrodinger_and_heisenberg_reports() {
        let (rho, a, b) = independence_family(0.75).unwrap();
        let pair = schrodinger_gap(&rho, &a, &b, None).unwrap();
        assert!((pair.schrodinger.lhs - 1.0).abs() < 1e-12);
        assert!((pair.schrodinger.rhs - 0.25).abs() < 1e-12);
        assert!(pair.schrodinger.passed());
        assert!(pair.heisenberg.passed());

        let (rho2, a2, _) = draw(3, 606);
        let same = schrodinger_gap(&rho2, &a2, &a2, None).unwrap();
        assert!(same.schrodinger.lhs.abs() < 1e-10);
        assert!(same.schrodinger.rhs.abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_state_kills_the_commutator_term() {
        let rho = DensityMatrix::from_diagonal(&[1.0 / 3.0; 3]).unwrap();
        let a = sample_observable(3, 51, 1.0).unwrap();
        let b = sample_observable(3, 52, 1.0).unwrap();
        let pair = schrodinger_gap(&rho, &a, &b, None).unwrap();
        assert!(pair.schrodinger.rhs.abs() < 1e-20);
    }
}
