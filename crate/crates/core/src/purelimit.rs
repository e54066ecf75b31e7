//! Behavior of the metric quantities at and near rank-one states: exact
//! equalities on the boundary, and the radial smoothing sweep that probes
//! whether the interior values actually converge to them.

use crate::error::{Error, Result};
use crate::fop::MonotoneFunction;
use crate::linalg;
use crate::qfi::{c_correlation, MetricContext};
use crate::report::{fingerprint, GapReport};
use crate::states::{DensityMatrix, Observable};

/// Second-largest eigenvalue above this disqualifies a state as rank one.
const RANK_ONE_TOL: f64 = 1e-12;

fn require_rank_one(rho: &DensityMatrix) -> Result<()> {
    let eigs = rho.eigenvalues();
    let second = eigs[eigs.len() - 2];
    if second.abs() > RANK_ONE_TOL {
        return Err(Error::Parameter(format!(
            "state is not rank one: second eigenvalue {second:.3e}"
        )));
    }
    Ok(())
}

/// A rank-one state together with a strictly decreasing grid of smoothing
/// strengths; each member mixes the state radially toward the center of
/// state space.
#[derive(Debug, Clone)]
pub struct RadialFamily {
    pure: DensityMatrix,
    epsilons: Vec<f64>,
}

impl RadialFamily {
    pub fn new(pure: DensityMatrix, epsilons: Vec<f64>) -> Result<Self> {
        require_rank_one(&pure)?;
        if epsilons.is_empty() {
            return Err(Error::Parameter(
                "need at least one smoothing strength".into(),
            ));
        }
        for &e in &epsilons {
            if !(e > 0.0 && e < 0.5) {
                return Err(Error::Parameter(format!(
                    "smoothing strengths must lie in (0, 1/2), got {e}"
                )));
            }
        }
        if epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Parameter(
                "smoothing strengths must strictly decrease".into(),
            ));
        }
        Ok(RadialFamily { pure, epsilons })
    }

    pub fn pure(&self) -> &DensityMatrix {
        &self.pure
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    /// `(1 - eps) rho + eps (I - rho)/(n - 1)`: full rank for eps > 0,
    /// trace one by construction.
    pub fn member(&self, epsilon: f64) -> Result<DensityMatrix> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::Parameter(format!(
                "smoothing strength must lie in (0, 1/2), got {epsilon}"
            )));
        }
        let n = self.pure.dim();
        let spread = epsilon / (n as f64 - 1.0);
        let mixed = self.pure.matrix().map(|e| e * (1.0 - epsilon - spread))
            + linalg::identity(n).map(|e| e * spread);
        DensityMatrix::new(mixed)
    }
}

/// Every equality that pins the metric quantities on a rank-one state:
/// the metric-adjusted quantities coincide with their covariance
/// counterparts, the tilde correlation vanishes, and sandwiching by the
/// state multiplies traces. The report's rhs is the worst absolute
/// residual over all of them.
pub fn pure_equalities(
    pure: &DensityMatrix,
    f: &MonotoneFunction<f64>,
    a: &Observable,
    b: &Observable,
) -> Result<GapReport> {
    require_rank_one(pure)?;
    let ctx = MetricContext::new(pure.clone(), f.clone());
    let va = pure.variance(a)?;
    let vb = pure.variance(b)?;
    let cov = pure.covariance(a, b)?;
    let cov_s = cov.re;

    let ia = ctx.skew_information(a)?;
    let ib = ctx.skew_information(b)?;
    let corr = ctx.f_correlation(a, b)?;
    let tilde_corr = c_correlation(pure, &f.tilde(), a, b)?;

    let r = pure.matrix();
    let pa = r * a.matrix() * r;
    let pb = r * b.matrix() * r;
    let product_rule = ((&pa * &pb).trace() - pa.trace() * pb.trace()).norm();

    let residual = [
        ((va * vb - cov_s * cov_s) - (ia * ib - corr.re * corr.re)).abs(),
        (ia - va).abs(),
        (ib - vb).abs(),
        (corr - cov).norm(),
        tilde_corr.abs(),
        product_rule,
    ]
    .into_iter()
    .fold(0.0_f64, f64::max);

    let scale = (va * vb).abs().max(1.0);
    Ok(GapReport::new(
        "pure-equalities",
        f.label(),
        pure.dim(),
        None,
        0.0,
        residual,
        1e-9 * scale,
        fingerprint(pure.matrix()),
    ))
}

/// One evaluation of the interior quantity along the sweep.
#[derive(Debug, Clone)]
pub struct RadialRow {
    pub f_label: String,
    pub epsilon: f64,
    /// `I(A) I(B) - (Re Corr(A,B))^2` on the smoothed state.
    pub q: f64,
    /// `|q - limit|`.
    pub residual: f64,
}

/// The sweep: interior values per function and strength, their spread
/// across functions at each strength, and whether each function's
/// residual shrinks monotonically as the smoothing is removed.
#[derive(Debug, Clone)]
pub struct RadialSweep {
    /// Boundary value `Var(A)Var(B) - Cov(A,B)^2` on the rank-one state.
    pub limit: f64,
    pub rows: Vec<RadialRow>,
    /// Per strength: spread of q across the swept functions.
    pub spreads: Vec<(f64, f64)>,
    /// Per function: residuals nonincreasing toward the smallest strength.
    pub monotone: Vec<(String, bool)>,
    /// Worst residual at the smallest strength.
    pub final_residual: f64,
    /// Spread at the smallest strength.
    pub final_spread: f64,
}

/// Evaluate the interior quantity on every family member for every given
/// function. Only functions with `f(0) > 0` are admitted; the others sit
/// at zero throughout the interior and have nothing to converge.
pub fn radial_limit_sweep(
    family: &RadialFamily,
    fs: &[MonotoneFunction<f64>],
    a: &Observable,
    b: &Observable,
) -> Result<RadialSweep> {
    if fs.is_empty() {
        return Err(Error::Parameter(
            "need at least one function to sweep".into(),
        ));
    }
    for f in fs {
        if !f.is_regular() {
            return Err(Error::Parameter(format!(
                "{} has f(0) = 0 and is excluded from the radial sweep",
                f.label()
            )));
        }
    }
    let pure = family.pure();
    let va = pure.variance(a)?;
    let vb = pure.variance(b)?;
    let cov_s = pure.sym_covariance(a, b)?;
    let limit = va * vb - cov_s * cov_s;

    let mut rows = Vec::with_capacity(fs.len() * family.epsilons().len());
    let mut monotone = Vec::with_capacity(fs.len());
    for f in fs {
        let mut last_residual = f64::INFINITY;
        let mut shrinking = true;
        for &eps in family.epsilons() {
            let member = family.member(eps)?;
            let ctx = MetricContext::new(member, f.clone());
            let corr = ctx.f_correlation(a, b)?.re;
            let q = ctx.skew_information(a)? * ctx.skew_information(b)? - corr * corr;
            let residual = (q - limit).abs();
            if residual > last_residual + 1e-12 * limit.abs().max(1.0) {
                shrinking = false;
            }
            last_residual = residual;
            rows.push(RadialRow {
                f_label: f.label().to_string(),
                epsilon: eps,
                q,
                residual,
            });
        }
        monotone.push((f.label().to_string(), shrinking));
    }

    let n_eps = family.epsilons().len();
    let mut spreads = Vec::with_capacity(n_eps);
    for (k, &eps) in family.epsilons().iter().enumerate() {
        let qs = (0..fs.len()).map(|i| rows[i * n_eps + k].q);
        let (lo, hi) = qs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), q| {
            (lo.min(q), hi.max(q))
        });
        spreads.push((eps, hi - lo));
    }

    let final_residual = (0..fs.len())
        .map(|i| rows[i * n_eps + n_eps - 1].residual)
        .fold(0.0_f64, f64::max);
    let final_spread = spreads.last().map(|&(_, s)| s).unwrap_or(0.0);

    Ok(RadialSweep {
        limit,
        rows,
        spreads,
        monotone,
        final_residual,
        final_spread,
    })
}
