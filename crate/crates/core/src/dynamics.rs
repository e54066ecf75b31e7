//! Unitary evolution under a fixed Hamiltonian and the speed form of the
//! uncertainty bound along a trajectory.

use crate::error::{Error, Result};
use crate::fop::MonotoneFunction;
use crate::inequalities::main_gap;
use crate::linalg;
use crate::report::{fingerprint, GapReport};
use crate::states::{DensityMatrix, Observable};
use crate::CMatrix;
use num_complex::Complex64;

/// Trace drift beyond this after a unitary step is a numerics bug.
const TRACE_DRIFT_TOL: f64 = 1e-12;

/// Step size for the derivative self-check.
const DERIVATIVE_STEP: f64 = 1e-5;

/// An initial state, a Hamiltonian on the same space, and a time grid.
#[derive(Debug, Clone)]
pub struct Evolution {
    rho0: DensityMatrix,
    hamiltonian: Observable,
    times: Vec<f64>,
    energies: Vec<f64>,
    frame: CMatrix,
}

impl Evolution {
    pub fn new(rho0: DensityMatrix, hamiltonian: Observable, times: Vec<f64>) -> Result<Self> {
        if rho0.dim() != hamiltonian.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} vs hamiltonian dimension {}",
                rho0.dim(),
                hamiltonian.dim()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Parameter("times must be finite".into()));
        }
        let (energies, frame) = linalg::hermitian_eigen(hamiltonian.matrix());
        Ok(Evolution {
            rho0,
            hamiltonian,
            times,
            energies,
            frame,
        })
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn hamiltonian(&self) -> &Observable {
        &self.hamiltonian
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// The propagator `exp(-i t H)`.
    fn propagator(&self, t: f64) -> CMatrix {
        let n = self.energies.len();
        let mut phases = CMatrix::zeros(n, n);
        for (k, &e) in self.energies.iter().enumerate() {
            phases[(k, k)] = Complex64::new(0.0, -t * e).exp();
        }
        &self.frame * phases * self.frame.adjoint()
    }

    /// The state at time t. Conjugation by the propagator preserves trace
    /// and spectrum; any drift beyond roundoff is reported, not repaired.
    pub fn state_at(&self, t: f64) -> Result<DensityMatrix> {
        if !t.is_finite() {
            return Err(Error::Parameter(format!("time must be finite, got {t}")));
        }
        let u = self.propagator(t);
        let moved = linalg::hermitize(&(&u * self.rho0.matrix() * u.adjoint()));
        let tr = moved.trace().re;
        if (tr - 1.0).abs() > TRACE_DRIFT_TOL {
            return Err(Error::InternalConsistency(format!(
                "trace drifted to {tr:.17} after evolving to t = {t}"
            )));
        }
        DensityMatrix::new(moved.map(|e| e / tr))
    }

    /// The state at every grid time.
    pub fn trajectory(&self) -> Result<Vec<(f64, DensityMatrix)>> {
        self.times
            .iter()
            .map(|&t| Ok((t, self.state_at(t)?)))
            .collect()
    }

    /// Central finite difference of the trajectory against `i[rho_t, H]`.
    /// The report's rhs is the relative residual; it passes below 1e-6.
    pub fn derivative_check(&self, t: f64) -> Result<GapReport> {
        let h = DERIVATIVE_STEP;
        let fwd = self.state_at(t + h)?;
        let bwd = self.state_at(t - h)?;
        let diff = (fwd.matrix() - bwd.matrix()).map(|e| e / (2.0 * h));
        let here = self.state_at(t)?;
        let expected = here.commutator_tangent(&self.hamiltonian)?;
        let residual = (diff - expected.matrix()).norm() / expected.matrix().norm().max(1.0);
        Ok(GapReport::new(
            "derivative-check",
            "-",
            here.dim(),
            None,
            0.0,
            residual,
            1e-6,
            fingerprint(here.matrix()),
        ))
    }

    /// The speed bound at each grid time, pairing the Hamiltonian as
    /// generator with a second observable.
    pub fn bound_along(
        &self,
        f: &MonotoneFunction<f64>,
        other: &Observable,
        seed: Option<u64>,
    ) -> Result<Vec<GapReport>> {
        self.times
            .iter()
            .map(|&t| dynamic_bound(&self.state_at(t)?, f, &self.hamiltonian, other, seed))
            .collect()
    }
}

/// Unsquared form of the main bound:
/// `sqrt(Var(H)Var(K) - Cov(H,K)^2) >= (f(0)/2) Area(i[rho,H], i[rho,K])`.
/// Evaluated by square-rooting both routes of the squared bound, so it
/// inherits that check's dual-route agreement; the verdicts must match.
pub fn dynamic_bound(
    rho: &DensityMatrix,
    f: &MonotoneFunction<f64>,
    h: &Observable,
    k: &Observable,
    seed: Option<u64>,
) -> Result<GapReport> {
    let squared = main_gap(rho, f, h, k, seed)?;
    let scale = rho.variance(h)? * rho.variance(k)?;
    let floor = -1e-10 * scale.abs().max(1.0);
    for side in [squared.lhs, squared.rhs] {
        if side < floor {
            return Err(Error::InternalConsistency(format!(
                "squared bound went negative: {side:.6e}"
            )));
        }
    }
    let lhs = squared.lhs.max(0.0).sqrt();
    let rhs = squared.rhs.max(0.0).sqrt();
    let report = GapReport::new(
        "dynamic-bound",
        f.label(),
        rho.dim(),
        seed,
        lhs,
        rhs,
        1e-9 * scale.abs().sqrt().max(1.0),
        squared.state_fingerprint.clone(),
    );
    if report.passed() != squared.passed() {
        return Err(Error::InternalConsistency(format!(
            "speed form verdict {} disagrees with squared form {}",
            report.verdict, squared.verdict
        )));
    }
    Ok(report)
}
