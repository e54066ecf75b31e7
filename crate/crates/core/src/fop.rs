//! Catalog of normalized symmetric operator monotone functions on (0, inf).
//!
//! Every entry satisfies f(1) = 1, t f(1/t) = f(t), and the envelope
//! 2x/(1+x) <= f(x) <= (1+x)/2. The value f(0) = lim_{x->0} f(x)
//! (= lim_{x->inf} f(x)/x) is stored analytically; entries with f(0) > 0
//! are called regular. The transform
//!
//! f~(x) = ((x+1) - (x-1)^2 f(0)/f(x)) / 2
//!
//! maps a regular entry to a non-regular one and any non-regular entry to
//! the arithmetic mean generator (1+x)/2.
//!
//! Numeric tolerances in [`check_axioms`] and [`tilde_leq`] are calibrated
//! for `f64`; other scalars get the calculus but not the certification.

use crate::error::{Error, Result};
use crate::report::GapReport;
use crate::scalar::Real;
use std::sync::Arc;

/// Evaluator shape for user-supplied entries.
pub type CustomEval<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Which function a [`MonotoneFunction`] represents.
#[derive(Clone)]
pub enum FnKind<T: Real> {
    /// (1+x)/2, the arithmetic mean generator. Regular, f(0) = 1/2.
    Sld,
    /// ((1+sqrt(x))/2)^2. Regular, f(0) = 1/4.
    Wy,
    /// beta(1-beta)(x-1)^2 / ((x^beta - 1)(x^{1-beta} - 1)) for
    /// beta in (-1,0) or (0,1/2]. Regular with f(0) = beta(1-beta) on the
    /// positive branch, non-regular on the negative one.
    Wyd {
        /// Interpolation exponent.
        beta: f64,
    },
    /// 2x/(x+1), the harmonic mean generator. Non-regular.
    Rld,
    /// (x-1)/ln x, the logarithmic mean generator. Non-regular.
    Bkm,
    /// ((1+x^gamma)/2)^{1/gamma} for gamma in [1/2, 1], interpolating
    /// between Wy (gamma = 1/2) and Sld (gamma = 1). Regular.
    PowerBridge {
        /// Power-mean exponent.
        gamma: f64,
    },
    /// sqrt(x), the geometric mean generator. Non-regular.
    Sqrt,
    /// The transform f~ of another entry.
    TildeOf(Box<MonotoneFunction<T>>),
    /// User-supplied evaluator with an explicit f(0). Not certified by
    /// construction; run [`check_axioms`] before trusting it.
    Custom {
        /// Declared limit f(0).
        f_zero: f64,
        /// Pointwise evaluator for x > 0.
        eval: CustomEval<T>,
    },
}

/// A normalized symmetric operator monotone function together with its label.
#[derive(Clone)]
pub struct MonotoneFunction<T: Real = f64> {
    kind: FnKind<T>,
    label: String,
}

impl<T: Real> std::fmt::Debug for MonotoneFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MonotoneFunction({})", self.label)
    }
}

fn wyd_eval<T: Real>(beta: f64, x: T) -> T {
    let u = x - T::one();
    if u.abs() < T::of(1e-6) {
        // second-order expansion at x = 1; the closed form cancels there
        let c = T::of(beta * beta - beta + 1.0);
        return T::one() + u / T::of(2.0) - c * u * u / T::of(12.0);
    }
    let lx = x.ln();
    let d1 = (T::of(beta) * lx).exp_m1();
    let d2 = (T::of(1.0 - beta) * lx).exp_m1();
    T::of(beta * (1.0 - beta)) * u * u / (d1 * d2)
}

fn bkm_eval<T: Real>(x: T) -> T {
    let u = x - T::one();
    if u.abs() < T::of(1e-6) {
        return T::one() + u / T::of(2.0) - u * u / T::of(12.0);
    }
    if u.abs() < T::of(0.5) {
        // ln x through ln_1p keeps precision where x - 1 is still accurate
        u / u.ln_1p()
    } else {
        // far from 1, plain ln avoids the 1 + u cancellation for small x
        u / x.ln()
    }
}

impl<T: Real> MonotoneFunction<T> {
    fn built_in(kind: FnKind<T>, label: String) -> Self {
        MonotoneFunction { kind, label }
    }

    /// Arithmetic mean generator (1+x)/2.
    pub fn sld() -> Self {
        Self::built_in(FnKind::Sld, "sld".into())
    }

    /// ((1+sqrt(x))/2)^2.
    pub fn wy() -> Self {
        Self::built_in(FnKind::Wy, "wy".into())
    }

    /// Two-parameter interpolation; `beta` must lie in (-1,0) or (0,1/2].
    pub fn wyd(beta: f64) -> Result<Self> {
        let ok = beta.is_finite() && ((-1.0 < beta && beta < 0.0) || (0.0 < beta && beta <= 0.5));
        if !ok {
            return Err(Error::Parameter(format!(
                "wyd beta must lie in (-1,0) or (0,1/2], got {beta}"
            )));
        }
        Ok(Self::built_in(FnKind::Wyd { beta }, format!("wyd:{beta}")))
    }

    /// Harmonic mean generator 2x/(x+1).
    pub fn rld() -> Self {
        Self::built_in(FnKind::Rld, "rld".into())
    }

    /// Logarithmic mean generator (x-1)/ln x.
    pub fn bkm() -> Self {
        Self::built_in(FnKind::Bkm, "bkm".into())
    }

    /// Power-mean bridge; `gamma` must lie in [1/2, 1].
    pub fn power_bridge(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && (0.5..=1.0).contains(&gamma)) {
            return Err(Error::Parameter(format!(
                "bridge gamma must lie in [1/2, 1], got {gamma}"
            )));
        }
        Ok(Self::built_in(
            FnKind::PowerBridge { gamma },
            format!("bridge:{gamma}"),
        ))
    }

    /// Geometric mean generator sqrt(x).
    pub fn sqrt() -> Self {
        Self::built_in(FnKind::Sqrt, "sqrt".into())
    }

    /// User-supplied entry with a declared f(0); not certified.
    pub fn custom(
        label: impl Into<String>,
        f_zero: f64,
        eval: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(f_zero.is_finite() && (0.0..=0.5).contains(&f_zero)) {
            return Err(Error::Parameter(format!(
                "custom f(0) must lie in [0, 1/2], got {f_zero}"
            )));
        }
        Ok(MonotoneFunction {
            kind: FnKind::Custom {
                f_zero,
                eval: Arc::new(eval),
            },
            label: format!("custom:{}", label.into()),
        })
    }

    /// Parse a text key: `sld`, `wy`, `wyd:<beta>`, `rld`, `bkm`,
    /// `bridge:<gamma>`, `sqrt`.
    pub fn from_key(key: &str) -> Result<Self> {
        let as_config = |e: Error| Error::Config(format!("bad function key '{key}': {e}"));
        match key {
            "sld" => Ok(Self::sld()),
            "wy" => Ok(Self::wy()),
            "rld" => Ok(Self::rld()),
            "bkm" => Ok(Self::bkm()),
            "sqrt" => Ok(Self::sqrt()),
            _ => {
                if let Some(v) = key.strip_prefix("wyd:") {
                    let beta: f64 = v
                        .parse()
                        .map_err(|_| Error::Config(format!("bad function key '{key}'")))?;
                    Self::wyd(beta).map_err(as_config)
                } else if let Some(v) = key.strip_prefix("bridge:") {
                    let gamma: f64 = v
                        .parse()
                        .map_err(|_| Error::Config(format!("bad function key '{key}'")))?;
                    Self::power_bridge(gamma).map_err(as_config)
                } else {
                    Err(Error::Config(format!("unknown function key '{key}'")))
                }
            }
        }
    }

    /// Stable label, equal to the parse key for built-ins.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Kind accessor.
    pub fn kind(&self) -> &FnKind<T> {
        &self.kind
    }

    /// False for [`FnKind::Custom`] entries, whose axioms are the caller's
    /// responsibility.
    pub fn verified(&self) -> bool {
        !matches!(self.kind, FnKind::Custom { .. })
    }

    /// The analytic limit f(0).
    pub fn f_zero(&self) -> T {
        match &self.kind {
            FnKind::Sld => T::of(0.5),
            FnKind::Wy => T::of(0.25),
            FnKind::Wyd { beta } => {
                if *beta > 0.0 {
                    T::of(beta * (1.0 - beta))
                } else {
                    T::zero()
                }
            }
            FnKind::Rld | FnKind::Bkm | FnKind::Sqrt => T::zero(),
            FnKind::PowerBridge { gamma } => T::of(0.5f64.powf(1.0 / gamma)),
            FnKind::TildeOf(inner) => {
                if inner.f_zero() == T::zero() {
                    T::of(0.5)
                } else {
                    T::zero()
                }
            }
            FnKind::Custom { f_zero, .. } => T::of(*f_zero),
        }
    }

    /// True when f(0) > 0.
    pub fn is_regular(&self) -> bool {
        self.f_zero() > T::zero()
    }

    /// Evaluate at `x >= 0`; x = 0 returns f(0) by continuity.
    pub fn eval(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(Error::Domain(format!(
                "{} is defined on [0, inf), got {x}",
                self.label
            )));
        }
        if x == T::zero() {
            return Ok(self.f_zero());
        }
        Ok(match &self.kind {
            FnKind::Sld => (T::one() + x) / T::of(2.0),
            FnKind::Wy => {
                let s = (T::one() + x.sqrt()) / T::of(2.0);
                s * s
            }
            FnKind::Wyd { beta } => wyd_eval(*beta, x),
            FnKind::Rld => T::of(2.0) * x / (x + T::one()),
            FnKind::Bkm => bkm_eval(x),
            FnKind::PowerBridge { gamma } => {
                let g = T::of(*gamma);
                ((T::one() + x.powf(g)) / T::of(2.0)).powf(T::one() / g)
            }
            FnKind::Sqrt => x.sqrt(),
            FnKind::TildeOf(inner) => {
                let f0 = inner.f_zero();
                if f0 == T::zero() {
                    (T::one() + x) / T::of(2.0)
                } else {
                    let d = x - T::one();
                    ((x + T::one()) - d * d * f0 / inner.eval(x)?) / T::of(2.0)
                }
            }
            FnKind::Custom { eval, .. } => eval(x),
        })
    }

    /// The transform f~. Non-regular entries map to the arithmetic form
    /// without ever evaluating the original.
    pub fn tilde(&self) -> Self {
        MonotoneFunction {
            kind: FnKind::TildeOf(Box::new(self.clone())),
            label: format!("tilde({})", self.label),
        }
    }
}

/// Default catalog, table order plus the geometric and bridge entries.
pub fn catalog<T: Real>() -> Vec<MonotoneFunction<T>> {
    vec![
        MonotoneFunction::rld(),
        MonotoneFunction::wyd(-0.5).expect("in range"),
        MonotoneFunction::bkm(),
        MonotoneFunction::wyd(0.1).expect("in range"),
        MonotoneFunction::wyd(0.25).expect("in range"),
        MonotoneFunction::wyd(0.49).expect("in range"),
        MonotoneFunction::wy(),
        MonotoneFunction::sld(),
        MonotoneFunction::sqrt(),
        MonotoneFunction::power_bridge(0.75).expect("in range"),
    ]
}

/// Catalog entries with f(0) > 0.
pub fn regular_catalog<T: Real>() -> Vec<MonotoneFunction<T>> {
    catalog().into_iter().filter(|f| f.is_regular()).collect()
}

/// Strictly increasing evaluation grid of positive points.
#[derive(Debug, Clone)]
pub struct FunctionGrid<T: Real = f64> {
    points: Vec<T>,
}

impl<T: Real> FunctionGrid<T> {
    /// Validate positivity and strict monotonicity.
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parameter("grid must be nonempty".into()));
        }
        for w in points.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Parameter(
                    "grid points must be strictly increasing".into(),
                ));
            }
        }
        if !(points[0] > T::zero()) {
            return Err(Error::Parameter("grid points must be positive".into()));
        }
        Ok(FunctionGrid { points })
    }

    /// 41 ratio-spaced points across [1e-4, 1e4] plus near-1 probes
    /// {1 - 1e-6, 1, 1 + 1e-6}; 44 points total.
    pub fn default_log() -> Self {
        let ratio = T::of(10.0).powf(T::of(0.2));
        let mut pts = Vec::with_capacity(44);
        let mut x = T::of(1e-4);
        for _ in 0..41 {
            pts.push(x);
            x = x * ratio;
        }
        pts.push(T::of(1.0 - 1e-6));
        pts.push(T::one());
        pts.push(T::of(1.0 + 1e-6));
        pts.sort_by(|a, b| a.partial_cmp(b).expect("grid points are ordered"));
        pts.dedup_by(|a, b| a == b);
        FunctionGrid::new(pts).expect("default grid is valid")
    }

    /// Grid points, ascending.
    pub fn points(&self) -> &[T] {
        &self.points
    }
}

/// Check normalization, symmetry, monotonicity along the grid, and the
/// harmonic/arithmetic envelope. The report's rhs is the worst relative
/// violation found; the check passes when that stays within 1e-12.
pub fn check_axioms<T: Real>(f: &MonotoneFunction<T>, grid: &FunctionGrid<T>) -> Result<GapReport> {
    let one = T::one();
    let two = T::of(2.0);
    let mut worst = T::zero();
    let mut track = |v: T| {
        if v > worst {
            worst = v;
        }
    };

    track((f.eval(one)? - one).abs());

    let mut prev: Option<(T, T)> = None;
    for &x in grid.points() {
        let fx = f.eval(x)?;
        let unit = fx.abs().max(one);

        let sym = x * f.eval(one / x)?;
        track((sym - fx).abs() / unit);

        let low = two * x / (one + x);
        let high = (one + x) / two;
        track((low - fx).max(T::zero()) / low.abs().max(one));
        track((fx - high).max(T::zero()) / high.abs().max(one));

        if let Some((_, fprev)) = prev {
            track((fprev - fx).max(T::zero()) / fprev.abs().max(one));
        }
        prev = Some((x, fx));
    }

    Ok(GapReport::new(
        "axioms",
        f.label(),
        0,
        None,
        0.0,
        worst.as_f64(),
        1e-12,
        "",
    ))
}

/// Pointwise comparison f~ <= g~ over the grid, with 1e-12 slack.
///
/// The equivalent ratio form f(0)/f(x) >= g(0)/g(x) is computed alongside:
/// f~(x) - g~(x) = (x-1)^2 (g(0)/g(x) - f(0)/f(x)) / 2, so the two routes
/// must produce the same residual. Disagreement beyond 1e-9 of scale is an
/// internal-consistency error.
pub fn tilde_leq<T: Real>(
    f: &MonotoneFunction<T>,
    g: &MonotoneFunction<T>,
    grid: &FunctionGrid<T>,
) -> Result<bool> {
    let ft = f.tilde();
    let gt = g.tilde();
    let f0 = f.f_zero();
    let g0 = g.f_zero();
    let slack = T::of(1e-12);
    let mut ok = true;
    for &x in grid.points() {
        let r1 = ft.eval(x)? - gt.eval(x)?;
        let d = x - T::one();
        let r2 = d * d * (g0 / g.eval(x)? - f0 / f.eval(x)?) / T::of(2.0);
        let scale = r1.abs().max(r2.abs()).max(T::one());
        if (r1 - r2).abs() > T::of(1e-9) * scale {
            return Err(Error::InternalConsistency(format!(
                "tilde ordering routes disagree at x = {x}: {r1} vs {r2}"
            )));
        }
        if r1 > slack {
            ok = false;
        }
    }
    Ok(ok)
}
