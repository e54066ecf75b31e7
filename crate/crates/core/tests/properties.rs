//! Randomized structural properties of the function catalog, the means,
//! and the superoperator layer.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qfiw::fop::{catalog, check_axioms, FunctionGrid, MonotoneFunction};
use qfiw::linalg;
use qfiw::means::{matrix_mean, scalar_mean, superop_apply, PositiveMatrixPair, SuperopMode};
use qfiw::CMatrix;

fn complex_matrix(n: usize, re: &[f64], im: &[f64]) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| Complex64::new(re[r * n + c], im[r * n + c]))
}

fn pd_from(n: usize, re: &[f64], im: &[f64]) -> CMatrix {
    let g = complex_matrix(n, re, im);
    &g * g.adjoint() + linalg::identity(n).map(|e| e * 0.1)
}

fn hermitian_from(n: usize, re: &[f64], im: &[f64]) -> CMatrix {
    linalg::hermitize(&complex_matrix(n, re, im))
}

fn entries() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 9)
}

proptest! {
    #[test]
    fn axioms_hold_across_the_parameter_ranges(
        beta in prop_oneof![-0.99..-0.01f64, 0.01..0.5f64],
        gamma in 0.5..1.0f64,
    ) {
        let grid = FunctionGrid::<f64>::default_log();
        for f in [
            MonotoneFunction::wyd(beta).unwrap(),
            MonotoneFunction::power_bridge(gamma).unwrap(),
        ] {
            let report = check_axioms(&f, &grid).unwrap();
            prop_assert!(report.passed(), "{}: worst {}", f.label(), report.rhs);
        }
    }

    #[test]
    fn scalar_means_obey_envelope_symmetry_and_scaling(
        x in 1e-4..1e3f64,
        y in 1e-4..1e3f64,
        c in 1e-2..1e2f64,
        fidx in 0..10usize,
    ) {
        let f = &catalog::<f64>()[fidx];
        let m = scalar_mean(f, x, y).unwrap();
        let harm = 2.0 * x * y / (x + y);
        let arith = 0.5 * (x + y);
        prop_assert!(m >= harm - 1e-12 * arith, "{} below harmonic", f.label());
        prop_assert!(m <= arith * (1.0 + 1e-12), "{} above arithmetic", f.label());
        let sym = scalar_mean(f, y, x).unwrap();
        prop_assert!((m - sym).abs() <= 1e-12 * m.max(1.0));
        let scaled = scalar_mean(f, c * x, c * y).unwrap();
        prop_assert!((scaled - c * m).abs() <= 1e-12 * (c * m).max(1.0));
    }

    #[test]
    fn scalar_means_are_monotone_in_each_slot(
        x in 1e-3..1e3f64,
        dx in 0.0..10.0f64,
        y in 1e-3..1e3f64,
        fidx in 0..10usize,
    ) {
        let f = &catalog::<f64>()[fidx];
        let lo = scalar_mean(f, x, y).unwrap();
        let hi = scalar_mean(f, x + dx, y).unwrap();
        prop_assert!(hi >= lo - 1e-12 * hi.abs().max(1.0), "{}", f.label());
    }

    #[test]
    fn double_transform_collapses_to_the_envelope(
        x in 1e-4..1e4f64,
        fidx in 0..10usize,
    ) {
        // two transforms send regular entries to the arithmetic form and
        // non-regular ones to the harmonic form
        let f = &catalog::<f64>()[fidx];
        let tt = f.tilde().tilde();
        let want = if f.is_regular() {
            0.5 * (1.0 + x)
        } else {
            2.0 * x / (1.0 + x)
        };
        let got = tt.eval(x).unwrap();
        prop_assert!(
            (got - want).abs() <= 1e-10 * want.max(1.0),
            "{}: {got} vs {want}",
            f.label()
        );
    }

    #[test]
    fn matrix_means_are_congruence_invariant(
        are in entries(), aim in entries(),
        bre in entries(), bim in entries(),
        tre in entries(), tim in entries(),
        fidx in 0..10usize,
    ) {
        let a = pd_from(3, &are, &aim);
        let b = pd_from(3, &bre, &bim);
        // keep the congruence safely invertible
        let t = complex_matrix(3, &tre, &tim).map(|e| e * 0.3)
            + linalg::identity(3).map(|e| e * 2.0);
        let f = &catalog::<f64>()[fidx];
        let m = matrix_mean(f, &PositiveMatrixPair::new(a.clone(), b.clone()).unwrap()).unwrap();
        let moved = matrix_mean(
            f,
            &PositiveMatrixPair::new(t.adjoint() * &a * &t, t.adjoint() * &b * &t).unwrap(),
        )
        .unwrap();
        let small = t.adjoint() * m * &t;
        let scale = moved.norm().max(1.0);
        prop_assert!(
            (&moved - &small).norm() <= 1e-9 * scale,
            "{}: {}",
            f.label(),
            (&moved - &small).norm()
        );
    }

    #[test]
    fn mean_superoperator_is_positive(
        seed in 0..1_000_000u64,
        xre in entries(), xim in entries(),
        fidx in 0..10usize,
    ) {
        let rho = common::draw_state(3, seed);
        let x = hermitian_from(3, &xre, &xim);
        let f = &catalog::<f64>()[fidx];
        let y = superop_apply(f, rho.spec(), &x, SuperopMode::Mean).unwrap();
        let inner = (x.adjoint() * &y).trace().re;
        prop_assert!(inner >= -1e-10 * x.norm_squared().max(1.0), "{}", f.label());
    }
}
