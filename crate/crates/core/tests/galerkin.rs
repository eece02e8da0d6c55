use proptest::prelude::*;

use logspec::coeffs::OperatorParams;
use logspec::galerkin::{
    apply_operator, assemble_dense, eigensolve, galerkin_stencil, refine_extrapolate, LatticeDomain, Method, DEFAULT_TOL,
};

fn p(dim: usize, m: u32) -> OperatorParams {
    OperatorParams::new(dim, m).unwrap()
}

#[test]
fn krylov_matches_dense_on_interval() {
    let d = LatticeDomain::interval(0.0, 1.0, 1.0 / 512.0).unwrap();
    for m in [1, 2, 3] {
        let a = eigensolve(&d, p(1, m), 8, Method::Dense, DEFAULT_TOL).unwrap();
        let b = eigensolve(&d, p(1, m), 8, Method::Krylov, DEFAULT_TOL).unwrap();
        assert!(b.all_converged(), "m={m}: {:?}", b.residuals);
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() < 1e-7 * (1.0 + x.abs()), "m={m}: {x} vs {y}");
        }
    }
}

#[test]
fn krylov_matches_dense_on_disk() {
    let d = LatticeDomain::disk([0.0, 0.0], 0.5, 1.0 / 24.0).unwrap();
    let a = eigensolve(&d, p(2, 2), 5, Method::Dense, DEFAULT_TOL).unwrap();
    let b = eigensolve(&d, p(2, 2), 5, Method::Krylov, DEFAULT_TOL).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x - y).abs() < 1e-7 * (1.0 + x.abs()));
    }
}

#[test]
fn dense_residuals_are_small() {
    let d = LatticeDomain::square(0.0, 1.0, 1.0 / 16.0).unwrap();
    let s = eigensolve(&d, p(2, 1), 12, Method::Dense, DEFAULT_TOL).unwrap();
    assert!(s.all_converged());
    assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn eigenvalues_decrease_along_ladder_and_extrapolate() {
    let ladder: Vec<_> = [64.0, 128.0, 256.0]
        .iter()
        .map(|n| eigensolve(&LatticeDomain::interval(0.0, 1.0, 1.0 / n).unwrap(), p(1, 2), 5, Method::Dense, DEFAULT_TOL).unwrap())
        .collect();
    let ex = refine_extrapolate(&ladder).unwrap();
    for (i, e) in ex.iter().enumerate() {
        assert!(!e.flagged);
        assert!(e.value <= ladder[2].eigenvalues[i]);
        let rate = e.rate.unwrap();
        assert!(rate > 0.5 && rate < 3.0, "rate {rate}");
    }
}

#[test]
fn mismatched_ladder_is_rejected() {
    let a = eigensolve(&LatticeDomain::interval(0.0, 1.0, 1.0 / 16.0).unwrap(), p(1, 1), 3, Method::Dense, DEFAULT_TOL).unwrap();
    let b = eigensolve(&LatticeDomain::interval(0.0, 1.0, 1.0 / 48.0).unwrap(), p(1, 1), 3, Method::Dense, DEFAULT_TOL).unwrap();
    assert!(refine_extrapolate(&[a.clone(), b.clone(), b]).is_err());
    assert!(refine_extrapolate(&[a]).is_err());
}

#[test]
fn k_out_of_range_is_an_error() {
    let d = LatticeDomain::interval(0.0, 1.0, 0.25).unwrap();
    assert!(eigensolve(&d, p(1, 1), 0, Method::Dense, DEFAULT_TOL).is_err());
    assert!(eigensolve(&d, p(1, 1), 5, Method::Dense, DEFAULT_TOL).is_err());
    assert!(eigensolve(&d, p(1, 1), 2, Method::Torus, DEFAULT_TOL).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matvec_agrees_with_dense_and_is_symmetric(
        m in 1u32..=3,
        cells in 4usize..40,
        seed in prop::collection::vec(-1.0f64..1.0, 40),
        other in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        let d = LatticeDomain::interval(0.0, 1.0, 1.0 / cells as f64).unwrap();
        let st = galerkin_stencil(&d, p(1, m)).unwrap();
        let n = d.len();
        let (u, w) = (&seed[..n], &other[..n]);
        let mu = apply_operator(&d, &st, u).unwrap();
        let mw = apply_operator(&d, &st, w).unwrap();
        let dense = assemble_dense(&d, &st).unwrap();
        let scale = 1.0 + st.max_abs() * n as f64;
        for i in 0..n {
            let slow: f64 = (0..n).map(|j| dense[(i, j)] * u[j]).sum();
            prop_assert!((mu[i] - slow).abs() <= 1e-11 * scale);
        }
        // ⟨Mu, w⟩ = ⟨u, Mw⟩
        let a: f64 = mu.iter().zip(w).map(|(x, y)| x * y).sum();
        let b: f64 = u.iter().zip(&mw).map(|(x, y)| x * y).sum();
        prop_assert!((a - b).abs() <= 1e-11 * scale);
    }

    #[test]
    fn even_order_quadratic_form_is_non_negative(
        cells in 4usize..48,
        v in prop::collection::vec(-1.0f64..1.0, 48),
    ) {
        let d = LatticeDomain::interval(0.0, 1.0, 1.0 / cells as f64).unwrap();
        let st = galerkin_stencil(&d, p(1, 2)).unwrap();
        let v = &v[..d.len()];
        let mv = apply_operator(&d, &st, v).unwrap();
        let q: f64 = mv.iter().zip(v).map(|(a, b)| a * b).sum();
        prop_assert!(q >= -1e-10 * (1.0 + st.max_abs()));
    }

    #[test]
    fn translation_leaves_spectrum_unchanged(shift in -3i32..3, cells in 8usize..32) {
        let h = 1.0 / cells as f64;
        let a = LatticeDomain::interval(0.0, 1.0, h).unwrap();
        let b = LatticeDomain::interval(shift as f64, shift as f64 + 1.0, h).unwrap();
        let sa = eigensolve(&a, p(1, 2), 3, Method::Dense, DEFAULT_TOL).unwrap();
        let sb = eigensolve(&b, p(1, 2), 3, Method::Dense, DEFAULT_TOL).unwrap();
        for (x, y) in sa.eigenvalues.iter().zip(&sb.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-10 * (1.0 + x.abs()));
        }
    }
}
