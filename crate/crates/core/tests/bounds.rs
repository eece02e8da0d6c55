use proptest::prelude::*;

use logspec::bounds::{self, Verdict};
use logspec::coeffs::OperatorParams;
use logspec::galerkin::{eigensolve, DomainDescriptor, DomainSummary, LatticeDomain, Method, Spectrum, DEFAULT_TOL};

fn p(dim: usize, m: u32) -> OperatorParams {
    OperatorParams::new(dim, m).unwrap()
}

fn spectrum_of(mut values: Vec<f64>) -> Spectrum {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Spectrum {
        params: p(1, 2),
        domain: DomainSummary { descriptor: DomainDescriptor::Interval { a: 0.0, b: 1.0 }, h: 1e-3, cells: 1000, volume: 1.0 },
        eigenvalues: values,
        residuals: vec![0.0; n],
        converged: vec![true; n],
        method: Method::Dense,
        padding: None,
        tolerance: 0.0,
    }
}

#[test]
fn even_case_certificates_pass_on_galerkin_spectrum() {
    let d = LatticeDomain::interval(0.0, 1.0, 1.0 / 256.0).unwrap();
    let s = eigensolve(&d, p(1, 2), 60, Method::Dense, DEFAULT_TOL).unwrap();
    let certs = bounds::eig_lower_certificates(&s, None, false).unwrap();
    assert!(certs.iter().all(|c| c.verdict == Verdict::Pass));
    let strict = bounds::eig_lower_certificates(&s, None, true).unwrap();
    assert_eq!(strict[0].verdict, Verdict::NotApplicable);
    assert!(strict[1..].iter().all(|c| c.verdict == Verdict::Pass));
}

#[test]
fn ball_bound_sits_above_galerkin_upper_estimates() {
    // Galerkin values bound λ_{3,1}(B_{1/2}) from above and decrease under
    // refinement, yet stay well below the closed-form "lower bound"
    let mut last = f64::INFINITY;
    for h in [1.0 / 16.0, 1.0 / 24.0] {
        let d = LatticeDomain::disk([0.0, 0.0], 0.5, h).unwrap();
        let s = eigensolve(&d, p(2, 3), 1, Method::Dense, DEFAULT_TOL).unwrap();
        assert!(s.eigenvalues[0] < last);
        last = s.eigenvalues[0];
        let c = bounds::ball_certificate(0.5, p(2, 3), Some(last)).unwrap();
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(c.bound_value > 2.0 * last, "{c:?}");
    }
}

#[test]
fn dilation_certificate_uses_both_endpoints() {
    let c = bounds::dilation_certificate(10.0, Some(5.0), 2.0, p(2, 3), 1.0).unwrap();
    assert_eq!(c.verdict, Verdict::Pass);
    let c = bounds::dilation_certificate(10.0, Some(9.5), 2.0, p(2, 3), 1.0).unwrap();
    assert_eq!(c.verdict, Verdict::Fail);
}

#[test]
fn small_volume_curve_has_the_logarithmic_rate() {
    for (dim, m) in [(1, 2), (2, 2), (2, 3)] {
        let params = p(dim, m);
        let lead = (2.0 / dim as f64).powi(m as i32);
        let gaps: Vec<f64> = [4, 8, 16, 32, 64]
            .iter()
            .map(|&e| {
                let v = 10f64.powi(-e);
                let scale = (1.0 / (v * -v.ln())).ln().powi(m as i32);
                (bounds::small_volume_curve(v, params).unwrap() / scale / lead - 1.0).abs()
            })
            .collect();
        // log-log corrections make the approach slow and not monotone
        assert!(gaps[4] < gaps[1] && gaps[4] < gaps[3], "N={dim} m={m}: {gaps:?}");
        assert!(gaps[4] < 0.05, "N={dim} m={m}: {gaps:?}");
    }
}

#[test]
fn lower_bound_log_branch_dips_for_moderate_k() {
    let at = |k| bounds::eig_lower_bound_value(k, p(1, 5), 1.0, Some(0.0), bounds::LogForm::Statement).unwrap();
    assert_eq!(at(3).branch, bounds::MinBranch::Log);
    assert!(at(4).value < at(3).value);
}

#[test]
fn rescaling_interval_may_be_empty() {
    // the two sides are independent bounds; report, do not assert, non-emptiness
    let (lo, hi) = bounds::rescaling_interval(-50.0, 1.5, p(1, 3), 1.0).unwrap();
    assert!(lo.is_finite() && hi.is_finite());
    let (lo, hi) = bounds::rescaling_interval(1.0, 1.01, p(1, 3), 1.0).unwrap();
    assert!(lo <= hi);
}

proptest! {
    #[test]
    fn sandwich_holds_on_arbitrary_spectra(
        values in prop::collection::vec(-50.0f64..200.0, 1..200),
        lambda in -60.0f64..220.0,
        h in 1e-3f64..5.0,
    ) {
        let s = spectrum_of(values);
        prop_assert_eq!(bounds::sandwich_certificate(&s, lambda, h).verdict, Verdict::Pass);
    }

    #[test]
    fn counting_and_riesz_are_monotone(
        values in prop::collection::vec(-50.0f64..200.0, 1..100),
        a in -60.0f64..220.0,
        b in -60.0f64..220.0,
    ) {
        let s = spectrum_of(values);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(bounds::counting_function(&s, lo) <= bounds::counting_function(&s, hi));
        prop_assert!(bounds::riesz_mean(&s, lo) <= bounds::riesz_mean(&s, hi));
        prop_assert!(bounds::riesz_mean(&s, lo) >= 0.0);
    }

    #[test]
    fn counting_bound_is_riesz_over_gap(m in 1u32..=4, dim in 1usize..=2, lambda in 0.5f64..100.0, gap in 0.1f64..50.0) {
        let params = p(dim, m);
        let eta = lambda + gap;
        let c = bounds::counting_upper_bound(lambda, eta, params, 1.0).unwrap();
        let r = bounds::riesz_upper_bound(eta, params, 1.0).unwrap();
        prop_assert!((c - r / (eta - lambda)).abs() <= 1e-14 * c.abs().max(1.0));
        // at fixed η, a larger λ shrinks η − λ and can only raise |bound|
        let closer = bounds::counting_upper_bound(lambda + 0.5 * gap, eta, params, 1.0).unwrap();
        prop_assert!(closer.abs() >= c.abs());
    }

    #[test]
    fn lower_bound_power_branch_is_non_decreasing_in_k(m in 2u32..=5, dim in 1usize..=2, volume in 0.01f64..10.0, k in 1usize..500) {
        let params = p(dim, m);
        let lambda1 = if m % 2 == 1 { Some(0.0) } else { None };
        let a = bounds::eig_lower_bound_value(k, params, volume, lambda1, bounds::LogForm::Statement).unwrap();
        let b = bounds::eig_lower_bound_value(k + 1, params, volume, lambda1, bounds::LogForm::Statement).unwrap();
        prop_assert!(b.power_term >= a.power_term);
    }

    #[test]
    fn lower_bound_is_non_decreasing_for_large_k(m in 2u32..=5, dim in 1usize..=2, volume in 0.01f64..10.0, e in 6.0f64..12.0) {
        let params = p(dim, m);
        let lambda1 = if m % 2 == 1 { Some(0.0) } else { None };
        let k = 10f64.powf(e) as usize;
        let a = bounds::eig_lower_bound_value(k, params, volume, lambda1, bounds::LogForm::Statement).unwrap().value;
        let b = bounds::eig_lower_bound_value(k + 1, params, volume, lambda1, bounds::LogForm::Statement).unwrap().value;
        prop_assert!(b >= a - 1e-12 * a.abs());
    }

    #[test]
    fn zero_point_bound_holds(tau in -2.0f64..6.0, m in 2u32..=4, dim in 1usize..=2) {
        let z = bounds::f1_zero(10f64.powf(tau), p(dim, m)).unwrap();
        prop_assert!(z.root >= z.lower_bound);
        prop_assert!((bounds::f1(z.root, m, dim) / 10f64.powf(tau) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn alternating_sum_stays_in_its_envelope(m in 1u32..=8, dim in 1usize..=2, extra in 0.0f64..100.0) {
        let params = p(dim, m);
        let a = 2.0 * (m as f64 - 1.0) / dim as f64 + extra;
        prop_assert_eq!(bounds::alternating_sum_certificate(params, a).unwrap().verdict, Verdict::Pass);
    }
}
