use proptest::prelude::*;
use repcheck_core::{
    correlation_to_f, f_tail_probability, f_to_correlation, fisher_z, inverse_fisher_z,
    normal_quantile, prediction_interval, regularized_incomplete_beta, se_total, Correlation,
    FStatistic, FisherZ, Probability,
};

fn corr(r: f64) -> Correlation {
    Correlation::new(r).unwrap()
}

fn alpha(a: f64) -> Probability {
    Probability::new(a).unwrap()
}

// Composite Simpson on the beta density; independent of the continued fraction.
fn beta_by_quadrature(x: f64, a: f64, b: f64) -> f64 {
    let density = |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0);
    let simpson = |hi: f64| {
        let n = 100_000;
        let h = hi / n as f64;
        let mut s = density(0.0) + density(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * density(i as f64 * h);
        }
        s * h / 3.0
    };
    simpson(x) / simpson(1.0)
}

#[test]
fn incomplete_beta_matches_quadrature() {
    for &(a, b) in &[
        (1.0, 1.0),
        (2.0, 2.0),
        (2.5, 3.0),
        (4.0, 2.5),
        (10.0, 7.0),
        (2.5, 20.0),
    ] {
        for i in 1..20 {
            let x = f64::from(i) / 20.0;
            let got = regularized_incomplete_beta(x, a, b).unwrap();
            let want = beta_by_quadrature(x, a, b);
            assert!(
                (got - want).abs() < 1e-10,
                "I_{x}({a},{b}) = {got}, quadrature {want}"
            );
        }
    }
}

#[test]
fn f_tail_converges_for_large_denominator_df() {
    for &df2 in &[2u32, 10, 100, 1_000, 100_000, 999_998, 10_000_000] {
        let mut prev = 1.0;
        for i in 0..=400 {
            let f = f64::from(i) * 0.05;
            let p = f_tail_probability(f, 1, df2).unwrap();
            assert!(p <= prev + 1e-15, "df2 = {df2}, f = {f}");
            prev = p;
        }
    }
}

proptest! {
    #[test]
    fn quantile_is_antisymmetric(p in 1e-10f64..0.5) {
        let lo = normal_quantile(p).unwrap();
        let hi = normal_quantile(1.0 - p).unwrap();
        prop_assert!((lo + hi).abs() < 1e-9, "p = {p}: {lo} vs {hi}");
    }

    #[test]
    fn quantile_is_increasing(p in 1e-8f64..0.999, step in 1e-6f64..1e-3) {
        let q = (p + step).min(1.0 - 1e-9);
        prop_assume!(q > p);
        prop_assert!(normal_quantile(p).unwrap() < normal_quantile(q).unwrap());
    }

    #[test]
    fn incomplete_beta_reflection(x in 0.0f64..=1.0, a in 0.05f64..60.0, b in 0.05f64..60.0) {
        let lhs = regularized_incomplete_beta(x, a, b).unwrap()
            + regularized_incomplete_beta(1.0 - x, b, a).unwrap();
        prop_assert!((lhs - 1.0).abs() < 1e-10, "x={x} a={a} b={b}: {lhs}");
    }

    #[test]
    fn f_tail_is_nonincreasing(f in 0.0f64..50.0, df in 0.0f64..10.0, df1 in 1u32..20, df2 in 1u32..500) {
        let p0 = f_tail_probability(f, df1, df2).unwrap();
        let p1 = f_tail_probability(f + df, df1, df2).unwrap();
        prop_assert!(p1 <= p0 + 1e-15);
    }

    #[test]
    fn fisher_z_is_odd(r in -0.999f64..0.999) {
        prop_assert_eq!(fisher_z(corr(-r)).get(), -fisher_z(corr(r)).get());
    }

    #[test]
    fn f_correlation_round_trip(r in -0.999f64..0.999, df1 in 1u32..10, df2 in 1u32..10_000) {
        prop_assume!(r * r * f64::from(df1) < 1.0 - 1e-6);
        let stat = correlation_to_f(corr(r), df1, df2).unwrap();
        let back = f_to_correlation(stat).unwrap().get();
        prop_assert!((back - r.abs()).abs() < 1e-10, "{r} -> {} -> {back}", stat.f);
    }

    #[test]
    fn f_to_correlation_is_increasing(f in 0.0f64..1e4, step in 1e-3f64..10.0, df1 in 1u32..10, df2 in 1u32..1000) {
        let a = f_to_correlation(FStatistic::new(f, df1, df2).unwrap()).unwrap();
        let b = f_to_correlation(FStatistic::new(f + step, df1, df2).unwrap()).unwrap();
        prop_assert!(a < b);
    }

    #[test]
    fn interval_is_symmetric_on_z_scale(r in -0.95f64..0.95, n_o in 4u32..5000, n_r in 4u32..5000, a in 0.001f64..0.999) {
        let pi = prediction_interval(corr(r), n_o, n_r, alpha(a)).unwrap();
        prop_assert!(((pi.center_z - pi.lower_z) - (pi.upper_z - pi.center_z)).abs() < 1e-12);
        prop_assert!(pi.lower_r < pi.upper_r);
        prop_assert!(pi.lower_z < pi.center_z && pi.center_z < pi.upper_z);
        prop_assert!(pi.se_total > 0.0);
        prop_assert!((fisher_z(pi.lower_r).get() - pi.lower_z).abs() < 1e-10);
        prop_assert!((fisher_z(pi.upper_r).get() - pi.upper_z).abs() < 1e-10);
    }

    #[test]
    fn interval_narrows_with_sample_size(r in -0.9f64..0.9, n_o in 4u32..2000, n_r in 4u32..2000, extra in 1u32..500) {
        let a = alpha(0.05);
        let base = prediction_interval(corr(r), n_o, n_r, a).unwrap().half_width_z();
        prop_assert!(prediction_interval(corr(r), n_o + extra, n_r, a).unwrap().half_width_z() < base);
        prop_assert!(prediction_interval(corr(r), n_o, n_r + extra, a).unwrap().half_width_z() < base);
    }

    #[test]
    fn interval_is_negation_equivariant(r in -0.95f64..0.95, n_o in 4u32..5000, n_r in 4u32..5000) {
        let a = alpha(0.05);
        let pos = prediction_interval(corr(r), n_o, n_r, a).unwrap();
        let neg = prediction_interval(corr(-r), n_o, n_r, a).unwrap();
        prop_assert!((neg.lower_r.get() + pos.upper_r.get()).abs() < 1e-12);
        prop_assert!((neg.upper_r.get() + pos.lower_r.get()).abs() < 1e-12);
    }

    #[test]
    fn se_total_is_symmetric(a in 4u32..100_000, b in 4u32..100_000) {
        prop_assert_eq!(se_total(a, b).unwrap(), se_total(b, a).unwrap());
    }
}

#[test]
fn fisher_round_trip_grid() {
    for i in 0..=1998 {
        let r = -0.999 + f64::from(i) * 0.001;
        let back = inverse_fisher_z(FisherZ::new(fisher_z(corr(r)).get()).unwrap()).unwrap();
        assert!((back.get() - r).abs() < 1e-12, "{r}");
    }
}
