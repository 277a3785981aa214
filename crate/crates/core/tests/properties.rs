use proptest::prelude::*;

use nuinarch::cir::{sample_limit, simulate_cir, CirParams, CriticalValueTable, STANDARD_LEVELS};
use nuinarch::estimate::cls_alpha;
use nuinarch::harness::wilson_interval;
use nuinarch::infer::EmpiricalDistribution;
use nuinarch::model::{marginal_mean, marginal_var, InarchParams};
use nuinarch::simulate::{simulate_inarch, CountSeries, RngStream};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cls_ignores_the_initial_value(
        mut values in prop::collection::vec(0u64..50, 4..40),
        x0 in 0u64..1000,
        beta in 0.01f64..5.0,
    ) {
        prop_assume!(values[1..values.len() - 1].iter().any(|&x| x > 0));
        let a = cls_alpha(&CountSeries::new(values.clone()), beta).unwrap();
        values[0] = x0;
        let b = cls_alpha(&CountSeries::new(values), beta).unwrap();
        prop_assert_eq!(a.alpha_hat.to_bits(), b.alpha_hat.to_bits());
    }

    #[test]
    fn cls_recovers_exact_linear_dynamics(x1 in 1u64..20, k in 1u64..5, len in 4usize..30) {
        // X_t = k + X_{t-1} exactly, so beta = k, alpha = 1 fits with zero residual
        let values: Vec<u64> = (0..len as u64).map(|t| if t == 0 { 0 } else { x1 + k * (t - 1) }).collect();
        let fit = cls_alpha(&CountSeries::new(values), k as f64).unwrap();
        prop_assert!((fit.alpha_hat - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantiles_are_monotone_and_invert_the_cdf(
        sample in prop::collection::hash_set(-100_000i64..100_000, 2..200),
        a in 0.001f64..0.999,
        b in 0.001f64..0.999,
    ) {
        let d = EmpiricalDistribution::new(sample.into_iter().map(|x| x as f64 / 100.0).collect()).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        let (qa, qb) = (d.quantile(lo).unwrap(), d.quantile(hi).unwrap());
        prop_assert!(qa <= qb);
        let s = d.sample();
        prop_assert!(s[0] <= qa && qb <= s[s.len() - 1]);
        // distinct values: the interpolated cdf is the exact inverse
        prop_assert!((d.interpolated_cdf(qa) - lo).abs() < 1e-9);
        prop_assert!((d.interpolated_cdf(qb) - hi).abs() < 1e-9);
    }

    #[test]
    fn wilson_interval_brackets_the_proportion(trials in 1usize..5000, frac in 0.0f64..=1.0, z in 0.5f64..4.0) {
        let k = ((trials as f64) * frac).round() as usize;
        let (lo, hi) = wilson_interval(k, trials, z);
        let p = k as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn moments_are_sane(beta in 0.01f64..10.0, alpha in 0.0f64..=1.0, kappa in 0u64..100, t in 1u64..5000) {
        let p = InarchParams::new(beta, alpha, kappa).unwrap();
        prop_assert!(marginal_var(&p, t) >= 0.0);
        if kappa == 0 {
            prop_assert!(marginal_mean(&p, t) >= marginal_mean(&p, t - 1));
        }
    }

    #[test]
    fn cir_paths_stay_non_negative(beta in 0.01f64..5.0, gamma in 0.0f64..50.0, seed: u64) {
        let path = simulate_cir(&CirParams::new(beta, gamma, 200).unwrap(), &mut RngStream::new(seed, 0)).unwrap();
        prop_assert!(path.values.iter().all(|&x| x >= 0.0 && x.is_finite()));
        prop_assert_eq!(path.values[0], 0.0);
    }

    #[test]
    fn streams_are_reproducible(seed: u64, stream: u64, alpha in 0.0f64..1.0) {
        let p = InarchParams::new(1.0, alpha, 0).unwrap();
        let a = simulate_inarch(&p, 30, &mut RngStream::new(seed, stream)).unwrap();
        let b = simulate_inarch(&p, 30, &mut RngStream::new(seed, stream)).unwrap();
        prop_assert_eq!(a.values, b.values);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tables_round_trip_exactly(beta in 0.05f64..4.0, gamma in 0.0f64..20.0, seed: u64) {
        let d = sample_limit(&CirParams::new(beta, gamma, 50).unwrap(), 64, seed).unwrap();
        let t = CriticalValueTable::from_distribution(&d, &STANDARD_LEVELS, true).unwrap();
        let json = t.to_json();
        let back = CriticalValueTable::from_json(&json).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_json(), json);
        prop_assert!(back.check_matches(beta, gamma).is_ok());
        prop_assert!(back.check_matches(beta * 1.01, gamma).is_err());
    }
}
