//! Algebraic identities between the closed-form minima.

mod common;

use auxmedian::estimators::TmShape;
use auxmedian::mse;
use common::random_params;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params() -> impl Strategy<Value = auxmedian::MedianParams> {
    any::<u64>().prop_map(|seed| random_params(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn shape() -> impl Strategy<Value = TmShape> {
    (-2.0f64..2.0, 0.0f64..5.0, 0.1f64..10.0).prop_map(|(a, e, l)| TmShape::new(a, e, l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tm_minimum_equals_ss3(p in params()) {
        let (tm, ss3) = (mse::min_mse_tm(&p), mse::min_mse_ss3(&p));
        prop_assert!((tm - ss3).abs() <= 1e-12 * ss3.abs());
    }

    #[test]
    fn tm_minimum_ignores_shape(p in params(), s in shape()) {
        let via_weights = mse::min_mse_tm_via_weights(&s, &p).unwrap();
        let closed = mse::min_mse_tm(&p);
        prop_assert!((via_weights - closed).abs() <= 1e-9 * closed, "{} vs {}", via_weights, closed);
    }

    #[test]
    fn tmq_minimum_sits_at_optimal_exponent(p in params()) {
        let kc = p.optimal_exponent;
        let step = 1e-4;
        let best = (-5000..=5000)
            .map(|i| kc + i as f64 * step)
            .min_by(|a, b| mse::min_mse_tmq_at_slope(*a, &p).total_cmp(&mse::min_mse_tmq_at_slope(*b, &p)))
            .unwrap();
        prop_assert!((best - kc).abs() <= step, "argmin {} vs k_c {}", best, kc);
    }

    #[test]
    fn difference_minimum_shrinks_with_concordance(p in params(), t in 0.0f64..1.0) {
        let mut q = p;
        q.rho_c = p.rho_c.signum() * (p.rho_c.abs() + t * (1.0 - p.rho_c.abs()) * 0.99);
        prop_assume!(q.rho_c.abs() > p.rho_c.abs());
        prop_assert!(mse::min_mse_difference(&q) < mse::min_mse_difference(&p));
    }

    #[test]
    fn minima_are_ordered(p in params()) {
        let ss2 = mse::min_mse_ss2(&p);
        prop_assert!(ss2 <= mse::min_mse_difference(&p) * (1.0 + 1e-12));
        prop_assert!(mse::min_mse_tm(&p) <= ss2 * (1.0 + 1e-12));
    }
}
