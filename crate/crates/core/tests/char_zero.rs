mod common;

use common::*;
use fsing_core::char_zero::predicted_exponent_below_one;
use fsing_core::{
    general_product, jumping_exponents, multiplier_ideal_at, multiplier_profile, predicted_test_ideal,
    GeneralCombinationConfig, Integers, Limits, Polynomial, RationalExponent,
};
use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;

/// `𝔪^{max(0, ⌊2λ⌋ − N)}` from the log resolution, via exact rationals.
fn oracle(n: u32, lambda: Ratio<u64>) -> u32 {
    let twice = (lambda * 2).to_integer();
    twice.saturating_sub(n as u64) as u32
}

fn random_quadrics(seed: u64, nvars: usize, count: usize) -> Vec<Polynomial<Integers>> {
    let mut r = rng(seed);
    let monos = fsing_core::monomial::monomials_of_degree(nvars, 2);
    (0..count)
        .map(|_| loop {
            let terms: Vec<_> = monos
                .iter()
                .filter_map(|m| r.gen_bool(0.4).then(|| (m.clone(), BigInt::from(r.gen_range(-3i64..=3)))))
                .collect();
            let f = Polynomial::from_terms(Integers, nvars, terms).unwrap();
            if !f.is_zero() {
                break f;
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn profile_agrees_with_pointwise_values(n in 0u32..9, r in 1u32..9, num in 0u64..200, den in 1u64..25) {
        let lambda = Ratio::new(num, den);
        let exp = RationalExponent::new(num, den).unwrap();
        if lambda >= Ratio::from_integer(r as u64) {
            prop_assert!(multiplier_ideal_at(n, r, exp).is_err());
            return Ok(());
        }
        let k = multiplier_ideal_at(n, r, exp).unwrap();
        prop_assert_eq!(k, oracle(n, lambda));
        let profile = multiplier_profile(n, r).unwrap();
        let seg = profile
            .segments
            .iter()
            .find(|s| s.bounds.0.as_ratio() <= lambda && lambda < s.bounds.1.as_ratio())
            .expect("segments cover [0, r)");
        prop_assert_eq!(seg.exponent, k);
    }

    #[test]
    fn profile_shape(n in 0u32..9, r in 1u32..9) {
        let profile = multiplier_profile(n, r).unwrap();
        let segs = &profile.segments;
        prop_assert_eq!(segs[0].bounds.0.as_ratio(), Ratio::from_integer(0));
        prop_assert_eq!(segs.last().unwrap().bounds.1.as_ratio(), Ratio::from_integer(r as u64));
        for w in segs.windows(2) {
            prop_assert_eq!(w[0].bounds.1, w[1].bounds.0);
            prop_assert!(w[0].exponent < w[1].exponent);
        }
        let jumps = jumping_exponents(n, r);
        prop_assert_eq!(jumps.len() + 1, segs.len());
        for j in jumps {
            prop_assert_eq!(j.as_ratio() * 2, Ratio::from_integer((j.as_ratio() * 2).to_integer()));
        }
    }

    #[test]
    fn limit_prediction(n in 0u32..12, r in 1u32..12) {
        let expected = (2 * r).saturating_sub(n + 1);
        prop_assert_eq!(predicted_exponent_below_one(n, r).unwrap(), expected);
        // Constant on (1 − 1/(2r), 1).
        let mu = RationalExponent::new(8 * r as u64 - 1, 8 * r as u64).unwrap();
        prop_assert_eq!(predicted_test_ideal(n, r, mu).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn general_product_is_deterministic(seed in any::<u64>(), cfg_seed in any::<u64>(), ambient in 2usize..5) {
        let mut r = rng(seed);
        let codim = r.gen_range(1..=ambient) as u32;
        let count = codim as usize + r.gen_range(0..2);
        let fs = random_quadrics(seed, ambient + 1, count);
        let cfg = GeneralCombinationConfig { seed: cfg_seed, ..GeneralCombinationConfig::default() };
        let lim = Limits::default();
        let first = general_product(&fs, codim, &cfg, &lim);
        let second = general_product(&fs, codim, &cfg, &lim);
        match (first, second) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a, &b);
                prop_assert_eq!(a.h.homogeneous_degree(), Some(2 * codim));
                prop_assert_eq!(a.combinations.len(), codim as usize);
                for row in &a.coefficients {
                    prop_assert!(row.iter().all(|&c| c != 0 && c.unsigned_abs() <= cfg.coefficient_bound));
                }
                prop_assert_eq!(a.h.content(), BigInt::from(1));
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "runs disagree"),
        }
    }
}
