mod common;

use common::*;
use fsing_core::monomial::binomial;
use fsing_core::{poly_power, Ideal, Limits, Polynomial};
use proptest::prelude::*;
use rand::Rng;

fn random_poly(seed: u64, p: u64, nvars: usize) -> Polynomial<fsing_core::PrimeField> {
    let mut r = rng(seed);
    let mut f = Polynomial::zero(gf(p), nvars);
    for d in 0..=r.gen_range(0..4u32) {
        if r.gen_bool(0.7) {
            f = f.add(&random_form(&mut r, gf(p), nvars, d)).unwrap();
        }
    }
    f
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn distributive(seed in any::<u64>(), pi in 0usize..4, nvars in 1usize..4) {
        let p = PRIMES[pi];
        let f = random_poly(seed, p, nvars);
        let g = random_poly(seed ^ 1, p, nvars);
        let h = random_poly(seed ^ 2, p, nvars);
        let lhs = f.add(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&h).unwrap().add(&g.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_is_additive(seed in any::<u64>(), pi in 0usize..4, nvars in 1usize..4) {
        let p = PRIMES[pi];
        let f = random_poly(seed, p, nvars);
        let g = random_poly(seed ^ 7, p, nvars);
        let lim = Limits::default();
        let lhs = poly_power(&f.add(&g).unwrap(), p, &lim).unwrap();
        let rhs = poly_power(&f, p, &lim).unwrap().add(&poly_power(&g, p, &lim).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_pieces_are_bounded_and_hold_generators(seed in any::<u64>(), pi in 0usize..4, nvars in 1usize..4) {
        let mut r = rng(seed);
        let i = random_ideal(&mut r, gf(PRIMES[pi]), nvars, 3, 1, 3);
        let lim = Limits::default();
        for d in 0..6u32 {
            let piece = i.graded_piece(d, &lim).unwrap();
            prop_assert!(piece.rank() as u128 <= binomial((d as usize + nvars - 1) as u64, nvars as u64 - 1));
            for g in i.generators().iter().filter(|g| g.homogeneous_degree() == Some(d)) {
                prop_assert!(piece.contains(g));
            }
        }
    }

    #[test]
    fn containment_is_a_partial_order(seed in any::<u64>(), pi in 0usize..4) {
        let mut r = rng(seed);
        let field = gf(PRIMES[pi]);
        let a = random_ideal(&mut r, field, 3, 2, 1, 3);
        let b = a.sum(&random_ideal(&mut r, field, 3, 2, 1, 3)).unwrap();
        let c = b.sum(&random_ideal(&mut r, field, 3, 1, 1, 2)).unwrap();
        prop_assert!(a.contains(&a).unwrap());
        prop_assert!(b.contains(&a).unwrap());
        prop_assert!(c.contains(&b).unwrap());
        prop_assert!(c.contains(&a).unwrap());
        // Random triples: inclusion chains compose.
        let x = random_ideal(&mut r, field, 3, 2, 1, 2);
        let y = random_ideal(&mut r, field, 3, 2, 1, 2);
        let z = random_ideal(&mut r, field, 3, 2, 1, 2);
        if y.contains(&x).unwrap() && z.contains(&y).unwrap() {
            prop_assert!(z.contains(&x).unwrap());
        }
    }

    #[test]
    fn principal_hilbert_function(seed in any::<u64>(), pi in 0usize..4, nvars in 1usize..4, d0 in 0u32..4) {
        let mut r = rng(seed);
        let f = random_form(&mut r, gf(PRIMES[pi]), nvars, d0);
        let hf = Ideal::principal(f).hilbert_function(8).unwrap();
        let n = nvars as u64 - 1;
        for (d, &v) in hf.iter().enumerate() {
            let d = d as u64;
            let expected = if d >= d0 as u64 {
                binomial(d + n, n) - binomial(d - d0 as u64 + n, n)
            } else {
                binomial(d + n, n)
            };
            prop_assert_eq!(v as u128, expected, "degree {}", d);
        }
    }
}
