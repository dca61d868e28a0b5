#![allow(dead_code)]

use fsing_core::monomial::monomials_of_degree;
use fsing_core::{Ideal, Monomial, Polynomial, PrimeField};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn fpoly(p: u64, s: &str, nvars: usize) -> Polynomial<PrimeField> {
    Polynomial::parse(gf(p), s, Some(nvars)).unwrap()
}

/// A nonzero form of the given degree. Sparse or dense with equal odds, so
/// that degenerate and generic shapes both show up.
pub fn random_form(rng: &mut ChaCha8Rng, field: PrimeField, nvars: usize, degree: u32) -> Polynomial<PrimeField> {
    let monos = monomials_of_degree(nvars, degree);
    let p = field.p();
    loop {
        let count = if rng.gen_bool(0.5) {
            rng.gen_range(1..=3.min(monos.len()))
        } else {
            rng.gen_range(1..=monos.len())
        };
        let terms: Vec<(Monomial, u64)> = monos
            .choose_multiple(rng, count)
            .map(|m| (m.clone(), rng.gen_range(1..p.max(2))))
            .collect();
        let f = Polynomial::from_terms(field, nvars, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

/// A homogeneous ideal with `1..=max_gens` generators of degree
/// `min_deg..=max_deg`.
pub fn random_ideal(
    rng: &mut ChaCha8Rng,
    field: PrimeField,
    nvars: usize,
    max_gens: usize,
    min_deg: u32,
    max_deg: u32,
) -> Ideal<PrimeField> {
    let n = rng.gen_range(1..=max_gens);
    let gens: Vec<_> = (0..n)
        .map(|_| {
            let d = rng.gen_range(min_deg..=max_deg);
            random_form(rng, field, nvars, d)
        })
        .collect();
    Ideal::new(field, nvars, gens).unwrap()
}

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Property-test config with a fixed seed, so every run draws the same cases.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..proptest::test_runner::Config::default()
    }
}
