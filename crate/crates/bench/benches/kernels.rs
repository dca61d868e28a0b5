use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fsing_core::pipeline::analyze_prime;
use fsing_core::{
    fedder_root, frobenius_root_ideal, hasse_witt_matrix, parse_model, poly_power, test_ideal, FrobeniusLevel,
    Ideal, Limits, Polynomial, PrimeField, RationalExponent, ScanOptions, TestIdealOptions,
};

fn poly(p: u64, s: &str) -> Polynomial<PrimeField> {
    Polynomial::parse(PrimeField::new(p).unwrap(), s, None).unwrap()
}

fn power(c: &mut Criterion) {
    let f = poly(7, "x0^2 + 3x1x2 + x2^2 + 2x0x3 + x3^2");
    let lim = Limits::default();
    c.bench_function("poly_power quadric^30 mod 7", |b| b.iter(|| poly_power(black_box(&f), 30, &lim).unwrap()));
}

fn roots(c: &mut Criterion) {
    let f = poly(3, "x0^4x1^2 + 2x0x1^3x2^2 + x2^6 + x0^2x1^2x2^2");
    let i = Ideal::new(*f.ring(), 3, [f.clone(), poly(3, "x0^3x1^3 + x2^6")]).unwrap();
    let lv = FrobeniusLevel::new(3, 1).unwrap();
    c.bench_function("frobenius root of a sextic pair mod 3", |b| {
        b.iter(|| frobenius_root_ideal(black_box(&i), lv).unwrap())
    });
    let cubic = poly(5, "x0^3 + x1^3 + x2^3 + x0x1x2");
    c.bench_function("fedder root plane cubic mod 5", |b| b.iter(|| fedder_root(black_box(&cubic)).unwrap()));
}

fn chains(c: &mut Criterion) {
    let h = poly(5, "x0^2x1^2 + x1^2x2^2 + x2^4 + 3x0x1x2x3 + x3^4");
    let lambda = RationalExponent::new(3, 4).unwrap();
    let opts = TestIdealOptions::default();
    c.bench_function("test ideal quartic^(3/4) mod 5", |b| {
        b.iter(|| test_ideal(&Ideal::principal(black_box(h.clone())), lambda, &opts).unwrap())
    });
}

fn cohomology(c: &mut Criterion) {
    let lim = Limits::default();
    let quintic = poly(11, "x0^5 + x1^5 + x2^5 + x3^5 + x0x1x2x3^2");
    c.bench_function("frobenius matrix quintic surface mod 11", |b| {
        b.iter(|| hasse_witt_matrix(black_box(&quintic), &lim).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/elliptic_quartic.model")).unwrap();
    let model = parse_model(&text).unwrap();
    let opts = ScanOptions::default();
    c.bench_function("analyze quartic model at p = 31", |b| b.iter(|| analyze_prime(&model, 31, &opts).unwrap()));
}

criterion_group!(benches, power, roots, chains, cohomology, pipeline);
criterion_main!(benches);
