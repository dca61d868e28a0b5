//! Bracket powers `J^{[q]}` and Frobenius roots `𝔟^{[1/q]}` over 𝔽_p.
//!
//! Every `f` decomposes uniquely as `f = Σ_α g_α^q x^α` with `α ∈ [0, q)^{N+1}`
//! by splitting each exponent `β = q⌊β/q⌋ + (β mod q)`. On 𝔽_p the q-th root
//! of a coefficient is the coefficient itself. The root `(f)^{[1/q]}` is the
//! ideal of the nonzero `g_α`, the smallest `J` with `f ∈ J^{[q]}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::power::{poly_power, Limits};
use crate::ring::PrimeField;

/// `q = p^e` with `e >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrobeniusLevel {
    p: u64,
    e: u32,
    q: u32,
}

impl FrobeniusLevel {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        PrimeField::new(p)?;
        if e == 0 {
            return Err(Error::invalid("Frobenius level must be at least 1"));
        }
        let q = (p as u128).checked_pow(e).filter(|&q| q <= u32::MAX as u128 / 4);
        let q = q.ok_or_else(|| Error::OutOfRange(format!("{p}^{e} is too large")))?;
        Ok(FrobeniusLevel { p, e, q: q as u32 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    fn check(&self, field: &PrimeField) -> Result<()> {
        if field.p() != self.p {
            return Err(Error::CharacteristicMismatch {
                expected: self.p,
                found: field.p(),
            });
        }
        Ok(())
    }
}

/// `J^{[q]}`: generated by the q-th powers of the generators, since
/// `(Σ a_i g_i)^q = Σ a_i^q g_i^q` in characteristic p.
pub fn bracket_power(j: &Ideal<PrimeField>, level: FrobeniusLevel) -> Result<Ideal<PrimeField>> {
    level.check(j.ring())?;
    Ideal::new(
        *j.ring(),
        j.nvars(),
        j.generators().iter().map(|g| g.expand_exponents(level.q)),
    )
}

/// The components `g_α` of `f`, keyed by the residue exponent `α`.
pub fn root_components(
    f: &Polynomial<PrimeField>,
    q: u32,
) -> BTreeMap<Monomial, Polynomial<PrimeField>> {
    let mut buckets: BTreeMap<Monomial, BTreeMap<Monomial, u64>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (quot, rem) = m.digit_split(q);
        buckets.entry(rem).or_default().insert(quot, *c);
    }
    buckets
        .into_iter()
        .map(|(alpha, terms)| {
            (
                alpha,
                Polynomial::from_sorted_unchecked(*f.ring(), f.nvars(), terms),
            )
        })
        .collect()
}

/// `(f)^{[1/q]}`, untrimmed, generators ordered by residue exponent.
pub fn frobenius_root(f: &Polynomial<PrimeField>, level: FrobeniusLevel) -> Result<Ideal<PrimeField>> {
    level.check(f.ring())?;
    if f.is_zero() {
        return Err(Error::Zero("Frobenius root of the zero polynomial".into()));
    }
    Ideal::new(*f.ring(), f.nvars(), root_components(f, level.q).into_values())
}

/// `𝔟^{[1/q]}`: the sum of the roots of the generators, trimmed.
pub fn frobenius_root_ideal(b: &Ideal<PrimeField>, level: FrobeniusLevel) -> Result<Ideal<PrimeField>> {
    level.check(b.ring())?;
    if b.is_zero() {
        return Err(Error::Zero("Frobenius root of the zero ideal".into()));
    }
    let mut gens = Vec::new();
    for g in b.generators() {
        gens.extend(root_components(g, level.q).into_values());
    }
    Ideal::new(*b.ring(), b.nvars(), gens)?.trimmed()
}

/// `(f^n)^{[1/q]}` without expanding `f^n`.
///
/// With `n = m·q + Σ_{i<e} r_i p^i`, the root is `f^m · J_e` where `J_0 = R`
/// and `J_{i+1} = (f^{r_i} J_i)^{[1/p]}`. This uses
/// `(a · b^p)^{[1/p]} = b · a^{[1/p]}` at every step, so only powers
/// `f^{r}` with `r < p` are ever formed.
pub fn root_of_power(
    f: &Polynomial<PrimeField>,
    n: u64,
    level: FrobeniusLevel,
    limits: &Limits,
) -> Result<Ideal<PrimeField>> {
    level.check(f.ring())?;
    if f.is_zero() {
        return Err(Error::Zero("Frobenius root of the zero polynomial".into()));
    }
    let field = *f.ring();
    let nvars = f.nvars();
    let p = level.p;
    let q = level.q as u64;
    let (high, mut low) = (n / q, n % q);
    let one_step = FrobeniusLevel::new(p, 1)?;
    let mut current = Ideal::unit(field, nvars);
    for _ in 0..level.e {
        let digit = low % p;
        low /= p;
        let factor = poly_power(f, digit, limits)?;
        let scaled = current.mul_poly(&factor)?;
        current = frobenius_root_ideal(&scaled, one_step)?;
        if current.generators().len() > limits.max_generators {
            return Err(Error::resource("too many root generators"));
        }
    }
    if high > 0 {
        current = current.mul_poly(&poly_power(f, high, limits)?)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, s: &str, n: usize) -> Polynomial<PrimeField> {
        Polynomial::parse(gf(p), s, Some(n)).unwrap()
    }

    fn ideal(p: u64, n: usize, gens: &[&str]) -> Ideal<PrimeField> {
        Ideal::new(gf(p), n, gens.iter().map(|g| poly(p, g, n))).unwrap()
    }

    fn level(p: u64, e: u32) -> FrobeniusLevel {
        FrobeniusLevel::new(p, e).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let j = ideal(2, 2, &["x0", "x1"]);
        assert_eq!(bracket_power(&j, level(2, 2)).unwrap(), ideal(2, 2, &["x0^4", "x1^4"]));
        let j = ideal(2, 2, &["x0 + x1"]);
        let b = bracket_power(&j, level(2, 1)).unwrap();
        assert_eq!(b, ideal(2, 2, &["x0^2 + x1^2"]));
        assert_eq!(b.generators()[0], poly_power(&j.generators()[0], 2, &Limits::default()).unwrap());
        assert!(matches!(
            bracket_power(&j, level(3, 1)),
            Err(Error::CharacteristicMismatch { .. })
        ));
    }

    #[test]
    fn root_examples() {
        let r = frobenius_root(&poly(2, "x0^3x1", 2), level(2, 1)).unwrap();
        assert!(r.equals(&ideal(2, 2, &["x0"])).unwrap());
        let r = frobenius_root(&poly(2, "x0^2x1^2", 2), level(2, 1)).unwrap();
        assert!(r.equals(&ideal(2, 2, &["x0x1"])).unwrap());
        let r = frobenius_root(&poly(2, "x0^2 + x1^3", 2), level(2, 1)).unwrap();
        assert_eq!(r.generators().len(), 2);
        assert!(r.equals(&ideal(2, 2, &["x0", "x1"])).unwrap());
        assert!(matches!(
            frobenius_root(&Polynomial::zero(gf(2), 2), level(2, 1)),
            Err(Error::Zero(_))
        ));
    }

    #[test]
    fn ideal_root_examples() {
        let r = frobenius_root_ideal(&ideal(2, 2, &["x0^4", "x1^4"]), level(2, 2)).unwrap();
        assert!(r.equals(&ideal(2, 2, &["x0", "x1"])).unwrap());
        for a in 0..20u32 {
            let f = ideal(3, 1, &[&format!("x0^{a}")]);
            let r = frobenius_root_ideal(&f, level(3, 2)).unwrap();
            assert_eq!(r, ideal(3, 1, &[&format!("x0^{}", a / 9)]));
        }
        assert!(matches!(
            frobenius_root_ideal(&Ideal::zero(gf(2), 2), level(2, 1)),
            Err(Error::Zero(_))
        ));
    }

    #[test]
    fn decomposition_reassembles() {
        let f = poly(3, "x0^5x1 + 2x0^2x1^4 + x1^7 + x0x1^2", 2);
        let mut back = Polynomial::zero(gf(3), 2);
        for (alpha, g) in root_components(&f, 3) {
            let piece = g.expand_exponents(3).mul_monomial(&alpha);
            back = back.add(&piece).unwrap();
        }
        assert_eq!(back, f);
    }

    #[test]
    fn iterated_root_matches_literal() {
        let lim = Limits::default();
        let f = poly(3, "x0^2 + x0x1 + 2x1x2 + x2^2", 3);
        for e in 1..=2 {
            for n in [1u64, 2, 3, 5, 8, 10, 17, 26] {
                let lvl = level(3, e);
                let literal = frobenius_root_ideal(&Ideal::principal(poly_power(&f, n, &lim).unwrap()), lvl).unwrap();
                let fast = root_of_power(&f, n, lvl, &lim).unwrap();
                assert!(literal.equals(&fast).unwrap(), "n = {n}, e = {e}");
            }
        }
    }
}
