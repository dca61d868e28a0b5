//! Test ideals `τ(𝔞^λ)` as the stable member of the ascending chain
//! `I_e = (𝔞^{⌈λ p^e⌉})^{[1/p^e]}`, together with the Fedder-type root
//! `(h^{p−1})^{[1/p]} = τ(h^{1−1/p})` and related checks.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::frobenius::{frobenius_root_ideal, root_of_power, FrobeniusLevel};
use crate::ideal::Ideal;
use crate::poly::Polynomial;
use crate::monomial::Monomial;
use crate::power::{poly_power, poly_power_filtered, power_coefficients, Limits, QuotientDegreeFilter};
use crate::ring::{Integers, PrimeField};

/// A nonnegative rational exponent, always in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalExponent(Ratio<u64>);

impl RationalExponent {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::invalid("exponent denominator must be positive"));
        }
        Ok(RationalExponent(Ratio::new(numer, denom)))
    }

    pub fn integer(n: u64) -> Self {
        RationalExponent(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `⌈λ·k⌉`.
    pub fn ceil_times(&self, k: u64) -> u64 {
        let num = self.numer() as u128 * k as u128;
        num.div_ceil(self.denom() as u128) as u64
    }

    /// `⌊λ·k⌋`.
    pub fn floor_times(&self, k: u64) -> u64 {
        (self.numer() as u128 * k as u128 / self.denom() as u128) as u64
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn mul_int(&self, k: u64) -> Self {
        RationalExponent(self.0 * Ratio::from_integer(k))
    }
}

impl FromStr for RationalExponent {
    type Err = Error;

    /// Accepts `a/b` or `a`; never goes through floating point.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("expected an exponent of the form a/b, got {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let a = a.trim().parse().map_err(|_| bad())?;
                let b = b.trim().parse().map_err(|_| bad())?;
                Self::new(a, b)
            }
            None => Ok(Self::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestIdealOptions {
    /// Last chain level computed.
    pub e_max: u32,
    /// Consecutive equal chain members required to declare stabilization.
    pub required_equalities: u32,
    pub limits: Limits,
}

impl Default for TestIdealOptions {
    fn default() -> Self {
        TestIdealOptions {
            e_max: 3,
            required_equalities: 1,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainStatus {
    Stabilized,
    CapReached,
}

#[derive(Clone, Debug)]
pub struct TestIdealResult {
    pub ideal: Ideal<PrimeField>,
    /// First level of the run of equal members, or `e_max` on cap.
    pub stabilized_at: u32,
    pub status: ChainStatus,
    /// `(e, generator count of I_e)` for every computed level.
    pub chain_trace: Vec<(u32, usize)>,
    /// Number of inclusions `I_e ⊆ I_{e+1}` that were checked.
    pub inclusions_checked: u32,
}

/// The chain member `(𝔞^{⌈λq⌉})^{[1/q]}` at one level.
pub fn chain_member(
    a: &Ideal<PrimeField>,
    lambda: RationalExponent,
    level: FrobeniusLevel,
    limits: &Limits,
) -> Result<Ideal<PrimeField>> {
    let n = lambda.ceil_times(level.q() as u64);
    match a.generators() {
        [h] => root_of_power(h, n, level, limits),
        _ => {
            let power = a.power(n, limits)?;
            frobenius_root_ideal(&power, level)
        }
    }
}

/// `τ(𝔞^λ)` by the ascending chain. A failed inclusion `I_e ⊆ I_{e+1}` is
/// reported as [`Error::ChainInclusion`].
pub fn test_ideal(
    a: &Ideal<PrimeField>,
    lambda: RationalExponent,
    opts: &TestIdealOptions,
) -> Result<TestIdealResult> {
    if a.is_zero() {
        return Err(Error::Zero("test ideal of the zero ideal".into()));
    }
    if opts.e_max < 2 {
        return Err(Error::invalid("e_max must be at least 2"));
    }
    let required = opts.required_equalities.max(1);
    let p = a.ring().p();
    let mut trace = Vec::new();
    let mut previous: Option<Ideal<PrimeField>> = None;
    let mut streak = 0u32;
    let mut checked = 0u32;
    for e in 1..=opts.e_max {
        let level = FrobeniusLevel::new(p, e)?;
        let member = chain_member(a, lambda, level, &opts.limits)?;
        trace.push((e, member.generators().len()));
        if let Some(prev) = &previous {
            checked += 1;
            if !member.contains_with(prev, &opts.limits)? {
                return Err(Error::ChainInclusion {
                    level: e - 1,
                    detail: format!("I_{} = {prev} is not contained in I_{e} = {member}", e - 1),
                });
            }
            if prev.contains_with(&member, &opts.limits)? {
                streak += 1;
                if streak >= required {
                    return Ok(TestIdealResult {
                        ideal: member,
                        stabilized_at: e - required,
                        status: ChainStatus::Stabilized,
                        chain_trace: trace,
                        inclusions_checked: checked,
                    });
                }
            } else {
                streak = 0;
            }
        }
        previous = Some(member);
    }
    Ok(TestIdealResult {
        ideal: previous.expect("e_max >= 2"),
        stabilized_at: opts.e_max,
        status: ChainStatus::CapReached,
        chain_trace: trace,
        inclusions_checked: checked,
    })
}

/// `(h^{p−1})^{[1/p]}`, which equals `τ(h^{1−1/p})`.
pub fn fedder_root(h: &Polynomial<PrimeField>) -> Result<Ideal<PrimeField>> {
    fedder_root_with(h, &Limits::default())
}

pub fn fedder_root_with(h: &Polynomial<PrimeField>, limits: &Limits) -> Result<Ideal<PrimeField>> {
    if h.is_zero() {
        return Err(Error::Zero("Fedder root of the zero polynomial".into()));
    }
    let p = h.ring().p();
    let power = poly_power(h, p - 1, limits)?;
    frobenius_root_ideal(&Ideal::principal(power), FrobeniusLevel::new(p, 1)?)
}

/// The generators of degree `<= max_degree` of the Fedder root of a
/// homogeneous `h`, computed from the truncated power. For every `k <=
/// max_degree`, `𝔪^k` lies in this ideal iff it lies in the full root.
pub fn fedder_root_through_degree(
    h: &Polynomial<PrimeField>,
    max_degree: u32,
    limits: &Limits,
) -> Result<Ideal<PrimeField>> {
    if h.is_zero() {
        return Err(Error::Zero("Fedder root of the zero polynomial".into()));
    }
    if !h.is_homogeneous() {
        return Err(Error::NotHomogeneous(format!("{h}")));
    }
    let p = h.ring().p();
    let d = h.homogeneous_degree().expect("nonzero homogeneous");
    let total = (p - 1) * d as u64;
    let power = match low_quotient_monomials(h.nvars(), total, p, max_degree, TARGET_CAP) {
        Some(targets) => {
            let coeffs = power_coefficients(h, p - 1, &targets, limits)?;
            let terms = targets.into_iter().zip(coeffs).filter(|(_, c)| *c != 0);
            Polynomial::from_terms(*h.ring(), h.nvars(), terms)?
        }
        None => {
            let filter = QuotientDegreeFilter {
                q: p as u32,
                max: max_degree,
                nvars: h.nvars(),
            };
            poly_power_filtered(h, p - 1, &filter, limits)?
        }
    };
    if power.is_zero() {
        return Ok(Ideal::zero(*h.ring(), h.nvars()));
    }
    frobenius_root_ideal(&Ideal::principal(power), FrobeniusLevel::new(p, 1)?)
}

/// Above this many candidate monomials the truncated power is formed in
/// full rather than coefficient by coefficient.
const TARGET_CAP: usize = 2048;

/// Monomials of the given degree with `Σ ⌊e_i / p⌋ <= k`, or `None` once
/// there are more than `cap`.
fn low_quotient_monomials(nvars: usize, degree: u64, p: u64, k: u32, cap: usize) -> Option<Vec<Monomial>> {
    fn walk(
        i: usize,
        rem: u64,
        budget: u64,
        p: u64,
        cur: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
        cap: usize,
    ) -> bool {
        let vars_left = (cur.len() - i) as u64;
        // Largest degree the remaining coordinates can absorb.
        if rem > vars_left * (p - 1) + budget * p {
            return true;
        }
        if i + 1 == cur.len() {
            if rem / p > budget {
                return true;
            }
            cur[i] = rem as u32;
            out.push(Monomial::new(&cur[..]));
            return out.len() <= cap;
        }
        let top = rem.min((budget + 1) * p - 1);
        for e in 0..=top {
            cur[i] = e as u32;
            if !walk(i + 1, rem - e, budget - e / p, p, cur, out, cap) {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    walk(0, degree, k as u64, p, &mut cur, &mut out, cap).then_some(out)
}

/// Whether `τ(h^{(p−1)/p})` computed by the chain equals the Fedder root.
/// A chain that hits `e_max` is reported as [`Error::Inconclusive`].
pub fn tau_equals_fedder_check(
    h: &Polynomial<PrimeField>,
    opts: &TestIdealOptions,
) -> Result<(bool, TestIdealResult)> {
    let p = h.ring().p();
    let lambda = RationalExponent::new(p - 1, p)?;
    let tau = test_ideal(&Ideal::principal(h.clone()), lambda, opts)?;
    if tau.status == ChainStatus::CapReached {
        return Err(Error::Inconclusive(format!(
            "chain for {h} did not stabilize by e = {}",
            opts.e_max
        )));
    }
    let fedder = fedder_root_with(h, &opts.limits)?;
    Ok((tau.ideal.equals(&fedder)?, tau))
}

/// `𝔪^k ⊆ I`, with `𝔪^0 = R`.
pub fn containment_power_check(k: u32, i: &Ideal<PrimeField>) -> Result<bool> {
    i.contains(&Ideal::maximal_power(*i.ring(), i.nvars(), k))
}

/// `ν_f(p^e) = max { t : f^t ∉ 𝔪^{[p^e]} }` for `f ∈ 𝔪`.
pub fn nu_invariant(f: &Polynomial<PrimeField>, e: u32, limits: &Limits) -> Result<u64> {
    if f.terms().any(|(m, _)| m.degree() == 0) {
        return Err(Error::Precondition(format!("{f} is not in the maximal ideal")));
    }
    if f.is_zero() {
        return Ok(0);
    }
    let field = *f.ring();
    let level = FrobeniusLevel::new(field.p(), e)?;
    let q = level.q() as u64;
    let frob_m = crate::frobenius::bracket_power(&Ideal::maximal(field, f.nvars()), level)?;
    let inside = |t: u64| -> Result<bool> {
        frob_m.contains_poly_with(&poly_power(f, t, limits)?, limits)
    };
    // f^t has degree >= t·mindeg, and any monomial of degree above
    // (N+1)(q−1) has an exponent >= q.
    let min_deg = f.min_degree().expect("nonzero") as u64;
    let mut lo = 0u64;
    let mut hi = (f.nvars() as u64 * (q - 1)) / min_deg + 1;
    debug_assert!(!inside(0)?);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if inside(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// `𝔟_p ⊆ (f_p^{p−1})^{[1/p]}` for integer data reduced mod p.
pub fn remark_containment_check(
    b: &Ideal<Integers>,
    f: &Polynomial<Integers>,
    p: u64,
) -> Result<bool> {
    let field = PrimeField::new(p)?;
    let degenerates = |g: &Polynomial<Integers>| {
        let r = g.reduce_mod_p(field);
        r.is_zero() || r.total_degree() != g.total_degree()
    };
    if degenerates(f) {
        return Err(Error::BadPrime {
            p,
            reason: format!("{f} degenerates mod {p}"),
        });
    }
    if let Some(g) = b.generators().iter().find(|g| degenerates(g)) {
        return Err(Error::BadPrime {
            p,
            reason: format!("generator {g} degenerates mod {p}"),
        });
    }
    let root = fedder_root(&f.reduce_mod_p(field))?;
    root.contains(&b.reduce_mod_p(field))
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

    fn lam(s: &str) -> RationalExponent {
        s.parse().unwrap()
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(lam("4/6"), RationalExponent::new(2, 3).unwrap());
        assert_eq!(lam(" 3 "), RationalExponent::integer(3));
        assert_eq!(lam("2/3").to_string(), "2/3");
        assert!("0.5".parse::<RationalExponent>().is_err());
        assert!("1/0".parse::<RationalExponent>().is_err());
        assert_eq!(lam("2/3").ceil_times(9), 6);
        assert_eq!(lam("2/3").ceil_times(10), 7);
        assert_eq!(lam("2/3").floor_times(10), 6);
    }

    #[test]
    fn test_ideal_examples() {
        let opts = TestIdealOptions::default();
        for p in [2, 3, 5] {
            let x = Ideal::principal(poly(p, "x0", 2));
            let r = test_ideal(&x, lam("1"), &opts).unwrap();
            assert_eq!(r.status, ChainStatus::Stabilized);
            assert!(r.ideal.equals(&x).unwrap());
        }
        let r = test_ideal(&Ideal::principal(poly(2, "x0", 2)), lam("1/2"), &opts).unwrap();
        assert_eq!(r.ideal, Ideal::unit(gf(2), 2));
        let xy = Ideal::principal(poly(3, "x0x1", 2));
        let r = test_ideal(&xy, lam("2/3"), &opts).unwrap();
        assert_eq!(r.ideal, Ideal::unit(gf(3), 2));
        assert_eq!(r.stabilized_at, 1);
        let e2 = chain_member(&xy, lam("2/3"), FrobeniusLevel::new(3, 2).unwrap(), &opts.limits).unwrap();
        let e3 = chain_member(&xy, lam("2/3"), FrobeniusLevel::new(3, 3).unwrap(), &opts.limits).unwrap();
        assert!(e2.equals(&e3).unwrap());
    }

    #[test]
    fn lambda_zero_is_unit() {
        let a = Ideal::principal(poly(5, "x0^2 + x1^3", 2));
        let r = test_ideal(&a, lam("0"), &TestIdealOptions::default()).unwrap();
        assert_eq!(r.ideal, Ideal::unit(gf(5), 2));
    }

    #[test]
    fn cap_and_bad_options() {
        let a = Ideal::principal(poly(2, "x0", 1));
        let opts = TestIdealOptions {
            e_max: 1,
            ..TestIdealOptions::default()
        };
        assert!(test_ideal(&a, lam("1"), &opts).is_err());
        assert!(test_ideal(&Ideal::zero(gf(2), 1), lam("1"), &TestIdealOptions::default()).is_err());
        let strict = TestIdealOptions {
            e_max: 2,
            required_equalities: 2,
            ..TestIdealOptions::default()
        };
        let r = test_ideal(&a, lam("1"), &strict).unwrap();
        assert_eq!(r.status, ChainStatus::CapReached);
        assert_eq!(r.stabilized_at, 2);
    }

    #[test]
    fn non_principal_chain() {
        // τ(𝔪^λ) in two variables is 𝔪^{⌊λ⌋ - 1} for λ >= 2 and R below.
        let m = Ideal::maximal(gf(3), 2);
        let r = test_ideal(&m, lam("5/2"), &TestIdealOptions::default()).unwrap();
        assert_eq!(r.status, ChainStatus::Stabilized);
        assert!(r.ideal.equals(&Ideal::maximal(gf(3), 2)).unwrap());
        let r = test_ideal(&m, lam("3/2"), &TestIdealOptions::default()).unwrap();
        assert_eq!(r.ideal, Ideal::unit(gf(3), 2));
    }

    #[test]
    fn fedder_examples() {
        let r = fedder_root(&poly(2, "x0^2 + x1^3", 2)).unwrap();
        assert!(r.equals(&Ideal::maximal(gf(2), 2)).unwrap());
        for p in [2, 3, 5, 7] {
            assert_eq!(fedder_root(&poly(p, "x0", 2)).unwrap(), Ideal::unit(gf(p), 2));
        }
        assert_eq!(fedder_root(&poly(3, "x0x1x2", 3)).unwrap(), Ideal::unit(gf(3), 3));
        assert!(fedder_root(&Polynomial::zero(gf(3), 2)).is_err());
    }

    #[test]
    fn tau_fedder_examples() {
        let opts = TestIdealOptions::default();
        assert!(tau_equals_fedder_check(&poly(2, "x0^2 + x1^3", 2), &opts).unwrap().0);
        assert!(tau_equals_fedder_check(&poly(5, "x0", 2), &opts).unwrap().0);
    }

    #[test]
    fn containment_power_examples() {
        let f = gf(2);
        assert!(containment_power_check(0, &Ideal::unit(f, 2)).unwrap());
        assert!(!containment_power_check(0, &Ideal::principal(poly(2, "x0", 2))).unwrap());
        let root = fedder_root(&poly(2, "x0^2 + x1^3", 2)).unwrap();
        assert!(containment_power_check(1, &root).unwrap());
    }

    #[test]
    fn truncated_fedder_root_decides_the_same_containments() {
        let h = poly(5, "x0^3 + 2x0x1x2 + x1^2x2 + 3x2^3 + x0^2x1", 3);
        let full = fedder_root(&h).unwrap();
        for k in 0..4 {
            let low = fedder_root_through_degree(&h, k, &Limits::default()).unwrap();
            assert!(full.contains(&low).unwrap());
            assert_eq!(
                containment_power_check(k, &low).unwrap(),
                containment_power_check(k, &full).unwrap(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn quotient_enumeration() {
        let all = low_quotient_monomials(3, 8, 3, 1, 10_000).unwrap();
        let brute: Vec<_> = crate::monomial::monomials_of_degree(3, 8)
            .into_iter()
            .filter(|m| m.exps().iter().map(|e| e / 3).sum::<u32>() <= 1)
            .collect();
        assert_eq!(all.len(), brute.len());
        assert!(brute.iter().all(|m| all.contains(m)));
        assert!(low_quotient_monomials(3, 8, 3, 1, 3).is_none());
        assert_eq!(low_quotient_monomials(4, 4 * 46, 47, 0, 10).unwrap().len(), 1);
    }

    #[test]
    fn nu_examples() {
        let lim = Limits::default();
        for p in [2, 3, 5, 7] {
            assert_eq!(nu_invariant(&poly(p, "x0", 2), 1, &lim).unwrap(), p - 1);
        }
        // x0^2 and x1^3 = x1·x1^2 already lie in (x0^2, x1^2).
        assert_eq!(nu_invariant(&poly(2, "x0^2 + x1^3", 2), 1, &lim).unwrap(), 0);
        assert_eq!(nu_invariant(&poly(5, "x0x1x2", 3), 1, &lim).unwrap(), 4);
        assert!(nu_invariant(&poly(5, "x0 + 1", 1), 1, &lim).is_err());
    }

    #[test]
    fn remark_examples() {
        let z = |s: &str, n| Polynomial::parse(Integers, s, Some(n)).unwrap();
        let unit = Ideal::unit(Integers, 2);
        assert!(remark_containment_check(&unit, &z("x0", 2), 3).unwrap());
        let m = Ideal::maximal(Integers, 2);
        assert!(remark_containment_check(&m, &z("x0^2 + x1^3", 2), 2).unwrap());
        assert!(!remark_containment_check(&unit, &z("x0^2", 2), 2).unwrap());
        assert!(matches!(
            remark_containment_check(&unit, &z("2x0^2 + x1", 2), 2),
            Err(Error::BadPrime { p: 2, .. })
        ));
    }
}
