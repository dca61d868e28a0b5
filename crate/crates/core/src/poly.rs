//! Sparse multivariate polynomials over a [`Ring`], with the text grammar
//!
//! ```text
//! poly := ['+'|'-'] term (('+'|'-') term)*
//! term := [integer]['*'] (var['^' integer])*      var := x0 | x1 | ...
//! ```
//!
//! Whitespace is ignored. Printing produces the same grammar, so
//! `parse(print(f)) == f`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::ring::{content, Integers, PrimeField, Ring};

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<R: Ring> {
    ring: R,
    nvars: usize,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> Polynomial<R> {
    pub fn zero(ring: R, nvars: usize) -> Self {
        Polynomial {
            ring,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: R, nvars: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Monomial::one(nvars), c)
    }

    pub fn constant(ring: R, nvars: usize, c: R::Elem) -> Self {
        Self::monomial(ring, Monomial::one(nvars), c)
    }

    pub fn var(ring: R, nvars: usize, i: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Monomial::var(nvars, i), c)
    }

    pub fn monomial(ring: R, m: Monomial, c: R::Elem) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(m, c);
        }
        Polynomial { ring, nvars, terms }
    }

    /// Builds a polynomial from terms, combining repeats and dropping zeros.
    pub fn from_terms(
        ring: R,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, R::Elem)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ring, nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: m.nvars(),
                });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub(crate) fn from_sorted_unchecked(
        ring: R,
        nvars: usize,
        terms: BTreeMap<Monomial, R::Elem>,
    ) -> Self {
        Polynomial { ring, nvars, terms }
    }

    pub fn add_term(&mut self, m: Monomial, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ring.add(o.get(), &c);
                if self.ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    #[inline]
    pub fn ring(&self) -> &R {
        &self.ring
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R::Elem)> + '_ {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &R::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// The common degree of all terms; `None` for zero or mixed-degree input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(m.exps()) {
                *o = (*o).max(e);
            }
        }
        out
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Result<R::Elem> {
        if m.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: m.nvars(),
            });
        }
        Ok(self
            .terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.zero()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.ring != other.ring {
            return Err(Error::MixedDomain(format!(
                "{} vs {}",
                self.ring.describe(),
                other.ring.describe()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.ring.neg(c)))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(a, c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(n, c)| (n.mul(m), c.clone()))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// Schoolbook product with hash accumulation. The exponentiation kernel
    /// in [`crate::power`] is used for large powers.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = self.ring.mul(c1, c2);
                let key = m1.mul(m2);
                match acc.get_mut(&key) {
                    Some(v) => *v = self.ring.add(v, &prod),
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        let ring = self.ring.clone();
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        Ok(Polynomial {
            ring,
            nvars: self.nvars,
            terms,
        })
    }

    pub fn product<'a>(ring: R, nvars: usize, factors: impl IntoIterator<Item = &'a Self>) -> Result<Self>
    where
        R: 'a,
    {
        let mut acc = Self::one(ring, nvars);
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// Substitutes `x_i -> x_i^k` in every term.
    ///
    /// Over 𝔽_p with `k = p^e` this is exactly `f^k`, since `c^p = c`.
    pub fn expand_exponents(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.scale(k), c.clone()))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(self.ring.clone(), self.nvars))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Same polynomial with extra trailing variables that do not occur.
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        if nvars < self.nvars {
            let used = self.terms.keys().any(|m| m.exps()[nvars..].iter().any(|&e| e > 0));
            if used {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: self.nvars,
                });
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: Vec<u32> = m.exps().to_vec();
                e.resize(nvars, 0);
                (Monomial::new(e), c.clone())
            })
            .collect();
        Ok(Polynomial {
            ring: self.ring.clone(),
            nvars,
            terms,
        })
    }

    pub fn map_ring<S: Ring>(&self, target: S) -> Polynomial<S> {
        let mut out = Polynomial::zero(target.clone(), self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), target.from_int(&self.ring.to_int(c)));
        }
        out
    }

    /// Parses the text grammar; the variable count defaults to one more than
    /// the largest index that appears.
    pub fn parse(ring: R, text: &str, nvars: Option<usize>) -> Result<Self> {
        let parsed = parse_terms(text)?;
        let used = parsed
            .iter()
            .flat_map(|(_, vars)| vars.iter().map(|(i, _)| i + 1))
            .max()
            .unwrap_or(1);
        let nvars = match nvars {
            Some(n) if n < used => {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("variable x{} out of range for {n} variables", used - 1),
                })
            }
            Some(n) => n,
            None => used,
        };
        let mut out = Self::zero(ring.clone(), nvars);
        for (coeff, vars) in parsed {
            let mut exps = vec![0u32; nvars];
            for (i, e) in vars {
                exps[i] = exps[i].checked_add(e).ok_or_else(|| Error::Parse {
                    line: 1,
                    column: 1,
                    message: "exponent overflow".into(),
                })?;
            }
            out.add_term(Monomial::new(exps), ring.from_int(&coeff));
        }
        Ok(out)
    }
}

impl Polynomial<Integers> {
    pub fn content(&self) -> BigInt {
        content(self.terms.values())
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        let sign = match self.leading_term() {
            Some((_, c)) if c.is_negative() => -BigInt::one(),
            _ => BigInt::one(),
        };
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c / &g * &sign))
            .collect();
        Polynomial::from_sorted_unchecked(Integers, self.nvars, terms)
    }

    /// Coefficientwise reduction; the result may be zero.
    pub fn reduce_mod_p(&self, field: PrimeField) -> Polynomial<PrimeField> {
        self.map_ring(field)
    }
}

impl Polynomial<PrimeField> {
    /// Canonical integer lift, coefficients in `[0, p)`.
    pub fn lift(&self) -> Polynomial<Integers> {
        self.map_ring(Integers)
    }

    /// Evaluates at a point with coordinates in `[0, p)`.
    pub fn eval(&self, point: &[u64]) -> u64 {
        let f = self.ring;
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (&x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(&x, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }
}

/// Reduces an integer polynomial modulo `p`.
pub fn reduce_mod_p(f: &Polynomial<Integers>, field: PrimeField) -> Polynomial<PrimeField> {
    f.reduce_mod_p(field)
}

type ParsedTerm = (BigInt, Vec<(usize, u32)>);

fn parse_terms(text: &str) -> Result<Vec<ParsedTerm>> {
    let chars: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + 1, c))
        .collect();
    let end_col = text.chars().count() + 1;
    let err = |pos: usize, msg: &str| {
        let column = chars.get(pos).map_or(end_col, |(c, _)| *c);
        Error::Parse {
            line: 1,
            column,
            message: msg.to_string(),
        }
    };
    let number = |pos: &mut usize| -> Option<String> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].1.is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| chars[start..*pos].iter().map(|(_, c)| c).collect())
    };

    if chars.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut out = Vec::new();
    let mut pos = 0usize;
    let mut first = true;
    while pos < chars.len() {
        let mut negative = false;
        match chars[pos].1 {
            '+' => pos += 1,
            '-' => {
                negative = true;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(err(pos, "expected '+' or '-'")),
        }
        first = false;
        let term_start = pos;
        let mut coeff = match number(&mut pos) {
            Some(digits) => digits.parse::<BigInt>().expect("digits parse"),
            None => BigInt::one(),
        };
        let had_number = pos > term_start;
        if had_number && pos < chars.len() && chars[pos].1 == '*' {
            pos += 1;
            if pos >= chars.len() || chars[pos].1 != 'x' {
                return Err(err(pos, "expected a variable after '*'"));
            }
        }
        let mut vars = Vec::new();
        while pos < chars.len() && chars[pos].1 == 'x' {
            pos += 1;
            let idx = number(&mut pos).ok_or_else(|| err(pos, "expected variable index"))?;
            let idx: usize = idx.parse().map_err(|_| err(pos, "variable index too large"))?;
            let mut e = 1u32;
            if pos < chars.len() && chars[pos].1 == '^' {
                pos += 1;
                let digits = number(&mut pos).ok_or_else(|| err(pos, "expected exponent"))?;
                e = digits.parse().map_err(|_| err(pos, "exponent too large"))?;
            }
            vars.push((idx, e));
            if pos < chars.len() && chars[pos].1 == '*' {
                pos += 1;
                if pos >= chars.len() || chars[pos].1 != 'x' {
                    return Err(err(pos, "expected a variable after '*'"));
                }
            }
        }
        if !had_number && vars.is_empty() {
            return Err(err(term_start, "expected a term"));
        }
        if negative {
            coeff = -coeff;
        }
        out.push((coeff, vars));
    }
    Ok(out)
}

impl<R: Ring> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let c = self.ring.to_int(c);
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.ring.describe())
    }
}
