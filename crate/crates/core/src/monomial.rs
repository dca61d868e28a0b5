//! Exponent vectors for monomials in `x0..xN`.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

pub type Exponents = SmallVec<[u32; 8]>;

/// Exponent vector with its cached total degree.
///
/// Ordering is lexicographic on the exponents (`x0` most significant), so the
/// largest monomial of a degree is `x0^d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exponents,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: impl AsRef<[u32]>) -> Self {
        let exps = Exponents::from_slice(exps.as_ref());
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a - b)
                .collect(),
            degree: self.degree - other.degree,
        })
    }

    pub fn scale(&self, k: u32) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|a| a * k).collect(),
            degree: self.degree * k,
        }
    }

    /// Splits `self = q * quotient + remainder` componentwise.
    pub fn digit_split(&self, q: u32) -> (Monomial, Monomial) {
        let quot: Exponents = self.exps.iter().map(|a| a / q).collect();
        let rem: Exponents = self.exps.iter().map(|a| a % q).collect();
        (Monomial::new(&quot), Monomial::new(&rem))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "x{i}")?,
                _ => write!(f, "x{i}^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Binomial coefficient with saturation at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn count_of_degree(nvars: usize, d: u32) -> u128 {
    if nvars == 0 {
        return u128::from(d == 0);
    }
    binomial(d as u64 + nvars as u64 - 1, nvars as u64 - 1)
}

/// All monomials of degree `d` in `nvars` variables, in descending lex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur: Exponents = SmallVec::from_elem(0, nvars);
    fill_descending(&mut cur, 0, d, &mut out);
    out
}

fn fill_descending(cur: &mut Exponents, i: usize, left: u32, out: &mut Vec<Monomial>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(Monomial::new(&cur));
        return;
    }
    for a in (0..=left).rev() {
        cur[i] = a;
        fill_descending(cur, i + 1, left - a, out);
    }
}

/// Compositions of `total` into `parts` parts, each at least `min_part`,
/// in ascending lex order.
pub fn compositions(parts: usize, total: u32, min_part: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(SmallVec::new());
        }
        return out;
    }
    if (parts as u64) * (min_part as u64) > total as u64 {
        return out;
    }
    let mut cur: Exponents = SmallVec::from_elem(0, parts);
    fill_ascending(&mut cur, 0, total, min_part, &mut out);
    out
}

fn fill_ascending(cur: &mut Exponents, i: usize, left: u32, min: u32, out: &mut Vec<Exponents>) {
    let rest = (cur.len() - i - 1) as u32;
    if rest == 0 {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    let max = left - rest * min;
    for a in min..=max {
        cur[i] = a;
        fill_ascending(cur, i + 1, left - a, min, out);
    }
}
