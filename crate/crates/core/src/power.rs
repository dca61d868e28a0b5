//! Exponentiation kernel.
//!
//! Over 𝔽_p the exponent is split into base-p digits,
//! `f^n = Π (f^{n_i})^{[p^i]}`, where each Frobenius twist only rescales
//! exponents. Digit powers are built by a multiplication ladder with packed
//! monomial keys, accumulated densely when the exponent box is small and in
//! a hash table otherwise.
//!
//! Callers that only need part of a power pass a downward-closed
//! [`ExponentFilter`]: a product term can only land in the filter if both
//! factors do, so truncating every intermediate result is exact.

use std::any::Any;
use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::{PrimeField, Ring};

/// Per-call resource caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of terms any intermediate polynomial may hold.
    pub max_terms: usize,
    /// Largest total degree handled by graded linear algebra.
    pub max_degree: u32,
    /// Largest number of columns (monomials) in one graded piece.
    pub max_piece_columns: u128,
    /// Largest generator count for ideal powers and roots.
    pub max_generators: usize,
    /// Largest side of a dense matrix over 𝔽_p (Frobenius matrices and
    /// their subspaces).
    pub max_matrix_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_terms: 6_000_000,
            max_degree: 1 << 16,
            max_piece_columns: 400_000,
            max_generators: 20_000,
            max_matrix_dim: 1_500,
        }
    }
}

/// A downward-closed set of exponent vectors.
pub trait ExponentFilter: Sync {
    fn allows(&self, exps: &[u32]) -> bool;

    /// True when the filter keeps everything.
    fn is_trivial(&self) -> bool {
        false
    }

    /// Componentwise upper bounds implied by the filter, if any.
    fn bounds(&self) -> Option<Vec<u32>> {
        None
    }
}

/// Keeps every term.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoFilter;

impl ExponentFilter for NoFilter {
    fn allows(&self, _: &[u32]) -> bool {
        true
    }

    fn is_trivial(&self) -> bool {
        true
    }
}

/// Keeps terms with `exps[i] <= bound[i]` for every `i`.
#[derive(Clone, Debug)]
pub struct BoxFilter(pub Vec<u32>);

impl ExponentFilter for BoxFilter {
    fn allows(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.0).all(|(e, b)| e <= b)
    }

    fn bounds(&self) -> Option<Vec<u32>> {
        Some(self.0.clone())
    }
}

/// Keeps terms whose base-`q` quotient `Σ ⌊e_i / q⌋` is at most `max`.
///
/// These are exactly the terms that contribute a Frobenius-root generator of
/// degree `<= max`.
#[derive(Clone, Debug)]
pub struct QuotientDegreeFilter {
    pub q: u32,
    pub max: u32,
    pub nvars: usize,
}

impl ExponentFilter for QuotientDegreeFilter {
    fn allows(&self, exps: &[u32]) -> bool {
        let mut s = 0u32;
        for &e in exps {
            s += e / self.q;
            if s > self.max {
                return false;
            }
        }
        true
    }

    fn bounds(&self) -> Option<Vec<u32>> {
        let b = self.q.saturating_mul(self.max + 1).saturating_sub(1);
        Some(vec![b; self.nvars])
    }
}

/// Exact `f^n`; `f^0 = 1`.
pub fn poly_power<R: Ring>(f: &Polynomial<R>, n: u64, limits: &Limits) -> Result<Polynomial<R>> {
    if let Some(fp) = (f as &dyn Any).downcast_ref::<Polynomial<PrimeField>>() {
        let out = power_fp(fp, n, &NoFilter, limits)?;
        let boxed: Box<dyn Any> = Box::new(out);
        return Ok(*boxed.downcast::<Polynomial<R>>().expect("same ring type"));
    }
    generic_power(f, n, &NoFilter, limits)
}

/// The terms of `f^n` that pass `filter`.
pub fn poly_power_filtered(
    f: &Polynomial<PrimeField>,
    n: u64,
    filter: &dyn ExponentFilter,
    limits: &Limits,
) -> Result<Polynomial<PrimeField>> {
    power_fp(f, n, filter, limits)
}

fn filtered<R: Ring>(f: &Polynomial<R>, filter: &dyn ExponentFilter) -> Polynomial<R> {
    let terms: BTreeMap<Monomial, R::Elem> = f
        .terms()
        .filter(|(m, _)| filter.allows(m.exps()))
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    Polynomial::from_sorted_unchecked(f.ring().clone(), f.nvars(), terms)
}

fn check_terms(len: usize, limits: &Limits) -> Result<()> {
    if len > limits.max_terms {
        return Err(Error::resource(format!(
            "power has more than {} terms",
            limits.max_terms
        )));
    }
    Ok(())
}

/// Square-and-multiply on the sparse representation.
fn generic_power<R: Ring>(
    f: &Polynomial<R>,
    mut n: u64,
    filter: &dyn ExponentFilter,
    limits: &Limits,
) -> Result<Polynomial<R>> {
    let mut acc = filtered(&Polynomial::one(f.ring().clone(), f.nvars()), filter);
    let mut base = filtered(f, filter);
    while n > 0 {
        if n & 1 == 1 {
            acc = filtered(&acc.mul(&base)?, filter);
            check_terms(acc.len(), limits)?;
        }
        n >>= 1;
        if n > 0 {
            base = filtered(&base.mul(&base)?, filter);
            check_terms(base.len(), limits)?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug)]
struct Packing {
    nvars: usize,
    bits: u32,
}

impl Packing {
    fn new(nvars: usize, max_exp: u64) -> Option<Packing> {
        let bits = (64 - max_exp.leading_zeros()).max(1);
        (nvars as u64 * bits as u64 <= 128 && nvars <= 32).then_some(Packing { nvars, bits })
    }

    #[inline]
    fn pack(&self, exps: &[u32]) -> u128 {
        let mut key = 0u128;
        for &e in exps {
            key = (key << self.bits) | e as u128;
        }
        key
    }

    #[inline]
    fn unpack(&self, mut key: u128, out: &mut [u32]) {
        let mask = (1u128 << self.bits) - 1;
        for slot in out[..self.nvars].iter_mut().rev() {
            *slot = (key & mask) as u32;
            key >>= self.bits;
        }
    }
}

type Terms = Vec<(u128, u64)>;

struct Kernel<'a> {
    field: PrimeField,
    packing: Packing,
    filter: &'a dyn ExponentFilter,
    filter_bounds: Option<Vec<u32>>,
    limits: &'a Limits,
}

const DENSE_CELLS: u64 = 1 << 23;
const LADDER_MAX_TERMS: usize = 64;

impl Kernel<'_> {
    fn max_exps(&self, t: &Terms) -> (Vec<u32>, Option<u32>) {
        let mut buf = [0u32; 32];
        let mut max = vec![0u32; self.packing.nvars];
        let mut degree: Option<Option<u32>> = None;
        for &(k, _) in t {
            self.packing.unpack(k, &mut buf);
            let d: u32 = buf[..self.packing.nvars].iter().sum();
            degree = match degree {
                None => Some(Some(d)),
                Some(Some(prev)) if prev == d => Some(Some(d)),
                _ => Some(None),
            };
            for (m, &e) in max.iter_mut().zip(&buf) {
                *m = (*m).max(e);
            }
        }
        (max, degree.flatten())
    }

    fn mul(&self, a: &Terms, b: &Terms) -> Result<Terms> {
        if a.is_empty() || b.is_empty() {
            return Ok(Vec::new());
        }
        let nv = self.packing.nvars;
        let (ma, da) = self.max_exps(a);
        let (mb, db) = self.max_exps(b);
        let mut bound: Vec<u32> = ma.iter().zip(&mb).map(|(x, y)| x + y).collect();
        if let Some(fb) = &self.filter_bounds {
            for (x, y) in bound.iter_mut().zip(fb) {
                *x = (*x).min(*y);
            }
        }
        // A homogeneous product is determined by all but its last exponent.
        let degree = match (da, db) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        let dims = if degree.is_some() && nv > 1 { nv - 1 } else { nv };
        let mut cells: u64 = 1;
        for &b in &bound[..dims] {
            cells = cells.saturating_mul(b as u64 + 1);
        }
        if cells <= DENSE_CELLS {
            self.mul_dense(a, b, &bound, dims, degree)
        } else {
            self.mul_hashed(a, b)
        }
    }

    fn mul_dense(
        &self,
        a: &Terms,
        b: &Terms,
        bound: &[u32],
        dims: usize,
        degree: Option<u32>,
    ) -> Result<Terms> {
        const SEEN: u64 = 1 << 63;
        let p = self.field.p();
        let nv = self.packing.nvars;
        let mut strides = vec![0u64; dims];
        let mut cells = 1u64;
        for i in (0..dims).rev() {
            strides[i] = cells;
            cells *= bound[i] as u64 + 1;
        }
        let mut acc = vec![0u64; cells as usize];
        let mut touched: Vec<u32> = Vec::new();
        let mut buf = [0u32; 32];
        for &(ka, ca) in a {
            for &(kb, cb) in b {
                let key = ka + kb;
                self.packing.unpack(key, &mut buf);
                if buf[..nv].iter().zip(bound).any(|(e, b)| e > b)
                    || !self.filter.allows(&buf[..nv])
                {
                    continue;
                }
                let mut idx = 0u64;
                for i in 0..dims {
                    idx += buf[i] as u64 * strides[i];
                }
                let cell = &mut acc[idx as usize];
                if *cell & SEEN == 0 {
                    touched.push(idx as u32);
                    *cell = SEEN;
                }
                let v = *cell & !SEEN;
                *cell = SEEN | ((v + ca * cb) % p);
            }
        }
        if touched.len() > self.limits.max_terms {
            return Err(Error::resource(format!(
                "power has more than {} terms",
                self.limits.max_terms
            )));
        }
        let mut out = Vec::with_capacity(touched.len());
        for idx in touched {
            let v = acc[idx as usize] & !SEEN;
            if v == 0 {
                continue;
            }
            let mut rest = idx as u64;
            let mut sum = 0u32;
            for i in 0..dims {
                buf[i] = (rest / strides[i]) as u32;
                rest %= strides[i];
                sum += buf[i];
            }
            if let (Some(d), true) = (degree, dims < nv) {
                buf[nv - 1] = d - sum;
            }
            out.push((self.packing.pack(&buf[..nv]), v));
        }
        Ok(out)
    }

    fn mul_hashed(&self, a: &Terms, b: &Terms) -> Result<Terms> {
        let p = self.field.p();
        let nv = self.packing.nvars;
        let mut acc: FxHashMap<u128, u64> = FxHashMap::default();
        let mut buf = [0u32; 32];
        for &(ka, ca) in a {
            for &(kb, cb) in b {
                let key = ka + kb;
                if !self.filter.is_trivial() {
                    self.packing.unpack(key, &mut buf);
                    if !self.filter.allows(&buf[..nv]) {
                        continue;
                    }
                }
                let slot = acc.entry(key).or_insert(0);
                *slot = (*slot + ca * cb) % p;
            }
            if acc.len() > self.limits.max_terms {
                return Err(Error::resource(format!(
                    "power has more than {} terms",
                    self.limits.max_terms
                )));
            }
        }
        Ok(acc.into_iter().filter(|&(_, c)| c != 0).collect())
    }

    /// `f^m` with the digit `m < p` (or any `m` when `f` is small).
    fn small_power(&self, f: &Terms, m: u64) -> Result<Terms> {
        let one = vec![(0u128, 1 % self.field.p())];
        if m == 0 {
            return Ok(one);
        }
        if f.len() <= LADDER_MAX_TERMS {
            let mut acc = f.clone();
            for _ in 1..m {
                acc = self.mul(&acc, f)?;
            }
            return Ok(acc);
        }
        let mut acc = one;
        let mut base = f.clone();
        let mut n = m;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    fn twist(&self, t: &Terms, k: u64) -> Terms {
        let nv = self.packing.nvars;
        let mut buf = [0u32; 32];
        t.iter()
            .filter_map(|&(key, c)| {
                self.packing.unpack(key, &mut buf);
                for e in buf[..nv].iter_mut() {
                    *e = (*e as u64 * k) as u32;
                }
                self.filter
                    .allows(&buf[..nv])
                    .then(|| (self.packing.pack(&buf[..nv]), c))
            })
            .collect()
    }
}

fn power_fp(
    f: &Polynomial<PrimeField>,
    n: u64,
    filter: &dyn ExponentFilter,
    limits: &Limits,
) -> Result<Polynomial<PrimeField>> {
    let field = *f.ring();
    let nv = f.nvars();
    if n == 0 {
        return Ok(filtered(&Polynomial::one(field, nv), filter));
    }
    let f = filtered(f, filter);
    if f.is_zero() {
        return Ok(f);
    }
    let filter_bounds = filter.bounds();
    let max_f = f.max_exponents();
    let mut max_exp = 0u64;
    for (i, &e) in max_f.iter().enumerate() {
        let mut b = (e as u64).saturating_mul(n);
        if let Some(fb) = &filter_bounds {
            b = b.min(fb[i] as u64);
        }
        max_exp = max_exp.max(b);
    }
    if max_exp > u32::MAX as u64 / 2 {
        return Err(Error::resource(format!("exponent {max_exp} too large")));
    }
    // Two in-filter factors may sum past the bound before the filter rejects
    // the product, so every field gets one spare bit.
    let Some(packing) = Packing::new(nv, 2 * max_exp + 1) else {
        return generic_power(&f, n, filter, limits);
    };
    let kernel = Kernel {
        field,
        packing,
        filter,
        filter_bounds,
        limits,
    };
    let base: Terms = f
        .terms()
        .map(|(m, c)| (packing.pack(m.exps()), *c))
        .collect();

    let p = field.p();
    let mut digits = Vec::new();
    let mut rest = n;
    while rest > 0 {
        digits.push(rest % p);
        rest /= p;
    }
    let mut cache: BTreeMap<u64, Terms> = BTreeMap::new();
    let mut result: Option<Terms> = None;
    let mut scale = 1u64;
    for &d in &digits {
        if d > 0 {
            if !cache.contains_key(&d) {
                let t = kernel.small_power(&base, d)?;
                cache.insert(d, t);
            }
            let factor = kernel.twist(&cache[&d], scale);
            result = Some(match result {
                None => factor,
                Some(acc) => kernel.mul(&acc, &factor)?,
            });
        }
        scale = scale.saturating_mul(p);
    }
    let terms = result.expect("n > 0 has a nonzero digit");
    let mut buf = [0u32; 32];
    let map: BTreeMap<Monomial, u64> = terms
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(k, c)| {
            packing.unpack(k, &mut buf);
            (Monomial::new(&buf[..nv]), c)
        })
        .collect();
    Ok(Polynomial::from_sorted_unchecked(field, nv, map))
}

/// Coefficients of `f^n` at `targets`, in order.
///
/// Splits `f^n = f^{⌈n/2⌉} · f^{⌊n/2⌋}`, truncates both halves to the box
/// spanned by the targets and reads each coefficient off as a dot product,
/// which avoids forming the full power when few coefficients are needed.
pub fn power_coefficients(
    f: &Polynomial<PrimeField>,
    n: u64,
    targets: &[Monomial],
    limits: &Limits,
) -> Result<Vec<u64>> {
    let field = *f.ring();
    let nv = f.nvars();
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(t) = targets.iter().find(|t| t.nvars() != nv) {
        return Err(Error::DimensionMismatch {
            expected: nv,
            found: t.nvars(),
        });
    }
    let mut bounds = vec![0u32; nv];
    for t in targets {
        for (b, &e) in bounds.iter_mut().zip(t.exps()) {
            *b = (*b).max(e);
        }
    }
    let filter = BoxFilter(bounds);
    let low = n / 2;
    let high = power_fp(f, n - low, &filter, limits)?;
    let low = if low == n - low {
        high.clone()
    } else {
        power_fp(f, low, &filter, limits)?
    };
    let lookup: FxHashMap<&Monomial, u64> = low.terms().map(|(m, c)| (m, *c)).collect();
    Ok(targets
        .iter()
        .map(|t| {
            high.terms().fold(0u64, |acc, (m, c)| match t.div(m) {
                Some(rest) => match lookup.get(&rest) {
                    Some(v) => field.add(&acc, &field.mul_mod(*c, *v)),
                    None => acc,
                },
                None => acc,
            })
        })
        .collect())
}
