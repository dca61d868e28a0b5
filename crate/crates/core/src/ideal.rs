//! Ideals given by generators, with graded linear algebra.
//!
//! For a homogeneous ideal `I` the degree-`d` piece `I_d` is spanned by
//! `{m·g : g a generator, m a monomial of degree d − deg g}`, so membership,
//! containment and Hilbert functions reduce to ranks of finite matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Row};
use crate::monomial::{count_of_degree, monomials_of_degree, Monomial};
use crate::poly::Polynomial;
use crate::power::{poly_power, Limits};
use crate::ring::{Integers, PrimeField, Ring};

/// An ideal of `R[x0..xN]` given by nonzero generators.
///
/// Graded operations require homogeneous generators. Frobenius roots of
/// non-homogeneous polynomials are still representable; only the container
/// side of a containment test must be homogeneous.
#[derive(Clone, PartialEq, Eq)]
pub struct Ideal<R: Ring> {
    ring: R,
    nvars: usize,
    gens: Vec<Polynomial<R>>,
}

pub type HomogeneousIdeal<R> = Ideal<R>;

impl<R: Ring> Ideal<R> {
    /// Zero generators are dropped.
    pub fn new(ring: R, nvars: usize, gens: impl IntoIterator<Item = Polynomial<R>>) -> Result<Self> {
        let mut out = Vec::new();
        for g in gens {
            if g.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
            if g.ring() != &ring {
                return Err(Error::MixedDomain(format!(
                    "generator over {} in an ideal over {}",
                    g.ring().describe(),
                    ring.describe()
                )));
            }
            if !g.is_zero() {
                out.push(g);
            }
        }
        Ok(Ideal {
            ring,
            nvars,
            gens: out,
        })
    }

    pub fn principal(f: Polynomial<R>) -> Self {
        let ring = f.ring().clone();
        let nvars = f.nvars();
        Self::new(ring, nvars, [f]).expect("single generator is compatible")
    }

    pub fn zero(ring: R, nvars: usize) -> Self {
        Ideal {
            ring,
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn unit(ring: R, nvars: usize) -> Self {
        Self::principal(Polynomial::one(ring, nvars))
    }

    /// `(x0, ..., xN)`.
    pub fn maximal(ring: R, nvars: usize) -> Self {
        Self::maximal_power(ring, nvars, 1)
    }

    /// `𝔪^k`, generated by all degree-`k` monomials; `𝔪^0` is the unit ideal.
    pub fn maximal_power(ring: R, nvars: usize, k: u32) -> Self {
        let one = ring.one();
        let gens = monomials_of_degree(nvars, k)
            .into_iter()
            .map(|m| Polynomial::monomial(ring.clone(), m, one.clone()))
            .collect();
        Ideal { ring, nvars, gens }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial<R>] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Polynomial::is_homogeneous)
    }

    /// True when some generator is a nonzero constant.
    pub fn has_unit_generator(&self) -> bool {
        self.gens.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    fn is_monomial_ideal(&self) -> bool {
        self.gens.iter().all(|g| g.len() == 1)
    }

    fn require_homogeneous(&self) -> Result<()> {
        if self.is_homogeneous() {
            Ok(())
        } else {
            Err(Error::NotHomogeneous(format!("ideal {self}")))
        }
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
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

    /// The degree-`d` component as an echelon basis.
    pub fn graded_piece(&self, d: u32, limits: &Limits) -> Result<GradedPiece<R>> {
        self.require_homogeneous()?;
        if d > limits.max_degree {
            return Err(Error::resource(format!("degree {d} above cap")));
        }
        let cols = count_of_degree(self.nvars, d);
        if cols > limits.max_piece_columns {
            return Err(Error::resource(format!(
                "degree-{d} piece has {cols} monomials"
            )));
        }
        let mut echelon = Echelon::new(self.ring.clone());
        let mut by_degree: Vec<&Polynomial<R>> = self
            .gens
            .iter()
            .filter(|g| g.homogeneous_degree().is_some_and(|e| e <= d))
            .collect();
        by_degree.sort_by_key(|g| std::cmp::Reverse(g.homogeneous_degree()));
        for g in by_degree {
            let e = g.homogeneous_degree().expect("filtered");
            for m in monomials_of_degree(self.nvars, d - e) {
                echelon.insert(row_of(&g.mul_monomial(&m)));
                if echelon.rank() as u128 == cols {
                    break;
                }
            }
            if echelon.rank() as u128 == cols {
                break;
            }
        }
        Ok(GradedPiece {
            ring: self.ring.clone(),
            degree: d,
            nvars: self.nvars,
            echelon,
        })
    }

    pub fn contains_poly(&self, f: &Polynomial<R>) -> Result<bool> {
        self.contains_poly_with(f, &Limits::default())
    }

    /// Membership, one homogeneous component at a time.
    pub fn contains_poly_with(&self, f: &Polynomial<R>, limits: &Limits) -> Result<bool> {
        if f.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: f.nvars(),
            });
        }
        if f.ring() != &self.ring {
            return Err(Error::MixedDomain(format!(
                "{} vs {}",
                f.ring().describe(),
                self.ring.describe()
            )));
        }
        if f.is_zero() || self.has_unit_generator() {
            return Ok(true);
        }
        self.require_homogeneous()?;
        if self.is_monomial_ideal() {
            let leads: Vec<&Monomial> = self.gens.iter().map(|g| g.leading_term().unwrap().0).collect();
            return Ok(f.terms().all(|(m, _)| leads.iter().any(|l| l.divides(m))));
        }
        for (d, comp) in f.homogeneous_components() {
            if !self.graded_piece(d, limits)?.contains(&comp) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.contains_with(other, &Limits::default())
    }

    pub fn contains_with(&self, other: &Self, limits: &Limits) -> Result<bool> {
        self.check_same_ambient(other)?;
        if other.is_zero() || self.has_unit_generator() {
            return Ok(true);
        }
        self.require_homogeneous()?;
        if self.is_monomial_ideal() {
            for g in &other.gens {
                if !self.contains_poly_with(g, limits)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let mut pieces: BTreeMap<u32, GradedPiece<R>> = BTreeMap::new();
        for g in &other.gens {
            for (d, comp) in g.homogeneous_components() {
                if !pieces.contains_key(&d) {
                    pieces.insert(d, self.graded_piece(d, limits)?);
                }
                if !pieces[&d].contains(&comp) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    /// `dim (R/I)_d` for `d = 0..=d_max`.
    pub fn hilbert_function(&self, d_max: u32) -> Result<Vec<u64>> {
        self.hilbert_function_with(0..=d_max, &Limits::default())
    }

    pub fn hilbert_function_with(&self, degrees: RangeInclusive<u32>, limits: &Limits) -> Result<Vec<u64>> {
        self.require_homogeneous()?;
        degrees
            .map(|d| {
                let total = count_of_degree(self.nvars, d);
                let rank = if self.is_zero() {
                    0
                } else {
                    self.graded_piece(d, limits)?.rank() as u128
                };
                u64::try_from(total - rank).map_err(|_| Error::resource("Hilbert value overflow"))
            })
            .collect()
    }

    /// Degree of the Hilbert polynomial read off the window by finite
    /// differences: the projective dimension of `V(I)`, with `-1` for the
    /// empty set. The window must lie in the range where the Hilbert function
    /// is already polynomial.
    pub fn dimension_estimate(&self, window: RangeInclusive<u32>) -> Result<i64> {
        self.dimension_estimate_with(window, &Limits::default())
    }

    pub fn dimension_estimate_with(&self, window: RangeInclusive<u32>, limits: &Limits) -> Result<i64> {
        let values: Vec<i128> = self
            .hilbert_function_with(window.clone(), limits)?
            .into_iter()
            .map(i128::from)
            .collect();
        dimension_from_values(&values).ok_or_else(|| {
            Error::InconclusiveWindow(format!(
                "Hilbert values {values:?} on {window:?} do not settle"
            ))
        })
    }

    /// Drops generators lying in the ideal of the others (fixed-degree
    /// membership, smallest degrees first). Non-homogeneous ideals are only
    /// deduplicated.
    pub fn trimmed(&self) -> Result<Self> {
        self.trimmed_with(&Limits::default())
    }

    pub fn trimmed_with(&self, limits: &Limits) -> Result<Self> {
        if self.has_unit_generator() {
            return Ok(Self::unit(self.ring.clone(), self.nvars));
        }
        if !self.is_homogeneous() {
            let mut seen: Vec<Polynomial<R>> = Vec::new();
            for g in &self.gens {
                let n = monic_form(g);
                if !seen.contains(&n) {
                    seen.push(n);
                }
            }
            return Self::new(self.ring.clone(), self.nvars, seen);
        }
        let mut groups: BTreeMap<u32, Vec<&Polynomial<R>>> = BTreeMap::new();
        for g in &self.gens {
            groups
                .entry(g.homogeneous_degree().expect("homogeneous and nonzero"))
                .or_default()
                .push(g);
        }
        let mut kept: Vec<Polynomial<R>> = Vec::new();
        for (d, group) in groups {
            let current = Self::new(self.ring.clone(), self.nvars, kept.clone())?;
            let mut piece = current.graded_piece(d, limits)?;
            for g in group {
                if piece.echelon.insert(row_of(g)) {
                    kept.push(monic_form(g));
                }
            }
        }
        Self::new(self.ring.clone(), self.nvars, kept)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same_ambient(other)?;
        Self::new(
            self.ring.clone(),
            self.nvars,
            self.gens.iter().chain(other.gens.iter()).cloned(),
        )
    }

    /// `f·I`.
    pub fn mul_poly(&self, f: &Polynomial<R>) -> Result<Self> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.mul(f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ring.clone(), self.nvars, gens)
    }

    /// `I^n`, generated by all products of `n` generators; `I^0 = R`.
    pub fn power(&self, n: u64, limits: &Limits) -> Result<Self> {
        if n == 0 {
            return Ok(Self::unit(self.ring.clone(), self.nvars));
        }
        if let [g] = self.gens.as_slice() {
            return Ok(Self::principal(poly_power(g, n, limits)?));
        }
        let m = self.gens.len();
        let count = crate::monomial::binomial(n + m as u64 - 1, m as u64 - 1);
        if count > limits.max_generators as u128 {
            return Err(Error::resource(format!(
                "power {n} of a {m}-generator ideal has {count} generators"
            )));
        }
        let mut gens = Vec::new();
        for exps in crate::monomial::compositions(m, n as u32 + m as u32, 1) {
            let mut acc = Polynomial::one(self.ring.clone(), self.nvars);
            for (g, &e) in self.gens.iter().zip(exps.iter()) {
                if e > 1 {
                    acc = acc.mul(&poly_power(g, (e - 1) as u64, limits)?)?;
                }
            }
            gens.push(acc);
        }
        Self::new(self.ring.clone(), self.nvars, gens)?.trimmed_with(limits)
    }
}

/// Large primes whose ranks stand in for ranks over ℚ.
pub const RATIONAL_RANK_PRIMES: [u64; 2] = [4_294_967_291, 4_294_967_279];

impl Ideal<Integers> {
    pub fn reduce_mod_p(&self, field: PrimeField) -> Ideal<PrimeField> {
        Ideal::new(field, self.nvars, self.gens.iter().map(|g| g.reduce_mod_p(field)))
            .expect("reduction keeps the ambient ring")
    }

    /// Hilbert function over ℚ from ranks modulo [`RATIONAL_RANK_PRIMES`],
    /// keeping the smaller value in each degree. A rank mod `P` never
    /// exceeds the rational rank, and agrees with it unless `P` divides
    /// every nonzero maximal minor of the piece.
    pub fn rational_hilbert_function(&self, degrees: RangeInclusive<u32>, limits: &Limits) -> Result<Vec<u64>> {
        let mut best: Option<Vec<u64>> = None;
        for p in RATIONAL_RANK_PRIMES {
            let field = PrimeField::new(p)?;
            let hf = self.reduce_mod_p(field).hilbert_function_with(degrees.clone(), limits)?;
            best = Some(match best {
                None => hf,
                Some(prev) => prev.into_iter().zip(hf).map(|(a, b)| a.min(b)).collect(),
            });
        }
        Ok(best.expect("at least one prime"))
    }

    /// [`Ideal::dimension_estimate`] over ℚ through
    /// [`Ideal::rational_hilbert_function`].
    pub fn rational_dimension_estimate(&self, window: RangeInclusive<u32>, limits: &Limits) -> Result<i64> {
        let values: Vec<i128> = self
            .rational_hilbert_function(window.clone(), limits)?
            .into_iter()
            .map(i128::from)
            .collect();
        dimension_from_values(&values).ok_or_else(|| {
            Error::InconclusiveWindow(format!("Hilbert values {values:?} on {window:?} do not settle"))
        })
    }
}

/// Scales so the leading coefficient is canonical (monic over a field,
/// primitive over ℤ).
fn monic_form<R: Ring>(g: &Polynomial<R>) -> Polynomial<R> {
    let row = row_of(g);
    let mut coeffs: Vec<R::Elem> = row.iter().map(|(_, c)| c.clone()).collect();
    g.ring().normalize_row(&mut coeffs);
    Polynomial::from_terms(
        g.ring().clone(),
        g.nvars(),
        row.into_iter().map(|(m, _)| m).zip(coeffs),
    )
    .expect("same variables")
}

fn row_of<R: Ring>(g: &Polynomial<R>) -> Row<R::Elem> {
    g.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Takes finite differences until a level is constant over at least two
/// values; returns that level's index, or `-1` if the values are all zero.
fn dimension_from_values(values: &[i128]) -> Option<i64> {
    if values.len() >= 2 && values.iter().all(|&v| v == 0) {
        return Some(-1);
    }
    let mut level = values.to_vec();
    let mut k = 0i64;
    while level.len() >= 2 {
        if level.windows(2).all(|w| w[0] == w[1]) {
            return (level[0] != 0).then_some(k);
        }
        level = level.windows(2).map(|w| w[1] - w[0]).collect();
        k += 1;
    }
    None
}

/// Degree-`d` component of an ideal.
#[derive(Clone, Debug)]
pub struct GradedPiece<R: Ring> {
    ring: R,
    degree: u32,
    nvars: usize,
    echelon: Echelon<R>,
}

impl<R: Ring> GradedPiece<R> {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// All degree-`d` monomials, descending lex; the column order.
    pub fn monomials(&self) -> Vec<Monomial> {
        monomials_of_degree(self.nvars, self.degree)
    }

    pub fn contains(&self, f: &Polynomial<R>) -> bool {
        self.echelon.contains(row_of(f))
    }

    /// Echelon rows as polynomials.
    pub fn basis(&self) -> Vec<Polynomial<R>> {
        self.echelon
            .rows()
            .iter()
            .map(|r| {
                Polynomial::from_terms(self.ring.clone(), self.nvars, r.iter().cloned())
                    .expect("rows share the ambient ring")
            })
            .collect()
    }

    /// Dense coefficient matrix over the monomial columns.
    pub fn matrix(&self) -> Vec<Vec<R::Elem>> {
        let cols = self.monomials();
        let ring = &self.ring;
        self.basis()
            .iter()
            .map(|row| {
                cols.iter()
                    .map(|m| row.coefficient_of(m).unwrap_or_else(|_| ring.zero()))
                    .collect()
            })
            .collect()
    }
}

impl<R: Ring> fmt::Display for Ideal<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl<R: Ring> fmt::Debug for Ideal<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.ring.describe())
    }
}
