//! Graded pieces of `E = H^{N+1}_𝔪(R)`, presented as the span of inverse
//! monomials `x^{−a}` with every `a_i >= 1`, and the twisted Frobenius
//! `u ↦ (Π g_i)^{p−1} F_E(u)` on annihilator subspaces.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_mod_p, nullspace_mod_p, rref, Matrix};
use crate::monomial::{binomial, compositions, Monomial};
use crate::poly::Polynomial;
use crate::power::{power_coefficients, Limits};
use crate::ring::{PrimeField, Ring};
use crate::test_ideal::{containment_power_check, fedder_root_through_degree};

/// The piece `E_{−j}`: basis `x^{−a}` for the compositions `a` of `j` into
/// `N+1` positive parts, in lex order.
#[derive(Clone, Debug)]
pub struct EGradedPiece {
    nvars: usize,
    j: u32,
    basis: Vec<Monomial>,
    index: FxHashMap<Monomial, usize>,
}

impl EGradedPiece {
    /// Ambient projective dimension `N`.
    pub fn ambient_dim(&self) -> usize {
        self.nvars - 1
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// The internal degree, `−j`.
    pub fn degree(&self) -> i64 {
        -(self.j as i64)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Exponent vectors `a`, each standing for `x^{−a}`.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, a: &Monomial) -> Option<usize> {
        self.index.get(a).copied()
    }
}

/// `E_{−j}` inside the local cohomology of `k[x_0..x_N]`.
pub fn e_piece(n: usize, j: u32, limits: &Limits) -> Result<EGradedPiece> {
    if j == 0 {
        return Err(Error::invalid("E-piece index j must be positive"));
    }
    let size = binomial(j as u64 - 1, n as u64);
    if size > limits.max_piece_columns {
        return Err(Error::resource(format!("E_-{j} in P^{n} has {size} basis classes")));
    }
    let basis: Vec<Monomial> = compositions(n + 1, j, 1).into_iter().map(Monomial::new).collect();
    let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    Ok(EGradedPiece {
        nvars: n + 1,
        j,
        basis,
        index,
    })
}

/// A homogeneous element of `E_{−j}` over 𝔽_p, stored sparsely as `a ↦ c`
/// for the terms `c·x^{−a}`. `j = 0` only occurs for the zero class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EClass {
    pub field: PrimeField,
    pub nvars: usize,
    pub j: u32,
    pub terms: BTreeMap<Monomial, u64>,
}

impl EClass {
    pub fn zero(field: PrimeField, nvars: usize, j: u32) -> Self {
        EClass {
            field,
            nvars,
            j,
            terms: BTreeMap::new(),
        }
    }

    /// `c·x^{−a}`; zero if some `a_i` is not positive.
    pub fn basis_class(field: PrimeField, a: Monomial, c: u64) -> Self {
        let mut out = Self::zero(field, a.nvars(), a.degree());
        if a.exps().iter().all(|&e| e >= 1) && field.reduce(c) != 0 {
            out.terms.insert(a, field.reduce(c));
        }
        out
    }

    pub fn from_coords(field: PrimeField, piece: &EGradedPiece, coords: &[u64]) -> Self {
        let mut out = Self::zero(field, piece.nvars, piece.j);
        for (a, &c) in piece.basis.iter().zip(coords) {
            if c % field.p() != 0 {
                out.terms.insert(a.clone(), c % field.p());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coordinates in `piece`, which must be the piece of this class.
    pub fn coords(&self, piece: &EGradedPiece) -> Result<Vec<u64>> {
        if piece.nvars != self.nvars || (piece.j != self.j && !self.is_zero()) {
            return Err(Error::DimensionMismatch {
                expected: piece.j as usize,
                found: self.j as usize,
            });
        }
        let mut v = vec![0u64; piece.dim()];
        for (a, &c) in &self.terms {
            v[piece.index_of(a).expect("class lies in its piece")] = c;
        }
        Ok(v)
    }

    pub fn add(&self, other: &EClass) -> Result<EClass> {
        if self.nvars != other.nvars || self.field != other.field {
            return Err(Error::MixedDomain("adding classes from different modules".into()));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.j != other.j {
            return Err(Error::DimensionMismatch {
                expected: self.j as usize,
                found: other.j as usize,
            });
        }
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            accumulate(self.field, &mut out.terms, a.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> EClass {
        let c = self.field.reduce(c);
        let mut out = Self::zero(self.field, self.nvars, self.j);
        if c != 0 {
            for (a, &v) in &self.terms {
                out.terms.insert(a.clone(), self.field.mul_mod(v, c));
            }
        }
        out
    }
}

fn accumulate(field: PrimeField, terms: &mut BTreeMap<Monomial, u64>, a: Monomial, c: u64) {
    let entry = terms.entry(a);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            if c != 0 {
                v.insert(c);
            }
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = field.add(o.get(), &c);
            if s == 0 {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// `x^β · x^{−a} = x^{β−a}` when `a − β` is positive in every coordinate.
fn shift(beta: &Monomial, a: &Monomial) -> Option<Monomial> {
    let mut out = smallvec::SmallVec::<[u32; 8]>::with_capacity(a.nvars());
    for (&ai, &bi) in a.exps().iter().zip(beta.exps()) {
        if ai <= bi {
            return None;
        }
        out.push(ai - bi);
    }
    Some(Monomial::new(out))
}

/// `g · u` for homogeneous `g`; lands in `E_{−j+deg g}`, which is zero once
/// `deg g >= j`.
pub fn e_multiply(g: &Polynomial<PrimeField>, u: &EClass) -> Result<EClass> {
    if g.nvars() != u.nvars {
        return Err(Error::DimensionMismatch {
            expected: u.nvars,
            found: g.nvars(),
        });
    }
    if *g.ring() != u.field {
        return Err(Error::CharacteristicMismatch {
            expected: u.field.p(),
            found: g.ring().p(),
        });
    }
    let d = match g.homogeneous_degree() {
        Some(d) => d,
        None if g.is_zero() => return Ok(EClass::zero(u.field, u.nvars, u.j)),
        None => return Err(Error::NotHomogeneous(format!("{g}"))),
    };
    let field = u.field;
    if d >= u.j {
        return Ok(EClass::zero(field, u.nvars, 0));
    }
    let mut out = EClass::zero(field, u.nvars, u.j - d);
    for (beta, c) in g.terms() {
        for (a, v) in &u.terms {
            if let Some(t) = shift(beta, a) {
                accumulate(field, &mut out.terms, t, field.mul_mod(*c, *v));
            }
        }
    }
    Ok(out)
}

/// `{u ∈ E_{−Σd_i} : g_i u = 0 for all i}` with a basis of coordinate
/// vectors in the piece.
#[derive(Clone, Debug)]
pub struct AnnihilatorSubspace {
    pub piece: EGradedPiece,
    pub basis: Vec<Vec<u64>>,
}

impl AnnihilatorSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn check_forms(gs: &[Polynomial<PrimeField>]) -> Result<(PrimeField, usize, Vec<u32>)> {
    let first = gs.first().ok_or_else(|| Error::invalid("at least one form is required"))?;
    let field = *first.ring();
    let nvars = first.nvars();
    let mut degrees = Vec::with_capacity(gs.len());
    for g in gs {
        if g.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
        if *g.ring() != field {
            return Err(Error::CharacteristicMismatch {
                expected: field.p(),
                found: g.ring().p(),
            });
        }
        if g.is_zero() {
            return Err(Error::Zero("zero form".into()));
        }
        degrees.push(g.homogeneous_degree().ok_or_else(|| Error::NotHomogeneous(format!("{g}")))?);
    }
    if nvars < 2 {
        return Err(Error::Precondition("need at least two variables".into()));
    }
    Ok((field, nvars, degrees))
}

pub fn annihilator_subspace(gs: &[Polynomial<PrimeField>], limits: &Limits) -> Result<AnnihilatorSubspace> {
    let (field, nvars, degrees) = check_forms(gs)?;
    let total: u32 = degrees.iter().sum();
    let piece = e_piece(nvars - 1, total, limits)?;
    if piece.dim() > limits.max_matrix_dim {
        return Err(Error::resource(format!(
            "E_-{total} in P^{} has dimension {}, above the dense matrix cap {}",
            nvars - 1,
            piece.dim(),
            limits.max_matrix_dim
        )));
    }
    let mut stacked: Matrix = Vec::new();
    for (g, &d) in gs.iter().zip(&degrees) {
        if d >= total || piece.dim() == 0 {
            continue;
        }
        let target = e_piece(nvars - 1, total - d, limits)?;
        let mut block = vec![vec![0u64; piece.dim()]; target.dim()];
        for (col, a) in piece.basis.iter().enumerate() {
            for (beta, c) in g.terms() {
                if let Some(t) = shift(beta, a) {
                    let row = target.index_of(&t).expect("shift stays in the target piece");
                    block[row][col] = field.add(&block[row][col], c);
                }
            }
        }
        stacked.extend(block);
    }
    let basis = if stacked.is_empty() {
        (0..piece.dim())
            .map(|i| {
                let mut v = vec![0u64; piece.dim()];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        nullspace_mod_p(field, &stacked, piece.dim())
    };
    Ok(AnnihilatorSubspace { piece, basis })
}

/// The twisted Frobenius on an annihilator subspace, in the subspace basis.
/// Column `k` holds the coordinates of the image of basis vector `k`.
#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusMatrix {
    pub p: u64,
    /// Ambient projective dimension.
    pub ambient_dim: usize,
    /// The piece `E_{−j}` hosting the subspace.
    pub j: u32,
    pub subspace_basis: Vec<Vec<u64>>,
    pub matrix: Matrix,
    pub determinant: u64,
    pub bijective: bool,
}

impl FrobeniusMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }
}

/// The Frobenius action `(Πg)^{p−1} F_E` on the full piece `E_{−Σd}`:
/// entry `(b, a)` is the coefficient of `x^{pa−b}` in `(Πg)^{p−1}`.
pub fn twisted_frobenius_on_piece(
    gs: &[Polynomial<PrimeField>],
    piece: &EGradedPiece,
    limits: &Limits,
) -> Result<Matrix> {
    let (field, nvars, _) = check_forms(gs)?;
    let p = field.p() as u32;
    let n = piece.dim();
    if n > limits.max_matrix_dim {
        return Err(Error::resource(format!("a {n} x {n} Frobenius matrix is above the cap {}", limits.max_matrix_dim)));
    }
    let h = Polynomial::product(field, nvars, gs)?;
    let mut slots: Vec<(usize, usize, usize)> = Vec::new();
    let mut targets: Vec<Monomial> = Vec::new();
    let mut seen: FxHashMap<Monomial, usize> = FxHashMap::default();
    for (col, a) in piece.basis.iter().enumerate() {
        for (row, b) in piece.basis.iter().enumerate() {
            let exps: Option<Vec<u32>> = a
                .exps()
                .iter()
                .zip(b.exps())
                .map(|(&ai, &bi)| (p * ai).checked_sub(bi))
                .collect();
            if let Some(e) = exps {
                let t = Monomial::new(e);
                let k = *seen.entry(t.clone()).or_insert_with(|| {
                    targets.push(t);
                    targets.len() - 1
                });
                slots.push((row, col, k));
            }
        }
    }
    let coeffs = power_coefficients(&h, p as u64 - 1, &targets, limits)?;
    let mut m = vec![vec![0u64; n]; n];
    for (row, col, k) in slots {
        m[row][col] = coeffs[k];
    }
    Ok(m)
}

/// Matrix of `(Π g_i)^{p−1} F_E` on the annihilator subspace of the `g_i`,
/// after checking that the subspace is stable under it.
pub fn frobenius_matrix(gs: &[Polynomial<PrimeField>], limits: &Limits) -> Result<FrobeniusMatrix> {
    let (field, nvars, _) = check_forms(gs)?;
    let sub = annihilator_subspace(gs, limits)?;
    let k = sub.dim();
    let full = twisted_frobenius_on_piece(gs, &sub.piece, limits)?;
    let n = sub.piece.dim();
    let image: Vec<Vec<u64>> = sub
        .basis
        .iter()
        .map(|s| {
            (0..n)
                .map(|row| {
                    (0..n).fold(0u64, |acc, col| field.add(&acc, &field.mul_mod(full[row][col], s[col])))
                })
                .collect()
        })
        .collect();
    // Solve S·m_k = F·s_k for all k at once on the augmented matrix [S | F S].
    let mut aug: Matrix = (0..n)
        .map(|row| {
            sub.basis
                .iter()
                .map(|s| s[row])
                .chain(image.iter().map(|w| w[row]))
                .collect()
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.len() != k || pivots.iter().any(|&c| c >= k) {
        return Err(Error::StabilityViolation(format!(
            "the twisted Frobenius of {} does not preserve the annihilator subspace over F_{}",
            gs.iter().map(|g| format!("({g})")).collect::<Vec<_>>().join("·"),
            field.p()
        )));
    }
    let matrix: Matrix = (0..k).map(|r| aug[r][k..].to_vec()).collect();
    let determinant = det_mod_p(field, &matrix);
    Ok(FrobeniusMatrix {
        p: field.p(),
        ambient_dim: nvars - 1,
        j: sub.piece.j,
        subspace_basis: sub.basis,
        matrix,
        determinant,
        bijective: determinant != 0,
    })
}

/// The Hasse–Witt matrix of the hypersurface `V(h)`.
pub fn hasse_witt_matrix(h: &Polynomial<PrimeField>, limits: &Limits) -> Result<FrobeniusMatrix> {
    frobenius_matrix(std::slice::from_ref(h), limits)
}

pub fn is_frobenius_bijective(m: &FrobeniusMatrix) -> bool {
    let field = PrimeField::new(m.p).expect("matrix over a prime field");
    det_mod_p(field, &m.matrix) != 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeyPropositionCheck {
    pub hypothesis: bool,
    pub conclusion: bool,
    pub consistent: bool,
    /// Size of the Frobenius matrix.
    pub matrix_dim: usize,
}

/// `𝔪^{d−N−1} ⊆ (h^{p−1})^{[1/p]}` should force bijective Frobenius on
/// `H^{N−1}(V(h), O)`.
pub fn check_key_proposition(h: &Polynomial<PrimeField>, limits: &Limits) -> Result<KeyPropositionCheck> {
    let (_, nvars, degrees) = check_forms(std::slice::from_ref(h))?;
    let n = nvars as u32 - 1;
    let d = degrees[0];
    if n < 2 || d <= n {
        return Err(Error::Precondition(format!(
            "need N >= 2 and degree > N, got N = {n}, degree {d}"
        )));
    }
    let k = d - n - 1;
    let root = fedder_root_through_degree(h, k, limits)?;
    let hypothesis = containment_power_check(k, &root)?;
    let m = hasse_witt_matrix(h, limits)?;
    let conclusion = is_frobenius_bijective(&m);
    Ok(KeyPropositionCheck {
        hypothesis,
        conclusion,
        consistent: !hypothesis || conclusion,
        matrix_dim: m.dim(),
    })
}
