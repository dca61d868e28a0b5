//! Row reduction.
//!
//! [`Echelon`] keeps sparse rows indexed by their leading monomial and works
//! over any [`Ring`]: over 𝔽_p pivots are monic, over ℤ rows are combined
//! fraction-free (`s·target − t·pivot`) and kept primitive, so ranks are the
//! ℚ-ranks without rational arithmetic. Dense helpers at the bottom handle the
//! small square matrices of Frobenius actions.

use rustc_hash::FxHashMap;

use crate::monomial::Monomial;
use crate::ring::{PrimeField, Ring};

/// Sparse row, sorted by monomial in descending order (leading term first).
pub type Row<E> = Vec<(Monomial, E)>;

#[derive(Clone, Debug)]
pub struct Echelon<R: Ring> {
    ring: R,
    rows: Vec<Row<R::Elem>>,
    pivots: FxHashMap<Monomial, usize>,
}

impl<R: Ring> Echelon<R> {
    pub fn new(ring: R) -> Self {
        Echelon {
            ring,
            rows: Vec::new(),
            pivots: FxHashMap::default(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row<R::Elem>] {
        &self.rows
    }

    /// Reduces until the leading monomial is not a pivot. An empty result
    /// means the row is in the span.
    pub fn reduce(&self, mut row: Row<R::Elem>) -> Row<R::Elem> {
        let integral = self.ring.characteristic() == 0;
        while let Some((lead, _)) = row.first() {
            let Some(&pi) = self.pivots.get(lead) else {
                break;
            };
            row = self.eliminate(&row, &self.rows[pi]);
            if integral && !row.is_empty() {
                self.normalize(&mut row);
            }
        }
        row
    }

    pub fn contains(&self, row: Row<R::Elem>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds a row; returns whether it was independent of the current span.
    pub fn insert(&mut self, row: Row<R::Elem>) -> bool {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        self.normalize(&mut row);
        self.pivots.insert(row[0].0.clone(), self.rows.len());
        self.rows.push(row);
        true
    }

    fn normalize(&self, row: &mut Row<R::Elem>) {
        let mut coeffs: Vec<R::Elem> = row.iter().map(|(_, c)| c.clone()).collect();
        self.ring.normalize_row(&mut coeffs);
        for ((_, c), n) in row.iter_mut().zip(coeffs) {
            *c = n;
        }
    }

    /// `s·target − t·pivot` with the leading terms cancelling.
    fn eliminate(&self, target: &Row<R::Elem>, pivot: &Row<R::Elem>) -> Row<R::Elem> {
        let r = &self.ring;
        let (s, t) = r.clearing_factors(&target[0].1, &pivot[0].1);
        let one = r.one();
        let scale_target = s != one;
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (1, 1);
        while i < target.len() || j < pivot.len() {
            let ord = match (target.get(i), pivot.get(j)) {
                (Some(a), Some(b)) => b.0.cmp(&a.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => unreachable!(),
            };
            let (m, c) = match ord {
                std::cmp::Ordering::Less => {
                    let (m, a) = &target[i];
                    i += 1;
                    let c = if scale_target { r.mul(&s, a) } else { a.clone() };
                    (m.clone(), c)
                }
                std::cmp::Ordering::Greater => {
                    let (m, b) = &pivot[j];
                    j += 1;
                    (m.clone(), r.neg(&r.mul(&t, b)))
                }
                std::cmp::Ordering::Equal => {
                    let (m, a) = &target[i];
                    let b = &pivot[j].1;
                    i += 1;
                    j += 1;
                    let a = if scale_target { r.mul(&s, a) } else { a.clone() };
                    (m.clone(), r.sub(&a, &r.mul(&t, b)))
                }
            };
            if !r.is_zero(&c) {
                out.push((m, c));
            }
        }
        out
    }
}

/// Dense matrix over 𝔽_p, row-major.
pub type Matrix = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(field: PrimeField, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = field.inv(m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for k in 0..cols {
                    let sub = field.mul(&factor, &m[r][k]);
                    m[i][k] = field.sub(&m[i][k], &sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod_p(field: PrimeField, m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(field, &mut work).len()
}

/// Determinant by elimination; the empty matrix has determinant 1.
pub fn det_mod_p(field: PrimeField, m: &Matrix) -> u64 {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    let mut a = m.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if pr != c {
            a.swap(pr, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &a[c][c]);
        let inv = field.inv(a[c][c]).expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c] != 0 {
                let factor = field.mul(&a[i][c], &inv);
                for k in c..n {
                    let sub = field.mul(&factor, &a[c][k]);
                    a[i][k] = field.sub(&a[i][k], &sub);
                }
            }
        }
    }
    det
}

/// Basis of `{v : m·v = 0}` for an `r × c` matrix, one vector per free
/// column, each with a 1 in its free column.
pub fn nullspace_mod_p(field: PrimeField, m: &Matrix, cols: usize) -> Vec<Vec<u64>> {
    let mut work = m.clone();
    let pivots = rref(field, &mut work);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(&work[r][free]);
        }
        basis.push(v);
    }
    basis
}
