//! Exact Q-linear algebra on sparse vectors indexed by ordered keys.
//!
//! [`EchelonBasis`] keeps its rows in reduced row-echelon form: every row
//! has leading coefficient 1 at its pivot (its smallest key) and a zero at
//! every other row's pivot. That form is unique for a given span and key
//! order, so the stored basis never depends on insertion history.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{Coeff, Monomial, RatFunc, Rational};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Coordinate key of a matrix entry: `(row, column, monomial)`. For cleared
/// rational-function entries the monomial is the power of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisKey {
    pub row: u32,
    pub col: u32,
    pub mono: Vec<u32>,
}

impl BasisKey {
    pub fn new(row: usize, col: usize, mono: &Monomial) -> Self {
        BasisKey {
            row: row as u32,
            col: col as u32,
            mono: mono.exponents().to_vec(),
        }
    }
}

/// Sparse vector: entries sorted by key, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VecRep<K = BasisKey> {
    entries: Vec<(K, Rational)>,
}

impl<K: Ord + Clone> VecRep<K> {
    pub fn zero() -> Self {
        VecRep { entries: Vec::new() }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (K, Rational)>) -> Self {
        let mut map: BTreeMap<K, Rational> = BTreeMap::new();
        for (k, c) in entries {
            *map.entry(k).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<K, Rational>) -> Self {
        VecRep {
            entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn entries(&self) -> &[(K, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(K, Rational)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading_key(&self) -> Option<&K> {
        self.entries.first().map(|(k, _)| k)
    }

    pub fn get(&self, key: &K) -> Option<&Rational> {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return VecRep::zero();
        }
        VecRep {
            entries: self.entries.iter().map(|(k, c)| (k.clone(), c * q)).collect(),
        }
    }

    /// `self + q * other`, by merging the sorted entry lists.
    pub fn axpy(&self, q: &Rational, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some((ka, _)), Some((kb, _))) => ka.cmp(kb),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0.clone(), q * &b[j].1));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + q * &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        VecRep { entries: out }
    }
}

/// Outcome of [`EchelonBasis::insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    Extended,
    Dependent,
}

/// Reduced row-echelon basis of a subspace, rows keyed by pivot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonBasis<K: Ord = BasisKey> {
    rows: BTreeMap<K, VecRep<K>>,
}

impl<K: Ord + Clone> Default for EchelonBasis<K> {
    fn default() -> Self {
        EchelonBasis { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &VecRep<K>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn has_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    /// Reduces `v` against every row; the result has zeros at all pivots.
    pub fn reduce(&self, v: &VecRep<K>) -> VecRep<K> {
        let hits: Vec<(&VecRep<K>, &Rational)> = v
            .entries
            .iter()
            .filter_map(|(k, c)| self.rows.get(k).map(|row| (row, c)))
            .collect();
        match hits.len() {
            0 => v.clone(),
            1 => v.axpy(&-hits[0].1.clone(), hits[0].0),
            _ => {
                let mut acc: BTreeMap<K, Rational> = v.entries.iter().cloned().collect();
                for (row, c) in hits {
                    for (k, rc) in &row.entries {
                        *acc.entry(k.clone()).or_insert_with(Rational::zero) -= c * rc;
                    }
                }
                VecRep::from_map(acc)
            }
        }
    }

    /// Coefficients of `v` with respect to the rows (in pivot order), or
    /// `None` if `v` is outside the span.
    pub fn express(&self, v: &VecRep<K>) -> Option<Vec<Rational>> {
        if !self.reduce(v).is_zero() {
            return None;
        }
        Some(
            self.rows
                .keys()
                .map(|p| v.get(p).cloned().unwrap_or_else(Rational::zero))
                .collect(),
        )
    }

    pub fn contains(&self, v: &VecRep<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts an already reduced, nonzero vector.
    fn insert_reduced(&mut self, reduced: VecRep<K>) {
        let (pivot, lead) = reduced.entries[0].clone();
        let normalized = if lead.is_one() { reduced } else { reduced.scale(&lead.recip()) };
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                *row = row.axpy(&-c, &normalized);
            }
        }
        self.rows.insert(pivot, normalized);
    }

    pub fn insert(&mut self, v: &VecRep<K>) -> Insertion {
        let reduced = self.reduce(v);
        if reduced.is_zero() {
            return Insertion::Dependent;
        }
        self.insert_reduced(reduced);
        Insertion::Extended
    }

    /// Inserts a vector that was reduced against an earlier snapshot of this
    /// basis; rows added since then are reduced out first.
    pub fn insert_prereduced(&mut self, v: &VecRep<K>) -> Insertion {
        self.insert(v)
    }
}

// ---------------------------------------------------------------------------
// Dense solving.

/// Result of [`solve_q_linear`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSolve {
    Solution(Vec<Rational>),
    Inconsistent,
}

/// Reduced row-echelon form of a dense matrix in place; returns the pivot
/// columns.
fn rref_dense(m: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `a * z = b` exactly. Any returned solution is checked by
/// substitution.
pub fn solve_q_linear(a: &[Vec<Rational>], b: &[Rational]) -> Result<QSolve> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} equations but {} right-hand sides",
            a.len(),
            b.len()
        )));
    }
    let ncols = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != ncols) {
        return Err(Error::ShapeMismatch("ragged coefficient matrix".into()));
    }
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref_dense(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return Ok(QSolve::Inconsistent);
    }
    let mut z = vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        z[c] = aug[r][ncols].clone();
    }
    for (row, bi) in a.iter().zip(b) {
        let lhs: Rational = row.iter().zip(&z).map(|(x, y)| x * y).sum();
        if &lhs != bi {
            return Err(Error::internal("linear solve failed substitution check"));
        }
    }
    Ok(QSolve::Solution(z))
}

/// Basis of `{ z : rows * z = 0 }` for a dense matrix with `ncols` columns.
pub fn nullspace_dense(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let pivots = rref_dense(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut z = vec![Rational::zero(); ncols];
            z[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                z[pc] = -m[r][f].clone();
            }
            z
        })
        .collect()
}

pub fn rank_dense(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref_dense(&mut m, ncols).len()
}

// ---------------------------------------------------------------------------
// Q-spans of matrices with entries in any coefficient ring.

/// Outcome of a span-membership query over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanMembership {
    InSpan(Vec<Rational>),
    NotInSpan,
}

fn check_shapes<C: Coeff>(mats: &[Matrix<C>], n: usize) -> Result<()> {
    if let Some(m) = mats.iter().find(|m| m.size() != n) {
        return Err(Error::ShapeMismatch(format!(
            "matrix of size {} where {} was expected",
            m.size(),
            n
        )));
    }
    Ok(())
}

/// Common clearing for a batch of matrices: their entries all become
/// coordinatizable.
fn batch_clearing<C: Coeff>(mats: &[&Matrix<C>]) -> C::Clearing {
    let base = C::clearing(std::iter::empty(), 0);
    C::widen_clearing(&base, mats.iter().flat_map(|m| m.entries()))
}

fn vectorize_all<C: Coeff>(mats: &[&Matrix<C>], clearing: &C::Clearing) -> Result<Vec<VecRep>> {
    mats.iter()
        .map(|m| {
            m.vectorize(clearing)
                .ok_or_else(|| Error::internal("entry not cleared by the common denominator"))
        })
        .collect()
}

/// Decides whether `candidate` is a Q-linear combination of `basis`, by
/// clearing one global common denominator, expanding into polynomial
/// coordinates and solving the resulting Q-linear system.
pub fn span_membership<C: Coeff>(basis: &[Matrix<C>], candidate: &Matrix<C>) -> Result<SpanMembership> {
    check_shapes(basis, candidate.size())?;
    let mut all: Vec<&Matrix<C>> = basis.iter().collect();
    all.push(candidate);
    let clearing = batch_clearing(&all);
    let vecs = vectorize_all(&all, &clearing)?;
    let (target, cols) = vecs.split_last().unwrap();

    let mut keys: Vec<&BasisKey> = vecs.iter().flat_map(|v| v.entries().iter().map(|(k, _)| k)).collect();
    keys.sort();
    keys.dedup();
    let a: Vec<Vec<Rational>> = keys
        .iter()
        .map(|k| cols.iter().map(|v| v.get(k).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    let b: Vec<Rational> = keys
        .iter()
        .map(|k| target.get(k).cloned().unwrap_or_else(Rational::zero))
        .collect();
    if keys.is_empty() {
        return Ok(SpanMembership::InSpan(vec![Rational::zero(); basis.len()]));
    }
    Ok(match solve_q_linear(&a, &b)? {
        QSolve::Solution(z) => SpanMembership::InSpan(z),
        QSolve::Inconsistent => SpanMembership::NotInSpan,
    })
}

/// [`span_membership`] for matrices over Q(x).
pub fn membership_ratfunc(basis: &[Matrix<RatFunc>], candidate: &Matrix<RatFunc>) -> Result<SpanMembership> {
    span_membership(basis, candidate)
}

/// All Q-linear relations `sum_i lambda_i m_i = 0` among the matrices, as a
/// basis of the relation space.
pub fn q_relations<C: Coeff>(mats: &[Matrix<C>]) -> Result<Vec<Vec<Rational>>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    check_shapes(mats, first.size())?;
    let refs: Vec<&Matrix<C>> = mats.iter().collect();
    let clearing = batch_clearing(&refs);
    let vecs = vectorize_all(&refs, &clearing)?;
    let mut keys: Vec<&BasisKey> = vecs.iter().flat_map(|v| v.entries().iter().map(|(k, _)| k)).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Rational>> = keys
        .iter()
        .map(|k| vecs.iter().map(|v| v.get(k).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    Ok(nullspace_dense(&rows, mats.len()))
}

/// Indices of a maximal Q-linearly independent subfamily, chosen greedily
/// in the given order.
pub fn independent_subset<C: Coeff>(mats: &[Matrix<C>]) -> Result<Vec<usize>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    check_shapes(mats, first.size())?;
    let refs: Vec<&Matrix<C>> = mats.iter().collect();
    let clearing = batch_clearing(&refs);
    let vecs = vectorize_all(&refs, &clearing)?;
    let mut basis = EchelonBasis::new();
    Ok(vecs
        .iter()
        .enumerate()
        .filter(|(_, v)| basis.insert(v) == Insertion::Extended)
        .map(|(i, _)| i)
        .collect())
}
