//! Dense square matrices over a coefficient ring.

use std::fmt::Write as _;

use serde::Serialize;

use crate::arith::{Coeff, Field, Monomial, Rational};
use crate::error::{Error, Result};
use crate::span::{BasisKey, VecRep};

/// A `size x size` matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<C> {
    size: usize,
    data: Vec<C>,
}

impl<C: Coeff> Matrix<C> {
    pub fn zero(size: usize, ring: &C::Ring) -> Self {
        Matrix {
            size,
            data: vec![C::zero_in(ring); size * size],
        }
    }

    pub fn identity(size: usize, ring: &C::Ring) -> Self {
        Self::scalar(size, C::one_in(ring), ring)
    }

    /// `c` times the identity.
    pub fn scalar(size: usize, c: C, ring: &C::Ring) -> Self {
        let mut m = Self::zero(size, ring);
        for i in 0..size {
            m.data[i * size + i] = c.clone();
        }
        m
    }

    /// Matrix unit `e_ij` (zero-based).
    pub fn unit(size: usize, i: usize, j: usize, ring: &C::Ring) -> Self {
        let mut m = Self::zero(size, ring);
        m.data[i * size + j] = C::one_in(ring);
        m
    }

    pub fn diagonal(entries: Vec<C>, ring: &C::Ring) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n, ring);
        for (i, c) in entries.into_iter().enumerate() {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "row of length {} in a matrix with {} rows",
                r.len(),
                n
            )));
        }
        Ok(Matrix {
            size: n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: C) {
        self.data[i * self.size + j] = c;
    }

    pub fn entries(&self) -> impl Iterator<Item = &C> {
        self.data.iter()
    }

    pub fn rows(&self) -> Vec<Vec<C>> {
        self.data.chunks(self.size.max(1)).map(<[C]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(C::is_zero_elem)
    }

    pub fn in_ring(&self, ring: &C::Ring) -> bool {
        self.data.iter().all(|c| c.in_ring(ring))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        assert_eq!(self.size, rhs.size, "matrix size mismatch");
        Matrix {
            size: self.size,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, C::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, C::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.map(|c| c.scale(q))
    }

    /// Multiplies every entry by the ring element `c`.
    pub fn scale_by(&self, c: &C) -> Self {
        self.map(|e| e.mul(c))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        Matrix {
            size: self.size,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Product; panics on a size mismatch (use [`mat_mul`] for a checked
    /// version).
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.size, rhs.size, "matrix size mismatch");
        let n = self.size;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<C> = None;
                for k in 0..n {
                    let a = &self.data[i * n + k];
                    let b = &rhs.data[k * n + j];
                    if a.is_zero_elem() || b.is_zero_elem() {
                        continue;
                    }
                    let p = a.mul(b);
                    acc = Some(match acc {
                        None => p,
                        Some(s) => s.add(&p),
                    });
                }
                data.push(acc.unwrap_or_else(|| self.data[i * n + j].sub(&self.data[i * n + j])));
            }
        }
        Matrix { size: n, data }
    }

    pub fn pow(&self, e: u32, ring: &C::Ring) -> Self {
        let mut out = Self::identity(self.size, ring);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self, ring: &C::Ring) -> C {
        (0..self.size).fold(C::zero_in(ring), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn commutes_with(&self, rhs: &Self) -> bool {
        self.mul(rhs) == rhs.mul(self)
    }

    /// Coordinates over Q after clearing; `None` if some entry does not clear.
    pub fn vectorize(&self, clearing: &C::Clearing) -> Option<VecRep> {
        let n = self.size;
        let mut entries: Vec<(BasisKey, Rational)> = Vec::new();
        for (idx, c) in self.data.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            for (m, q) in c.coords(clearing)? {
                entries.push((BasisKey::new(idx / n, idx % n, &m), q));
            }
        }
        Some(VecRep::from_entries(entries))
    }

    /// Inverse of [`Matrix::vectorize`].
    pub fn from_vec(v: &VecRep, clearing: &C::Clearing, size: usize, ring: &C::Ring) -> Self {
        let mut cells: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); size * size];
        for (k, q) in v.entries() {
            cells[k.row as usize * size + k.col as usize]
                .push((Monomial::from_exponents(k.mono.clone()), q.clone()));
        }
        Matrix {
            size,
            data: cells
                .iter()
                .map(|t| {
                    if t.is_empty() {
                        C::zero_in(ring)
                    } else {
                        C::from_coords(t, clearing, ring)
                    }
                })
                .collect(),
        }
    }

    /// Textual form `[[a, b], [c, d]]`.
    pub fn format(&self, ring: &C::Ring) -> String {
        let mut s = String::from("[");
        for i in 0..self.size {
            if i > 0 {
                s.push_str(", ");
            }
            s.push('[');
            for j in 0..self.size {
                if j > 0 {
                    s.push_str(", ");
                }
                let _ = write!(s, "{}", self.get(i, j).format(ring));
            }
            s.push(']');
        }
        s.push(']');
        s
    }

    /// Whether all entries are rational constants.
    pub fn as_rational(&self) -> Option<Matrix<Rational>> {
        Some(Matrix {
            size: self.size,
            data: self.data.iter().map(C::as_rational).collect::<Option<Vec<_>>>()?,
        })
    }

    pub fn from_rational(m: &Matrix<Rational>, ring: &C::Ring) -> Self {
        Matrix {
            size: m.size,
            data: m.data.iter().map(|q| C::from_rational(q, ring)).collect(),
        }
    }

    /// Block embedding: `self` occupies the leading block of a larger zero
    /// matrix.
    pub fn embed(&self, size: usize, offset: usize, ring: &C::Ring) -> Self {
        let mut m = Self::zero(size, ring);
        for i in 0..self.size {
            for j in 0..self.size {
                m.set(offset + i, offset + j, self.get(i, j).clone());
            }
        }
        m
    }
}

impl<C: Field> Matrix<C> {
    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self, ring: &C::Ring) -> C {
        let n = self.size;
        let mut a = self.data.clone();
        let mut det = C::one_in(ring);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero_elem()) else {
                return C::zero_in(ring);
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = a[c * n + c].clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if a[r * n + c].is_zero_elem() {
                    continue;
                }
                let f = a[r * n + c].mul(&inv);
                for j in c..n {
                    let t = a[c * n + j].mul(&f);
                    a[r * n + j] = a[r * n + j].sub(&t);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan, `None` if singular.
    pub fn inverse(&self, ring: &C::Ring) -> Option<Self> {
        let n = self.size;
        let mut a = self.rows();
        let mut b = Self::identity(n, ring).rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero_elem())?;
            a.swap(p, c);
            b.swap(p, c);
            let inv = a[c][c].inv()?;
            for j in 0..n {
                a[c][j] = a[c][j].mul(&inv);
                b[c][j] = b[c][j].mul(&inv);
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero_elem() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let ta = a[c][j].mul(&f);
                    let tb = b[c][j].mul(&f);
                    a[r][j] = a[r][j].sub(&ta);
                    b[r][j] = b[r][j].sub(&tb);
                }
            }
        }
        Matrix::from_rows(b).ok()
    }
}

/// Checked product of two matrices over `ring`.
pub fn mat_mul<C: Coeff>(a: &Matrix<C>, b: &Matrix<C>, ring: &C::Ring) -> Result<Matrix<C>> {
    if a.size() != b.size() {
        return Err(Error::ShapeMismatch(format!(
            "cannot multiply {0}x{0} by {1}x{1}",
            a.size(),
            b.size()
        )));
    }
    if !a.in_ring(ring) || !b.in_ring(ring) {
        return Err(Error::RingMismatch("matrix entries from different coefficient rings".into()));
    }
    Ok(a.mul(b))
}

/// Serializable rendering of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixText(pub Vec<Vec<String>>);

impl MatrixText {
    pub fn of<C: Coeff>(m: &Matrix<C>, ring: &C::Ring) -> Self {
        MatrixText(
            (0..m.size())
                .map(|i| (0..m.size()).map(|j| m.get(i, j).format(ring)).collect())
                .collect(),
        )
    }
}

/// Rational entries as `i64` pairs are convenient in tests.
pub fn rational_matrix(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect(),
    )
    .expect("square")
}
