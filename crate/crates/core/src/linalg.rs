//! Dense linear algebra and univariate polynomials over a coefficient
//! field (Q or Q(x)).

use crate::arith::Field;

pub fn zeros<F: Field>(n: usize, ring: &F::Ring) -> Vec<F> {
    vec![F::zero_in(ring); n]
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(F::is_zero_elem)
}

pub fn axpy<F: Field>(y: &mut [F], a: &F, x: &[F]) {
    if a.is_zero_elem() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero_elem() {
            *yi = yi.add(&a.mul(xi));
        }
    }
}

pub fn scale_vec<F: Field>(v: &[F], a: &F) -> Vec<F> {
    v.iter().map(|x| x.mul(a)).collect()
}

/// Reduced row-echelon form in place; returns pivot columns. Zero rows are
/// moved to the bottom.
pub fn rref<F: Field>(m: &mut [Vec<F>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        m[r] = scale_vec(&m[r], &inv);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero_elem() {
                let f = row[c].neg();
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{ z : rows * z = 0 }`.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize, ring: &F::Ring) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut z = zeros::<F>(ncols, ring);
            z[f] = F::one_in(ring);
            for (r, &pc) in pivots.iter().enumerate() {
                z[pc] = m[r][f].neg();
            }
            z
        })
        .collect()
}

/// Solves `sum_j z_j cols[j] = target`; `None` if inconsistent.
pub fn solve_columns<F: Field>(cols: &[Vec<F>], target: &[F], ring: &F::Ring) -> Option<Vec<F>> {
    let n = target.len();
    let k = cols.len();
    let mut aug: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut row: Vec<F> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut z = zeros::<F>(k, ring);
    for (r, &c) in pivots.iter().enumerate() {
        z[c] = aug[r][k].clone();
    }
    Some(z)
}

/// Subspace of `F^n` kept in reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon<F> {
    ncols: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors(ncols: usize, vecs: &[Vec<F>]) -> Self {
        let mut e = Self::new(ncols);
        for v in vecs {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows sorted by pivot column.
    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero_elem() {
                let f = out[p].neg();
                axpy(&mut out, &f, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coefficients of `v` in terms of the rows.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn insert(&mut self, v: &[F]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero_elem()) else {
            return false;
        };
        let r = scale_vec(&r, &r[p].inv().expect("nonzero"));
        for row in &mut self.rows {
            if !row[p].is_zero_elem() {
                let f = row[p].neg();
                axpy(row, &f, &r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }
}

// ---------------------------------------------------------------------------
// Polynomials in t over F, constant term first, no trailing zeros.

pub fn ptrim<F: Field>(mut p: Vec<F>) -> Vec<F> {
    while p.last().is_some_and(F::is_zero_elem) {
        p.pop();
    }
    p
}

pub fn pdeg<F: Field>(p: &[F]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero_elem())
}

pub fn padd<F: Field>(a: &[F], b: &[F], ring: &F::Ring) -> Vec<F> {
    let n = a.len().max(b.len());
    let z = F::zero_in(ring);
    ptrim((0..n).map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z))).collect())
}

pub fn pmul<F: Field>(a: &[F], b: &[F], ring: &F::Ring) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = zeros::<F>(a.len() + b.len() - 1, ring);
    for (i, x) in a.iter().enumerate() {
        if x.is_zero_elem() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    ptrim(out)
}

pub fn pdivrem<F: Field>(a: &[F], b: &[F], ring: &F::Ring) -> (Vec<F>, Vec<F>) {
    let b = ptrim(b.to_vec());
    let db = pdeg(&b).expect("division by zero polynomial");
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut r = ptrim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = zeros::<F>(r.len() - db, ring);
    while let Some(dr) = pdeg(&r) {
        if dr < db {
            break;
        }
        let c = r[dr].mul(&lead_inv);
        for (i, bi) in b.iter().enumerate() {
            r[dr - db + i] = r[dr - db + i].sub(&c.mul(bi));
        }
        q[dr - db] = c;
        r = ptrim(r);
    }
    (ptrim(q), r)
}

pub fn pmonic<F: Field>(p: &[F]) -> Vec<F> {
    let p = ptrim(p.to_vec());
    match p.last() {
        None => p,
        Some(l) => {
            let inv = l.inv().expect("nonzero");
            scale_vec(&p, &inv)
        }
    }
}

pub fn pgcd<F: Field>(a: &[F], b: &[F], ring: &F::Ring) -> Vec<F> {
    let (mut x, mut y) = (ptrim(a.to_vec()), ptrim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = pdivrem(&x, &y, ring);
        x = y;
        y = r;
    }
    pmonic(&x)
}

/// `(g, s)` with `g = gcd(a, m)` monic and `s a ≡ g (mod m)`.
pub fn pinv_mod<F: Field>(a: &[F], m: &[F], ring: &F::Ring) -> Option<Vec<F>> {
    let (mut r0, mut r1) = (ptrim(m.to_vec()), pdivrem(a, m, ring).1);
    let (mut s0, mut s1): (Vec<F>, Vec<F>) = (Vec::new(), vec![F::one_in(ring)]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, ring);
        let s = padd(&s0, &pmul(&q, &s1, ring).iter().map(F::neg).collect::<Vec<_>>(), ring);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if pdeg(&r0) != Some(0) {
        return None;
    }
    let inv = r0[0].inv()?;
    Some(pdivrem(&scale_vec(&s0, &inv), m, ring).1)
}

pub fn pderiv<F: Field>(p: &[F]) -> Vec<F> {
    ptrim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&crate::arith::int(k as i64)))
            .collect(),
    )
}

/// `(t - r)^m`.
pub fn linear_power<F: Field>(r: &F, m: usize, ring: &F::Ring) -> Vec<F> {
    let lin = vec![r.neg(), F::one_in(ring)];
    (0..m).fold(vec![F::one_in(ring)], |acc, _| pmul(&acc, &lin, ring))
}

/// Distinct roots with multiplicities when the polynomial splits into
/// linear factors over F; `None` otherwise.
pub fn split_with_multiplicity<F: Field>(p: &[F], ring: &F::Ring) -> Option<Vec<(F, usize)>> {
    let p = pmonic(p);
    let deg = pdeg(&p)?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let g = pgcd(&p, &pderiv(&p), ring);
    let sf = pmonic(&pdivrem(&p, &g, ring).0);
    let roots = F::split_roots(&sf, ring)?;
    let mut out = Vec::new();
    let mut rest = p;
    for r in roots {
        let lin = vec![r.neg(), F::one_in(ring)];
        let mut m = 0;
        loop {
            let (q, rem) = pdivrem(&rest, &lin, ring);
            if !rem.is_empty() {
                break;
            }
            rest = q;
            m += 1;
        }
        out.push((r, m));
    }
    (pdeg(&rest) == Some(0)).then_some(out)
}

/// For `p = prod (t - r_i)^{m_i}`, polynomials `e_i` with
/// `e_i ≡ 1 mod (t - r_i)^{m_i}` and `e_i ≡ 0 mod` the other factors.
pub fn crt_idempotent_polys<F: Field>(factors: &[(F, usize)], ring: &F::Ring) -> Option<Vec<Vec<F>>> {
    let powers: Vec<Vec<F>> = factors.iter().map(|(r, m)| linear_power(r, *m, ring)).collect();
    let full = powers.iter().fold(vec![F::one_in(ring)], |acc, q| pmul(&acc, q, ring));
    powers
        .iter()
        .map(|pi| {
            let cof = pdivrem(&full, pi, ring).0;
            let s = pinv_mod(&cof, pi, ring)?;
            Some(pdivrem(&pmul(&s, &cof, ring), &full, ring).1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Rational};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn nullspace_and_solve() {
        let rows = vec![q(&[1, 2, 3]), q(&[2, 4, 6])];
        let ns = nullspace(&rows, 3, &());
        assert_eq!(ns.len(), 2);
        let cols = vec![q(&[1, 1]), q(&[1, -1])];
        assert_eq!(solve_columns(&cols, &q(&[3, 1]), &()), Some(q(&[2, 1])));
        assert_eq!(solve_columns(&[q(&[1, 2])], &q(&[1, 3]), &()), None);
    }

    #[test]
    fn echelon_coords() {
        let mut e = Echelon::new(3);
        assert!(e.insert(&q(&[0, 1, 1])));
        assert!(e.insert(&q(&[1, 1, 0])));
        assert!(!e.insert(&q(&[1, 2, 1])));
        let c = e.coords(&q(&[2, 3, 1])).unwrap();
        let rebuilt = e.rows().iter().zip(&c).fold(q(&[0, 0, 0]), |mut acc, (r, ci)| {
            axpy(&mut acc, ci, r);
            acc
        });
        assert_eq!(rebuilt, q(&[2, 3, 1]));
    }

    #[test]
    fn polynomial_helpers() {
        // (t-1)^2 (t+2)
        let p = pmul(&linear_power(&int(1), 2, &()), &linear_power(&int(-2), 1, &()), &());
        let f = split_with_multiplicity(&p, &()).unwrap();
        assert_eq!(f, vec![(int(-2), 1), (int(1), 2)]);
        let es = crt_idempotent_polys(&f, &()).unwrap();
        let sum = es.iter().fold(Vec::new(), |acc, e| padd(&acc, e, &()));
        assert_eq!(sum, q(&[1]));
        assert!(split_with_multiplicity(&q(&[-2, 0, 1]), &()).is_none());
        assert_eq!(pgcd(&q(&[-1, 0, 1]), &q(&[1, 1]), &()), q(&[1, 1]));
    }
}
