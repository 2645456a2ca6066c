//! Finite-dimensional algebras spanned by matrices over a field F (Q or
//! Q(x)): radical, nilpotence degree, central idempotents and a split
//! complement to the radical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, Coeff, Field, Rational};
use crate::error::{Error, Result};
use crate::growth::{growth_sequence, GrowthOptions};
use crate::linalg::{
    axpy, crt_idempotent_polys, is_zero_vec, nullspace, scale_vec, solve_columns, split_with_multiplicity, zeros,
    Echelon,
};
use crate::matrix::Matrix;
use crate::presentation::AlgebraPresentation;
use crate::span::{span_membership, SpanMembership};

pub const DEFAULT_SEED: u64 = 0;
const SEPARATING_ATTEMPTS: usize = 10;
const SPLITTING_ATTEMPTS: usize = 64;
const LIFT_ITERATIONS: usize = 64;

/// Unital associative algebra with basis `b_0..b_{n-1}` given by
/// `b_i b_j = sum_k table[i][j][k] b_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants<F: Field> {
    ring: F::Ring,
    table: Vec<Vec<Vec<F>>>,
    one: Vec<F>,
}

impl<F: Field> StructureConstants<F> {
    pub fn new(ring: F::Ring, table: Vec<Vec<Vec<F>>>, one: Vec<F>) -> Result<Self> {
        let n = one.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return Err(Error::ShapeMismatch(format!("structure constants for dimension {n}")));
        }
        Ok(StructureConstants { ring, table, one })
    }

    pub fn dim(&self) -> usize {
        self.one.len()
    }

    pub fn ring(&self) -> &F::Ring {
        &self.ring
    }

    pub fn one(&self) -> &[F] {
        &self.one
    }

    pub fn zero(&self) -> Vec<F> {
        zeros(self.dim(), &self.ring)
    }

    pub fn basis_vec(&self, i: usize) -> Vec<F> {
        let mut v = self.zero();
        v[i] = F::one_in(&self.ring);
        v
    }

    pub fn mul(&self, a: &[F], b: &[F]) -> Vec<F> {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero_elem() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero_elem() {
                    continue;
                }
                axpy(&mut out, &ai.mul(bj), &self.table[i][j]);
            }
        }
        out
    }

    fn add(&self, a: &[F], b: &[F]) -> Vec<F> {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    fn sub(&self, a: &[F], b: &[F]) -> Vec<F> {
        a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
    }

    fn int_combination(&self, vecs: &[Vec<F>], coeffs: &[i64]) -> Vec<F> {
        let mut out = self.zero();
        for (v, &c) in vecs.iter().zip(coeffs) {
            axpy(&mut out, &F::from_rational(&int(c), &self.ring), v);
        }
        out
    }

    /// `tr(L_{b_k})` for every basis element.
    fn left_traces(&self) -> Vec<F> {
        (0..self.dim())
            .map(|k| {
                (0..self.dim()).fold(F::zero_in(&self.ring), |acc, j| acc.add(&self.table[k][j][j]))
            })
            .collect()
    }

    /// Basis of `span{ u v : u in us, v in vs }`.
    pub fn span_product(&self, us: &[Vec<F>], vs: &[Vec<F>]) -> Echelon<F> {
        let mut e = Echelon::new(self.dim());
        for u in us {
            for v in vs {
                e.insert(&self.mul(u, v));
            }
        }
        e
    }

    /// Monic minimal polynomial of `c` inside the unital subalgebra with
    /// identity `unit`.
    pub fn min_poly(&self, c: &[F], unit: &[F]) -> Vec<F> {
        let mut powers = vec![unit.to_vec()];
        loop {
            let next = self.mul(c, powers.last().unwrap());
            if let Some(z) = solve_columns(&powers, &next, &self.ring) {
                let mut mu: Vec<F> = z.iter().map(F::neg).collect();
                mu.push(F::one_in(&self.ring));
                return mu;
            }
            powers.push(next);
        }
    }

    pub fn eval_poly(&self, p: &[F], c: &[F], unit: &[F]) -> Vec<F> {
        let mut acc = self.zero();
        for coef in p.iter().rev() {
            acc = self.mul(&acc, c);
            axpy(&mut acc, coef, unit);
        }
        acc
    }

    pub fn center(&self) -> Vec<Vec<F>> {
        let n = self.dim();
        // sum_i z_i (table[i][j][k] - table[j][i][k]) = 0 for all j, k
        let rows: Vec<Vec<F>> = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| (0..n).map(|i| self.table[i][j][k].sub(&self.table[j][i][k])).collect())
            .collect();
        let ns = nullspace(&rows, n, &self.ring);
        Echelon::from_vectors(n, &ns).rows().to_vec()
    }

    fn is_idempotent(&self, e: &[F]) -> bool {
        self.mul(e, e) == e
    }

    /// Radical as the kernel of the trace form `(a, b) -> tr(L_{ab})`,
    /// checked to be a nilpotent two-sided ideal.
    pub fn radical(&self) -> Result<Echelon<F>> {
        let n = self.dim();
        let t = self.left_traces();
        let gram: Vec<Vec<F>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.table[i][j]
                            .iter()
                            .zip(&t)
                            .fold(F::zero_in(&self.ring), |acc, (c, tk)| acc.add(&c.mul(tk)))
                    })
                    .collect()
            })
            .collect();
        let rad = Echelon::from_vectors(n, &nullspace(&gram, n, &self.ring));
        for r in rad.rows() {
            for i in 0..n {
                let b = self.basis_vec(i);
                if !rad.contains(&self.mul(&b, r)) || !rad.contains(&self.mul(r, &b)) {
                    return Err(Error::internal("trace-form radical is not a two-sided ideal"));
                }
            }
        }
        self.nilpotence_degree(&rad)?;
        Ok(rad)
    }

    /// Least `m` with `N^m = 0`.
    pub fn nilpotence_degree(&self, ideal: &Echelon<F>) -> Result<usize> {
        let mut power = ideal.clone();
        let mut m = 1;
        while power.dim() > 0 {
            if m > self.dim() + 1 {
                return Err(Error::internal("subspace is not nilpotent"));
            }
            power = self.span_product(power.rows(), ideal.rows());
            m += 1;
        }
        Ok(m)
    }

    /// Quotient by a two-sided ideal; the quotient basis is the images of
    /// the basis elements at non-pivot positions of `ideal`.
    pub fn quotient(&self, ideal: &Echelon<F>) -> Quotient<F> {
        let reps: Vec<usize> = (0..self.dim()).filter(|c| !ideal.pivots().contains(c)).collect();
        let proj = |v: &[F]| -> Vec<F> {
            let r = ideal.reduce(v);
            reps.iter().map(|&q| r[q].clone()).collect()
        };
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj(&self.table[a][b])).collect())
            .collect();
        let alg = StructureConstants {
            ring: self.ring.clone(),
            table,
            one: proj(&self.one),
        };
        Quotient {
            alg,
            reps,
            ideal: ideal.clone(),
            parent_dim: self.dim(),
        }
    }

    /// Central primitive idempotents of a semisimple split algebra, as
    /// coordinate vectors sorted ascending.
    pub fn central_idempotents(&self, seed: u64) -> Result<Vec<Vec<F>>> {
        let center = self.center();
        let r = center.len();
        if r <= 1 {
            return Ok(vec![self.one.clone()]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SEPARATING_ATTEMPTS {
            let coeffs: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
            let z = self.int_combination(&center, &coeffs);
            let mu = self.min_poly(&z, &self.one);
            if mu.len() - 1 < r {
                continue;
            }
            let factors = split_with_multiplicity(&mu, &self.ring).ok_or_else(|| {
                Error::NotSplitOverBase("minimal polynomial of a separating central element has a root outside the base field".into())
            })?;
            if factors.iter().any(|(_, m)| *m > 1) {
                return Err(Error::internal("center of a semisimple algebra has nilpotents"));
            }
            let polys = crt_idempotent_polys(&factors, &self.ring)
                .ok_or_else(|| Error::internal("interpolation at distinct roots failed"))?;
            let mut es: Vec<Vec<F>> = polys.iter().map(|p| self.eval_poly(p, &z, &self.one)).collect();
            es.sort();
            self.check_orthogonal_decomposition(&es, &self.one)?;
            for e in &es {
                let ze = Echelon::from_vectors(self.dim(), &center.iter().map(|c| self.mul(c, e)).collect::<Vec<_>>());
                if ze.dim() != 1 {
                    return Err(Error::internal("central idempotent is not primitive"));
                }
            }
            return Ok(es);
        }
        Err(Error::NotSplitOverBase("no separating central element found".into()))
    }

    fn check_orthogonal_decomposition(&self, es: &[Vec<F>], unit: &[F]) -> Result<()> {
        let mut sum = self.zero();
        for (i, e) in es.iter().enumerate() {
            if is_zero_vec(e) || !self.is_idempotent(e) {
                return Err(Error::internal("idempotent check failed"));
            }
            for (j, f) in es.iter().enumerate() {
                if i != j && !is_zero_vec(&self.mul(e, f)) {
                    return Err(Error::internal("idempotents are not orthogonal"));
                }
            }
            sum = self.add(&sum, e);
        }
        if sum != unit {
            return Err(Error::internal("idempotents do not sum to the unit"));
        }
        Ok(())
    }

    /// Spanning set of `g A g`.
    fn corner(&self, g: &[F]) -> Echelon<F> {
        let mut e = Echelon::new(self.dim());
        for i in 0..self.dim() {
            e.insert(&self.mul(&self.mul(g, &self.basis_vec(i)), g));
        }
        e
    }

    /// Splits the idempotent `g` of a semisimple algebra into at least two
    /// orthogonal idempotents using an element of `gAg` whose minimal
    /// polynomial has several roots in F.
    fn split_idempotent(&self, g: &[F], rng: &mut ChaCha8Rng) -> Result<Vec<Vec<F>>> {
        let corner = self.corner(g).rows().to_vec();
        let structured = corner.iter().cloned().chain(
            (0..corner.len())
                .flat_map(|i| (i + 1..corner.len()).map(move |j| (i, j)))
                .map(|(i, j)| self.add(&corner[i], &corner[j])),
        );
        let random: Vec<Vec<F>> = (0..SPLITTING_ATTEMPTS)
            .map(|_| {
                let coeffs: Vec<i64> = (0..corner.len()).map(|_| rng.gen_range(-3..=3)).collect();
                self.int_combination(&corner, &coeffs)
            })
            .collect();
        for c in structured.chain(random) {
            let mu = self.min_poly(&c, g);
            if mu.len() < 3 {
                continue;
            }
            let Some(factors) = split_with_multiplicity(&mu, &self.ring) else {
                continue;
            };
            if factors.len() < 2 {
                continue;
            }
            let polys = crt_idempotent_polys(&factors, &self.ring)
                .ok_or_else(|| Error::internal("interpolation at distinct roots failed"))?;
            let pieces: Vec<Vec<F>> = polys.iter().map(|p| self.eval_poly(p, &c, g)).collect();
            self.check_orthogonal_decomposition(&pieces, g)?;
            return Ok(pieces);
        }
        Err(Error::NotSplitOverBase(
            "a simple component is not a full matrix algebra over the base field".into(),
        ))
    }

    /// Matrix units `E[p][q]` of the simple block with central idempotent
    /// `eps` in a semisimple algebra.
    fn matrix_units(&self, eps: &[F], rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Vec<F>>>> {
        let mut done = Vec::new();
        let mut todo = vec![eps.to_vec()];
        while let Some(g) = todo.pop() {
            if self.corner(&g).dim() == 1 {
                done.push(g);
            } else {
                todo.extend(self.split_idempotent(&g, rng)?);
            }
        }
        done.sort();
        let n = done.len();
        let block_dim = Echelon::from_vectors(
            self.dim(),
            &(0..self.dim()).map(|i| self.mul(eps, &self.basis_vec(i))).collect::<Vec<_>>(),
        )
        .dim();
        if block_dim != n * n {
            return Err(Error::NotSplitOverBase(format!(
                "simple component of dimension {block_dim} with {n} primitive idempotents"
            )));
        }
        let p1 = &done[0];
        let first_nonzero = |a: &[F], b: &[F]| -> Result<Vec<F>> {
            (0..self.dim())
                .map(|k| self.mul(&self.mul(a, &self.basis_vec(k)), b))
                .find(|v| !is_zero_vec(v))
                .ok_or_else(|| Error::internal("primitive idempotents of a simple block are not linked"))
        };
        let pivot = p1.iter().position(|x| !x.is_zero_elem()).unwrap();
        let mut row = vec![p1.clone()];
        let mut col = vec![p1.clone()];
        for q in &done[1..] {
            let u = first_nonzero(p1, q)?;
            let w = first_nonzero(q, p1)?;
            let uw = self.mul(&u, &w);
            let lambda = uw[pivot].div(&p1[pivot]).ok_or_else(|| Error::internal("zero pivot"))?;
            if scale_vec(p1, &lambda) != uw || lambda.is_zero_elem() {
                return Err(Error::internal("off-diagonal units do not compose to the idempotent"));
            }
            row.push(u);
            col.push(scale_vec(&w, &lambda.inv().unwrap()));
        }
        Ok((0..n).map(|p| (0..n).map(|q| self.mul(&col[p], &row[q])).collect()).collect())
    }

    /// Iterates `e <- 3e^2 - 2e^3` until `e` is idempotent.
    fn lift_idempotent(&self, e: &[F]) -> Result<Vec<F>> {
        let mut e = e.to_vec();
        let three = F::from_rational(&int(3), &self.ring);
        let two = F::from_rational(&int(2), &self.ring);
        for _ in 0..LIFT_ITERATIONS {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return Ok(e);
            }
            let e3 = self.mul(&e2, &e);
            e = self.sub(&scale_vec(&e2, &three), &scale_vec(&e3, &two));
        }
        Err(Error::internal("idempotent lifting did not become stationary"))
    }

    /// Inverse of `x` in the corner with identity `g`, where `g - x` is
    /// nilpotent.
    fn corner_unipotent_inverse(&self, x: &[F], g: &[F]) -> Result<Vec<F>> {
        let y = self.sub(g, x);
        let mut term = g.to_vec();
        let mut inv = g.to_vec();
        for _ in 0..=self.dim() {
            term = self.mul(&term, &y);
            if is_zero_vec(&term) {
                return Ok(inv);
            }
            inv = self.add(&inv, &term);
        }
        Err(Error::internal("corner element is not unipotent"))
    }
}

/// `A / I` together with the maps between coordinates.
#[derive(Debug, Clone)]
pub struct Quotient<F: Field> {
    pub alg: StructureConstants<F>,
    reps: Vec<usize>,
    ideal: Echelon<F>,
    parent_dim: usize,
}

impl<F: Field> Quotient<F> {
    pub fn project(&self, v: &[F]) -> Vec<F> {
        let r = self.ideal.reduce(v);
        self.reps.iter().map(|&q| r[q].clone()).collect()
    }

    /// Representative in the parent algebra.
    pub fn lift(&self, w: &[F]) -> Vec<F> {
        let mut v = zeros(self.parent_dim, self.alg.ring());
        for (&q, x) in self.reps.iter().zip(w) {
            v[q] = x.clone();
        }
        v
    }
}

/// F-span of matrices closed under multiplication and containing the
/// identity, with its structure constants.
#[derive(Debug, Clone)]
pub struct FiniteDimAlgebra<F: Field> {
    label: String,
    ring: F::Ring,
    size: usize,
    /// Reduced echelon basis of the vectorized matrices.
    vectors: Echelon<F>,
    basis: Vec<Matrix<F>>,
    structure: StructureConstants<F>,
}

fn flatten<F: Field>(m: &Matrix<F>) -> Vec<F> {
    m.entries().cloned().collect()
}

fn unflatten<F: Field>(v: &[F], size: usize) -> Matrix<F> {
    Matrix::from_rows(v.chunks(size).map(|r| r.to_vec()).collect()).expect("square data")
}

impl<F: Field> FiniteDimAlgebra<F> {
    /// Algebra whose basis is an echelon basis of `span(elements)`, which
    /// must be closed under multiplication and contain the identity.
    pub fn from_spanning_set(label: &str, ring: F::Ring, size: usize, elements: &[Matrix<F>]) -> Result<Self> {
        let vectors = Echelon::from_vectors(size * size, &elements.iter().map(flatten).collect::<Vec<_>>());
        let basis: Vec<Matrix<F>> = vectors.rows().iter().map(|v| unflatten(v, size)).collect();
        let coords = |m: &Matrix<F>| {
            vectors
                .coords(&flatten(m))
                .ok_or_else(|| Error::InvalidInput("span is not closed under multiplication".into()))
        };
        let table = basis
            .iter()
            .map(|a| basis.iter().map(|b| coords(&a.mul(b))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let one = coords(&Matrix::identity(size, &ring))
            .map_err(|_| Error::InvalidInput("span does not contain the identity".into()))?;
        let structure = StructureConstants::new(ring.clone(), table, one)?;
        Ok(FiniteDimAlgebra {
            label: label.to_string(),
            ring,
            size,
            vectors,
            basis,
            structure,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &F::Ring {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix<F>] {
        &self.basis
    }

    pub fn structure(&self) -> &StructureConstants<F> {
        &self.structure
    }

    pub fn coordinates(&self, m: &Matrix<F>) -> Option<Vec<F>> {
        if m.size() != self.size {
            return None;
        }
        self.vectors.coords(&flatten(m))
    }

    pub fn contains(&self, m: &Matrix<F>) -> bool {
        self.coordinates(m).is_some()
    }

    pub fn element(&self, coords: &[F]) -> Matrix<F> {
        let mut v = zeros(self.size * self.size, &self.ring);
        for (row, c) in self.vectors.rows().iter().zip(coords) {
            axpy(&mut v, c, row);
        }
        unflatten(&v, self.size)
    }
}

/// F-span closure of the generators together with the identity.
///
/// `max_levels` bounds the number of multiplication rounds; the closure
/// of `n x n` matrices always stabilizes within `n^2` rounds.
pub fn close_to_fdalg<F: Field>(pres: &AlgebraPresentation<F>, max_levels: usize) -> Result<FiniteDimAlgebra<F>> {
    let n = pres.size;
    let mut span = Echelon::new(n * n);
    let id = pres.identity();
    span.insert(&flatten(&id));
    let mut frontier = vec![id];
    let mut levels = 0;
    while !frontier.is_empty() {
        if levels == max_levels {
            return Err(Error::NonStabilizing { levels: max_levels });
        }
        levels += 1;
        let mut next = Vec::new();
        for g in &pres.generators {
            for b in &frontier {
                let p = g.mul(b);
                if span.insert(&flatten(&p)) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    let elements: Vec<Matrix<F>> = span.rows().iter().map(|v| unflatten(v, n)).collect();
    FiniteDimAlgebra::from_spanning_set(&pres.label, pres.ring.clone(), n, &elements)
}

/// Q-span closure for any coefficient ring, realized faithfully through
/// the left regular representation. Fails with `NonStabilizing` when the
/// Q-algebra is infinite-dimensional (or larger than `max_levels` allows).
pub fn close_to_fdalg_q<C: Coeff>(pres: &AlgebraPresentation<C>, max_levels: usize) -> Result<FiniteDimAlgebra<Rational>> {
    let table = growth_sequence(pres, &GrowthOptions::up_to(max_levels))?;
    let Some(level) = table.stabilized_at() else {
        return Err(Error::NonStabilizing { levels: max_levels });
    };
    let basis = table.level_elements(level);
    let n = basis.len();
    let mut regular = vec![Matrix::zero(n, &()); n];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let SpanMembership::InSpan(c) = span_membership(&basis, &a.mul(b))? else {
                return Err(Error::internal("stabilized span is not closed"));
            };
            for (k, ck) in c.into_iter().enumerate() {
                regular[i].set(k, j, ck);
            }
        }
    }
    let gens = regular.into_iter().filter(|m| !m.is_zero()).collect();
    let rep = AlgebraPresentation::new(pres.label.clone(), (), n, gens)?;
    close_to_fdalg(&rep, n * n + 1)
}

/// Basis of the radical as matrices.
pub fn radical<F: Field>(a: &FiniteDimAlgebra<F>) -> Result<Vec<Matrix<F>>> {
    Ok(a.structure.radical()?.rows().iter().map(|v| a.element(v)).collect())
}

/// Least `m` with `span(n)^m = 0`, for a nilpotent subspace `n` of `a`.
pub fn nilpotence_degree<F: Field>(a: &FiniteDimAlgebra<F>, n: &[Matrix<F>]) -> Result<usize> {
    let coords = n
        .iter()
        .map(|m| a.coordinates(m).ok_or(Error::NotAMember))
        .collect::<Result<Vec<_>>>()?;
    a.structure.nilpotence_degree(&Echelon::from_vectors(a.dim(), &coords))
}

/// Central primitive idempotents of a semisimple algebra whose center
/// splits over F.
pub fn central_primitive_idempotents<F: Field>(a: &FiniteDimAlgebra<F>, seed: u64) -> Result<Vec<Matrix<F>>> {
    if a.structure.radical()?.dim() > 0 {
        return Err(Error::InvalidInput("algebra has a nonzero radical".into()));
    }
    Ok(a.structure.central_idempotents(seed)?.iter().map(|v| a.element(v)).collect())
}

/// One simple component `f B f` of the complement with its matrix units.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleBlock<F: Field> {
    pub idempotent: Matrix<F>,
    /// `units[p][q]` with `units[p][q] units[r][s] = [q = r] units[p][s]`.
    pub units: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> SimpleBlock<F> {
    pub fn degree(&self) -> usize {
        self.units.len()
    }

    /// Matrix `(a_pq)` with `x = sum a_pq units[p][q]`, for `x` in the block.
    pub fn block_matrix(&self, x: &Matrix<F>, ring: &F::Ring) -> Option<Matrix<F>> {
        let n = self.degree();
        let e11 = &self.units[0][0];
        let (pi, pj) = (0..e11.size())
            .flat_map(|i| (0..e11.size()).map(move |j| (i, j)))
            .find(|&(i, j)| !e11.get(i, j).is_zero_elem())?;
        let mut rows = vec![vec![F::zero_in(ring); n]; n];
        let mut rebuilt = Matrix::zero(x.size(), ring);
        for p in 0..n {
            for q in 0..n {
                let s = self.units[0][p].mul(x).mul(&self.units[q][0]);
                let c = s.get(pi, pj).div(e11.get(pi, pj))?;
                if s != e11.scale_by(&c) {
                    return None;
                }
                rebuilt = rebuilt.add(&self.units[p][q].scale_by(&c));
                rows[p][q] = c;
            }
        }
        (rebuilt == *x).then(|| Matrix::from_rows(rows).expect("square"))
    }
}

/// `A = B + N` with `N` the radical and `B` a subalgebra isomorphic to
/// `A/N`.
#[derive(Debug, Clone)]
pub struct WedderburnData<F: Field> {
    pub radical: Vec<Matrix<F>>,
    pub nilpotence_degree: usize,
    pub complement: Vec<Matrix<F>>,
    /// Central primitive idempotents of `B`, one per block.
    pub idempotents: Vec<Matrix<F>>,
    pub blocks: Vec<SimpleBlock<F>>,
    radical_coords: Vec<Vec<F>>,
    complement_coords: Vec<Vec<F>>,
}

pub fn wedderburn_complement<F: Field>(a: &FiniteDimAlgebra<F>, seed: u64) -> Result<WedderburnData<F>> {
    let s = &a.structure;
    let rad = s.radical()?;
    let degree = s.nilpotence_degree(&rad)?;
    let q = s.quotient(&rad);
    let qa = &q.alg;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let central = qa.central_idempotents(seed)?;
    let mut fs: Vec<Vec<F>> = Vec::new();
    let mut acc = s.zero();
    for (i, eps) in central.iter().enumerate() {
        let f = if i + 1 == central.len() {
            s.sub(s.one(), &acc)
        } else {
            let rest = s.sub(s.one(), &acc);
            s.lift_idempotent(&s.mul(&s.mul(&rest, &q.lift(eps)), &rest))?
        };
        acc = s.add(&acc, &f);
        fs.push(f);
    }

    let mut block_units: Vec<Vec<Vec<Vec<F>>>> = Vec::new();
    for (eps, f) in central.iter().zip(&fs) {
        let units_bar = qa.matrix_units(eps, &mut rng)?;
        let n = units_bar.len();
        let mut gs = Vec::new();
        let mut acc = s.zero();
        for p in 0..n {
            let g = if p + 1 == n {
                s.sub(f, &acc)
            } else {
                let rest = s.sub(f, &acc);
                s.lift_idempotent(&s.mul(&s.mul(&rest, &q.lift(&units_bar[p][p])), &rest))?
            };
            acc = s.add(&acc, &g);
            gs.push(g);
        }
        let g1 = &gs[0];
        let mut row = vec![g1.clone()];
        let mut col = vec![g1.clone()];
        for p in 1..n {
            let u = s.mul(&s.mul(g1, &q.lift(&units_bar[0][p])), &gs[p]);
            let w = s.mul(&s.mul(&gs[p], &q.lift(&units_bar[p][0])), g1);
            let inv = s.corner_unipotent_inverse(&s.mul(&u, &w), g1)?;
            row.push(u);
            col.push(s.mul(&w, &inv));
        }
        block_units.push((0..n).map(|p| (0..n).map(|q| s.mul(&col[p], &row[q])).collect()).collect());
    }

    let complement = Echelon::from_vectors(a.dim(), &block_units.iter().flatten().flatten().cloned().collect::<Vec<_>>());
    check_wedderburn(s, &rad, degree, &complement, &fs, &block_units)?;

    let to_mats = |vs: &[Vec<F>]| vs.iter().map(|v| a.element(v)).collect::<Vec<_>>();
    let mut blocks: Vec<SimpleBlock<F>> = fs
        .iter()
        .zip(&block_units)
        .map(|(f, units)| SimpleBlock {
            idempotent: a.element(f),
            units: units.iter().map(|r| to_mats(r)).collect(),
        })
        .collect();
    blocks.sort_by(|x, y| x.idempotent.cmp(&y.idempotent));
    Ok(WedderburnData {
        radical: to_mats(rad.rows()),
        nilpotence_degree: degree,
        complement: to_mats(complement.rows()),
        idempotents: blocks.iter().map(|b| b.idempotent.clone()).collect(),
        blocks,
        radical_coords: rad.rows().to_vec(),
        complement_coords: complement.rows().to_vec(),
    })
}

fn check_wedderburn<F: Field>(
    s: &StructureConstants<F>,
    rad: &Echelon<F>,
    degree: usize,
    complement: &Echelon<F>,
    fs: &[Vec<F>],
    units: &[Vec<Vec<Vec<F>>>],
) -> Result<()> {
    let fail = |what: &str| Err(Error::internal(format!("complement check failed: {what}")));
    let mut both = complement.clone();
    for r in rad.rows() {
        both.insert(r);
    }
    if complement.dim() + rad.dim() != s.dim() || both.dim() != s.dim() {
        return fail("B + N is not a direct sum equal to A");
    }
    if !complement.contains(s.one()) {
        return fail("identity not in B");
    }
    for x in complement.rows() {
        for y in complement.rows() {
            if !complement.contains(&s.mul(x, y)) {
                return fail("B not closed under multiplication");
            }
        }
    }
    if degree > 1 {
        let mut power = rad.clone();
        for _ in 1..degree - 1 {
            power = s.span_product(power.rows(), rad.rows());
        }
        if power.dim() == 0 {
            return fail("nilpotence degree is not minimal");
        }
    }
    s.check_orthogonal_decomposition(fs, s.one())?;
    for f in fs {
        for x in complement.rows() {
            if s.mul(f, x) != s.mul(x, f) {
                return fail("idempotent not central in B");
            }
        }
    }
    for block in units {
        let n = block.len();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for t in 0..n {
                        let prod = s.mul(&block[p][q], &block[r][t]);
                        let expected = if q == r { block[p][t].clone() } else { s.zero() };
                        if prod != expected {
                            return fail("matrix unit relations");
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `(abar, arad)` with `abar` in the complement, `arad` in the radical.
pub fn decompose_element<F: Field>(
    a: &FiniteDimAlgebra<F>,
    data: &WedderburnData<F>,
    x: &Matrix<F>,
) -> Result<(Matrix<F>, Matrix<F>)> {
    let v = a.coordinates(x).ok_or(Error::NotAMember)?;
    let cols: Vec<Vec<F>> = data.complement_coords.iter().chain(&data.radical_coords).cloned().collect();
    let z = solve_columns(&cols, &v, a.ring()).ok_or_else(|| Error::internal("complement and radical do not span A"))?;
    let (zb, zn) = z.split_at(data.complement_coords.len());
    let combine = |basis: &[Vec<F>], coeffs: &[F]| {
        let mut out = a.structure.zero();
        for (b, c) in basis.iter().zip(coeffs) {
            axpy(&mut out, c, b);
        }
        a.element(&out)
    };
    let abar = combine(&data.complement_coords, zb);
    let arad = combine(&data.radical_coords, zn);
    if abar.add(&arad) != *x {
        return Err(Error::internal("decomposition does not add up"));
    }
    Ok((abar, arad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Poly, PolyRing, RatFunc, RatFuncField};
    use crate::matrix::rational_matrix;

    fn unit(d: usize, i: usize, j: usize) -> Matrix<Rational> {
        Matrix::unit(d, i, j, &())
    }

    fn alg(gens: Vec<Matrix<Rational>>) -> FiniteDimAlgebra<Rational> {
        let d = gens[0].size();
        let p = AlgebraPresentation::new("t", (), d, gens).unwrap();
        close_to_fdalg(&p, 64).unwrap()
    }

    fn upper_triangular(d: usize) -> FiniteDimAlgebra<Rational> {
        let mut gens: Vec<_> = (0..d).map(|i| unit(d, i, i)).collect();
        gens.extend((0..d - 1).map(|i| unit(d, i, i + 1)));
        alg(gens)
    }

    fn conjugate(ms: Vec<Matrix<Rational>>, p: &Matrix<Rational>) -> Vec<Matrix<Rational>> {
        let pi = p.inverse(&()).unwrap();
        ms.into_iter().map(|m| p.mul(&m).mul(&pi)).collect()
    }

    /// Elements `z` with `A z` a nilpotent left ideal, where `z` ranges over
    /// combinations with coefficients in `-2..=2` of a basis made of words
    /// in the generators; their span is the radical.
    fn brute_force_radical(gens: &[Matrix<Rational>]) -> usize {
        let a = alg(gens.to_vec());
        let s = a.structure();
        let n = a.dim();
        let d = gens[0].size();
        let mut words = vec![Matrix::identity(d, &())];
        words.extend(gens.iter().cloned());
        words.extend(gens.iter().flat_map(|g| gens.iter().map(move |h| g.mul(h))));
        let mut word_basis = Echelon::new(n);
        let mut lattice = Vec::new();
        for w in &words {
            let c = a.coordinates(w).unwrap();
            if word_basis.insert(&c) {
                lattice.push(c);
            }
        }
        assert_eq!(lattice.len(), n);
        let mut found = Echelon::new(n);
        for code in 0..5usize.pow(n as u32) {
            let coeffs: Vec<i64> = (0..n).map(|i| ((code / 5usize.pow(i as u32)) % 5) as i64 - 2).collect();
            let z = s.int_combination(&lattice, &coeffs);
            let left: Vec<Vec<Rational>> = (0..n).map(|i| s.mul(&s.basis_vec(i), &z)).collect();
            let ideal = Echelon::from_vectors(n, &left);
            let mut power = ideal.clone();
            for _ in 0..=n {
                power = s.span_product(power.rows(), ideal.rows());
            }
            if power.dim() == 0 {
                found.insert(&z);
            }
        }
        found.dim()
    }

    #[test]
    fn basic_dimensions() {
        let m2 = alg(vec![unit(2, 0, 1), unit(2, 1, 0)]);
        assert_eq!(m2.dim(), 4);
        assert!(radical(&m2).unwrap().is_empty());
        assert_eq!(central_primitive_idempotents(&m2, 0).unwrap(), vec![Matrix::identity(2, &())]);
        assert_eq!(upper_triangular(2).dim(), 3);
    }

    #[test]
    fn polynomial_ring_does_not_close() {
        let ring = PolyRing::indexed("x", 1);
        let p = AlgebraPresentation::new("qx", ring.clone(), 1, vec![Matrix::scalar(1, Poly::var(&ring, 0), &ring)])
            .unwrap();
        assert!(matches!(close_to_fdalg_q(&p, 8), Err(Error::NonStabilizing { .. })));
        let q = close_to_fdalg_q(&AlgebraPresentation::new("m2", (), 2, vec![unit(2, 0, 1), unit(2, 1, 0)]).unwrap(), 8)
            .unwrap();
        assert_eq!(q.dim(), 4);
        assert!(radical(&q).unwrap().is_empty());
    }

    #[test]
    fn upper_triangular_structure() {
        for d in 2..=4 {
            let a = upper_triangular(d);
            assert_eq!(a.dim(), d * (d + 1) / 2);
            let w = wedderburn_complement(&a, DEFAULT_SEED).unwrap();
            assert_eq!(w.radical.len(), d * (d - 1) / 2);
            for r in &w.radical {
                assert!((0..d).all(|i| (0..=i).all(|j| r.get(i, j).is_zero_elem())));
            }
            assert_eq!(w.nilpotence_degree, d);
            assert_eq!(nilpotence_degree(&a, &w.radical).unwrap(), d);
            assert_eq!(w.complement.len(), d);
            assert_eq!(w.idempotents.len(), d);
            assert!(w.blocks.iter().all(|b| b.degree() == 1));
        }
    }

    #[test]
    fn upper_triangular_two_by_two() {
        let a = upper_triangular(2);
        let w = wedderburn_complement(&a, 0).unwrap();
        assert_eq!(w.radical, vec![unit(2, 0, 1)]);
        assert_eq!(w.idempotents, vec![unit(2, 1, 1), unit(2, 0, 0)]);
        let x = rational_matrix(&[&[1, 5], &[0, 2]]);
        let (b, n) = decompose_element(&a, &w, &x).unwrap();
        assert_eq!(b, rational_matrix(&[&[1, 0], &[0, 2]]));
        assert_eq!(n, rational_matrix(&[&[0, 5], &[0, 0]]));
        let (b, n) = decompose_element(&a, &w, &unit(2, 0, 1)).unwrap();
        assert!(b.is_zero());
        assert_eq!(n, unit(2, 0, 1));
        assert_eq!(decompose_element(&a, &w, &unit(2, 1, 0)), Err(Error::NotAMember));
    }

    #[test]
    fn dual_numbers_and_diagonal() {
        let dual = alg(vec![unit(2, 0, 1)]);
        let w = wedderburn_complement(&dual, 0).unwrap();
        assert_eq!(w.radical, vec![unit(2, 0, 1)]);
        assert_eq!(w.complement, vec![Matrix::identity(2, &())]);
        assert_eq!(w.idempotents, vec![Matrix::identity(2, &())]);

        let diag = alg(vec![unit(2, 0, 0)]);
        let mut es = central_primitive_idempotents(&diag, 0).unwrap();
        es.sort();
        assert_eq!(es, vec![unit(2, 1, 1), unit(2, 0, 0)]);
    }

    #[test]
    fn non_split_center() {
        let a = alg(vec![rational_matrix(&[&[0, 2], &[1, 0]])]);
        assert_eq!(a.dim(), 2);
        assert!(matches!(central_primitive_idempotents(&a, 0), Err(Error::NotSplitOverBase(_))));
        assert!(matches!(wedderburn_complement(&a, 0), Err(Error::NotSplitOverBase(_))));
    }

    #[test]
    fn conjugated_block_algebra() {
        // P (Mat2 x Q with a radical part) P^-1 inside 3x3
        let gens = vec![unit(3, 0, 1), unit(3, 1, 0), unit(3, 2, 2), unit(3, 0, 2)];
        let p = rational_matrix(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let a = alg(conjugate(gens, &p));
        assert_eq!(a.dim(), 7);
        let w = wedderburn_complement(&a, 0).unwrap();
        assert_eq!(w.radical.len(), 2);
        assert_eq!(w.nilpotence_degree, 2);
        let mut degrees: Vec<usize> = w.blocks.iter().map(|b| b.degree()).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 2]);
        for b in &a.basis().to_vec() {
            let (x, n) = decompose_element(&a, &w, b).unwrap();
            assert_eq!(x.add(&n), *b);
        }
        let big = w.blocks.iter().find(|b| b.degree() == 2).unwrap();
        let e = &big.idempotent;
        let x = e.mul(&a.basis()[0]).mul(e);
        let (xbar, _) = decompose_element(&a, &w, &x).unwrap();
        let bm = big.block_matrix(&xbar, &()).unwrap();
        assert_eq!(bm.size(), 2);
    }

    #[test]
    fn radical_matches_brute_force() {
        let corpus = vec![
            vec![unit(2, 0, 1), unit(2, 1, 0)],
            vec![unit(2, 0, 0), unit(2, 1, 1), unit(2, 0, 1)],
            vec![unit(2, 0, 1)],
            vec![unit(2, 0, 0)],
            vec![rational_matrix(&[&[0, 2], &[1, 0]])],
            vec![rational_matrix(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])],
            vec![unit(3, 0, 0), unit(3, 1, 1)],
            vec![unit(3, 0, 1), unit(3, 1, 2)],
            vec![unit(3, 0, 0), unit(3, 0, 1), unit(3, 0, 2)],
            conjugate(vec![unit(2, 0, 0), unit(2, 0, 1)], &rational_matrix(&[&[2, 1], &[1, 1]])),
        ];
        for gens in &corpus {
            let a = alg(gens.clone());
            assert!(a.dim() <= 4);
            assert_eq!(radical(&a).unwrap().len(), brute_force_radical(gens), "{gens:?}");
        }
    }

    #[test]
    fn rational_function_coefficients() {
        let f = RatFuncField::default();
        let x = RatFunc::x();
        let d = Matrix::diagonal(vec![x.clone(), RatFunc::one_in(&f)], &f);
        let e12 = Matrix::unit(2, 0, 1, &f);
        let p = AlgebraPresentation::new("ut", f.clone(), 2, vec![d, e12.clone()]).unwrap();
        let a = close_to_fdalg(&p, 16).unwrap();
        assert_eq!(a.dim(), 3);
        let w = wedderburn_complement(&a, 0).unwrap();
        assert_eq!(w.radical, vec![e12]);
        assert_eq!(w.idempotents.len(), 2);

        let scalar = Matrix::scalar(2, x.clone(), &f);
        let p = AlgebraPresentation::new("k", f.clone(), 2, vec![scalar, Matrix::unit(2, 0, 1, &f)]).unwrap();
        let a = close_to_fdalg(&p, 16).unwrap();
        let w = wedderburn_complement(&a, 0).unwrap();
        assert_eq!(w.idempotents, vec![Matrix::identity(2, &f)]);
    }

    #[test]
    fn full_matrix_algebra_over_rational_functions() {
        let f = RatFuncField::default();
        let x = RatFunc::x();
        let g1 = Matrix::from_rows(vec![vec![x.clone(), RatFunc::one_in(&f)], vec![RatFunc::zero_in(&f), RatFunc::zero_in(&f)]]).unwrap();
        let g2 = Matrix::unit(2, 1, 0, &f);
        let p = AlgebraPresentation::new("m2", f.clone(), 2, vec![g1, g2]).unwrap();
        let a = close_to_fdalg(&p, 16).unwrap();
        assert_eq!(a.dim(), 4);
        let w = wedderburn_complement(&a, 0).unwrap();
        assert!(w.radical.is_empty());
        assert_eq!(w.blocks.len(), 1);
        assert_eq!(w.blocks[0].degree(), 2);
    }
}
