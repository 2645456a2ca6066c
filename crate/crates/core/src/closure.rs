//! Characteristic polynomials, Cayley-Hamilton checks, trace algebras and
//! the characteristic closure `TR`.

use serde::Serialize;

use crate::arith::{int, Coeff, Poly, PolyRing};
use crate::error::{Error, Result};
use crate::growth::{growth_sequence, par_map, GrowthOptions};
use crate::matrix::Matrix;
use crate::presentation::{AlgebraPresentation, RingKind};
use crate::span::{span_membership, EchelonBasis, Insertion, SpanMembership};

/// Coefficients of a polynomial in `t`, constant term first.
pub type TPoly<C> = Vec<C>;

fn tpoly_mul<C: Coeff>(a: &[C], b: &[C], ring: &C::Ring) -> TPoly<C> {
    let mut out = vec![C::zero_in(ring); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero_elem() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn tpoly_pow<C: Coeff>(a: &[C], e: usize, ring: &C::Ring) -> TPoly<C> {
    (0..e).fold(vec![C::one_in(ring)], |acc, _| tpoly_mul(&acc, a, ring))
}

/// Characteristic polynomial `det(tI - a)` by the Faddeev-LeVerrier
/// recurrence. Only divisions by the integers `1..=d` occur.
pub fn char_poly<C: Coeff>(a: &Matrix<C>, ring: &C::Ring) -> TPoly<C> {
    let d = a.size();
    let mut coeffs = vec![C::zero_in(ring); d + 1];
    coeffs[d] = C::one_in(ring);
    let mut m = Matrix::zero(d, ring);
    let id = Matrix::identity(d, ring);
    for k in 1..=d {
        m = a.mul(&m).add(&id.scale_by(&coeffs[d - k + 1]));
        let tr = a.mul(&m).trace(ring);
        coeffs[d - k] = tr.scale(&-(int(1) / int(k as i64)));
    }
    coeffs
}

/// Determinant, read off the characteristic polynomial.
pub fn det<C: Coeff>(a: &Matrix<C>, ring: &C::Ring) -> C {
    let c0 = char_poly(a, ring).swap_remove(0);
    if a.size() % 2 == 0 {
        c0
    } else {
        c0.neg()
    }
}

/// Ordinary characteristic polynomial `c` of a `d x d` matrix paired with
/// the characteristic polynomial `p` of left multiplication on `Mat_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPolyPair<C> {
    pub c: TPoly<C>,
    pub p: TPoly<C>,
}

/// Matrix of `b -> a b` on `Mat_d` in the basis `e_ij`, ordered row-major.
pub fn left_regular_matrix<C: Coeff>(a: &Matrix<C>, ring: &C::Ring) -> Matrix<C> {
    let d = a.size();
    let mut l = Matrix::zero(d * d, ring);
    // a * e_ij = sum_k a_ki e_kj
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                l.set(k * d + j, i * d + j, a.get(k, i).clone());
            }
        }
    }
    l
}

/// Computes `c_a` and `p_a` and checks `p_a = c_a^d`.
pub fn regular_rep_charpoly<C: Coeff>(a: &Matrix<C>, ring: &C::Ring) -> Result<CharPolyPair<C>> {
    let c = char_poly(a, ring);
    let p = char_poly(&left_regular_matrix(a, ring), ring);
    if p != tpoly_pow(&c, a.size(), ring) {
        return Err(Error::internal(
            "characteristic polynomial of the regular representation is not c^d",
        ));
    }
    Ok(CharPolyPair { c, p })
}

/// Evaluates a polynomial at a matrix by Horner's rule.
pub fn eval_at_matrix<C: Coeff>(poly: &[C], a: &Matrix<C>, ring: &C::Ring) -> Matrix<C> {
    let id = Matrix::identity(a.size(), ring);
    poly.iter()
        .rev()
        .fold(Matrix::zero(a.size(), ring), |acc, c| acc.mul(a).add(&id.scale_by(c)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CayleyHamilton<C> {
    Zero,
    NonZero(Matrix<C>),
}

/// Evaluates `c_a(a)`.
pub fn cayley_hamilton_check<C: Coeff>(a: &Matrix<C>, ring: &C::Ring) -> CayleyHamilton<C> {
    let r = eval_at_matrix(&char_poly(a, ring), a, ring);
    if r.is_zero() {
        CayleyHamilton::Zero
    } else {
        CayleyHamilton::NonZero(r)
    }
}

/// Like [`cayley_hamilton_check`] but an error on failure, for pipelines
/// that must abort on an arithmetic inconsistency.
pub fn assert_cayley_hamilton<C: Coeff>(a: &Matrix<C>, ring: &C::Ring) -> Result<()> {
    match cayley_hamilton_check(a, ring) {
        CayleyHamilton::Zero => Ok(()),
        CayleyHamilton::NonZero(_) => Err(Error::internal("Cayley-Hamilton evaluation is nonzero")),
    }
}

// ---------------------------------------------------------------------------
// Trace algebra.

pub const DEFAULT_WORD_CAP: usize = 20_000;

/// All words of length `1..=max_len` in `gens`, in length-lex order, as
/// (index sequence, product).
pub fn enumerate_products<C: Coeff>(
    gens: &[Matrix<C>],
    max_len: usize,
    cap: usize,
) -> Result<Vec<(Vec<usize>, Matrix<C>)>> {
    let mut total = 0usize;
    let mut count = 1usize;
    for _ in 0..max_len {
        count = count.saturating_mul(gens.len());
        total = total.saturating_add(count);
    }
    if total > cap {
        return Err(Error::cap("number of words for trace generators", cap));
    }
    let mut out: Vec<(Vec<usize>, Matrix<C>)> = Vec::with_capacity(total);
    let mut prev: Vec<(Vec<usize>, Matrix<C>)> = Vec::new();
    for len in 1..=max_len {
        let next: Vec<(Vec<usize>, Matrix<C>)> = if len == 1 {
            gens.iter().enumerate().map(|(i, g)| (vec![i], g.clone())).collect()
        } else {
            let mut v = Vec::with_capacity(prev.len() * gens.len());
            for (i, g) in gens.iter().enumerate() {
                for (w, m) in &prev {
                    let mut word = vec![i];
                    word.extend_from_slice(w);
                    v.push((word, g.mul(m)));
                }
            }
            v
        };
        out.extend(next.iter().cloned());
        prev = next;
    }
    Ok(out)
}

/// Truncated trace algebra `T` and the closure `TR`.
#[derive(Debug, Clone)]
pub struct TraceAlgebraPresentation<C: Coeff> {
    /// The algebra `R` the closure was built from.
    pub base: AlgebraPresentation<C>,
    /// Generators of `T`, elements of the coefficient ring.
    pub t_generators: Vec<C>,
    pub word_length: usize,
    pub words_examined: usize,
    /// `TR`: generators of `R` together with `t * I` for each `t`.
    pub closure: AlgebraPresentation<C>,
}

impl<C: Coeff> TraceAlgebraPresentation<C> {
    /// Presentation of `T` itself as scalar matrices.
    pub fn trace_presentation(&self) -> AlgebraPresentation<C> {
        AlgebraPresentation {
            label: format!("T({})", self.base.label),
            ring: self.base.ring.clone(),
            size: self.base.size,
            generators: self.scalar_generators(),
        }
    }

    fn scalar_generators(&self) -> Vec<Matrix<C>> {
        self.t_generators
            .iter()
            .map(|t| Matrix::scalar(self.base.size, t.clone(), &self.base.ring))
            .collect()
    }
}

/// Keeps the elements of `cands` that enlarge the Q-span of `1` and the
/// previously kept ones.
pub fn dedup_by_q_span<C: Coeff>(cands: &[C], ring: &C::Ring) -> Vec<C> {
    let one = C::one_in(ring);
    let clearing = C::widen_clearing(
        &C::clearing(std::iter::empty(), 0),
        cands.iter().chain(std::iter::once(&one)),
    );
    let coords = |c: &C| {
        let m = Matrix::scalar(1, c.clone(), ring);
        m.vectorize(&clearing).expect("cleared by construction")
    };
    let mut basis = EchelonBasis::new();
    basis.insert(&coords(&one));
    cands
        .iter()
        .filter(|c| basis.insert(&coords(c)) == Insertion::Extended)
        .cloned()
        .collect()
}

/// Collects the nonconstant coefficients of the characteristic polynomials
/// of all words of length at most `word_length`, as the signed invariants
/// `s_k = (-1)^k c_{d-k}` (so a diagonal matrix yields the elementary
/// symmetric functions of its entries), keeps a Q-independent subset and
/// forms the closure presentation.
pub fn trace_algebra_generators<C: RingKind>(
    pres: &AlgebraPresentation<C>,
    word_length: usize,
    word_cap: usize,
    workers: usize,
) -> Result<TraceAlgebraPresentation<C>> {
    if word_length == 0 {
        return Err(Error::InvalidInput("word length must be at least 1".into()));
    }
    let ring = &pres.ring;
    let d = pres.size;
    let words = enumerate_products(&pres.generators, word_length, word_cap)?;
    let polys: Vec<TPoly<C>> = par_map(workers, &words, |(_, m)| char_poly(m, ring));
    let mut cands = Vec::new();
    for c in &polys {
        for k in 1..=d {
            let coeff = &c[d - k];
            if coeff.as_rational().is_some() {
                continue;
            }
            cands.push(if k % 2 == 0 { coeff.clone() } else { coeff.neg() });
        }
    }
    let t_generators = dedup_by_q_span(&cands, ring);
    let scalars: Vec<Matrix<C>> = t_generators.iter().map(|t| Matrix::scalar(d, t.clone(), ring)).collect();
    let closure = AlgebraPresentation::new(format!("TR({})", pres.label), ring.clone(), d, {
        let mut g = pres.generators.clone();
        g.extend(scalars);
        g
    })?;
    Ok(TraceAlgebraPresentation {
        base: pres.clone(),
        t_generators,
        word_length,
        words_examined: words.len(),
        closure,
    })
}

/// Outcome of [`module_finiteness_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ModuleFiniteness {
    /// `R^(level)` (of Q-dimension `rank`) generates `TR` as a `T`-module:
    /// every element of `R^(level+1)` is a combination of products
    /// `t * w` with `t` in `T^(t_budget)` and `w` in `R^(level)`.
    StabilizedRank { rank: usize, level: usize, t_budget: usize },
    NotStabilized { levels: usize },
}

/// Looks for a level `j <= max_level` at which `R^(j+1) ⊆ T^(b) R^(j)`
/// (with `b = max_level + 1`). Once that holds, `T R^(j)` is stable under
/// left multiplication by the generators and contains `1`, so it equals
/// `TR`; the number reported is `dim_Q R^(j)`. The search itself is
/// truncated at `max_level`.
pub fn module_finiteness_check<C: RingKind>(
    closure: &TraceAlgebraPresentation<C>,
    max_level: usize,
    workers: usize,
) -> Result<ModuleFiniteness> {
    if max_level == 0 {
        return Err(Error::InvalidInput("level cap must be positive".into()));
    }
    let budget = max_level + 1;
    let opts = GrowthOptions {
        workers,
        ..GrowthOptions::up_to(budget)
    };
    let r_table = growth_sequence(&closure.base, &opts)?;
    let t_table = growth_sequence(&closure.trace_presentation(), &opts)?;
    let t_basis = t_table.level_elements(budget);
    for j in 0..=max_level {
        let w = r_table.level_elements(j);
        let new = r_table.new_elements(j + 1);
        let products: Vec<Matrix<C>> = t_basis.iter().flat_map(|t| w.iter().map(move |x| t.mul(x))).collect();
        let mut ok = true;
        for n in &new {
            if span_membership(&products, n)? == SpanMembership::NotInSpan {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(ModuleFiniteness::StabilizedRank {
                rank: w.len(),
                level: j,
                t_budget: budget,
            });
        }
    }
    Ok(ModuleFiniteness::NotStabilized { levels: max_level })
}

/// The algebra `R = Q[r]` with `r = diag(x1, ..., xm)` inside the diagonal
/// matrices over `Q[x1..xm]`.
pub fn ex_big_build(m: usize) -> Result<AlgebraPresentation<Poly>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let ring = PolyRing::indexed("x", m);
    let r = Matrix::diagonal((0..m).map(|i| Poly::var(&ring, i)).collect(), &ring);
    AlgebraPresentation::new(format!("ex-big-{m}"), ring, m, vec![r])
}

/// Signed coefficient `(-1)^k c_{d-k}` of a monic polynomial of degree `d`.
pub fn signed_coefficient<C: Coeff>(c: &[C], k: usize) -> C {
    let d = c.len() - 1;
    if k % 2 == 0 {
        c[d - k].clone()
    } else {
        c[d - k].neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_poly_expr, Rational};
    use crate::matrix::rational_matrix;
    use std::sync::Arc;

    fn p(s: &str, ring: &Arc<PolyRing>) -> Poly {
        parse_poly_expr(s, ring).unwrap()
    }

    fn pm(rows: &[&[&str]], ring: &Arc<PolyRing>) -> Matrix<Poly> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| p(s, ring)).collect()).collect()).unwrap()
    }

    #[test]
    fn diag_charpoly() {
        let ring = PolyRing::indexed("x", 2);
        let a = pm(&[&["x1", "0"], &["0", "x2"]], &ring);
        let c = char_poly(&a, &ring);
        assert_eq!(c, vec![p("x1*x2", &ring), p("-x1-x2", &ring), p("1", &ring)]);
    }

    #[test]
    fn upper_triangular_charpoly() {
        let ring = PolyRing::new(["x"]);
        let a = pm(&[&["x", "1"], &["0", "x^2"]], &ring);
        assert_eq!(char_poly(&a, &ring), vec![p("x^3", &ring), p("-x-x^2", &ring), p("1", &ring)]);
        assert_eq!(cayley_hamilton_check(&a, &ring), CayleyHamilton::Zero);
        let pair = regular_rep_charpoly(&a, &ring).unwrap();
        assert_eq!(pair.p.len(), 5);
    }

    #[test]
    fn nilpotent_and_identity() {
        let e12 = rational_matrix(&[&[0, 1], &[0, 0]]);
        let pair = regular_rep_charpoly(&e12, &()).unwrap();
        assert_eq!(pair.c, vec![int(0), int(0), int(1)]);
        assert_eq!(pair.p, vec![int(0), int(0), int(0), int(0), int(1)]);
        let id = Matrix::<Rational>::identity(2, &());
        let pair = regular_rep_charpoly(&id, &()).unwrap();
        assert_eq!(pair.c, vec![int(1), int(-2), int(1)]);
        assert_eq!(pair.p, vec![int(1), int(-4), int(6), int(-4), int(1)]);
        assert_eq!(cayley_hamilton_check(&Matrix::<Rational>::zero(3, &()), &()), CayleyHamilton::Zero);
    }

    #[test]
    fn determinant() {
        let a = rational_matrix(&[&[2, 1, 0], &[0, 3, 4], &[1, 0, 5]]);
        assert_eq!(det(&a, &()), a.det(&()));
    }

    #[test]
    fn single_generator_trace_gens() {
        let ring = PolyRing::new(["x"]);
        let a = pm(&[&["x", "1"], &["0", "x^2"]], &ring);
        let pres = AlgebraPresentation::new("a", ring.clone(), 2, vec![a]).unwrap();
        let t = trace_algebra_generators(&pres, 1, DEFAULT_WORD_CAP, 1).unwrap();
        assert_eq!(t.t_generators, vec![p("x+x^2", &ring), p("x^3", &ring)]);
        assert_eq!(t.closure.generators.len(), 3);
    }

    #[test]
    fn rational_presentation_has_trivial_trace() {
        let pres = AlgebraPresentation::new("m2", (), 2, vec![rational_matrix(&[&[0, 1], &[1, 0]])]).unwrap();
        let t = trace_algebra_generators(&pres, 4, DEFAULT_WORD_CAP, 1).unwrap();
        assert!(t.t_generators.is_empty());
        let fin = module_finiteness_check(&t, 3, 1).unwrap();
        assert!(matches!(fin, ModuleFiniteness::StabilizedRank { rank, .. } if rank <= 2));
    }

    #[test]
    fn word_cap() {
        let pres = AlgebraPresentation::new("m2", (), 2, vec![rational_matrix(&[&[0, 1], &[1, 0]]); 3]).unwrap();
        assert!(matches!(
            trace_algebra_generators(&pres, 5, 100, 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn ex_big_module_finite() {
        for m in 1..=2 {
            let r = ex_big_build(m).unwrap();
            let t = trace_algebra_generators(&r, 1, DEFAULT_WORD_CAP, 1).unwrap();
            let fin = module_finiteness_check(&t, 4, 1).unwrap();
            assert_eq!(
                fin,
                ModuleFiniteness::StabilizedRank {
                    rank: m,
                    level: m - 1,
                    t_budget: 5
                }
            );
        }
    }
}
