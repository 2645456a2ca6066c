use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::parse::{parse_poly_expr, parse_ratfunc_expr, parse_rational_expr, ParseError};
use super::poly::{same_ring, Poly, PolyRing};
use super::ratfunc::RatFunc;
use super::rational::{fmt_rational, Rational};
use super::unipoly::UniPoly;

/// Commutative coefficient ring of characteristic zero, viewed as a
/// Q-vector space with an explicit coordinate system.
///
/// Coordinates are what the span engine works on. For Q and `Q[x..]` they
/// are the monomial coefficients. Q(x) has no global monomial basis, so a
/// `Clearing` polynomial is fixed per computation and elements are
/// coordinatized after multiplying by it; `coords` returns `None` for an
/// element that does not clear to a polynomial, which can never lie in a
/// span of elements that do.
pub trait Coeff: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static {
    type Ring: Clone + PartialEq + Debug + Send + Sync;
    type Clearing: Clone + Debug + Send + Sync;

    fn zero_in(ring: &Self::Ring) -> Self;
    fn one_in(ring: &Self::Ring) -> Self;
    fn from_rational(q: &Rational, ring: &Self::Ring) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    /// The value if this element is a rational constant.
    fn as_rational(&self) -> Option<Rational>;
    /// Whether the element belongs to `ring`.
    fn in_ring(&self, ring: &Self::Ring) -> bool;
    fn format(&self, ring: &Self::Ring) -> String;
    fn parse(text: &str, ring: &Self::Ring) -> Result<Self, ParseError>;

    /// Clearing that makes every product of at most `power` factors drawn
    /// from `elems` (and sums of such) coordinatizable.
    fn clearing<'a>(elems: impl IntoIterator<Item = &'a Self>, power: u32) -> Self::Clearing;
    /// Clearing that also admits every element in `extra` as is.
    fn widen_clearing<'a>(c: &Self::Clearing, extra: impl IntoIterator<Item = &'a Self>) -> Self::Clearing;
    fn coords(&self, clearing: &Self::Clearing) -> Option<Vec<(Monomial, Rational)>>;
    fn from_coords(terms: &[(Monomial, Rational)], clearing: &Self::Clearing, ring: &Self::Ring) -> Self;
}

/// Coefficient rings that are fields (Q and Q(x)).
pub trait Field: Coeff {
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.mul(&i))
    }

    /// All roots in the field of a squarefree polynomial given by its
    /// coefficients (constant term first), provided it splits into linear
    /// factors; `None` otherwise.
    fn split_roots(poly: &[Self], ring: &Self::Ring) -> Option<Vec<Self>>;
}

impl Coeff for Rational {
    type Ring = ();
    type Clearing = ();

    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn from_rational(q: &Rational, _: &()) -> Self {
        q.clone()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn in_ring(&self, _: &()) -> bool {
        true
    }
    fn format(&self, _: &()) -> String {
        fmt_rational(self)
    }
    fn parse(text: &str, _: &()) -> Result<Self, ParseError> {
        parse_rational_expr(text)
    }
    fn clearing<'a>(_: impl IntoIterator<Item = &'a Self>, _: u32) {}
    fn widen_clearing<'a>(_: &(), _: impl IntoIterator<Item = &'a Self>) {}
    fn coords(&self, _: &()) -> Option<Vec<(Monomial, Rational)>> {
        if Zero::is_zero(self) {
            Some(Vec::new())
        } else {
            Some(vec![(Monomial::one(0), self.clone())])
        }
    }
    fn from_coords(terms: &[(Monomial, Rational)], _: &(), _: &()) -> Self {
        terms.iter().map(|(_, c)| c).sum()
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }

    fn split_roots(poly: &[Self], _: &()) -> Option<Vec<Self>> {
        super::roots::rational_roots_if_split(&UniPoly::new(poly.to_vec()))
    }
}

impl Coeff for Poly {
    type Ring = Arc<PolyRing>;
    type Clearing = ();

    fn zero_in(ring: &Self::Ring) -> Self {
        Poly::zero(ring)
    }
    fn one_in(ring: &Self::Ring) -> Self {
        Poly::one(ring)
    }
    fn from_rational(q: &Rational, ring: &Self::Ring) -> Self {
        Poly::constant(ring, q.clone())
    }
    fn is_zero_elem(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Poly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Poly::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Poly::mul(self, rhs)
    }
    fn scale(&self, q: &Rational) -> Self {
        Poly::scale(self, q)
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
    fn in_ring(&self, ring: &Self::Ring) -> bool {
        same_ring(self.ring(), ring)
    }
    fn format(&self, _: &Self::Ring) -> String {
        self.to_expr_string()
    }
    fn parse(text: &str, ring: &Self::Ring) -> Result<Self, ParseError> {
        parse_poly_expr(text, ring)
    }
    fn clearing<'a>(_: impl IntoIterator<Item = &'a Self>, _: u32) {}
    fn widen_clearing<'a>(_: &(), _: impl IntoIterator<Item = &'a Self>) {}
    fn coords(&self, _: &()) -> Option<Vec<(Monomial, Rational)>> {
        Some(self.terms().map(|(m, c)| (m.clone(), c.clone())).collect())
    }
    fn from_coords(terms: &[(Monomial, Rational)], _: &(), ring: &Self::Ring) -> Self {
        Poly::from_terms(ring, terms.iter().cloned())
    }
}

/// Descriptor of Q(x): just the variable name used for parsing and printing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFuncField {
    pub var: String,
}

impl RatFuncField {
    pub fn new(var: impl Into<String>) -> Self {
        RatFuncField { var: var.into() }
    }
}

impl Default for RatFuncField {
    fn default() -> Self {
        RatFuncField::new("x")
    }
}

impl Coeff for RatFunc {
    type Ring = RatFuncField;
    type Clearing = UniPoly;

    fn zero_in(_: &RatFuncField) -> Self {
        RatFunc::zero()
    }
    fn one_in(_: &RatFuncField) -> Self {
        RatFunc::one()
    }
    fn from_rational(q: &Rational, _: &RatFuncField) -> Self {
        RatFunc::constant(q.clone())
    }
    fn is_zero_elem(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        RatFunc::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        RatFunc::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        RatFunc::mul(self, rhs)
    }
    fn scale(&self, q: &Rational) -> Self {
        RatFunc::scale(self, q)
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
    fn in_ring(&self, _: &RatFuncField) -> bool {
        true
    }
    fn format(&self, ring: &RatFuncField) -> String {
        self.to_expr_string(&ring.var)
    }
    fn parse(text: &str, ring: &RatFuncField) -> Result<Self, ParseError> {
        parse_ratfunc_expr(text, &ring.var)
    }
    fn clearing<'a>(elems: impl IntoIterator<Item = &'a Self>, power: u32) -> UniPoly {
        let l = elems
            .into_iter()
            .fold(UniPoly::one(), |acc, f| acc.lcm(f.denom()));
        l.pow(power)
    }
    fn widen_clearing<'a>(c: &UniPoly, extra: impl IntoIterator<Item = &'a Self>) -> UniPoly {
        extra.into_iter().fold(c.clone(), |acc, f| acc.lcm(f.denom()))
    }
    fn coords(&self, clearing: &UniPoly) -> Option<Vec<(Monomial, Rational)>> {
        let scaled = clearing.mul(self.numer());
        let (q, r) = scaled.div_rem(self.denom());
        if !r.is_zero() {
            return None;
        }
        Some(
            q.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !Zero::is_zero(*c))
                .map(|(k, c)| (Monomial::from_exponents(vec![k as u32]), c.clone()))
                .collect(),
        )
    }
    fn from_coords(terms: &[(Monomial, Rational)], clearing: &UniPoly, _: &RatFuncField) -> Self {
        let deg = terms
            .iter()
            .map(|(m, _)| m.exponents()[0] as usize)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in terms {
            coeffs[m.exponents()[0] as usize] += c;
        }
        RatFunc::new(UniPoly::new(coeffs), clearing.clone())
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }

    fn split_roots(poly: &[Self], _: &RatFuncField) -> Option<Vec<Self>> {
        super::roots::ratfunc_roots_if_split(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    #[test]
    fn ratfunc_clearing_round_trip() {
        let f = parse_ratfunc_expr("(x + 1)/(x - 1)", "x").unwrap();
        let g = parse_ratfunc_expr("1/x", "x").unwrap();
        let clearing = RatFunc::clearing([&f, &g], 2);
        let ring = RatFuncField::default();
        for h in [&f, &g, &f.mul(&g)] {
            let c = h.coords(&clearing).unwrap();
            assert_eq!(&RatFunc::from_coords(&c, &clearing, &ring), h);
        }
        let outside = parse_ratfunc_expr("1/(x + 2)", "x").unwrap();
        assert!(outside.coords(&clearing).is_none());
        assert_eq!(RatFunc::from_rational(&int(3), &ring).as_rational(), Some(int(3)));
    }
}
