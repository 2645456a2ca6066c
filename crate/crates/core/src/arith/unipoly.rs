use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::poly::{Poly, PolyRing};
use super::rational::{fmt_rational, is_negative, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q, coefficients from degree 0 upward.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        UniPoly::new(vec![Rational::zero(), Rational::one()])
    }

    /// `x - a`.
    pub fn linear_root(a: &Rational) -> Self {
        UniPoly::new(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, q: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        let mut result = UniPoly::one();
        for _ in 0..k {
            result = result.mul(self);
        }
        result
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let inv = self.leading_coeff().recip();
        self.scale(&inv)
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lc_inv = divisor.leading_coeff().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Monic greatest common divisor; `gcd(a, 0) = monic(a)` and `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn lcm(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let g = self.gcd(other);
        self.mul(&other.div_rem(&g).0).monic()
    }

    pub fn to_poly(&self, ring: &Arc<PolyRing>) -> Poly {
        assert_eq!(ring.nvars(), 1, "univariate ring expected");
        Poly::from_terms(
            ring,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::from_exponents(vec![k as u32]), c.clone())),
        )
    }

    pub fn from_poly(p: &Poly) -> Result<UniPoly> {
        if p.nvars() != 1 {
            return Err(Error::RingMismatch(format!(
                "expected a univariate polynomial, got {} variables",
                p.nvars()
            )));
        }
        let deg = p.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.exponents()[0] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_expr_string(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&fmt_rational(&abs)),
                (false, true) => out.push_str(&mono),
                (false, false) => out.push_str(&format!("{}*{}", fmt_rational(&abs), mono)),
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string("x"))
    }
}

/// Monic gcd of two univariate polynomials given as `Poly` values.
pub fn uni_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    if !super::poly::same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch("gcd operands".into()));
    }
    let g = UniPoly::from_poly(a)?.gcd(&UniPoly::from_poly(b)?);
    Ok(g.to_poly(a.ring()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn p(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[0, 1]).gcd(&p(&[1])), p(&[1]));
        // x^3 - x and x^2 - 2x + 1 share exactly the factor x - 1.
        assert_eq!(p(&[0, -1, 0, 1]).gcd(&p(&[1, -2, 1])), p(&[-1, 1]));
        assert_eq!(p(&[0, 2]).gcd(&UniPoly::zero()), p(&[0, 1]));
    }

    #[test]
    fn uni_gcd_on_polys() {
        let r = PolyRing::new(["x"]);
        let a = p(&[-1, 0, 1]).to_poly(&r);
        let b = p(&[-1, 1]).to_poly(&r);
        assert_eq!(uni_gcd(&a, &b).unwrap(), b);
    }

    #[test]
    fn division() {
        let (q, r) = p(&[1, 0, 0, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[1, -1, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[3, 0, 1]).div_rem(&p(&[0, 2]));
        assert_eq!(q.mul(&p(&[0, 2])).add(&r), p(&[3, 0, 1]));
    }
}
