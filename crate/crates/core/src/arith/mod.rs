//! Exact arithmetic: rationals, sparse multivariate polynomials, univariate
//! rational functions and the expression parser.

mod coeff;
mod monomial;
mod parse;
mod poly;
mod ratfunc;
mod rational;
pub(crate) mod roots;
mod unipoly;

pub use coeff::{Coeff, Field, RatFuncField};
pub use monomial::Monomial;
pub use parse::{parse_poly_expr, parse_ratfunc_expr, parse_rational_expr, ParseError, ParseErrorKind};
pub use poly::{poly_arith, Poly, PolyOp, PolyRing};
pub use ratfunc::RatFunc;
pub use rational::{fmt_rational, int, one, rat, serialize_rational, zero, Rational};
pub use roots::{ratfunc_roots_if_split, rational_roots_if_split};
pub use unipoly::{uni_gcd, UniPoly};
