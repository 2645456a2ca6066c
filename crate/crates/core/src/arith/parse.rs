//! Parser for polynomial and rational-function expressions.
//!
//! Grammar (whitespace-insensitive, implicit multiplication rejected):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | '+' unary | power
//! power    := atom ('^' exponent)?
//! exponent := integer | '(' integer ')'
//! atom     := integer | identifier | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, which binds tighter than `*` and `/`,
//! which bind tighter than binary `+` and `-`. So `-x^2` is `-(x^2)` and
//! `3/2*x` is `(3/2)*x`. Over a polynomial ring a divisor must be a nonzero
//! constant; over Q(x) any nonzero divisor is allowed.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::poly::{Poly, PolyRing};
use super::ratfunc::RatFunc;
use super::rational::Rational;
use super::unipoly::UniPoly;

const MAX_EXPONENT: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    NegativeExponent,
    DivisionByZero,
    NonConstantDivisor,
}

/// Parse failure with the character offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at position {}: {}", self.pos, msg),
            ParseErrorKind::UnknownVariable(v) => {
                write!(f, "unknown variable '{}' at position {}", v, self.pos)
            }
            ParseErrorKind::NegativeExponent => {
                write!(f, "negative exponent at position {}", self.pos)
            }
            ParseErrorKind::DivisionByZero => write!(f, "division by zero at position {}", self.pos),
            ParseErrorKind::NonConstantDivisor => {
                write!(f, "non-constant divisor at position {}", self.pos)
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((start, Tok::Int(digits.parse().expect("digits"))));
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(ParseError {
                    pos: start,
                    kind: ParseErrorKind::Syntax(format!("unexpected character '{other}'")),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

#[derive(Debug)]
enum Expr {
    Int(BigInt),
    Var(usize, String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            kind: ParseErrorKind::Syntax(msg.into()),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.idx += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    let pos = self.pos();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.idx += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.idx += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.idx += 1;
        let exp = self.exponent()?;
        if self.peek() == Some(&Tok::Caret) {
            return self.err("chained exponent; use parentheses");
        }
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let parens = self.peek() == Some(&Tok::LParen);
        if parens {
            self.idx += 1;
        }
        let sign_pos = self.pos();
        let negative = match self.peek() {
            Some(Tok::Minus) => {
                self.idx += 1;
                true
            }
            Some(Tok::Plus) => {
                self.idx += 1;
                false
            }
            _ => false,
        };
        let value = match self.peek() {
            Some(Tok::Int(n)) => n.clone(),
            _ => return self.err("expected an integer exponent"),
        };
        if negative && !value.is_zero() {
            return Err(ParseError {
                pos: sign_pos,
                kind: ParseErrorKind::NegativeExponent,
            });
        }
        let pos = self.pos();
        self.idx += 1;
        if parens {
            if self.peek() != Some(&Tok::RParen) {
                return self.err("expected ')'");
            }
            self.idx += 1;
        }
        match value.to_u32() {
            Some(e) if e <= MAX_EXPONENT => Ok(e),
            _ => Err(ParseError {
                pos,
                kind: ParseErrorKind::Syntax(format!("exponent exceeds {MAX_EXPONENT}")),
            }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.idx += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.idx += 1;
                Ok(Expr::Var(pos, name))
            }
            Some(Tok::LParen) => {
                self.idx += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.idx += 1;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_ast(text: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let end = text.chars().count();
    if toks.is_empty() {
        return Err(ParseError {
            pos: 0,
            kind: ParseErrorKind::Syntax("empty expression".into()),
        });
    }
    let mut p = Parser { toks, idx: 0, end };
    let e = p.expr()?;
    if p.idx != p.toks.len() {
        return p.err("unexpected trailing input (implicit multiplication is not allowed)");
    }
    Ok(e)
}

/// Value domain an expression evaluates into.
trait Domain: Sized {
    fn int(&self, n: &BigInt) -> Self::V;
    fn var(&self, pos: usize, name: &str) -> Result<Self::V, ParseError>;
    fn neg(&self, a: Self::V) -> Self::V;
    fn add(&self, a: Self::V, b: Self::V) -> Self::V;
    fn sub(&self, a: Self::V, b: Self::V) -> Self::V;
    fn mul(&self, a: Self::V, b: Self::V) -> Self::V;
    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V, ParseError>;
    fn pow(&self, a: Self::V, e: u32) -> Self::V;
    type V;

    fn eval(&self, e: &Expr) -> Result<Self::V, ParseError> {
        Ok(match e {
            Expr::Int(n) => self.int(n),
            Expr::Var(pos, name) => self.var(*pos, name)?,
            Expr::Neg(a) => {
                let a = self.eval(a)?;
                self.neg(a)
            }
            Expr::Add(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.add(a, b)
            }
            Expr::Sub(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.sub(a, b)
            }
            Expr::Mul(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.mul(a, b)
            }
            Expr::Div(a, b, pos) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.div(a, b, *pos)?
            }
            Expr::Pow(a, k) => {
                let a = self.eval(a)?;
                self.pow(a, *k)
            }
        })
    }
}

struct PolyDomain<'a>(&'a Arc<PolyRing>);

impl Domain for PolyDomain<'_> {
    type V = Poly;

    fn int(&self, n: &BigInt) -> Poly {
        Poly::constant(self.0, Rational::from_integer(n.clone()))
    }
    fn var(&self, pos: usize, name: &str) -> Result<Poly, ParseError> {
        self.0
            .index_of(name)
            .map(|i| Poly::var(self.0, i))
            .ok_or_else(|| ParseError {
                pos,
                kind: ParseErrorKind::UnknownVariable(name.to_string()),
            })
    }
    fn neg(&self, a: Poly) -> Poly {
        a.neg()
    }
    fn add(&self, a: Poly, b: Poly) -> Poly {
        a.add(&b)
    }
    fn sub(&self, a: Poly, b: Poly) -> Poly {
        a.sub(&b)
    }
    fn mul(&self, a: Poly, b: Poly) -> Poly {
        a.mul(&b)
    }
    fn div(&self, a: Poly, b: Poly, pos: usize) -> Result<Poly, ParseError> {
        match b.as_constant() {
            Some(c) if c.is_zero() => Err(ParseError {
                pos,
                kind: ParseErrorKind::DivisionByZero,
            }),
            Some(c) => Ok(a.scale(&c.recip())),
            None => Err(ParseError {
                pos,
                kind: ParseErrorKind::NonConstantDivisor,
            }),
        }
    }
    fn pow(&self, a: Poly, e: u32) -> Poly {
        a.pow(e)
    }
}

struct RatFuncDomain<'a>(&'a str);

impl Domain for RatFuncDomain<'_> {
    type V = RatFunc;

    fn int(&self, n: &BigInt) -> RatFunc {
        RatFunc::constant(Rational::from_integer(n.clone()))
    }
    fn var(&self, pos: usize, name: &str) -> Result<RatFunc, ParseError> {
        if name == self.0 {
            Ok(RatFunc::from_poly(UniPoly::x()))
        } else {
            Err(ParseError {
                pos,
                kind: ParseErrorKind::UnknownVariable(name.to_string()),
            })
        }
    }
    fn neg(&self, a: RatFunc) -> RatFunc {
        a.neg()
    }
    fn add(&self, a: RatFunc, b: RatFunc) -> RatFunc {
        a.add(&b)
    }
    fn sub(&self, a: RatFunc, b: RatFunc) -> RatFunc {
        a.sub(&b)
    }
    fn mul(&self, a: RatFunc, b: RatFunc) -> RatFunc {
        a.mul(&b)
    }
    fn div(&self, a: RatFunc, b: RatFunc, pos: usize) -> Result<RatFunc, ParseError> {
        a.div(&b).ok_or(ParseError {
            pos,
            kind: ParseErrorKind::DivisionByZero,
        })
    }
    fn pow(&self, a: RatFunc, e: u32) -> RatFunc {
        a.pow(e)
    }
}

/// Parses a polynomial expression over the given ring.
pub fn parse_poly_expr(text: &str, ring: &Arc<PolyRing>) -> Result<Poly, ParseError> {
    PolyDomain(ring).eval(&parse_ast(text)?)
}

/// Parses a rational-function expression in the single variable `var`.
pub fn parse_ratfunc_expr(text: &str, var: &str) -> Result<RatFunc, ParseError> {
    RatFuncDomain(var).eval(&parse_ast(text)?)
}

/// Parses a constant expression such as `3/2` or `-(1/3)^2`.
pub fn parse_rational_expr(text: &str) -> Result<Rational, ParseError> {
    let ring = PolyRing::new(Vec::<String>::new());
    let p = parse_poly_expr(text, &ring)?;
    Ok(p.as_constant().expect("no variables in an empty ring"))
}
