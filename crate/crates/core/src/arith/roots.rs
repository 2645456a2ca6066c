//! Root extraction for split squarefree polynomials over Q and Q(x).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ratfunc::RatFunc;
use super::rational::Rational;
use super::unipoly::UniPoly;

/// Roots of `p` if it is squarefree and splits into linear factors over Q.
///
/// Works on the integer-scaled monic form: with `D` the lcm of the
/// denominators of monic `p`, `D^k p(y/D)` is monic with integer
/// coefficients, so its rational roots are integers. Integer roots are
/// located numerically and confirmed exactly.
pub fn rational_roots_if_split(p: &UniPoly) -> Option<Vec<Rational>> {
    let k = p.degree()?;
    if k == 0 {
        return Some(Vec::new());
    }
    let monic = p.monic();
    let d = monic
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    // q(y) = D^k p(y / D): coefficient of y^i is c_i * D^(k - i).
    let mut ints: Vec<BigInt> = monic
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let scaled = c * Rational::from_integer(num_traits::pow(d.clone(), k - i));
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();

    let mut roots: Vec<BigInt> = Vec::new();
    while ints.len() > 1 && ints[0].is_zero() {
        roots.push(BigInt::zero());
        ints.remove(0);
    }
    let mut guard = 0;
    while ints.len() > 1 {
        guard += 1;
        if guard > 4 * k + 4 {
            return None;
        }
        let found = find_integer_root(&ints)?;
        roots.push(found.clone());
        ints = deflate(&ints, &found);
    }
    roots.sort();
    let mut out: Vec<Rational> = roots
        .into_iter()
        .map(|r| Rational::new(r, d.clone()))
        .collect();
    out.dedup();
    (out.len() == k).then_some(out)
}

fn eval_int(coeffs: &[BigInt], y: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * y + c)
}

/// Synthetic division by `y - r`.
fn deflate(coeffs: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let n = coeffs.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (0..n).rev() {
        carry = &coeffs[i + 1] + carry * r;
        out[i] = carry.clone();
    }
    out
}

fn find_integer_root(coeffs: &[BigInt]) -> Option<BigInt> {
    // Small exact search first: any integer root divides the constant term.
    let c0 = coeffs[0].abs();
    if let Some(c0_small) = c0.to_u64().filter(|&v| v <= 1_000_000) {
        for cand in 1..=c0_small {
            if c0_small % cand == 0 {
                for s in [BigInt::from(cand), -BigInt::from(cand)] {
                    if eval_int(coeffs, &s).is_zero() {
                        return Some(s);
                    }
                }
            }
        }
        return None;
    }
    // Numerical approximation, confirmed exactly on nearby integers.
    let approx = durand_kerner(coeffs)?;
    for (re, im) in approx {
        if im.abs() > 1e-3 * (1.0 + re.abs()) || !re.is_finite() {
            continue;
        }
        let center = BigInt::from(re.round() as i128);
        for delta in -2i32..=2 {
            let cand = &center + BigInt::from(delta);
            if !cand.is_zero() && (&c0 % cand.abs()).is_zero() && eval_int(coeffs, &cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

fn durand_kerner(coeffs: &[BigInt]) -> Option<Vec<(f64, f64)>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].to_f64()?;
    let a: Vec<f64> = coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN) / lead).collect();
    if a.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let radius = 1.0 + a[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let theta = 0.4 + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (radius * theta.cos(), radius * theta.sin())
        })
        .collect();
    let cmul = |x: (f64, f64), y: (f64, f64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    let cdiv = |x: (f64, f64), y: (f64, f64)| {
        let d = y.0 * y.0 + y.1 * y.1;
        ((x.0 * y.0 + x.1 * y.1) / d, (x.1 * y.0 - x.0 * y.1) / d)
    };
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut num = (1.0, 0.0);
            for c in a[..n].iter().rev() {
                num = cmul(num, z[i]);
                num.0 += c;
            }
            // Horner above starts from the implicit leading 1.
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den = cmul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = cdiv(num, den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-12 {
            break;
        }
    }
    Some(z)
}

// ---------------------------------------------------------------------------
// Roots over Q(x): specialize, lift as power series, reconstruct by Pade.

type Series = Vec<Rational>;

fn series_mul(a: &Series, b: &Series, prec: usize) -> Series {
    let mut out = vec![Rational::zero(); prec];
    for (i, ai) in a.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(prec - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn series_inv(a: &Series, prec: usize) -> Series {
    let a0_inv = a[0].recip();
    let mut out = vec![Rational::zero(); prec];
    out[0] = a0_inv.clone();
    for n in 1..prec {
        let mut acc = Rational::zero();
        for k in 1..=n.min(a.len() - 1) {
            acc += &a[k] * &out[n - k];
        }
        out[n] = -acc * &a0_inv;
    }
    out
}

/// Coefficients of `p(x0 + s)` as a polynomial in `s`.
fn taylor_shift(p: &UniPoly, x0: &Rational) -> UniPoly {
    let s_plus = UniPoly::new(vec![x0.clone(), Rational::one()]);
    p.coeffs()
        .iter()
        .rev()
        .fold(UniPoly::zero(), |acc, c| acc.mul(&s_plus).add(&UniPoly::constant(c.clone())))
}

fn ratfunc_series(f: &RatFunc, x0: &Rational, prec: usize) -> Series {
    let num = taylor_shift(f.numer(), x0);
    let den = taylor_shift(f.denom(), x0);
    let mut n: Series = num.coeffs().to_vec();
    n.resize(prec.max(n.len()), Rational::zero());
    let mut d: Series = den.coeffs().to_vec();
    d.resize(prec.max(d.len()), Rational::zero());
    series_mul(&n, &series_inv(&d, prec), prec)
}

/// Evaluates `sum_i coeffs[i] * rho^i` in truncated series arithmetic.
fn series_poly_eval(coeffs: &[Series], rho: &Series, prec: usize) -> Series {
    let mut acc = vec![Rational::zero(); prec];
    for c in coeffs.iter().rev() {
        acc = series_mul(&acc, rho, prec);
        for (a, ci) in acc.iter_mut().zip(c) {
            *a += ci;
        }
    }
    acc
}

/// Roots in Q(x) of a squarefree polynomial with Q(x) coefficients, if it
/// splits. Coefficients are given constant term first.
pub fn ratfunc_roots_if_split(poly: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let mut coeffs: Vec<RatFunc> = poly.to_vec();
    while coeffs.last().is_some_and(RatFunc::is_zero) {
        coeffs.pop();
    }
    let k = coeffs.len().checked_sub(1)?;
    if k == 0 {
        return Some(Vec::new());
    }
    if coeffs.iter().all(|c| c.as_constant().is_some()) {
        let p = UniPoly::new(coeffs.iter().map(|c| c.as_constant().unwrap()).collect());
        return rational_roots_if_split(&p)
            .map(|rs| rs.into_iter().map(RatFunc::constant).collect());
    }
    let lead_inv = coeffs[k].inv()?;
    let monic: Vec<RatFunc> = coeffs.iter().map(|c| c.mul(&lead_inv)).collect();

    let mut roots = Vec::new();
    let mut rest = monic.clone();
    if rest[0].is_zero() {
        roots.push(RatFunc::zero());
        rest.remove(0);
    }
    if rest.len() > 1 {
        roots.extend(nonzero_roots(&rest)?);
    }
    roots.sort();
    roots.dedup();
    (roots.len() == k).then_some(roots)
}

fn nonzero_roots(monic: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let k = monic.len() - 1;
    // Clear denominators: a_i in Q[x], a_k = L. A root p/q in lowest terms
    // has p | a_0 and q | a_k.
    let l = monic.iter().fold(UniPoly::one(), |acc, c| acc.lcm(c.denom()));
    let cleared: Vec<UniPoly> = monic
        .iter()
        .map(|c| l.mul(c.numer()).div_rem(c.denom()).0)
        .collect();
    let deg_num = cleared[0].degree()?;
    let deg_den = cleared[k].degree()?;
    let prec = deg_num + deg_den + 2;

    let x0 = (0..60i64)
        .map(|i| Rational::from_integer(BigInt::from(if i % 2 == 0 { i / 2 } else { -(i / 2) - 1 })))
        .find(|x0| {
            if monic.iter().any(|c| c.denom().eval(x0).is_zero()) {
                return false;
            }
            let specialized = UniPoly::new(monic.iter().map(|c| c.eval(x0).unwrap()).collect());
            specialized.gcd(&specialized.derivative()).degree() == Some(0)
        })?;
    let specialized = UniPoly::new(monic.iter().map(|c| c.eval(&x0).unwrap()).collect());
    let base_roots = rational_roots_if_split(&specialized)?;

    let coeff_series: Vec<Series> = monic.iter().map(|c| ratfunc_series(c, &x0, prec)).collect();
    let deriv_coeffs: Vec<Series> = coeff_series
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, s)| s.iter().map(|c| c * Rational::from_integer(BigInt::from(i))).collect())
        .collect();

    let mut out = Vec::new();
    for a0 in base_roots {
        let mut rho = vec![Rational::zero(); prec];
        rho[0] = a0;
        let slope = series_poly_eval(&deriv_coeffs, &rho, 1)[0].clone();
        if slope.is_zero() {
            return None;
        }
        for j in 1..prec {
            let val = series_poly_eval(&coeff_series, &rho, j + 1);
            rho[j] = -val[j].clone() / &slope;
        }
        let cand = pade(&rho, deg_num, deg_den, &x0)?;
        let check = monic
            .iter()
            .rev()
            .fold(RatFunc::zero(), |acc, c| acc.mul(&cand).add(c));
        if !check.is_zero() {
            return None;
        }
        out.push(cand);
    }
    Some(out)
}

/// Rational function `p/q` in `x` with `deg p <= dn`, `deg q <= dd` whose
/// expansion at `x0` matches `series` to the available order.
fn pade(series: &Series, dn: usize, dd: usize, x0: &Rational) -> Option<RatFunc> {
    // Unknowns q_0..q_dd; require [s^j](q * S) = 0 for j in dn+1..=dn+dd.
    let rows: Vec<Vec<Rational>> = (dn + 1..=dn + dd)
        .map(|j| {
            (0..=dd)
                .map(|i| if i <= j { series.get(j - i).cloned().unwrap_or_else(Rational::zero) } else { Rational::zero() })
                .collect()
        })
        .collect();
    let q_coeffs = crate::span::nullspace_dense(&rows, dd + 1).into_iter().next()?;
    let q_s = UniPoly::new(q_coeffs);
    let prod = series_mul(&q_s.coeffs().to_vec(), series, dn + 1);
    let p_s = UniPoly::new(prod);
    // Back from s = x - x0 to x.
    let back = |p: &UniPoly| taylor_shift(p, &-x0.clone());
    if q_s.is_zero() {
        return None;
    }
    Some(RatFunc::new(back(&p_s), back(&q_s)))
}
