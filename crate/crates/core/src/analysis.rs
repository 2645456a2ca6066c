//! Reading growth tables: difference degrees, GK-dimension estimates and
//! the dominance relation `S ⪯ T` checked on a finite window.
//!
//! Dominance and equivalence reports are evidence about finitely many
//! levels; they are not proofs of the asymptotic relations.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::arith::{serialize_rational, Rational};
use crate::error::{Error, Result};

/// Inclusive range of filtration levels `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Window(pub usize, pub usize);

impl Window {
    pub fn lo(&self) -> usize {
        self.0
    }

    pub fn hi(&self) -> usize {
        self.1
    }

    pub fn len(&self) -> usize {
        self.1 + 1 - self.0
    }

    pub fn is_empty(&self) -> bool {
        self.1 < self.0
    }

    /// Default estimation window for a table up to level `n`:
    /// `[max(6, n/2), n]`.
    pub fn default_for(n: usize) -> Window {
        Window((n / 2).max(6).min(n), n)
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DifferenceDegree {
    /// The `k`-th finite difference equals `leading > 0` on the tail.
    Degree { k: usize, leading: i64 },
    NotPolynomial,
}

impl DifferenceDegree {
    pub fn degree(&self) -> Option<usize> {
        match self {
            DifferenceDegree::Degree { k, .. } => Some(*k),
            DifferenceDegree::NotPolynomial => None,
        }
    }
}

/// Smallest `k` such that the `k`-th finite difference of `dims` is a
/// positive constant on its last `tail` entries, trying `k` up to
/// `dims.len() / 2`.
pub fn difference_degree(dims: &[usize], tail: usize) -> Result<DifferenceDegree> {
    if tail < 3 {
        return Err(Error::InvalidInput(format!("tail length {tail} is below 3")));
    }
    if dims.len() < tail + 6 {
        return Err(Error::InsufficientData(format!(
            "{} table entries, need at least {} for a tail of {}",
            dims.len(),
            tail + 6,
            tail
        )));
    }
    let mut diff: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
    for k in 0..=dims.len() / 2 {
        if diff.len() < tail {
            break;
        }
        let t = &diff[diff.len() - tail..];
        if t[0] > 0 && t.iter().all(|&v| v == t[0]) {
            return Ok(DifferenceDegree::Degree { k, leading: t[0] });
        }
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(DifferenceDegree::NotPolynomial)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GkMethod {
    DifferenceDegree,
    LogLogSlope,
}

impl std::fmt::Display for GkMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GkMethod::DifferenceDegree => "difference-degree",
            GkMethod::LogLogSlope => "log-log-slope",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GkEstimate {
    pub method: GkMethod,
    /// Exact integer for the difference method, slope rounded to three
    /// decimals otherwise.
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    pub window: Window,
    /// Root-mean-square residual of the log-log fit.
    pub residual: Option<f64>,
    pub note: String,
}

impl GkEstimate {
    /// The integer value for a difference-degree estimate.
    pub fn integer_value(&self) -> Option<usize> {
        (self.method == GkMethod::DifferenceDegree).then(|| self.value.to_integer().to_usize().unwrap_or(0))
    }

    pub fn value_text(&self) -> String {
        match self.method {
            GkMethod::DifferenceDegree => self.value.to_integer().to_string(),
            GkMethod::LogLogSlope => format_three_decimals(&self.value),
        }
    }
}

fn format_three_decimals(q: &Rational) -> String {
    let scaled = (q * Rational::from_integer(BigInt::from(1000))).round().to_integer();
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let int_part = &abs / BigInt::from(1000);
    let frac = (&abs % BigInt::from(1000)).to_u32().unwrap_or(0);
    format!("{}{}.{:03}", if neg { "-" } else { "" }, int_part, frac)
}

/// Estimates the GK dimension from `dims` on `window` (default
/// [`Window::default_for`]): the difference degree when the tail is
/// polynomial, otherwise the least-squares slope of `log dims[n]` against
/// `log n`.
pub fn gk_estimate(dims: &[usize], window: Option<Window>) -> Result<GkEstimate> {
    if dims.is_empty() {
        return Err(Error::InsufficientData("empty growth table".into()));
    }
    let n = dims.len() - 1;
    let w = window.unwrap_or_else(|| Window::default_for(n));
    if w.is_empty() || w.hi() > n || w.lo() == 0 {
        return Err(Error::InsufficientData(format!(
            "window {w} does not fit a table up to level {n}"
        )));
    }
    let table = &dims[..=w.hi()];
    match difference_degree(table, w.len()) {
        Ok(DifferenceDegree::Degree { k, leading }) => {
            return Ok(GkEstimate {
                method: GkMethod::DifferenceDegree,
                value: Rational::from_integer(BigInt::from(k)),
                window: w,
                residual: None,
                note: format!("{k}-th difference constant {leading} on levels {w}"),
            })
        }
        Ok(DifferenceDegree::NotPolynomial) => {}
        Err(Error::InsufficientData(msg)) => return Err(Error::InsufficientData(msg)),
        Err(_) if w.len() < 3 => {}
        Err(e) => return Err(e),
    }
    if w.len() < 2 {
        return Err(Error::InsufficientData("log-log fit needs two levels".into()));
    }
    let pts: Vec<(f64, f64)> = (w.lo()..=w.hi())
        .map(|i| ((i as f64).ln(), (dims[i].max(1) as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icpt = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum::<f64>() / m).sqrt();
    let value = Rational::new(BigInt::from((slope * 1000.0).round() as i64), BigInt::from(1000));
    Ok(GkEstimate {
        method: GkMethod::LogLogSlope,
        value,
        window: w,
        residual: Some(residual),
        note: "table is not polynomial on the window; slope of log dim against log n".into(),
    })
}

// ---------------------------------------------------------------------------
// Dominance.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KMin {
    /// Least positive integer `K` with `dims_S[n] <= K dims_T[n]` on the
    /// window.
    Constant(u64),
    /// `dims_T[n] = 0 < dims_S[n]` at this level.
    Fail(usize),
}

impl KMin {
    pub fn constant(&self) -> Option<u64> {
        match self {
            KMin::Constant(k) => Some(*k),
            KMin::Fail(_) => None,
        }
    }
}

impl std::fmt::Display for KMin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KMin::Constant(k) => write!(f, "{k}"),
            KMin::Fail(n) => write!(f, "fail@{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    /// `"S<=T"` with the two labels.
    pub direction: String,
    pub k_min: KMin,
    pub window: Window,
    pub dims_s: Vec<usize>,
    pub dims_t: Vec<usize>,
}

/// Smallest `K >= 1` with `dims_s[n] <= K dims_t[n]` for `n` in `window`.
pub fn dominance_check(
    dims_s: &[usize],
    dims_t: &[usize],
    window: Window,
    labels: (&str, &str),
) -> Result<DominanceReport> {
    if window.is_empty() || window.hi() >= dims_s.len() || window.hi() >= dims_t.len() {
        return Err(Error::InvalidInput(format!(
            "window {window} is not covered by tables of lengths {} and {}",
            dims_s.len(),
            dims_t.len()
        )));
    }
    let mut k: u64 = 1;
    let mut k_min = None;
    for n in window.lo()..=window.hi() {
        let (s, t) = (dims_s[n] as u64, dims_t[n] as u64);
        if t == 0 {
            if s > 0 {
                k_min = Some(KMin::Fail(n));
                break;
            }
            continue;
        }
        k = k.max(s.div_ceil(t));
    }
    Ok(DominanceReport {
        direction: format!("{}<={}", labels.0, labels.1),
        k_min: k_min.unwrap_or(KMin::Constant(k)),
        window,
        dims_s: dims_s[window.lo()..=window.hi()].to_vec(),
        dims_t: dims_t[window.lo()..=window.hi()].to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceVerdict {
    EquivalentOnWindow,
    /// The named direction fails, either on the window or by a mismatch of
    /// difference degrees on the tails.
    NotDominatedOnWindow(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub forward: DominanceReport,
    pub backward: DominanceReport,
    pub degree_s: Option<usize>,
    pub degree_t: Option<usize>,
    pub verdict: EquivalenceVerdict,
}

fn tail_degree(dims: &[usize]) -> Option<usize> {
    let n = dims.len().checked_sub(1)?;
    let w = Window::default_for(n);
    difference_degree(dims, w.len()).ok().and_then(|d| d.degree())
}

/// Both dominance directions plus a verdict. A direction is flagged when
/// its check fails on the window, or when both tables have a polynomial
/// tail and the dominated side has the larger difference degree (no
/// constant can work asymptotically).
pub fn equivalence_check(
    dims_s: &[usize],
    dims_t: &[usize],
    window: Window,
    labels: (&str, &str),
) -> Result<EquivalenceReport> {
    let forward = dominance_check(dims_s, dims_t, window, labels)?;
    let backward = dominance_check(dims_t, dims_s, window, (labels.1, labels.0))?;
    let degree_s = tail_degree(dims_s);
    let degree_t = tail_degree(dims_t);
    let verdict = if let KMin::Fail(_) = forward.k_min {
        EquivalenceVerdict::NotDominatedOnWindow(forward.direction.clone())
    } else if let KMin::Fail(_) = backward.k_min {
        EquivalenceVerdict::NotDominatedOnWindow(backward.direction.clone())
    } else {
        match (degree_s, degree_t) {
            (Some(a), Some(b)) if a > b => EquivalenceVerdict::NotDominatedOnWindow(forward.direction.clone()),
            (Some(a), Some(b)) if a < b => EquivalenceVerdict::NotDominatedOnWindow(backward.direction.clone()),
            _ => EquivalenceVerdict::EquivalentOnWindow,
        }
    };
    Ok(EquivalenceReport {
        forward,
        backward,
        degree_s,
        degree_t,
        verdict,
    })
}
