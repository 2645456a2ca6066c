//! Verifiers for sufficient conditions under which enlarging or replacing
//! an algebra preserves its growth: bimodule certificates, and adjoining
//! elements that are (a) killed into `S` by a regular central element,
//! (b) nilpotent modulo `S`, or (c) finite-dimensional and commuting.
//!
//! Every check is tagged with the kind of evidence it gives: exact
//! identities, checks that hold up to a stated filtration level, and
//! window-only dominance comparisons.

use serde::Serialize;

use crate::analysis::{dominance_check, equivalence_check, DominanceReport, EquivalenceReport, KMin, Window};
use crate::arith::Coeff;
use crate::closure::det;
use crate::error::{Error, Result};
use crate::growth::{growth_sequence, GrowthOptions, GrowthTable};
use crate::matrix::Matrix;
use crate::presentation::{AlgebraPresentation, RingKind};
use crate::span::independent_subset;

pub const DEFAULT_CHECK_LEVEL: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    Exact,
    LevelBounded,
    WindowOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub evidence: Evidence,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, evidence: Evidence, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            evidence,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    /// Name of the first failing check.
    HypothesisFails(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub certificate: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    /// Hypotheses that are part of the statement but not checked.
    pub unchecked: Vec<String>,
    pub predicted_constant: Option<u64>,
    /// `dim_Q k[X]` when the certificate establishes it.
    pub finite_dimension: Option<usize>,
    pub dominance: Option<DominanceReport>,
    pub equivalence: Option<EquivalenceReport>,
}

impl CertificateReport {
    fn assemble(certificate: &str, checks: Vec<Check>) -> Self {
        let verdict = match checks.iter().find(|c| !c.passed) {
            Some(c) => Verdict::HypothesisFails(c.name.clone()),
            None => Verdict::Verified,
        };
        CertificateReport {
            certificate: certificate.into(),
            verdict,
            checks,
            unchecked: Vec::new(),
            predicted_constant: None,
            finite_dimension: None,
            dominance: None,
            equivalence: None,
        }
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    fn window_check(&mut self, name: &str, report: &EquivalenceReport) {
        let ok = report.forward.k_min.constant().is_some() && report.backward.k_min.constant().is_some();
        self.push(Check::new(
            name,
            Evidence::WindowOnly,
            ok,
            format!(
                "K_min {} / {} on levels {}",
                report.forward.k_min, report.backward.k_min, report.forward.window
            ),
        ));
    }

    fn push(&mut self, check: Check) {
        if !check.passed && self.verdict == Verdict::Verified {
            self.verdict = Verdict::HypothesisFails(check.name.clone());
        }
        self.checks.push(check);
    }
}

fn same_shape<C: Coeff>(size: usize, mats: &[&Matrix<C>]) -> Result<()> {
    match mats.iter().find(|m| m.size() != size) {
        Some(m) => Err(Error::ShapeMismatch(format!(
            "matrix of size {} in an ambient of size {}",
            m.size(),
            size
        ))),
        None => Ok(()),
    }
}

fn table<C: Coeff>(pres: &AlgebraPresentation<C>, max_n: usize, workers: usize) -> Result<GrowthTable<C>> {
    growth_sequence(pres, &GrowthOptions { workers, ..GrowthOptions::up_to(max_n) })
}

/// Growth comparison of `S[X]` against `S` on `window`.
fn extension_equivalence<C: RingKind>(
    s: &AlgebraPresentation<C>,
    xs: &[Matrix<C>],
    window: Window,
    workers: usize,
) -> Result<EquivalenceReport> {
    let ext = s.adjoin_generators(xs)?;
    let big = table(&ext, window.hi(), workers)?;
    let small = table(s, window.hi(), workers)?;
    equivalence_check(big.dims(), small.dims(), window, ("S[X]", "S"))
}

/// Checks a bimodule certificate for `S ⪯ T`: module generators `m_1..m_r`
/// and structure elements with `s m_j = sum_i m_i t_ij(s)` for every
/// generator `s` of `S`. `t[k][i][j]` is `t_ij` of the `k`-th generator and
/// must lie in `T^(t_level)`. Then `dim S^(n) <= r^2 dim T^(t_level n)`
/// provided the module is faithful, which is not checked.
#[allow(clippy::too_many_arguments)]
pub fn verify_bimodule_certificate<C: RingKind>(
    s: &AlgebraPresentation<C>,
    t: &AlgebraPresentation<C>,
    m: &[Matrix<C>],
    structure: &[Vec<Vec<Matrix<C>>>],
    t_level: usize,
    window: Window,
    workers: usize,
) -> Result<CertificateReport> {
    let r = m.len();
    if structure.len() != s.generators.len()
        || structure.iter().any(|tk| tk.len() != r || tk.iter().any(|row| row.len() != r))
    {
        return Err(Error::ShapeMismatch(format!(
            "structure elements must be {} blocks of {r}x{r}",
            s.generators.len()
        )));
    }
    let all: Vec<&Matrix<C>> = m.iter().chain(structure.iter().flatten().flatten()).collect();
    same_shape(s.size, &all)?;
    same_shape(t.size, &all)?;

    let mut checks = Vec::new();
    let mut relation_failure = None;
    'outer: for (k, g) in s.generators.iter().enumerate() {
        for j in 0..r {
            let lhs = g.mul(&m[j]);
            let rhs = (0..r).fold(Matrix::zero(s.size, &s.ring), |acc, i| {
                acc.add(&m[i].mul(&structure[k][i][j]))
            });
            if lhs != rhs {
                relation_failure = Some((k, j));
                break 'outer;
            }
        }
    }
    checks.push(Check::new(
        "relations",
        Evidence::Exact,
        relation_failure.is_none(),
        match relation_failure {
            Some((k, j)) => format!("s_{k} m_{j} differs from sum_i m_i t_ij(s_{k})"),
            None => format!("s m_j = sum_i m_i t_ij(s) for {} generators and r = {r}", s.generators.len()),
        },
    ));

    let t_table = table(t, t_level.max(1) * window.hi(), workers)?;
    let missing = structure
        .iter()
        .enumerate()
        .flat_map(|(k, tk)| tk.iter().enumerate().flat_map(move |(i, row)| row.iter().enumerate().map(move |(j, e)| (k, i, j, e))))
        .find(|(_, _, _, e)| !t_table.contains_at_level(e, t_level));
    checks.push(Check::new(
        "structure-levels",
        Evidence::Exact,
        missing.is_none(),
        match missing {
            Some((k, i, j, _)) => format!("t_{i}{j}(s_{k}) not found in T^({t_level})"),
            None => format!("all t_ij(s) lie in T^({t_level})"),
        },
    ));

    let mut report = CertificateReport::assemble("bimodule", checks);
    report.unchecked.push("faithfulness of M as a left S-module".into());
    let predicted = (r * r) as u64;
    report.predicted_constant = Some(predicted);

    let s_table = table(s, window.hi(), workers)?;
    let scaled_t: Vec<usize> = (0..=window.hi()).map(|n| t_table.dims()[t_level.max(1) * n]).collect();
    let dom = dominance_check(s_table.dims(), &scaled_t, window, ("S", "T"))?;
    let within = matches!(dom.k_min, KMin::Constant(k) if k <= predicted);
    report.push(Check::new(
        "predicted-bound",
        Evidence::WindowOnly,
        within,
        format!("K_min {} against predicted r^2 = {predicted}", dom.k_min),
    ));
    report.dominance = Some(dom);
    Ok(report)
}

/// Certificate for adjoining `X` to `S` (in a field-valued or
/// polynomial ambient): `c x ∈ S^(level)`, `(c - d) x = 0`,
/// `d ∈ S^(level)`, `det c != 0` and `c` commuting with every generator
/// of `S`.
pub fn verify_sub_a<C: RingKind>(
    s: &AlgebraPresentation<C>,
    xs: &[Matrix<C>],
    c: &Matrix<C>,
    d_elem: &Matrix<C>,
    level: usize,
    window: Window,
    workers: usize,
) -> Result<CertificateReport> {
    let mut shapes: Vec<&Matrix<C>> = xs.iter().collect();
    shapes.push(c);
    shapes.push(d_elem);
    same_shape(s.size, &shapes)?;
    let s_table = table(s, level.max(window.hi()), workers)?;
    let mut checks = Vec::new();

    let bad_cx = xs.iter().position(|x| !s_table.contains_at_level(&c.mul(x), level));
    checks.push(Check::new(
        "c-x-in-S",
        Evidence::LevelBounded,
        bad_cx.is_none(),
        match bad_cx {
            Some(i) => format!("c x_{i} not found in S^({level})"),
            None => format!("c x in S^({level}) for all {} elements", xs.len()),
        },
    ));
    let diff = c.sub(d_elem);
    let bad_kill = xs.iter().position(|x| !diff.mul(x).is_zero());
    checks.push(Check::new(
        "c-minus-d-kills-x",
        Evidence::Exact,
        bad_kill.is_none(),
        match bad_kill {
            Some(i) => format!("(c - d) x_{i} != 0"),
            None => "(c - d) x = 0".to_string(),
        },
    ));
    let d_in = s_table.contains_at_level(d_elem, level);
    checks.push(Check::new(
        "d-in-S",
        Evidence::LevelBounded,
        d_in,
        if d_in {
            format!("d in S^({level})")
        } else {
            format!("d not found in S^({level})")
        },
    ));
    let regular = !det(c, &s.ring).is_zero_elem();
    checks.push(Check::new(
        "regularity",
        Evidence::Exact,
        regular,
        if regular { "det c is nonzero" } else { "det c = 0" },
    ));
    let bad_comm = s.generators.iter().position(|g| !c.commutes_with(g));
    checks.push(Check::new(
        "centrality",
        Evidence::Exact,
        bad_comm.is_none(),
        match bad_comm {
            Some(i) => format!("c does not commute with generator {i}"),
            None => "c commutes with every generator".to_string(),
        },
    ));

    let mut report = CertificateReport::assemble("sub-a", checks);
    let eq = extension_equivalence(s, xs, window, workers)?;
    report.window_check("dominance-window", &eq);
    report.equivalence = Some(eq);
    Ok(report)
}

/// Outcome of [`nilpotency_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nilpotency<C> {
    Vanishes,
    /// A nonzero element of `(X S^(level))^m`.
    Counterexample(Matrix<C>),
}

/// Checks `(X · S^(level))^m = 0` by spanning the successive products.
pub fn nilpotency_check<C: Coeff>(
    s_table: &GrowthTable<C>,
    xs: &[Matrix<C>],
    m: usize,
    level: usize,
) -> Result<Nilpotency<C>> {
    if m == 0 {
        return Err(Error::InvalidInput("nilpotency bound must be positive".into()));
    }
    let s_basis = s_table.level_elements(level);
    let reduce = |mats: Vec<Matrix<C>>| -> Result<Vec<Matrix<C>>> {
        let nonzero: Vec<Matrix<C>> = mats.into_iter().filter(|m| !m.is_zero()).collect();
        let keep = independent_subset(&nonzero)?;
        Ok(keep.into_iter().map(|i| nonzero[i].clone()).collect())
    };
    let first = reduce(xs.iter().flat_map(|x| s_basis.iter().map(move |u| x.mul(u))).collect())?;
    let mut current = first.clone();
    for _ in 1..m {
        if current.is_empty() {
            break;
        }
        current = reduce(current.iter().flat_map(|p| first.iter().map(move |q| p.mul(q))).collect())?;
    }
    Ok(match current.into_iter().next() {
        None => Nilpotency::Vanishes,
        Some(w) => Nilpotency::Counterexample(w),
    })
}

/// Certificate for adjoining `X` with `(X S)^m = 0`, checked with `S`
/// truncated at `level`.
pub fn verify_sub_b<C: RingKind>(
    s: &AlgebraPresentation<C>,
    xs: &[Matrix<C>],
    m: usize,
    level: usize,
    window: Window,
    workers: usize,
) -> Result<CertificateReport> {
    same_shape(s.size, &xs.iter().collect::<Vec<_>>())?;
    let s_table = table(s, level.max(window.hi()), workers)?;
    let nil = nilpotency_check(&s_table, xs, m, level)?;
    let check = match &nil {
        Nilpotency::Vanishes => Check::new(
            "nilpotency",
            Evidence::LevelBounded,
            true,
            format!("(X S^({level}))^{m} = 0"),
        ),
        Nilpotency::Counterexample(w) => Check::new(
            "nilpotency",
            Evidence::LevelBounded,
            false,
            format!("nonzero product {} in (X S^({level}))^{m}", w.format(&s.ring)),
        ),
    };
    let mut report = CertificateReport::assemble("sub-b", vec![check]);
    let eq = extension_equivalence(s, xs, window, workers)?;
    report.window_check("dominance-window", &eq);
    report.equivalence = Some(eq);
    Ok(report)
}

/// Limits for [`verify_sub_c`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubCCaps {
    /// Levels allowed for `k[X]` to stabilize.
    pub stabilization_levels: usize,
    /// Filtration level used for the nilpotency check.
    pub level: usize,
    /// Nilpotency bound for `(N T)^m`.
    pub m: usize,
    pub window: Window,
    pub workers: usize,
}

/// Certificate for adjoining `X` to `S = k[N, Sc]` when `k[X]` is finite
/// dimensional, every `s` in `Sc` commutes with every `x` in `X`, and
/// `(N T)^m = 0` for `T = S[X]`.
pub fn verify_sub_c<C: RingKind>(
    s: &AlgebraPresentation<C>,
    n_part: &[Matrix<C>],
    sc_part: &[Matrix<C>],
    xs: &[Matrix<C>],
    caps: &SubCCaps,
) -> Result<CertificateReport> {
    let all: Vec<&Matrix<C>> = n_part.iter().chain(sc_part).chain(xs).collect();
    same_shape(s.size, &all)?;
    let mut checks = Vec::new();

    let kx = AlgebraPresentation::new("k[X]", s.ring.clone(), s.size, xs.to_vec())?;
    let kx_table = table(&kx, caps.stabilization_levels, caps.workers)?;
    let finite = kx_table.stabilized_at().map(|_| *kx_table.dims().last().unwrap());
    checks.push(Check::new(
        "finite-dimension",
        Evidence::Exact,
        finite.is_some(),
        match finite {
            Some(dim) => format!("k[X] stabilizes at dimension {dim}"),
            None => format!("k[X] did not stabilize within {} levels", caps.stabilization_levels),
        },
    ));

    let bad = sc_part
        .iter()
        .enumerate()
        .find_map(|(i, a)| xs.iter().position(|x| !a.commutes_with(x)).map(|j| (i, j)));
    checks.push(Check::new(
        "commutation",
        Evidence::Exact,
        bad.is_none(),
        match bad {
            Some((i, j)) => format!("s_{i} x_{j} != x_{j} s_{i}"),
            None => "s x = x s for all s, x".to_string(),
        },
    ));

    let t = s.adjoin_generators(xs)?;
    let t_table = table(&t, caps.level, caps.workers)?;
    let nil = nilpotency_check(&t_table, n_part, caps.m, caps.level)?;
    checks.push(Check::new(
        "nilpotency",
        Evidence::LevelBounded,
        nil == Nilpotency::Vanishes,
        match &nil {
            Nilpotency::Vanishes => format!("(N T^({}))^{} = 0", caps.level, caps.m),
            Nilpotency::Counterexample(w) => format!("nonzero product {}", w.format(&s.ring)),
        },
    ));

    let mut report = CertificateReport::assemble("sub-c", checks);
    report.finite_dimension = finite;
    let eq = extension_equivalence(s, xs, caps.window, caps.workers)?;
    report.window_check("dominance-window", &eq);
    report.equivalence = Some(eq);
    Ok(report)
}
