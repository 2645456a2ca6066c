//! Replaces a matrix algebra `R` over Q or Q(x) by growth-equivalent
//! algebras `R ⊆ R1 ⊆ R2 ⊇ R3` inside `A = KR` and extracts a commutative
//! algebra `D` of the same growth from the block centers of `R3`.
//!
//! Every stage records its generators, its growth table and the evidence
//! linking it to the previous stage. Equivalences between consecutive
//! stages are only observed on a finite window; the arithmetic facts the
//! construction rests on (decomposition identities, centrality, word
//! enumeration) are checked exactly.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::analysis::{equivalence_check, gk_estimate, EquivalenceReport, GkEstimate, GkMethod, Window};
use crate::arith::{Coeff, Field};
use crate::certificates::{verify_sub_b, verify_sub_c, CertificateReport, Check, Evidence, SubCCaps};
use crate::closure::{char_poly, dedup_by_q_span, enumerate_products, signed_coefficient, DEFAULT_WORD_CAP};
use crate::error::{Error, Result};
use crate::fdalg::{close_to_fdalg, decompose_element, wedderburn_complement, FiniteDimAlgebra, WedderburnData};
use crate::growth::{growth_sequence, par_map, GrowthOptions, GrowthTable, DEFAULT_CAP};
use crate::matrix::Matrix;
use crate::presentation::{AlgebraPresentation, RingKind};
use crate::span::{independent_subset, q_relations, span_membership, SpanMembership};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PipelineConfig {
    pub max_n: usize,
    pub window: Window,
    /// Word length for block trace generators, capped by the square of the
    /// block degree; defaults to the square of the matrix size.
    pub word_len: Option<usize>,
    /// Filtration level searched for central elements.
    pub z_level: usize,
    /// Filtration level searched for module generators.
    pub g_level: usize,
    /// Level used by the level-bounded certificate checks.
    pub check_level: usize,
    pub seed: u64,
    /// Not serialized: reports do not depend on it.
    #[serde(skip)]
    pub workers: usize,
    pub cap: usize,
    pub word_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            max_n: 12,
            window: Window(4, 12),
            word_len: None,
            z_level: 4,
            g_level: 2,
            check_level: 4,
            seed: 0,
            workers: 1,
            cap: DEFAULT_CAP,
            word_cap: DEFAULT_WORD_CAP,
        }
    }
}

impl PipelineConfig {
    fn validate(&self) -> Result<()> {
        if self.window.is_empty() || self.window.hi() > self.max_n {
            return Err(Error::InvalidInput(format!(
                "window {} must be nonempty and end at most at {}",
                self.window, self.max_n
            )));
        }
        if self.z_level == 0 || self.g_level == 0 || self.check_level == 0 {
            return Err(Error::InvalidInput("pipeline levels must be positive".into()));
        }
        Ok(())
    }

    fn growth(&self, max_n: usize) -> GrowthOptions {
        GrowthOptions {
            max_n,
            cap: self.cap,
            workers: self.workers,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum StageId {
    R,
    R1,
    R2,
    R3,
    D,
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn tag(stage: StageId, e: Error) -> Error {
    let p = |s: String| format!("stage {stage}: {s}");
    match e {
        Error::InvalidInput(s) => Error::InvalidInput(p(s)),
        Error::InsufficientData(s) => Error::InsufficientData(p(s)),
        Error::NotSplitOverBase(s) => Error::NotSplitOverBase(p(s)),
        Error::Internal(s) => Error::Internal(p(s)),
        Error::ShapeMismatch(s) => Error::ShapeMismatch(p(s)),
        Error::RingMismatch(s) => Error::RingMismatch(p(s)),
        Error::CapExceeded { what, limit } => Error::CapExceeded { what: p(what), limit },
        other => other,
    }
}

/// A presentation produced by the pipeline, with its generators grouped
/// into named families.
#[derive(Debug, Clone)]
pub struct PipelineStage<F: Coeff> {
    pub id: StageId,
    pub presentation: AlgebraPresentation<F>,
    pub families: Vec<(String, Vec<Matrix<F>>)>,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySummary {
    pub name: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageSummary {
    pub stage: StageId,
    pub generators: Vec<String>,
    pub families: Vec<FamilySummary>,
    pub dims: Vec<usize>,
}

impl<F: RingKind> PipelineStage<F> {
    fn new(id: StageId, presentation: AlgebraPresentation<F>, families: Vec<(String, Vec<Matrix<F>>)>, cfg: &PipelineConfig) -> Result<Self> {
        let dims = growth_sequence(&presentation, &cfg.growth(cfg.max_n))?.dims().to_vec();
        Ok(PipelineStage {
            id,
            presentation,
            families,
            dims,
        })
    }

    pub fn summary(&self) -> StageSummary {
        let ring = &self.presentation.ring;
        StageSummary {
            stage: self.id,
            generators: self.presentation.generator_text(),
            families: self
                .families
                .iter()
                .map(|(name, ms)| FamilySummary {
                    name: name.clone(),
                    elements: ms.iter().map(|m| m.format(ring)).collect(),
                })
                .collect(),
            dims: self.dims.clone(),
        }
    }
}

/// Evidence attached to one stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepEvidence {
    pub stage: StageId,
    pub checks: Vec<Check>,
    pub certificates: Vec<CertificateReport>,
    /// Previous stage against this one.
    pub equivalence: EquivalenceReport,
    pub notes: Vec<String>,
}

impl StepEvidence {
    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn presentation<F: RingKind>(label: &str, like: &AlgebraPresentation<F>, gens: Vec<Matrix<F>>) -> Result<AlgebraPresentation<F>> {
    Ok(AlgebraPresentation::new(label, like.ring.clone(), like.size, gens)?.canonicalized())
}

fn nonzero_sorted<F: Coeff>(mats: impl IntoIterator<Item = Matrix<F>>) -> Vec<Matrix<F>> {
    let mut v: Vec<Matrix<F>> = mats.into_iter().filter(|m| !m.is_zero()).collect();
    v.sort();
    v.dedup();
    v
}

/// A Q-independent subfamily of the nonzero matrices, in the given order.
fn q_basis<F: Coeff>(mats: Vec<Matrix<F>>) -> Result<Vec<Matrix<F>>> {
    let nonzero: Vec<Matrix<F>> = mats.into_iter().filter(|m| !m.is_zero()).collect();
    Ok(independent_subset(&nonzero)?.into_iter().map(|i| nonzero[i].clone()).collect())
}

fn window_equivalence(prev: &[usize], next: &[usize], w: Window, labels: (&str, &str)) -> Result<EquivalenceReport> {
    equivalence_check(prev, next, w, labels)
}

/// The scalar `z` with `x = z e`, for an idempotent `e`.
fn scalar_on<F: Field>(e: &Matrix<F>, x: &Matrix<F>) -> Result<F> {
    let n = e.size();
    let (i, j) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !e.get(i, j).is_zero_elem())
        .ok_or_else(|| Error::internal("zero idempotent"))?;
    let z = x.get(i, j).div(e.get(i, j)).expect("nonzero entry");
    if e.scale_by(&z) != *x {
        return Err(Error::internal("central element does not act as a scalar on a block"));
    }
    Ok(z)
}

// ---------------------------------------------------------------------------
// Step 1

pub struct Stage1<F: Field> {
    pub stage: PipelineStage<F>,
    pub algebra: FiniteDimAlgebra<F>,
    pub wedderburn: WedderburnData<F>,
    /// Complement parts of the generators.
    pub rbar: Vec<Matrix<F>>,
    /// Radical parts of the generators.
    pub nil: Vec<Matrix<F>>,
    pub idempotents: Vec<Matrix<F>>,
    pub evidence: StepEvidence,
}

/// `R1 = R[N, E]`: radical parts of the generators and the central
/// primitive idempotents of a split complement of `rad A`.
pub fn step1_build_r1<F: Field + RingKind>(r: &PipelineStage<F>, cfg: &PipelineConfig) -> Result<Stage1<F>> {
    let pres = &r.presentation;
    let d = pres.size;
    let algebra = close_to_fdalg(pres, d * d + 1)?;
    let wedderburn = wedderburn_complement(&algebra, cfg.seed)?;
    let degree = wedderburn.nilpotence_degree;

    let mut bars = Vec::new();
    let mut rads = Vec::new();
    for g in &pres.generators {
        let (b, n) = decompose_element(&algebra, &wedderburn, g)?;
        bars.push(b);
        rads.push(n);
    }
    let mut checks = vec![Check::new(
        "decomposition",
        Evidence::Exact,
        bars.iter().zip(&rads).zip(&pres.generators).all(|((b, n), g)| b.add(n) == *g),
        format!("r = rbar + r_rad for all {} generators", pres.generators.len()),
    )];
    let rbar = nonzero_sorted(bars);
    let nil = nonzero_sorted(rads);
    let idempotents = wedderburn.idempotents.clone();
    let central = idempotents.iter().all(|e| rbar.iter().all(|b| e.commutes_with(b)));
    checks.push(Check::new(
        "idempotents-central",
        Evidence::Exact,
        central,
        format!("{} idempotents commute with the complement parts", idempotents.len()),
    ));

    let mut gens = pres.generators.clone();
    gens.extend(nil.iter().cloned());
    gens.extend(idempotents.iter().cloned());
    let r1 = presentation("R1", pres, gens)?;

    let mut certificates = Vec::new();
    let mut notes = vec![format!(
        "dim_K A = {}, dim rad A = {}, nilpotence degree {}",
        algebra.dim(),
        wedderburn.radical.len(),
        degree
    )];
    if nil.is_empty() {
        notes.push("all generators lie in the complement; R' = R".into());
    } else {
        certificates.push(verify_sub_b(pres, &nil, degree, cfg.check_level, cfg.window, cfg.workers)?);
    }
    let mut prime_gens = rbar.clone();
    prime_gens.extend(nil.iter().cloned());
    let r_prime = presentation("R'", pres, prime_gens)?;
    let caps = SubCCaps {
        stabilization_levels: d * d + 1,
        level: cfg.check_level,
        m: degree,
        window: cfg.window,
        workers: cfg.workers,
    };
    certificates.push(verify_sub_c(&r_prime, &nil, &rbar, &idempotents, &caps)?);

    let stage = PipelineStage::new(
        StageId::R1,
        r1,
        vec![
            ("R".into(), pres.generators.clone()),
            ("Rbar".into(), rbar.clone()),
            ("N".into(), nil.clone()),
            ("E".into(), idempotents.clone()),
        ],
        cfg,
    )?;
    let equivalence = window_equivalence(&r.dims, &stage.dims, cfg.window, ("R", "R1"))?;
    Ok(Stage1 {
        evidence: StepEvidence {
            stage: StageId::R1,
            checks,
            certificates,
            equivalence,
            notes,
        },
        stage,
        algebra,
        wedderburn,
        rbar,
        nil,
        idempotents,
    })
}

// ---------------------------------------------------------------------------
// Step 2

pub struct Stage2<F: Field> {
    pub stage: PipelineStage<F>,
    /// Central elements `t e` with `t` a block trace coefficient.
    pub t_generators: Vec<Matrix<F>>,
    pub evidence: StepEvidence,
}

/// `R2 = R1[T]` with `T` spanned by the nonconstant characteristic
/// polynomial coefficients of words in `e Rbar`, computed inside each
/// simple block.
pub fn step2_adjoin_trace<F: Field + RingKind>(s1: &Stage1<F>, cfg: &PipelineConfig) -> Result<Stage2<F>> {
    let pres = &s1.stage.presentation;
    let ring = &pres.ring;
    let d = pres.size;
    let mut t_generators = Vec::new();
    let mut notes = Vec::new();
    for block in &s1.wedderburn.blocks {
        let e = &block.idempotent;
        let n = block.degree();
        let gens_e = nonzero_sorted(s1.rbar.iter().map(|r| e.mul(r)));
        if gens_e.is_empty() {
            continue;
        }
        let len = cfg.word_len.unwrap_or(d * d).min(n * n).max(1);
        let words = enumerate_products(&gens_e, len, cfg.word_cap)?;
        let polys = par_map(cfg.workers, &words, |(_, w)| block.block_matrix(w, ring).map(|m| char_poly(&m, ring)));
        let mut cands = Vec::new();
        for c in polys {
            let c = c.ok_or_else(|| Error::internal("word left its block"))?;
            for k in 1..=n {
                let s = signed_coefficient(&c, k);
                if s.as_rational().is_none() {
                    cands.push(s);
                }
            }
        }
        let ts = dedup_by_q_span(&cands, ring);
        notes.push(format!(
            "block of degree {n}: {} words up to length {len}, {} trace generators",
            words.len(),
            ts.len()
        ));
        t_generators.extend(ts.iter().map(|t| e.scale_by(t)));
    }
    let t_generators = nonzero_sorted(t_generators);
    let central = t_generators
        .iter()
        .all(|t| s1.rbar.iter().chain(&s1.idempotents).all(|b| t.commutes_with(b)));
    let checks = vec![Check::new(
        "trace-central",
        Evidence::Exact,
        central,
        format!("{} trace generators commute with Rbar and E", t_generators.len()),
    )];

    let stage = if t_generators.is_empty() {
        notes.push("all block traces are rational; R2 = R1".into());
        PipelineStage {
            id: StageId::R2,
            presentation: AlgebraPresentation {
                label: "R2".into(),
                ..pres.clone()
            },
            families: s1.stage.families.clone(),
            dims: s1.stage.dims.clone(),
        }
    } else {
        notes.push("growth constants of the trace adjunction are not instantiated; window evidence only".into());
        let mut gens = pres.generators.clone();
        gens.extend(t_generators.iter().cloned());
        let mut families = s1.stage.families.clone();
        families.push(("T".into(), t_generators.clone()));
        PipelineStage::new(StageId::R2, presentation("R2", pres, gens)?, families, cfg)?
    };
    let equivalence = window_equivalence(&s1.stage.dims, &stage.dims, cfg.window, ("R1", "R2"))?;
    Ok(Stage2 {
        stage,
        t_generators,
        evidence: StepEvidence {
            stage: StageId::R2,
            checks,
            certificates: Vec::new(),
            equivalence,
            notes,
        },
    })
}

// ---------------------------------------------------------------------------
// Step 3

pub struct Stage3<F: Field> {
    pub stage: PipelineStage<F>,
    /// Algebra generators of the center found at the search level.
    pub center: Vec<Matrix<F>>,
    /// `families[i]`: scalars by which the center generators act on the
    /// block of the `i`-th idempotent.
    pub families: Vec<Vec<F>>,
    /// Module generators of `Rbar` over its center.
    pub module_generators: Vec<Matrix<F>>,
    /// Radical generators of `R3`.
    pub nil: Vec<Matrix<F>>,
    pub evidence: StepEvidence,
}

/// Central elements of `S^(level)`: a Q-basis of the elements commuting with
/// every generator.
fn center_at_level<F: Coeff>(gens: &[Matrix<F>], level_basis: &[Matrix<F>], ring: &F::Ring) -> Result<Vec<Matrix<F>>> {
    if level_basis.is_empty() {
        return Ok(Vec::new());
    }
    let d = level_basis[0].size();
    let k = gens.len().max(1);
    let stacked: Vec<Matrix<F>> = level_basis
        .iter()
        .map(|b| {
            gens.iter().enumerate().fold(Matrix::zero(d * k, ring), |acc, (j, g)| {
                acc.add(&b.mul(g).sub(&g.mul(b)).embed(d * k, j * d, ring))
            })
        })
        .collect();
    let rels = q_relations(&stacked)?;
    let zs = rels
        .iter()
        .map(|lam| {
            level_basis
                .iter()
                .zip(lam)
                .fold(Matrix::zero(d, ring), |acc, (b, l)| acc.add(&b.scale(l)))
        })
        .collect();
    q_basis(zs)
}

fn in_q_span<F: Coeff>(basis: &[Matrix<F>], m: &Matrix<F>) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    if basis.is_empty() {
        return Ok(false);
    }
    Ok(matches!(span_membership(basis, m)?, SpanMembership::InSpan(_)))
}

/// `R3 = k[Z, N G, G N]` with `Z` central in `Rbar` and `G` generating
/// `Rbar` as a `Z`-module.
pub fn step3_build_r3<F: Field + RingKind>(s1: &Stage1<F>, s2: &Stage2<F>, cfg: &PipelineConfig) -> Result<Stage3<F>> {
    let pres = &s2.stage.presentation;
    let ring = &pres.ring;
    let mut bar_gens = s1.rbar.clone();
    bar_gens.extend(s1.idempotents.iter().cloned());
    bar_gens.extend(s2.t_generators.iter().cloned());
    let rbar = presentation("Rbar", pres, bar_gens)?;
    let top = cfg.z_level.max(cfg.g_level);
    let table: GrowthTable<F> = growth_sequence(&rbar, &cfg.growth(top))?;
    let center_basis = center_at_level(&rbar.generators, &table.level_elements(cfg.z_level), ring)?;

    let mut center: Vec<Matrix<F>> = Vec::new();
    for z in &center_basis {
        let sub = AlgebraPresentation::new("Z", ring.clone(), pres.size, center.clone())?;
        let sub_table = growth_sequence(&sub, &cfg.growth(cfg.z_level))?;
        if !sub_table.contains_at_level(z, cfg.z_level) {
            center.push(z.clone());
        }
    }
    let families = s1
        .idempotents
        .iter()
        .map(|e| center.iter().map(|z| scalar_on(e, &z.mul(e))).collect::<Result<Vec<F>>>())
        .collect::<Result<Vec<_>>>()?;

    let span_zg = |gs: &[Matrix<F>]| q_basis(center_basis.iter().flat_map(|z| gs.iter().map(move |g| z.mul(g))).collect());
    let mut module_generators = vec![pres.identity()];
    let mut zg = span_zg(&module_generators)?;
    for b in table.level_elements(cfg.g_level) {
        if !in_q_span(&zg, &b)? {
            module_generators.push(b);
            zg = span_zg(&module_generators)?;
        }
    }
    let mut absorbed = true;
    for s in &rbar.generators {
        for g in &module_generators {
            absorbed &= in_q_span(&zg, &s.mul(g))?;
        }
    }
    let mut checks = vec![Check::new(
        "module-generators",
        Evidence::LevelBounded,
        absorbed,
        format!(
            "s G lies in span(Z^({}) G) for every generator s and {} module generators",
            cfg.z_level,
            module_generators.len()
        ),
    )];
    let mut notes = Vec::new();
    if !absorbed {
        notes.push("module generators not confirmed at this level; window evidence only".into());
    }

    let ng = nonzero_sorted(s1.nil.iter().flat_map(|n| module_generators.iter().map(move |g| n.mul(g))));
    let gn = nonzero_sorted(s1.nil.iter().flat_map(|n| module_generators.iter().map(move |g| g.mul(n))));
    let nil = q_basis(ng.iter().chain(&gn).cloned().collect())?;
    let ze = nonzero_sorted(center.iter().flat_map(|z| s1.idempotents.iter().map(move |e| z.mul(e))));
    let mut gens = s1.idempotents.clone();
    gens.extend(ze.iter().cloned());
    gens.extend(ng.iter().cloned());
    gens.extend(gn.iter().cloned());
    let r3 = presentation("R3", pres, gens)?;

    let r2_table = growth_sequence(pres, &cfg.growth(cfg.max_n))?;
    let outside: Vec<&Matrix<F>> = r3
        .generators
        .iter()
        .filter(|g| !r2_table.contains_at_level(g, cfg.max_n))
        .collect();
    checks.push(Check::new(
        "R3-in-R2",
        Evidence::LevelBounded,
        outside.is_empty(),
        match outside.first() {
            None => format!("every generator of R3 lies in R2^({})", cfg.max_n),
            Some(g) => format!("{} not found in R2^({})", g.format(ring), cfg.max_n),
        },
    ));
    let stage = PipelineStage::new(
        StageId::R3,
        r3,
        vec![
            ("E".into(), s1.idempotents.clone()),
            ("Z".into(), ze),
            ("NG".into(), ng),
            ("GN".into(), gn),
            ("G".into(), module_generators.clone()),
        ],
        cfg,
    )?;
    let equivalence = window_equivalence(&s2.stage.dims, &stage.dims, cfg.window, ("R2", "R3"))?;
    notes.push(format!(
        "center of dimension {1} at level {2}, generated by {0} of its elements",
        center.len(),
        center_basis.len(),
        cfg.z_level
    ));
    Ok(Stage3 {
        stage,
        center,
        families,
        module_generators,
        nil,
        evidence: StepEvidence {
            stage: StageId::R3,
            checks,
            certificates: Vec::new(),
            equivalence,
            notes,
        },
    })
}

// ---------------------------------------------------------------------------
// Words and D

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Letter {
    E(usize),
    N(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::E(i) => write!(f, "e{i}"),
            Letter::N(i) => write!(f, "n{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordMuStar<F: Coeff> {
    pub letters: Vec<Letter>,
    pub image: Matrix<F>,
    /// Indices of the idempotents occurring in the word, ascending.
    pub support: Vec<usize>,
}

impl<F: Coeff> WordMuStar<F> {
    pub fn text(&self) -> String {
        self.letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
    }

    fn n_count(&self) -> usize {
        self.letters.iter().filter(|l| matches!(l, Letter::N(_))).count()
    }
}

/// Nonempty words over `N ∪ E` with fewer than `degree` letters from `N`, no
/// two adjacent letters from `E` and nonzero image, in length-lexicographic
/// order.
pub fn enumerate_words<F: Coeff>(
    nil: &[Matrix<F>],
    idempotents: &[Matrix<F>],
    degree: usize,
    cap: usize,
) -> Result<Vec<WordMuStar<F>>> {
    let letter = |l: Letter| match l {
        Letter::E(i) => &idempotents[i],
        Letter::N(i) => &nil[i],
    };
    let alphabet: Vec<Letter> = (0..idempotents.len())
        .map(Letter::E)
        .chain((0..nil.len()).map(Letter::N))
        .collect();
    let mut out = Vec::new();
    let mut frontier: Vec<WordMuStar<F>> = Vec::new();
    for &l in &alphabet {
        let w = WordMuStar {
            letters: vec![l],
            image: letter(l).clone(),
            support: match l {
                Letter::E(i) => vec![i],
                Letter::N(_) => Vec::new(),
            },
        };
        if !w.image.is_zero() && w.n_count() < degree {
            frontier.push(w);
        }
    }
    while !frontier.is_empty() {
        out.extend(frontier.iter().cloned());
        if out.len() > cap {
            return Err(Error::cap("number of reduced words", cap));
        }
        let mut next = Vec::new();
        for w in &frontier {
            let last = *w.letters.last().unwrap();
            for &l in &alphabet {
                let (is_e, extra_n) = match l {
                    Letter::E(_) => (true, 0),
                    Letter::N(_) => (false, 1),
                };
                if (is_e && matches!(last, Letter::E(_))) || w.n_count() + extra_n >= degree {
                    continue;
                }
                let image = w.image.mul(letter(l));
                if image.is_zero() {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l);
                let mut support = w.support.clone();
                if let Letter::E(i) = l {
                    if !support.contains(&i) {
                        support.push(i);
                        support.sort();
                    }
                }
                next.push(WordMuStar { letters, image, support });
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Exact checks that the excluded words vanish: distinct idempotents are
/// orthogonal, and adding one more radical letter to a word with
/// `degree - 1` of them gives zero.
fn word_completeness<F: Coeff>(words: &[WordMuStar<F>], nil: &[Matrix<F>], idempotents: &[Matrix<F>], degree: usize) -> Check {
    let orth = idempotents.iter().enumerate().all(|(i, e)| {
        idempotents
            .iter()
            .enumerate()
            .all(|(j, f)| if i == j { e.mul(f) == *e } else { e.mul(f).is_zero() })
    });
    let saturated = words
        .iter()
        .filter(|w| w.n_count() + 1 == degree)
        .all(|w| nil.iter().all(|n| w.image.mul(n).is_zero() && n.mul(&w.image).is_zero()));
    Check::new(
        "word-enumeration",
        Evidence::Exact,
        orth && saturated,
        format!("{} words; orthogonality and saturation of radical letters", words.len()),
    )
}

/// One candidate `D_mu = k[Z_mu]`, shared by all words with the same
/// idempotent support.
#[derive(Debug, Clone)]
pub struct DCandidate<F: Coeff> {
    pub support: Vec<usize>,
    /// Indices into the word list.
    pub words: Vec<usize>,
    pub presentation: AlgebraPresentation<F>,
    pub dims: Vec<usize>,
    pub estimate: GkEstimate,
}

#[derive(Debug, Clone)]
pub struct Extraction<F: Coeff> {
    pub candidates: Vec<DCandidate<F>>,
    pub chosen: usize,
}

impl<F: Coeff> Extraction<F> {
    pub fn chosen(&self) -> &DCandidate<F> {
        &self.candidates[self.chosen]
    }
}

/// Builds `D_mu` for every word and picks one of maximal growth degree.
pub fn extract_d<F: Field + RingKind>(s3: &Stage3<F>, words: &[WordMuStar<F>], cfg: &PipelineConfig) -> Result<Extraction<F>> {
    if words.is_empty() {
        return Err(Error::InvalidInput("no words to build D from".into()));
    }
    let ring = &s3.stage.presentation.ring;
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let entry = groups.entry(w.support.clone()).or_default();
        if entry.is_empty() {
            order.push(w.support.clone());
        }
        entry.push(i);
    }
    let presentations = order
        .iter()
        .map(|support| {
            let scalars: Vec<F> = support.iter().flat_map(|&e| s3.families[e].iter().cloned()).collect();
            let gens = dedup_by_q_span(&scalars, ring)
                .into_iter()
                .map(|z| Matrix::scalar(1, z, ring))
                .collect();
            let label = format!(
                "D[{}]",
                support.iter().map(|e| format!("e{e}")).collect::<Vec<_>>().join(",")
            );
            AlgebraPresentation::new(label, ring.clone(), 1, gens)
        })
        .collect::<Result<Vec<_>>>()?;
    let tables = par_map(cfg.workers, &presentations, |p| {
        growth_sequence(p, &GrowthOptions { workers: 1, ..cfg.growth(cfg.max_n) })
    });
    let mut candidates = Vec::new();
    for ((support, pres), table) in order.into_iter().zip(presentations).zip(tables) {
        let dims = table?.dims().to_vec();
        let estimate = gk_estimate(&dims, None)?;
        candidates.push(DCandidate {
            words: groups[&support].clone(),
            support,
            presentation: pres,
            dims,
            estimate,
        });
    }
    let mut chosen = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.estimate.value > candidates[chosen].estimate.value {
            chosen = i;
        }
    }
    Ok(Extraction { candidates, chosen })
}

// ---------------------------------------------------------------------------
// Full run

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordSummary {
    pub word: String,
    pub support: Vec<String>,
    pub image: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSummary {
    pub label: String,
    pub words: Vec<String>,
    pub generators: Vec<String>,
    pub dims: Vec<usize>,
    pub estimate: GkEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub label: String,
    pub ring: String,
    pub matrix_size: usize,
    pub nilpotence_degree: usize,
    pub config: PipelineConfig,
    pub stages: Vec<StageSummary>,
    pub steps: Vec<StepEvidence>,
    pub words: Vec<WordSummary>,
    pub candidates: Vec<CandidateSummary>,
    pub chosen: usize,
    pub r_estimate: GkEstimate,
    pub d_estimate: GkEstimate,
    /// `R` against the chosen `D`.
    pub final_equivalence: EquivalenceReport,
    /// Both estimates are exact difference degrees and agree.
    pub integral: bool,
    pub verdict: String,
}

impl PipelineReport {
    /// Whether every recorded dominance window produced a finite constant.
    pub fn windows_finite(&self) -> bool {
        self.steps
            .iter()
            .map(|s| &s.equivalence)
            .chain(std::iter::once(&self.final_equivalence))
            .all(|e| e.forward.k_min.constant().is_some() && e.backward.k_min.constant().is_some())
    }

    /// Whether every exact check passed.
    pub fn exact_checks_pass(&self) -> bool {
        self.steps
            .iter()
            .flat_map(|s| &s.checks)
            .filter(|c| c.evidence == Evidence::Exact)
            .all(|c| c.passed)
    }
}

pub struct PipelineRun<F: Field> {
    pub input: PipelineStage<F>,
    pub stage1: Stage1<F>,
    pub stage2: Stage2<F>,
    pub stage3: Stage3<F>,
    pub words: Vec<WordMuStar<F>>,
    pub extraction: Extraction<F>,
    pub d_stage: PipelineStage<F>,
    pub report: PipelineReport,
}

pub fn run_pipeline<F: Field + RingKind>(r: &AlgebraPresentation<F>, cfg: &PipelineConfig) -> Result<PipelineRun<F>> {
    cfg.validate()?;
    let canonical = AlgebraPresentation {
        label: "R".into(),
        ..r.canonicalized()
    };
    let input = PipelineStage::new(StageId::R, canonical.clone(), vec![("R".into(), canonical.generators.clone())], cfg)
        .map_err(|e| tag(StageId::R, e))?;
    let stage1 = step1_build_r1(&input, cfg).map_err(|e| tag(StageId::R1, e))?;
    let stage2 = step2_adjoin_trace(&stage1, cfg).map_err(|e| tag(StageId::R2, e))?;
    let stage3 = step3_build_r3(&stage1, &stage2, cfg).map_err(|e| tag(StageId::R3, e))?;
    let degree = stage1.wedderburn.nilpotence_degree;

    let (words, extraction, d_stage, d_evidence) = (|| {
        let words = enumerate_words(&stage3.nil, &stage1.idempotents, degree, cfg.word_cap)?;
        let completeness = word_completeness(&words, &stage3.nil, &stage1.idempotents, degree);
        let extraction = extract_d(&stage3, &words, cfg)?;
        let chosen = extraction.chosen();
        let d_stage = PipelineStage {
            id: StageId::D,
            presentation: chosen.presentation.clone(),
            families: vec![("Z_mu".into(), chosen.presentation.generators.clone())],
            dims: chosen.dims.clone(),
        };
        let equivalence = window_equivalence(&stage3.stage.dims, &d_stage.dims, cfg.window, ("R3", "D"))?;
        let evidence = StepEvidence {
            stage: StageId::D,
            checks: vec![completeness],
            certificates: Vec::new(),
            equivalence,
            notes: vec![format!(
                "{} words, {} distinct candidates; the empty word is excluded",
                words.len(),
                extraction.candidates.len()
            )],
        };
        Ok::<_, Error>((words, extraction, d_stage, evidence))
    })()
    .map_err(|e| tag(StageId::D, e))?;

    let final_equivalence = window_equivalence(&input.dims, &d_stage.dims, cfg.window, ("R", "D"))?;
    let r_estimate = gk_estimate(&input.dims, None)?;
    let d_estimate = extraction.chosen().estimate.clone();
    let integral = r_estimate.method == GkMethod::DifferenceDegree
        && d_estimate.method == GkMethod::DifferenceDegree
        && r_estimate.value == d_estimate.value;
    let verdict = if integral {
        format!("integral: R and D both have difference degree {}", r_estimate.value_text())
    } else {
        format!(
            "not confirmed: R {} {}, D {} {}",
            r_estimate.method,
            r_estimate.value_text(),
            d_estimate.method,
            d_estimate.value_text()
        )
    };

    let ring = &canonical.ring;
    let report = PipelineReport {
        label: r.label.clone(),
        ring: canonical.coefficient_ring().describe(),
        matrix_size: canonical.size,
        nilpotence_degree: degree,
        config: *cfg,
        stages: [&input, &stage1.stage, &stage2.stage, &stage3.stage, &d_stage]
            .iter()
            .map(|s| s.summary())
            .collect(),
        steps: vec![
            stage1.evidence.clone(),
            stage2.evidence.clone(),
            stage3.evidence.clone(),
            d_evidence,
        ],
        words: words
            .iter()
            .map(|w| WordSummary {
                word: w.text(),
                support: w.support.iter().map(|e| format!("e{e}")).collect(),
                image: w.image.format(ring),
            })
            .collect(),
        candidates: extraction
            .candidates
            .iter()
            .map(|c| CandidateSummary {
                label: c.presentation.label.clone(),
                words: c.words.iter().map(|&i| words[i].text()).collect(),
                generators: c.presentation.generator_text(),
                dims: c.dims.clone(),
                estimate: c.estimate.clone(),
            })
            .collect(),
        chosen: extraction.chosen,
        r_estimate,
        d_estimate,
        final_equivalence,
        integral,
        verdict,
    };
    Ok(PipelineRun {
        input,
        stage1,
        stage2,
        stage3,
        words,
        extraction,
        d_stage,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, RatFunc, RatFuncField, Rational};
    use crate::matrix::rational_matrix;

    fn ratfunc_pres(gens: Vec<Vec<Vec<RatFunc>>>) -> AlgebraPresentation<RatFunc> {
        let f = RatFuncField::default();
        let d = gens[0].len();
        let mats = gens.into_iter().map(|rows| Matrix::from_rows(rows).unwrap()).collect();
        AlgebraPresentation::new("test", f, d, mats).unwrap()
    }

    fn x() -> RatFunc {
        RatFunc::x()
    }

    fn c(k: i64) -> RatFunc {
        RatFunc::from_rational(&int(k), &RatFuncField::default())
    }

    #[test]
    fn words_for_small_alphabets() {
        let e1 = rational_matrix(&[&[1, 0], &[0, 0]]);
        let e2 = rational_matrix(&[&[0, 0], &[0, 1]]);
        let w = enumerate_words::<Rational>(&[], &[e1.clone(), e2.clone()], 1, 100).unwrap();
        let texts: Vec<String> = w.iter().map(|w| w.text()).collect();
        assert_eq!(texts, vec!["e0", "e1"]);

        let id = rational_matrix(&[&[1, 0], &[0, 1]]);
        let n = rational_matrix(&[&[0, 1], &[0, 0]]);
        let w = enumerate_words(&[n.clone()], &[id], 2, 100).unwrap();
        let texts: Vec<String> = w.iter().map(|w| w.text()).collect();
        assert_eq!(texts, vec!["e0", "n0", "e0 n0", "n0 e0", "e0 n0 e0"]);

        let w = enumerate_words(&[n], &[e1, e2], 2, 100).unwrap();
        let texts: Vec<String> = w.iter().map(|w| w.text()).collect();
        assert_eq!(texts, vec!["e0", "e1", "n0", "e0 n0", "n0 e1", "e0 n0 e1"]);
    }

    #[test]
    fn rational_input_gives_constant_d() {
        let f = ();
        let gens = vec![rational_matrix(&[&[1, 0], &[0, 2]]), rational_matrix(&[&[0, 1], &[0, 0]])];
        let p = AlgebraPresentation::new("ut", f, 2, gens).unwrap();
        let run = run_pipeline(&p, &PipelineConfig::default()).unwrap();
        assert_eq!(run.stage1.idempotents.len(), 2);
        assert_eq!(run.stage1.nil, vec![rational_matrix(&[&[0, 1], &[0, 0]])]);
        assert!(run.stage2.t_generators.is_empty());
        assert_eq!(run.stage2.stage.presentation.generators, run.stage1.stage.presentation.generators);
        assert_eq!(run.report.d_estimate.integer_value(), Some(0));
        assert_eq!(run.report.r_estimate.integer_value(), Some(0));
        assert!(run.report.integral);
        assert!(run.report.windows_finite());
        assert!(run.report.exact_checks_pass());
    }

    #[test]
    fn scalar_and_nilpotent_over_rational_functions() {
        let p = ratfunc_pres(vec![
            vec![vec![x(), c(0)], vec![c(0), x()]],
            vec![vec![c(0), c(1)], vec![c(0), c(0)]],
        ]);
        let run = run_pipeline(&p, &PipelineConfig::default()).unwrap();
        assert_eq!(run.stage1.idempotents, vec![Matrix::identity(2, &RatFuncField::default())]);
        assert_eq!(run.report.r_estimate.integer_value(), Some(1));
        assert_eq!(run.report.d_estimate.integer_value(), Some(1));
        assert!(run.report.integral);
        assert!(run.report.windows_finite());
    }

    #[test]
    fn upper_triangular_over_rational_functions() {
        for gens in [
            vec![
                vec![vec![x(), c(0)], vec![c(0), c(1)]],
                vec![vec![c(0), c(1)], vec![c(0), c(0)]],
            ],
            vec![
                vec![vec![x(), c(0)], vec![c(0), c(0)]],
                vec![vec![c(0), c(1)], vec![c(0), c(0)]],
            ],
        ] {
            let run = run_pipeline(&ratfunc_pres(gens), &PipelineConfig::default()).unwrap();
            assert_eq!(run.stage1.idempotents.len(), 2);
            assert!(!run.stage2.t_generators.is_empty());
            assert_eq!(run.report.d_estimate.integer_value(), Some(1));
            assert!(run.report.integral, "{}", run.report.verdict);
            assert!(run.report.windows_finite());
            assert!(run.report.exact_checks_pass());
        }
    }

    #[test]
    fn commutative_polynomial_input() {
        let p = ratfunc_pres(vec![vec![vec![x()]]]);
        let run = run_pipeline(&p, &PipelineConfig::default()).unwrap();
        assert_eq!(run.report.r_estimate.integer_value(), Some(1));
        assert_eq!(run.report.d_estimate.integer_value(), Some(1));
        assert_eq!(run.d_stage.dims, run.input.dims);
    }

    #[test]
    fn generator_order_does_not_matter() {
        let g1 = vec![vec![x(), c(0)], vec![c(0), c(1)]];
        let g2 = vec![vec![c(0), c(1)], vec![c(0), c(0)]];
        let a = run_pipeline(&ratfunc_pres(vec![g1.clone(), g2.clone()]), &PipelineConfig::default()).unwrap();
        let b = run_pipeline(&ratfunc_pres(vec![g2, g1]), &PipelineConfig { workers: 3, ..Default::default() }).unwrap();
        let strip = |mut r: PipelineReport| {
            r.config.workers = 0;
            r
        };
        assert_eq!(strip(a.report), strip(b.report));
    }
}
