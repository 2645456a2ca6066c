//! Growth filtration `S^(0) ⊆ S^(1) ⊆ ...` of a presented algebra, where
//! `S^(n)` is the Q-span of all products of at most `n` generators and
//! `S^(0)` is spanned by the identity.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Coeff;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::presentation::AlgebraPresentation;
use crate::span::{BasisKey, EchelonBasis, VecRep};

pub const DEFAULT_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthOptions {
    pub max_n: usize,
    /// Largest admissible dimension of a filtration level.
    pub cap: usize,
    /// Threads used for candidate products; results do not depend on it.
    pub workers: usize,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            max_n: 10,
            cap: DEFAULT_CAP,
            workers: 1,
        }
    }
}

impl GrowthOptions {
    pub fn up_to(max_n: usize) -> Self {
        GrowthOptions {
            max_n,
            ..Self::default()
        }
    }
}

/// Runs `f` over `items`, on a dedicated pool when `workers > 1`. Output
/// order always matches input order.
pub(crate) fn par_map<T: Sync, U: Send>(workers: usize, items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    if workers <= 1 || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

/// Dimensions of the filtration levels plus enough state to answer
/// membership queries per level.
#[derive(Debug, Clone)]
pub struct GrowthTable<C: Coeff> {
    dims: Vec<usize>,
    stabilized_at: Option<usize>,
    size: usize,
    ring: C::Ring,
    clearing: C::Clearing,
    /// Echelon rows whose pivots first appear at each level.
    new_at_level: Vec<Vec<VecRep>>,
}

/// Outcome of [`GrowthTable::element_membership_at_level`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LevelMembership {
    /// Member of `S^(j)` for this minimal `j`.
    Yes(usize),
    No,
}

impl<C: Coeff> GrowthTable<C> {
    /// `dims[n] = dim_Q S^(n)` for `n = 0..=max_n`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn max_n(&self) -> usize {
        self.dims.len() - 1
    }

    /// First level with `S^(n) = S^(n-1)`, if reached.
    pub fn stabilized_at(&self) -> Option<usize> {
        self.stabilized_at
    }

    pub fn clearing(&self) -> &C::Clearing {
        &self.clearing
    }

    /// Echelon basis of `S^(level)` in this table's coordinates.
    pub fn basis_at_level(&self, level: usize) -> EchelonBasis {
        let mut basis = EchelonBasis::new();
        for vecs in self.new_at_level.iter().take(level + 1) {
            for v in vecs {
                basis.insert(v);
            }
        }
        basis
    }

    /// A Q-basis of `S^(level)` as matrices, lower levels first.
    pub fn level_elements(&self, level: usize) -> Vec<Matrix<C>> {
        self.new_at_level
            .iter()
            .take(level + 1)
            .flatten()
            .map(|v| Matrix::from_vec(v, &self.clearing, self.size, &self.ring))
            .collect()
    }

    /// Basis of `S^(level)` modulo `S^(level-1)`.
    pub fn new_elements(&self, level: usize) -> Vec<Matrix<C>> {
        self.new_at_level
            .get(level)
            .into_iter()
            .flatten()
            .map(|v| Matrix::from_vec(v, &self.clearing, self.size, &self.ring))
            .collect()
    }

    /// Coordinates of `m`, or `None` if it cannot lie in any level.
    pub fn coordinates(&self, m: &Matrix<C>) -> Option<VecRep> {
        if m.size() != self.size {
            return None;
        }
        m.vectorize(&self.clearing)
    }

    /// Smallest level of the table containing `m`.
    pub fn element_membership_at_level(&self, m: &Matrix<C>) -> LevelMembership {
        let Some(v) = self.coordinates(m) else {
            return LevelMembership::No;
        };
        let mut basis = EchelonBasis::new();
        for (level, vecs) in self.new_at_level.iter().enumerate() {
            for w in vecs {
                basis.insert(w);
            }
            if basis.contains(&v) {
                return LevelMembership::Yes(level);
            }
        }
        LevelMembership::No
    }

    /// Whether `m` lies in `S^(level)`.
    pub fn contains_at_level(&self, m: &Matrix<C>, level: usize) -> bool {
        matches!(self.element_membership_at_level(m), LevelMembership::Yes(j) if j <= level)
    }
}

/// Smallest `j <= level` with `m` in `S^(j)`, or `No`.
pub fn element_membership_at_level<C: Coeff>(
    pres: &AlgebraPresentation<C>,
    m: &Matrix<C>,
    level: usize,
) -> Result<LevelMembership> {
    let table = growth_sequence(pres, &GrowthOptions::up_to(level))?;
    Ok(table.element_membership_at_level(m))
}

/// Computes `dim S^(n)` for `n = 0..=opts.max_n`.
///
/// Level `n` is obtained from level `n-1` by multiplying the generators
/// into a complement of `S^(n-2)` in `S^(n-1)`; the complement is read off
/// the reduced echelon basis (rows with new pivots), so it is canonical. If
/// a level adds nothing the filtration has stabilized and the remaining
/// entries repeat the last dimension.
pub fn growth_sequence<C: Coeff>(pres: &AlgebraPresentation<C>, opts: &GrowthOptions) -> Result<GrowthTable<C>> {
    let ring = &pres.ring;
    let n = pres.size;
    let clearing = C::clearing(pres.generators.iter().flat_map(|g| g.entries()), opts.max_n as u32);
    let vectorize = |m: &Matrix<C>| {
        m.vectorize(&clearing)
            .ok_or_else(|| Error::internal("filtration element escaped the clearing denominator"))
    };

    let mut basis = EchelonBasis::new();
    let id = vectorize(&pres.identity())?;
    basis.insert(&id);
    let mut dims = vec![1];
    let mut new_at_level = vec![vec![id]];
    let mut frontier: Vec<Matrix<C>> = vec![pres.identity()];
    let mut stabilized_at = None;

    for level in 1..=opts.max_n {
        if stabilized_at.is_some() {
            dims.push(*dims.last().unwrap());
            new_at_level.push(Vec::new());
            continue;
        }
        let pairs: Vec<(&Matrix<C>, &Matrix<C>)> = pres
            .generators
            .iter()
            .flat_map(|g| frontier.iter().map(move |b| (g, b)))
            .collect();
        let snapshot = &basis;
        let reduced: Vec<Result<VecRep>> = par_map(opts.workers, &pairs, |(g, b)| {
            let v = vectorize(&g.mul(b))?;
            Ok(snapshot.reduce(&v))
        });

        let mut reduced: Vec<VecRep> = reduced
            .into_iter()
            .filter(|r| !matches!(r, Ok(v) if v.is_zero()))
            .collect::<Result<_>>()?;
        reduced.sort_by(|a, b| a.leading_key().cmp(&b.leading_key()));

        let old_pivots: BTreeSet<BasisKey> = basis.pivots().cloned().collect();
        for r in reduced {
            basis.insert(&r);
            if basis.dim() > opts.cap {
                return Err(Error::cap(format!("dimension of filtration level {level}"), opts.cap));
            }
        }
        dims.push(basis.dim());
        let added: Vec<VecRep> = basis
            .rows()
            .filter(|row| !old_pivots.contains(row.leading_key().unwrap()))
            .cloned()
            .collect();
        if added.is_empty() {
            stabilized_at = Some(level);
        }
        frontier = added.iter().map(|row| Matrix::from_vec(row, &clearing, n, ring)).collect();
        new_at_level.push(added);
    }

    Ok(GrowthTable {
        dims,
        stabilized_at,
        size: n,
        ring: ring.clone(),
        clearing,
        new_at_level,
    })
}
