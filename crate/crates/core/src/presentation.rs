//! Algebras given by finitely many matrix generators.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::{Coeff, Poly, PolyRing, RatFunc, RatFuncField, Rational};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Descriptor of the coefficient ring of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientRing {
    /// `Q[x1..xm]` with the given variable names.
    PolyRing(Arc<PolyRing>),
    /// `Q(x)` in one variable.
    RatFuncField(RatFuncField),
    Rationals,
}

impl CoefficientRing {
    pub fn describe(&self) -> String {
        match self {
            CoefficientRing::PolyRing(r) => format!("Q[{}]", r.names().join(",")),
            CoefficientRing::RatFuncField(f) => format!("Q({})", f.var),
            CoefficientRing::Rationals => "Q".into(),
        }
    }
}

/// Coefficient types that know their ring descriptor.
pub trait RingKind: Coeff {
    fn descriptor(ring: &Self::Ring) -> CoefficientRing;
}

impl RingKind for Rational {
    fn descriptor(_: &()) -> CoefficientRing {
        CoefficientRing::Rationals
    }
}

impl RingKind for Poly {
    fn descriptor(ring: &Arc<PolyRing>) -> CoefficientRing {
        CoefficientRing::PolyRing(ring.clone())
    }
}

impl RingKind for RatFunc {
    fn descriptor(ring: &RatFuncField) -> CoefficientRing {
        CoefficientRing::RatFuncField(ring.clone())
    }
}

/// `size x size` matrix generators over a coefficient ring. The algebra is
/// the unital Q-algebra they generate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation<C: Coeff> {
    pub label: String,
    pub ring: C::Ring,
    pub size: usize,
    pub generators: Vec<Matrix<C>>,
}

impl<C: RingKind> AlgebraPresentation<C> {
    pub fn new(label: impl Into<String>, ring: C::Ring, size: usize, generators: Vec<Matrix<C>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidInput("matrix size must be positive".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.size() != size {
                return Err(Error::ShapeMismatch(format!(
                    "generator {} is {}x{}, expected {}x{}",
                    i,
                    g.size(),
                    g.size(),
                    size,
                    size
                )));
            }
            if !g.in_ring(&ring) {
                return Err(Error::RingMismatch(format!(
                    "generator {} has entries outside {}",
                    i,
                    C::descriptor(&ring).describe()
                )));
            }
        }
        Ok(AlgebraPresentation {
            label: label.into(),
            ring,
            size,
            generators,
        })
    }

    pub fn coefficient_ring(&self) -> CoefficientRing {
        C::descriptor(&self.ring)
    }

    /// Presentation with `extra` appended to the generators.
    pub fn adjoin_generators(&self, extra: &[Matrix<C>]) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Self::new(self.label.clone(), self.ring.clone(), self.size, gens)
    }

    /// Generators rendered as text, for reports.
    pub fn generator_text(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.format(&self.ring)).collect()
    }
}

impl<C: Coeff> AlgebraPresentation<C> {
    /// Same algebra with generators sorted and deduplicated, so results do
    /// not depend on the order they were listed in.
    pub fn canonicalized(&self) -> Self {
        let mut gens = self.generators.clone();
        gens.sort();
        gens.dedup();
        AlgebraPresentation {
            generators: gens,
            ..self.clone()
        }
    }

    pub fn identity(&self) -> Matrix<C> {
        Matrix::identity(self.size, &self.ring)
    }
}

/// Summary used in serialized reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationSummary {
    pub label: String,
    pub ring: String,
    pub size: usize,
    pub generators: Vec<String>,
}

impl<C: RingKind> From<&AlgebraPresentation<C>> for PresentationSummary {
    fn from(p: &AlgebraPresentation<C>) -> Self {
        PresentationSummary {
            label: p.label.clone(),
            ring: p.coefficient_ring().describe(),
            size: p.size,
            generators: p.generator_text(),
        }
    }
}
