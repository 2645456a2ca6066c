//! Presentation documents.
//!
//! A document is a TOML file:
//!
//! ```toml
//! label = "ut2"
//! ring = "Q(x)"          # "Q", "Q[x1,x2]" or "Q(x)"
//! size = 2
//! generators = [
//!   [["x", "0"], ["0", "1"]],
//!   [["0", "1"], ["0", "0"]],
//! ]
//! ```
//!
//! Entries use the polynomial expression grammar of the engine; over `Q(x)`
//! quotients such as `"1/(x+1)"` are allowed.

use std::sync::Arc;

use gkdim::arith::{Poly, PolyRing, RatFunc, RatFuncField, Rational};
use gkdim::matrix::Matrix;
use gkdim::presentation::{AlgebraPresentation, RingKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDocument {
    #[serde(default)]
    pub label: String,
    pub ring: String,
    pub size: usize,
    pub generators: Vec<Vec<Vec<String>>>,
}

/// A presentation over one of the supported coefficient rings.
#[derive(Debug, Clone)]
pub enum Loaded {
    Rational(AlgebraPresentation<Rational>),
    Poly(AlgebraPresentation<Poly>),
    RatFunc(AlgebraPresentation<RatFunc>),
}

/// Runs the same generic code on whichever ring a document uses.
#[macro_export]
macro_rules! with_presentation {
    ($loaded:expr, $p:ident => $body:expr) => {
        match $loaded {
            $crate::document::Loaded::Rational($p) => $body,
            $crate::document::Loaded::Poly($p) => $body,
            $crate::document::Loaded::RatFunc($p) => $body,
        }
    };
}

enum RingChoice {
    Rational,
    Poly(Arc<PolyRing>),
    RatFunc(RatFuncField),
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_ring(text: &str) -> Result<RingChoice, CliError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Document(format!("unknown ring '{text}' (expected Q, Q[x,..] or Q(x))"));
    if t == "Q" {
        return Ok(RingChoice::Rational);
    }
    if let Some(inner) = t.strip_prefix("Q[").and_then(|r| r.strip_suffix(']')) {
        let names: Vec<&str> = inner.split(',').collect();
        if names.iter().any(|n| !is_name(n)) {
            return Err(bad());
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(CliError::Document(format!("repeated variable in '{text}'")));
        }
        return Ok(RingChoice::Poly(PolyRing::new(names)));
    }
    if let Some(inner) = t.strip_prefix("Q(").and_then(|r| r.strip_suffix(')')) {
        if is_name(inner) {
            return Ok(RingChoice::RatFunc(RatFuncField::new(inner)));
        }
    }
    Err(bad())
}

fn build<C: RingKind>(doc: &PresentationDocument, ring: C::Ring) -> Result<AlgebraPresentation<C>, CliError> {
    let d = doc.size;
    let mut mats = Vec::with_capacity(doc.generators.len());
    for (g, rows) in doc.generators.iter().enumerate() {
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(CliError::Document(format!("generator {} is not a {d}x{d} grid", g + 1)));
        }
        let mut parsed = Vec::with_capacity(d);
        for (i, row) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(d);
            for (j, entry) in row.iter().enumerate() {
                let c = C::parse(entry, &ring).map_err(|e| {
                    CliError::Document(format!("generator {}, entry ({},{}) '{entry}': {e}", g + 1, i + 1, j + 1))
                })?;
                out.push(c);
            }
            parsed.push(out);
        }
        mats.push(Matrix::from_rows(parsed)?);
    }
    let label = if doc.label.is_empty() { "R".to_string() } else { doc.label.clone() };
    Ok(AlgebraPresentation::new(label, ring, d, mats)?)
}

impl PresentationDocument {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Document(e.to_string()))
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        if self.size == 0 {
            return Err(CliError::Document("size must be positive".into()));
        }
        Ok(match parse_ring(&self.ring)? {
            RingChoice::Rational => Loaded::Rational(build(self, ())?),
            RingChoice::Poly(r) => Loaded::Poly(build(self, r)?),
            RingChoice::RatFunc(f) => Loaded::RatFunc(build(self, f)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rings() {
        assert!(matches!(parse_ring("Q").unwrap(), RingChoice::Rational));
        assert!(matches!(parse_ring("Q[x1, x2]").unwrap(), RingChoice::Poly(_)));
        assert!(matches!(parse_ring("Q(t)").unwrap(), RingChoice::RatFunc(_)));
        assert!(parse_ring("Z").is_err());
        assert!(parse_ring("Q[x,x]").is_err());
        assert!(parse_ring("Q(x,y)").is_err());
    }

    #[test]
    fn loads_and_reports_entry_positions() {
        let ok = PresentationDocument::from_toml(
            "ring = \"Q(x)\"\nsize = 2\ngenerators = [[[\"x\", \"0\"], [\"0\", \"1/(x+1)\"]]]\n",
        )
        .unwrap();
        assert!(matches!(ok.load().unwrap(), Loaded::RatFunc(_)));

        let bad = PresentationDocument::from_toml("ring = \"Q[x]\"\nsize = 1\ngenerators = [[[\"x^-1\"]]]\n").unwrap();
        let msg = bad.load().unwrap_err().to_string();
        assert!(msg.contains("entry (1,1)") && msg.contains("position"), "{msg}");

        let shape = PresentationDocument::from_toml("ring = \"Q\"\nsize = 2\ngenerators = [[[\"1\"]]]\n").unwrap();
        assert!(shape.load().is_err());
    }
}
