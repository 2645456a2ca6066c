//! Exact growth filtrations of finitely generated matrix algebras.
//!
//! The crate computes dimensions of the filtration levels spanned by words
//! in the generators, estimates Gelfand-Kirillov dimension from them, builds
//! trace-ring closures via characteristic polynomials, analyses
//! finite-dimensional algebras over Q and Q(x), and runs the reduction
//! pipeline that replaces an algebra by a smaller one of the same growth.

pub mod analysis;
pub mod arith;
pub mod certificates;
pub mod closure;
pub mod error;
pub mod fdalg;
pub mod growth;
pub mod linalg;
pub mod matrix;
pub mod pipeline;
pub mod presentation;
pub mod span;

pub use error::{Error, Result};
