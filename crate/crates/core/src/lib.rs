//! Rational points of bounded height on the quintic del Pezzo surface
//! `S ⊂ P^5` with an `A2` singularity.
//!
//! The crate counts points on the complement `U` of the four lines of `S`
//! in two independent ways (directly on the defining quadrics and through
//! the universal torsor), evaluates the arithmetic densities exactly, the
//! archimedean density numerically, and compares counts with the predicted
//! main term `c B (log B)^4`.

// `!(x > 0.0)` is meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod cli;
pub mod density;
pub mod dirichlet;
pub mod enumerate;
pub mod quadrature;
pub mod surface;
pub mod torsor;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0}: argument must be nonzero")]
    ZeroArgument(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("naive enumeration refused for B = {b} (feasibility bound {max})")]
    NaiveBoundExceeded { b: u64, max: u64 },
    #[error("expected 4 lines on the surface, found {0}")]
    LineCount(usize),
    #[error("{what} did not converge: estimate {value}, error {error}")]
    NonConvergence { what: String, value: f64, error: f64 },
    #[error("pole: p^(k s + 1) = 1 for p = {p}, s = {s}")]
    Pole { p: u64, s: f64 },
    #[error("torsor image invariant broken: {0}")]
    PsiInvariant(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
