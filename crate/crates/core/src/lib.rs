//! Exact multiplicities of irreducible GL-representations inside plethysms
//! `S^μ(S^k W)`.
//!
//! The engine evaluates the multiplicity of `S^λ` as a signed, character
//! weighted sum of lattice-point counts of `(α, λ)`-matrices, and ships an
//! independent brute-force route through symmetric polynomials to check it.
//! Around that core sit tools for quasi-polynomials: a reader/evaluator for
//! piecewise quasi-polynomial text, a chamber simplifier, and exact
//! quasi-polynomial fitting along rays `s·λ`.
//!
//! Module map:
//!
//! - [`partition`]: partitions, permutations, cycle statistics.
//! - [`characters`]: symmetric-group characters (Frobenius and
//!   Murnaghan–Nakayama).
//! - [`symfunc`]: sparse exact polynomials and the brute-force oracle.
//! - [`counting`]: `(α, λ)`-matrix counters and Pieri-chain counts.
//! - [`plethysm`]: the master formula, reductions, decompositions.
//! - [`qpoly`]: piecewise quasi-polynomials (parse, evaluate, simplify).
//! - [`rayfit`]: exact quasi-polynomial fits along rays and the asymptotic
//!   lead-term check.
//! - [`selftest`]: the fast self-check suites behind the `selftest` command.

pub mod characters;
pub mod counting;
mod error;
pub mod linalg;
pub mod partition;
pub mod plethysm;
pub mod qpoly;
pub mod rayfit;
pub mod selftest;
pub mod symfunc;

pub use error::{Error, Result};
pub use partition::{BigRat, CycleStats, Partition};
