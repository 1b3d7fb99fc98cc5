//! Core library: an MCSAT-style abstract machine over linear rational
//! arithmetic, proof objects and checkers for resolution with theory
//! derivation, and translators between machine traces and resolution proofs
//! with exact step accounting.
//!
//! All arithmetic is exact; theory values and coefficients are
//! arbitrary-precision rationals.

pub mod atoms;
pub mod clauses;
pub mod engine;
pub mod resstar;
pub mod theory;
pub mod trail;
pub mod translate;

#[cfg(any(test, feature = "testing"))]
pub mod testing;

/// Exact rational scalar used throughout.
pub type Rat = num_rational::BigRational;

/// Shorthand for integer-valued rationals.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub use atoms::{
    linear_literal, Atom, AtomError, BoolAtom, LinearAtom, Literal, RawRelation, Relation,
    TheoryVar, Vocab,
};
pub use clauses::{basis_of, canonicalize, resolve, Basis, Clause, ClauseSet, Origin};
