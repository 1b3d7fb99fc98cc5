//! Test-only support: independent oracles and random input generators.
//!
//! Compiled for this crate's own tests and, behind the `testing` feature,
//! for downstream test suites. Nothing in here is used by the solver,
//! checker or translators themselves.

pub mod gen;
pub mod oracle;

/// Terse constructors for literals in tests.
pub mod build {
    pub use crate::atoms::RawRelation;
    use crate::atoms::{Atom, Literal, Vocab};
    use crate::{linear_literal, rat, Rat};

    /// Boolean literal by name.
    pub fn blit(v: &mut Vocab, name: &str, positive: bool) -> Literal {
        Literal::new(Atom::Bool(v.bool_atom(name)), positive)
    }

    /// Literal for `sum coeff*var REL bound` over integer data.
    pub fn lin(v: &mut Vocab, terms: &[(&str, i64)], rel: RawRelation, bound: i64) -> Literal {
        lin_rat(
            v,
            &terms
                .iter()
                .map(|(name, c)| (*name, rat(*c)))
                .collect::<Vec<_>>(),
            rel,
            rat(bound),
        )
    }

    pub fn lin_rat(v: &mut Vocab, terms: &[(&str, Rat)], rel: RawRelation, bound: Rat) -> Literal {
        linear_literal(
            terms
                .iter()
                .map(|(name, c)| (v.theory_var(name), c.clone())),
            rel,
            bound,
            true,
        )
        .unwrap()
    }

    pub fn lt(v: &mut Vocab, var: &str, bound: i64) -> Literal {
        lin(v, &[(var, 1)], RawRelation::Lt, bound)
    }

    pub fn le(v: &mut Vocab, var: &str, bound: i64) -> Literal {
        lin(v, &[(var, 1)], RawRelation::Le, bound)
    }

    pub fn gt(v: &mut Vocab, var: &str, bound: i64) -> Literal {
        lin(v, &[(var, 1)], RawRelation::Gt, bound)
    }

    pub fn ge(v: &mut Vocab, var: &str, bound: i64) -> Literal {
        lin(v, &[(var, 1)], RawRelation::Ge, bound)
    }

    pub fn eq_lit(v: &mut Vocab, var: &str, bound: i64) -> Literal {
        lin(v, &[(var, 1)], RawRelation::Eq, bound)
    }
}
