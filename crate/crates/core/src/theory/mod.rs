//! The theory interface the solver works against, plus the two concrete
//! instances: the trivial Boolean theory and linear rational arithmetic.

mod lra;

pub use lra::LraTheory;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::atoms::{Atom, Literal, Relation, TheoryVar};
use crate::clauses::Clause;
use crate::Rat;

/// How much work `infeasible` is allowed to do.
///
/// `Complete` decides feasibility of the whole asserted system by variable
/// elimination. `UnivariateOnly` reports infeasibility only when it is
/// witnessed by constraints with a single unassigned variable; it may answer
/// "feasible" for infeasible inputs, never the reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityMode {
    Complete,
    UnivariateOnly,
}

impl fmt::Display for FeasibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeasibilityMode::Complete => "complete",
            FeasibilityMode::UnivariateOnly => "univariate",
        })
    }
}

/// Why an explanation was requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExplanationKind {
    Propagation,
    Conflict,
}

/// A theory lemma justifying a propagation or conflict. The clause is valid
/// in the theory and each of its literals is false under the trail that
/// requested it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explanation {
    pub clause: Clause,
    pub kind: ExplanationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("assertions are not infeasible in the active mode")]
    NotInfeasible,
    #[error("assertions are inconsistent under the current assignment")]
    InconsistentAssertions,
    #[error("no projection witness found for an infeasible system")]
    NoWitness,
}

/// A partial map from theory variables to rational values. Each variable is
/// bound at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<TheoryVar, Rat>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &TheoryVar) -> Option<&Rat> {
        self.map.get(var)
    }

    pub fn is_assigned(&self, var: &TheoryVar) -> bool {
        self.map.contains_key(var)
    }

    /// Binds a variable; fails when it is already bound.
    pub fn bind(&mut self, var: TheoryVar, value: Rat) -> Result<(), AlreadyBound> {
        if self.map.contains_key(&var) {
            return Err(AlreadyBound(var));
        }
        self.map.insert(var, value);
        Ok(())
    }

    pub fn unbind(&mut self, var: &TheoryVar) -> Option<Rat> {
        self.map.remove(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TheoryVar, &Rat)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("theory variable {0} is already bound")]
pub struct AlreadyBound(pub TheoryVar);

/// Evaluates an atom under a (partial) assignment: `None` while any of its
/// variables is unassigned. Boolean atoms never evaluate from the theory
/// side.
pub fn eval_atom(atom: &Atom, assignment: &Assignment) -> Option<bool> {
    let lin = atom.as_linear()?;
    let mut sum = Rat::zero();
    for (var, coeff) in lin.terms() {
        sum += coeff * assignment.get(var)?;
    }
    Some(match lin.relation() {
        Relation::Lt => sum < *lin.bound(),
        Relation::Le => sum <= *lin.bound(),
        Relation::Eq => sum == *lin.bound(),
    })
}

/// Evaluates a literal: the atom's value adjusted for polarity.
pub fn eval_literal(lit: &Literal, assignment: &Assignment) -> Option<bool> {
    eval_atom(lit.atom(), assignment).map(|v| v == lit.is_positive())
}

/// True iff no asserted literal evaluates to the opposite of its polarity.
/// Unevaluated (partially assigned) literals never contradict.
pub fn is_consistent(asserted: &[Literal], assignment: &Assignment) -> bool {
    asserted
        .iter()
        .all(|lit| eval_literal(lit, assignment) != Some(false))
}

/// The theory plug-in used by the solver, checker and translators.
pub trait Theory {
    fn mode(&self) -> FeasibilityMode;

    /// Whether the asserted literals, with assigned variables substituted,
    /// have no rational solution (as far as the active mode can see).
    /// Assumes `is_consistent(asserted, assignment)`.
    fn infeasible(&self, asserted: &[Literal], assignment: &Assignment) -> bool;

    /// A valid lemma whose literals are all false under the given assertions
    /// and assignment. Requires `infeasible` to hold in the active mode.
    fn explain(
        &self,
        asserted: &[Literal],
        assignment: &Assignment,
        kind: ExplanationKind,
    ) -> Result<Explanation, TheoryError>;

    /// Checker-side validity: `T |= clause`.
    fn is_valid(&self, clause: &Clause) -> bool;

    /// Deterministic value selection for theory decisions: the smallest
    /// non-negative rational with the smallest denominator satisfying the
    /// univariate bounds on `var` (0 when unconstrained); when only negative
    /// values qualify, the one closest to zero with the smallest denominator.
    /// `None` when no consistent value exists.
    fn pick_value(
        &self,
        var: &TheoryVar,
        asserted: &[Literal],
        assignment: &Assignment,
    ) -> Option<Rat>;
}

/// The trivial theory: no constraints ever become infeasible, validity is
/// propositional tautology. Running the solver over it yields plain CDCL.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoolTheory;

impl Theory for BoolTheory {
    fn mode(&self) -> FeasibilityMode {
        FeasibilityMode::Complete
    }

    fn infeasible(&self, _asserted: &[Literal], _assignment: &Assignment) -> bool {
        false
    }

    fn explain(
        &self,
        _asserted: &[Literal],
        _assignment: &Assignment,
        _kind: ExplanationKind,
    ) -> Result<Explanation, TheoryError> {
        Err(TheoryError::NotInfeasible)
    }

    fn is_valid(&self, clause: &Clause) -> bool {
        clause.is_tautological()
    }

    fn pick_value(
        &self,
        _var: &TheoryVar,
        _asserted: &[Literal],
        _assignment: &Assignment,
    ) -> Option<Rat> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::build::*;
    use crate::{canonicalize, rat, Vocab};

    fn assign(v: &mut Vocab, pairs: &[(&str, i64)]) -> Assignment {
        let mut a = Assignment::new();
        for (name, val) in pairs {
            a.bind(v.theory_var(name), rat(*val)).unwrap();
        }
        a
    }

    #[test]
    fn eval_atom_examples() {
        let mut v = Vocab::new();
        let x_lt_1 = lt(&mut v, "x", 1);
        assert_eq!(eval_atom(x_lt_1.atom(), &assign(&mut v, &[("x", 0)])), Some(true));
        assert_eq!(eval_atom(x_lt_1.atom(), &assign(&mut v, &[("x", 1)])), Some(false));
        let sum = lin(&mut v, &[("x", 1), ("y", 1)], RawRelation::Le, 2);
        assert_eq!(eval_atom(sum.atom(), &assign(&mut v, &[("x", 1)])), None);
    }

    #[test]
    fn consistency_examples() {
        let mut v = Vocab::new();
        let x_lt_1 = lt(&mut v, "x", 1);
        assert!(is_consistent(&[x_lt_1.clone()], &assign(&mut v, &[("x", 0)])));
        assert!(!is_consistent(&[x_lt_1.clone()], &assign(&mut v, &[("x", 2)])));
        assert!(is_consistent(&[x_lt_1], &Assignment::new()));
    }

    #[test]
    fn assignment_binds_once() {
        let mut v = Vocab::new();
        let x = v.theory_var("x");
        let mut a = Assignment::new();
        a.bind(x.clone(), rat(1)).unwrap();
        assert!(a.bind(x.clone(), rat(2)).is_err());
        assert_eq!(a.unbind(&x), Some(rat(1)));
        a.bind(x, rat(2)).unwrap();
    }

    #[test]
    fn bool_theory_is_trivial() {
        let mut v = Vocab::new();
        let a = blit(&mut v, "a", true);
        let th = BoolTheory;
        assert!(!th.infeasible(&[a.clone()], &Assignment::new()));
        assert!(th
            .explain(&[a.clone()], &Assignment::new(), ExplanationKind::Conflict)
            .is_err());
        assert!(th.is_valid(&canonicalize([a.clone(), a.negated()])));
        assert!(!th.is_valid(&canonicalize([a])));
    }
}
