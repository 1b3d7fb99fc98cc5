//! Clauses, clause sets and the negation-closed literal basis.

use std::fmt;

use indexmap::IndexMap;
use std::collections::BTreeSet;

use crate::atoms::Literal;

/// A duplicate-free disjunction of literals in canonical order. The empty
/// clause is a valid value and denotes `false`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn empty() -> Self {
        Clause {
            literals: Vec::new(),
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.literals.binary_search(lit).is_ok()
    }

    /// True when the clause contains some literal together with its negation.
    /// Complementary literals are adjacent in canonical order (same atom,
    /// negative sign first), so a single scan suffices.
    pub fn is_tautological(&self) -> bool {
        self.literals
            .windows(2)
            .any(|w| w[0].atom() == w[1].atom() && !w[0].is_positive() && w[1].is_positive())
    }

    /// The clause without the given literal, in canonical form.
    pub fn without(&self, lit: &Literal) -> Clause {
        Clause {
            literals: self
                .literals
                .iter()
                .filter(|l| *l != lit)
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("false");
        }
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            lit.fmt(f)?;
        }
        Ok(())
    }
}

/// Sorts, deduplicates. Complementary pairs are kept; they only flag the
/// clause as tautological.
pub fn canonicalize(literals: impl IntoIterator<Item = Literal>) -> Clause {
    let mut lits: Vec<Literal> = literals.into_iter().collect();
    lits.sort();
    lits.dedup();
    Clause { literals: lits }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error("pivot {0} does not occur in the left clause")]
    PivotNotInLeft(String),
    #[error("negated pivot {0} does not occur in the right clause")]
    NegatedPivotNotInRight(String),
}

/// Propositional resolution: `(C | pivot), (D | ~pivot)  =>  (C | D)`.
pub fn resolve(left: &Clause, right: &Clause, pivot: &Literal) -> Result<Clause, ResolveError> {
    if !left.contains(pivot) {
        return Err(ResolveError::PivotNotInLeft(pivot.to_string()));
    }
    let neg = pivot.negated();
    if !right.contains(&neg) {
        return Err(ResolveError::NegatedPivotNotInRight(pivot.to_string()));
    }
    Ok(canonicalize(
        left.literals()
            .iter()
            .filter(|l| *l != pivot)
            .chain(right.literals().iter().filter(|l| **l != neg))
            .cloned(),
    ))
}

/// Whether a clause entered the set as part of the problem or was learned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Input,
    Learned,
}

/// The clause set a solver run works on. Iteration order is insertion order,
/// which keeps every strategy that scans it deterministic.
#[derive(Clone, Debug, Default)]
pub struct ClauseSet {
    clauses: IndexMap<Clause, Origin>,
}

impl ClauseSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_inputs(clauses: impl IntoIterator<Item = Clause>) -> Self {
        let mut set = Self::new();
        for c in clauses {
            set.insert(c, Origin::Input);
        }
        set
    }

    /// Inserts a clause. Re-inserting an existing clause keeps its original
    /// origin (inputs never get demoted to learned).
    pub fn insert(&mut self, clause: Clause, origin: Origin) -> bool {
        if self.clauses.contains_key(&clause) {
            return false;
        }
        self.clauses.insert(clause, origin);
        true
    }

    pub fn contains(&self, clause: &Clause) -> bool {
        self.clauses.contains_key(clause)
    }

    pub fn origin(&self, clause: &Clause) -> Option<Origin> {
        self.clauses.get(clause).copied()
    }

    /// Removes a learned clause. Input clauses cannot be removed.
    pub fn remove_learned(&mut self, clause: &Clause) -> bool {
        match self.clauses.get(clause) {
            Some(Origin::Learned) => {
                self.clauses.shift_remove(clause);
                true
            }
            _ => false,
        }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Clause, Origin)> {
        self.clauses.iter().map(|(c, &o)| (c, o))
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.keys()
    }
}

/// A finite, negation-closed set of literals. Decisions and theory lemmas
/// draw from it; inserting a literal always inserts its negation as well.
#[derive(Clone, Debug, Default)]
pub struct Basis {
    literals: BTreeSet<Literal>,
}

impl Basis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a literal and its negation. Returns the literals that were
    /// actually new, in canonical order.
    pub fn register(&mut self, lit: &Literal) -> Vec<Literal> {
        let mut added = Vec::new();
        for l in [lit.clone(), lit.negated()] {
            if self.literals.insert(l.clone()) {
                added.push(l);
            }
        }
        added.sort();
        added
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.literals.contains(lit)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    /// Literals in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter()
    }
}

/// The negation closure of all literals of `clauses` plus `extra`.
pub fn basis_of<'a>(
    clauses: &ClauseSet,
    extra: impl IntoIterator<Item = &'a Literal>,
) -> Basis {
    let mut basis = Basis::new();
    for clause in clauses.clauses() {
        for lit in clause.literals() {
            basis.register(lit);
        }
    }
    for lit in extra {
        basis.register(lit);
    }
    basis
}
