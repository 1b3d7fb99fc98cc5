//! The trail: an ordered record of Boolean/theory decisions and
//! propagations, with literal evaluation against both the asserted literals
//! and the theory assignment.

use std::collections::HashMap;

use crate::atoms::{Atom, Literal, TheoryVar};
use crate::clauses::Clause;
use crate::theory::{eval_atom, is_consistent, Assignment};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrailElement {
    BoolDecision(Literal),
    BoolPropagation { reason: Clause, literal: Literal },
    TheoryDecision { var: TheoryVar, value: Rat },
    TheoryPropagation { reason: Clause, literal: Literal },
}

impl TrailElement {
    /// The literal this element asserts, if any.
    pub fn asserted_literal(&self) -> Option<&Literal> {
        match self {
            TrailElement::BoolDecision(l) => Some(l),
            TrailElement::BoolPropagation { literal, .. } => Some(literal),
            TrailElement::TheoryPropagation { literal, .. } => Some(literal),
            TrailElement::TheoryDecision { .. } => None,
        }
    }

    pub fn reason(&self) -> Option<&Clause> {
        match self {
            TrailElement::BoolPropagation { reason, .. } => Some(reason),
            TrailElement::TheoryPropagation { reason, .. } => Some(reason),
            _ => None,
        }
    }

    pub fn is_decision(&self) -> bool {
        matches!(
            self,
            TrailElement::BoolDecision(_) | TrailElement::TheoryDecision { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrailError {
    #[error("atom of {0} is already assigned")]
    AtomAlreadyAssigned(String),
    #[error("theory variable {0} is already assigned")]
    VarAlreadyAssigned(String),
}

fn value_with(
    asserted: &HashMap<Atom, bool>,
    assignment: &Assignment,
    lit: &Literal,
) -> Option<bool> {
    if let Some(&polarity) = asserted.get(lit.atom()) {
        return Some(polarity == lit.is_positive());
    }
    eval_atom(lit.atom(), assignment).map(|v| v == lit.is_positive())
}

/// Literal values over a trail prefix.
pub struct Snapshot {
    asserted: HashMap<Atom, bool>,
    assignment: Assignment,
}

impl Snapshot {
    pub fn value_literal(&self, lit: &Literal) -> Option<bool> {
        value_with(&self.asserted, &self.assignment, lit)
    }

    pub fn clause_is_false(&self, clause: &Clause) -> bool {
        clause
            .literals()
            .iter()
            .all(|l| self.value_literal(l) == Some(false))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Trail {
    elements: Vec<TrailElement>,
    asserted: HashMap<Atom, bool>,
    assignment: Assignment,
}

impl Trail {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[TrailElement] {
        &self.elements
    }

    pub fn last(&self) -> Option<&TrailElement> {
        self.elements.last()
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    /// Pushes an element, enforcing single assignment per atom and variable.
    pub fn push(&mut self, element: TrailElement) -> Result<(), TrailError> {
        match &element {
            TrailElement::TheoryDecision { var, value } => {
                self.assignment
                    .bind(var.clone(), value.clone())
                    .map_err(|e| TrailError::VarAlreadyAssigned(e.0.to_string()))?;
            }
            other => {
                let lit = other.asserted_literal().expect("asserting element");
                if self.asserted.contains_key(lit.atom()) {
                    return Err(TrailError::AtomAlreadyAssigned(lit.to_string()));
                }
                self.asserted.insert(lit.atom().clone(), lit.is_positive());
            }
        }
        self.elements.push(element);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<TrailElement> {
        let element = self.elements.pop()?;
        match &element {
            TrailElement::TheoryDecision { var, .. } => {
                self.assignment.unbind(var);
            }
            other => {
                let lit = other.asserted_literal().expect("asserting element");
                self.asserted.remove(lit.atom());
            }
        }
        Some(element)
    }

    pub fn truncate(&mut self, len: usize) {
        while self.elements.len() > len {
            self.pop();
        }
    }

    /// The paper's Value function on literals: asserted polarity if present,
    /// theory evaluation otherwise, undefined when neither applies.
    pub fn value_literal(&self, lit: &Literal) -> Option<bool> {
        value_with(&self.asserted, &self.assignment, lit)
    }

    pub fn value_clause(&self, clause: &Clause) -> Option<bool> {
        let mut all_false = true;
        for lit in clause.literals() {
            match self.value_literal(lit) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => all_false = false,
            }
        }
        if all_false {
            Some(false)
        } else {
            None
        }
    }

    pub fn clause_is_false(&self, clause: &Clause) -> bool {
        self.value_clause(clause) == Some(false)
    }

    /// Asserted literals in trail order.
    pub fn asserted_literals(&self) -> Vec<Literal> {
        self.elements
            .iter()
            .filter_map(|e| e.asserted_literal().cloned())
            .collect()
    }

    /// Values over the first `prefix` elements only.
    pub fn snapshot(&self, prefix: usize) -> Snapshot {
        let mut asserted = HashMap::new();
        let mut assignment = Assignment::new();
        for element in &self.elements[..prefix] {
            match element {
                TrailElement::TheoryDecision { var, value } => {
                    assignment
                        .bind(var.clone(), value.clone())
                        .expect("trail binds each variable once");
                }
                other => {
                    let lit = other.asserted_literal().expect("asserting element");
                    asserted.insert(lit.atom().clone(), lit.is_positive());
                }
            }
        }
        Snapshot {
            asserted,
            assignment,
        }
    }

    /// Consistency of the whole trail: no asserted literal evaluates to the
    /// opposite of its polarity under the theory assignment.
    pub fn is_consistent(&self) -> bool {
        is_consistent(&self.asserted_literals(), &self.assignment)
    }
}
