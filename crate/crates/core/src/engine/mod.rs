//! The MCSAT transition system: solver states and the seventeen proof rules
//! as individually applicable, precondition-checked steps.
//!
//! Every successful rule application appends a trace record; a trace can be
//! replayed step by step against the same inputs, re-checking each
//! precondition and re-deriving each side effect.

mod driver;
#[cfg(test)]
mod tests;

pub use driver::{solve, Outcome, SolveOptions};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atoms::{Atom, Literal, TheoryVar};
use crate::clauses::{basis_of, resolve, Basis, Clause, ClauseSet, Origin};
use crate::theory::{eval_literal, Assignment, ExplanationKind, FeasibilityMode, Theory};
use crate::trail::{Trail, TrailElement};
use crate::Rat;

/// A satisfying assignment: Boolean values for the atoms that were assigned
/// or evaluated, plus the theory assignment.
#[derive(Clone, Debug)]
pub struct Model {
    pub bools: BTreeMap<Atom, bool>,
    pub assignment: Assignment,
}

impl Model {
    pub fn satisfies_literal(&self, lit: &Literal) -> bool {
        if let Some(&value) = self.bools.get(lit.atom()) {
            return value == lit.is_positive();
        }
        eval_literal(lit, &self.assignment) == Some(true)
    }

    pub fn satisfies_clause(&self, clause: &Clause) -> bool {
        clause.literals().iter().any(|l| self.satisfies_literal(l))
    }

    pub fn satisfies_all(&self, clauses: &ClauseSet) -> bool {
        clauses.clauses().all(|c| self.satisfies_clause(c))
    }
}

/// Solver state: searching, analyzing a conflict, or terminal.
#[derive(Clone, Debug)]
pub enum State {
    Search {
        trail: Trail,
        clauses: ClauseSet,
    },
    Conflict {
        trail: Trail,
        clauses: ClauseSet,
        conflict: Clause,
    },
    Sat {
        model: Model,
        clauses: ClauseSet,
    },
    Unsat {
        clauses: ClauseSet,
    },
}

impl State {
    pub fn clauses(&self) -> &ClauseSet {
        match self {
            State::Search { clauses, .. }
            | State::Conflict { clauses, .. }
            | State::Sat { clauses, .. }
            | State::Unsat { clauses } => clauses,
        }
    }

    pub fn trail(&self) -> Option<&Trail> {
        match self {
            State::Search { trail, .. } | State::Conflict { trail, .. } => Some(trail),
            _ => None,
        }
    }

    pub fn conflict(&self) -> Option<&Clause> {
        match self {
            State::Conflict { conflict, .. } => Some(conflict),
            _ => None,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, State::Sat { .. } | State::Unsat { .. })
    }
}

/// One rule application with its operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    Decide { literal: Literal },
    Propagate { clause: Clause, literal: Literal },
    Conflict { clause: Clause },
    Sat,
    Forget { clause: Clause },
    Restart,
    Resolve { pivot: Literal, resolvent: Clause },
    Consume1,
    Consume2,
    Backjump { literal: Literal },
    Unsat,
    Learn { clause: Clause },
    TPropagate { literal: Literal, explanation: Clause },
    TDecide { var: TheoryVar, value: Rat },
    TConflict { explanation: Clause },
    TConsume,
    TBackjumpDecide { literal: Literal },
}

impl TraceStep {
    pub fn rule_name(&self) -> &'static str {
        match self {
            TraceStep::Decide { .. } => "decide",
            TraceStep::Propagate { .. } => "propagate",
            TraceStep::Conflict { .. } => "conflict",
            TraceStep::Sat => "sat",
            TraceStep::Forget { .. } => "forget",
            TraceStep::Restart => "restart",
            TraceStep::Resolve { .. } => "resolve",
            TraceStep::Consume1 => "consume1",
            TraceStep::Consume2 => "consume2",
            TraceStep::Backjump { .. } => "backjump",
            TraceStep::Unsat => "unsat",
            TraceStep::Learn { .. } => "learn",
            TraceStep::TPropagate { .. } => "t-propagate",
            TraceStep::TDecide { .. } => "t-decide",
            TraceStep::TConflict { .. } => "t-conflict",
            TraceStep::TConsume => "t-consume",
            TraceStep::TBackjumpDecide { .. } => "t-backjump-decide",
        }
    }

    /// Theory rules in the step-accounting sense: the ones that make a
    /// theory query and produce a lemma.
    pub fn is_theory_rule(&self) -> bool {
        matches!(
            self,
            TraceStep::TPropagate { .. } | TraceStep::TConflict { .. }
        )
    }
}

/// Trace records: rule applications interleaved with basis growth events, so
/// the finite basis a run ended up with can be reconstructed afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Record {
    Step(TraceStep),
    BasisGrow(Vec<Literal>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub mode: FeasibilityMode,
    pub records: Vec<Record>,
}

impl Trace {
    pub fn steps(&self) -> impl Iterator<Item = &TraceStep> {
        self.records.iter().filter_map(|r| match r {
            Record::Step(s) => Some(s),
            Record::BasisGrow(_) => None,
        })
    }

    pub fn step_count(&self) -> usize {
        self.steps().count()
    }

    pub fn theory_rule_count(&self) -> usize {
        self.steps().filter(|s| s.is_theory_rule()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("{rule} requires a search state")]
    NotSearch { rule: &'static str },
    #[error("{rule} requires a conflict state")]
    NotConflict { rule: &'static str },
    #[error("literal {0} is not in the basis")]
    NotInBasis(String),
    #[error("literal {0} is not undefined")]
    NotUndef(String),
    #[error("clause {0} is not in the clause set")]
    ClauseNotPresent(String),
    #[error("literal {0} does not occur in clause {1}")]
    LiteralNotInClause(String, String),
    #[error("literal {0} is not false")]
    LiteralNotFalse(String),
    #[error("trail is not complete")]
    TrailIncomplete,
    #[error("clause {0} has no true literal")]
    ClauseNotSatisfied(String),
    #[error("clause {0} is not a learned clause")]
    NotLearned(String),
    #[error("conflict clause {0} is not empty")]
    ConflictNotEmpty(String),
    #[error("clause {0} is already in the clause set")]
    AlreadyPresent(String),
    #[error("trail top does not match the rule: {0}")]
    TrailTopMismatch(String),
    #[error("negated pivot of {0} does not occur in the conflict clause")]
    PivotNotInConflict(String),
    #[error("no trail prefix satisfies the side conditions")]
    NoValidSplit,
    #[error("variable {0} does not occur in the clause set")]
    VarNotInClauses(String),
    #[error("variable {0} is already assigned")]
    VarAssigned(String),
    #[error("extending the trail with {var} = {value} is inconsistent")]
    InconsistentDecision { var: String, value: String },
    #[error("assertions are feasible; {rule} does not apply")]
    NotInfeasible { rule: &'static str },
    #[error("theory error: {0}")]
    Theory(#[from] crate::theory::TheoryError),
    #[error("explanation {0} does not contain the propagated literal {1}")]
    ExplanationMissingLiteral(String, String),
    #[error("requested lemma {0} is not valid in the theory")]
    RequestedLemmaInvalid(String),
    #[error("requested lemma literal {0} is not false under the trail")]
    RequestedLemmaNotFalse(String),
    #[error("replayed step diverged: expected {expected}, applied {applied}")]
    TraceMismatch { expected: String, applied: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("record {index}: {source}")]
    Rule { index: usize, source: RuleError },
    #[error("record {index}: basis growth does not match the replayed run")]
    BasisMismatch { index: usize },
    #[error("replayed run produced a different trace")]
    Diverged,
}

/// The abstract machine: a theory instance, the literal basis, the current
/// state and the trace so far.
pub struct Engine<T: Theory> {
    theory: T,
    basis: Basis,
    state: State,
    records: Vec<Record>,
    steps: usize,
}

impl<T: Theory> Engine<T> {
    pub fn new(inputs: ClauseSet, theory: T) -> Self {
        let basis = basis_of(&inputs, []);
        Engine {
            theory,
            basis,
            state: State::Search {
                trail: Trail::new(),
                clauses: inputs,
            },
            records: Vec::new(),
            steps: 0,
        }
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn theory(&self) -> &T {
        &self.theory
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn step_count(&self) -> usize {
        self.steps
    }

    pub fn trace(&self) -> Trace {
        Trace {
            mode: self.theory.mode(),
            records: self.records.clone(),
        }
    }

    /// Registers literals into the basis outside of any rule, recording the
    /// growth. Used to seed the basis before a staged construction.
    pub fn preregister(&mut self, literals: &[Literal]) {
        let mut added = Vec::new();
        for lit in literals {
            added.extend(self.basis.register(lit));
        }
        if !added.is_empty() {
            self.records.push(Record::BasisGrow(added));
        }
    }

    fn register_clause(&mut self, clause: &Clause) {
        let mut added = Vec::new();
        for lit in clause.literals() {
            added.extend(self.basis.register(lit));
        }
        if !added.is_empty() {
            self.records.push(Record::BasisGrow(added));
        }
    }

    fn record(&mut self, step: TraceStep) {
        self.steps += 1;
        self.records.push(Record::Step(step));
    }

    fn search_parts(&mut self, rule: &'static str) -> Result<(&mut Trail, &mut ClauseSet), RuleError> {
        match &mut self.state {
            State::Search { trail, clauses } => Ok((trail, clauses)),
            _ => Err(RuleError::NotSearch { rule }),
        }
    }

    fn conflict_parts(
        &mut self,
        rule: &'static str,
    ) -> Result<(&mut Trail, &mut ClauseSet, &mut Clause), RuleError> {
        match &mut self.state {
            State::Conflict {
                trail,
                clauses,
                conflict,
            } => Ok((trail, clauses, conflict)),
            _ => Err(RuleError::NotConflict { rule }),
        }
    }

    fn debug_check_consistency(&self) {
        if let Some(trail) = self.state.trail() {
            debug_assert!(trail.is_consistent(), "trail became inconsistent");
        }
    }

    /// Theory variables occurring in the clause set.
    pub fn clause_theory_vars(&self) -> BTreeSet<TheoryVar> {
        let mut vars = BTreeSet::new();
        for clause in self.state.clauses().clauses() {
            for lit in clause.literals() {
                if let Atom::Linear(lin) = lit.atom() {
                    vars.extend(lin.vars().cloned());
                }
            }
        }
        vars
    }

    /// The paper's trail completeness: every basis literal has a value and
    /// every theory variable of the clause set is assigned.
    pub fn trail_complete(&self) -> bool {
        let trail = match self.state.trail() {
            Some(t) => t,
            None => return false,
        };
        self.basis
            .iter()
            .all(|l| trail.value_literal(l).is_some())
            && self
                .clause_theory_vars()
                .iter()
                .all(|v| trail.assignment().is_assigned(v))
    }

    // -- Boolean reasoning ---------------------------------------------------

    /// Decide: assert an undefined basis literal by guess.
    pub fn rule_decide(&mut self, literal: &Literal) -> Result<(), RuleError> {
        if !self.basis.contains(literal) {
            return Err(RuleError::NotInBasis(literal.to_string()));
        }
        let (trail, _) = self.search_parts("decide")?;
        if trail.value_literal(literal).is_some() {
            return Err(RuleError::NotUndef(literal.to_string()));
        }
        trail
            .push(TrailElement::BoolDecision(literal.clone()))
            .expect("undefined literal is unassigned");
        self.record(TraceStep::Decide {
            literal: literal.clone(),
        });
        self.debug_check_consistency();
        Ok(())
    }

    /// Propagate: assert the single undefined literal of a clause whose
    /// other literals are all false.
    pub fn rule_propagate(&mut self, clause: &Clause, literal: &Literal) -> Result<(), RuleError> {
        let (trail, clauses) = self.search_parts("propagate")?;
        if !clauses.contains(clause) {
            return Err(RuleError::ClauseNotPresent(clause.to_string()));
        }
        if !clause.contains(literal) {
            return Err(RuleError::LiteralNotInClause(
                literal.to_string(),
                clause.to_string(),
            ));
        }
        for other in clause.literals() {
            if other == literal {
                continue;
            }
            if trail.value_literal(other) != Some(false) {
                return Err(RuleError::LiteralNotFalse(other.to_string()));
            }
        }
        if trail.value_literal(literal).is_some() {
            return Err(RuleError::NotUndef(literal.to_string()));
        }
        trail
            .push(TrailElement::BoolPropagation {
                reason: clause.clone(),
                literal: literal.clone(),
            })
            .expect("undefined literal is unassigned");
        self.record(TraceStep::Propagate {
            clause: clause.clone(),
            literal: literal.clone(),
        });
        self.debug_check_consistency();
        Ok(())
    }

    /// Conflict: enter the conflict state on a clause that is false under
    /// the trail.
    pub fn rule_conflict(&mut self, clause: &Clause) -> Result<(), RuleError> {
        let (trail, clauses) = self.search_parts("conflict")?;
        if !clauses.contains(clause) {
            return Err(RuleError::ClauseNotPresent(clause.to_string()));
        }
        if !trail.clause_is_false(clause) {
            return Err(RuleError::LiteralNotFalse(clause.to_string()));
        }
        let state = std::mem::replace(
            &mut self.state,
            State::Unsat {
                clauses: ClauseSet::new(),
            },
        );
        if let State::Search { trail, clauses } = state {
            self.state = State::Conflict {
                trail,
                clauses,
                conflict: clause.clone(),
            };
        }
        self.record(TraceStep::Conflict {
            clause: clause.clone(),
        });
        Ok(())
    }

    /// Sat: the trail is complete and satisfies every clause.
    pub fn rule_sat(&mut self) -> Result<(), RuleError> {
        match &self.state {
            State::Search { .. } => {}
            _ => return Err(RuleError::NotSearch { rule: "sat" }),
        }
        if !self.trail_complete() {
            return Err(RuleError::TrailIncomplete);
        }
        let (trail, clauses) = match &self.state {
            State::Search { trail, clauses } => (trail, clauses),
            _ => unreachable!(),
        };
        for clause in clauses.clauses() {
            if trail.value_clause(clause) != Some(true) {
                return Err(RuleError::ClauseNotSatisfied(clause.to_string()));
            }
        }
        let mut bools = BTreeMap::new();
        for lit in self.basis.iter() {
            let value = trail
                .value_literal(lit)
                .expect("complete trail values every basis literal");
            bools.insert(
                lit.atom().clone(),
                if lit.is_positive() { value } else { !value },
            );
        }
        let model = Model {
            bools,
            assignment: trail.assignment().clone(),
        };
        let clauses = clauses.clone();
        self.state = State::Sat { model, clauses };
        self.record(TraceStep::Sat);
        Ok(())
    }

    /// Forget: drop a learned clause.
    pub fn rule_forget(&mut self, clause: &Clause) -> Result<(), RuleError> {
        let (_, clauses) = self.search_parts("forget")?;
        match clauses.origin(clause) {
            None => Err(RuleError::ClauseNotPresent(clause.to_string())),
            Some(Origin::Input) => Err(RuleError::NotLearned(clause.to_string())),
            Some(Origin::Learned) => {
                clauses.remove_learned(clause);
                self.record(TraceStep::Forget {
                    clause: clause.clone(),
                });
                Ok(())
            }
        }
    }

    /// Restart: abandon conflict analysis and the whole trail, keeping the
    /// clause set (learned clauses included).
    pub fn rule_restart(&mut self) -> Result<(), RuleError> {
        let (_, _, _) = self.conflict_parts("restart")?;
        let state = std::mem::replace(
            &mut self.state,
            State::Unsat {
                clauses: ClauseSet::new(),
            },
        );
        if let State::Conflict { clauses, .. } = state {
            self.state = State::Search {
                trail: Trail::new(),
                clauses,
            };
        }
        self.record(TraceStep::Restart);
        Ok(())
    }

    // -- Conflict analysis ---------------------------------------------------

    /// Resolve: combine the conflict clause with the reason of the
    /// propagation on top of the trail.
    pub fn rule_resolve(&mut self) -> Result<(), RuleError> {
        let (trail, _, conflict) = self.conflict_parts("resolve")?;
        let (reason, literal) = match trail.last() {
            Some(TrailElement::BoolPropagation { reason, literal })
            | Some(TrailElement::TheoryPropagation { reason, literal }) => {
                (reason.clone(), literal.clone())
            }
            other => {
                return Err(RuleError::TrailTopMismatch(format!(
                    "expected a propagation, found {other:?}"
                )))
            }
        };
        if !conflict.contains(&literal.negated()) {
            return Err(RuleError::PivotNotInConflict(literal.to_string()));
        }
        let resolvent = resolve(&reason, conflict, &literal)
            .expect("propagation reason contains its literal");
        trail.pop();
        *conflict = resolvent.clone();
        self.record(TraceStep::Resolve {
            pivot: literal,
            resolvent,
        });
        Ok(())
    }

    /// Consume (all three variants): pop a trail element that does not
    /// interact with the conflict clause.
    pub fn rule_consume(&mut self) -> Result<(), RuleError> {
        let (trail, _, conflict) = self.conflict_parts("consume")?;
        let step = match trail.last() {
            Some(TrailElement::BoolPropagation { literal, .. })
            | Some(TrailElement::TheoryPropagation { literal, .. }) => {
                if conflict.contains(&literal.negated()) {
                    return Err(RuleError::TrailTopMismatch(format!(
                        "negation of propagated {literal} occurs in the conflict clause"
                    )));
                }
                TraceStep::Consume1
            }
            Some(TrailElement::BoolDecision(literal)) => {
                if conflict.contains(&literal.negated()) {
                    return Err(RuleError::TrailTopMismatch(format!(
                        "negation of decided {literal} occurs in the conflict clause"
                    )));
                }
                TraceStep::Consume2
            }
            Some(TrailElement::TheoryDecision { .. }) => {
                let snapshot = trail.snapshot(trail.len() - 1);
                if !snapshot.clause_is_false(conflict) {
                    return Err(RuleError::TrailTopMismatch(
                        "conflict clause is not false without the theory decision".into(),
                    ));
                }
                TraceStep::TConsume
            }
            None => {
                return Err(RuleError::TrailTopMismatch(
                    "trail is empty".into(),
                ))
            }
        };
        trail.pop();
        self.record(step);
        Ok(())
    }

    /// The minimal prefix length at which the conflict clause is asserting:
    /// the remainder starts with a decision, all literals but one are false
    /// under the prefix and that one is undefined.
    pub fn find_backjump(&self) -> Option<(usize, Literal)> {
        let (trail, conflict) = match &self.state {
            State::Conflict {
                trail, conflict, ..
            } => (trail, conflict),
            _ => return None,
        };
        for split in 0..trail.len() {
            if !trail.elements()[split].is_decision() {
                continue;
            }
            let snapshot = trail.snapshot(split);
            let mut undef = None;
            let mut ok = true;
            for lit in conflict.literals() {
                match snapshot.value_literal(lit) {
                    Some(false) => {}
                    None if undef.is_none() => undef = Some(lit.clone()),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                if let Some(lit) = undef {
                    return Some((split, lit));
                }
            }
        }
        None
    }

    /// Backjump: truncate to a prefix under which the conflict clause is
    /// asserting and propagate its remaining literal.
    pub fn rule_backjump(&mut self, literal: &Literal) -> Result<(), RuleError> {
        let split = {
            let (trail, _, conflict) = self.conflict_parts("backjump")?;
            if !conflict.contains(literal) {
                return Err(RuleError::LiteralNotInClause(
                    literal.to_string(),
                    conflict.to_string(),
                ));
            }
            let mut found = None;
            for split in 0..trail.len() {
                if !trail.elements()[split].is_decision() {
                    continue;
                }
                let snapshot = trail.snapshot(split);
                if snapshot.value_literal(literal).is_some() {
                    continue;
                }
                let others_false = conflict
                    .literals()
                    .iter()
                    .filter(|l| *l != literal)
                    .all(|l| snapshot.value_literal(l) == Some(false));
                if others_false {
                    found = Some(split);
                    break;
                }
            }
            found.ok_or(RuleError::NoValidSplit)?
        };
        let (trail, clauses, conflict) = self.conflict_parts("backjump")?;
        trail.truncate(split);
        trail
            .push(TrailElement::BoolPropagation {
                reason: conflict.clone(),
                literal: literal.clone(),
            })
            .expect("literal is undefined under the prefix");
        let clauses = clauses.clone();
        let trail = trail.clone();
        self.state = State::Search { trail, clauses };
        self.record(TraceStep::Backjump {
            literal: literal.clone(),
        });
        self.debug_check_consistency();
        Ok(())
    }

    /// Unsat: the conflict clause is empty.
    pub fn rule_unsat(&mut self) -> Result<(), RuleError> {
        let (_, clauses, conflict) = self.conflict_parts("unsat")?;
        if !conflict.is_empty() {
            return Err(RuleError::ConflictNotEmpty(conflict.to_string()));
        }
        let clauses = clauses.clone();
        self.state = State::Unsat { clauses };
        self.record(TraceStep::Unsat);
        Ok(())
    }

    /// Learn: add the conflict clause to the clause set.
    pub fn rule_learn(&mut self) -> Result<(), RuleError> {
        let (trail, clauses, conflict) = self.conflict_parts("learn")?;
        if clauses.contains(conflict) {
            return Err(RuleError::AlreadyPresent(conflict.to_string()));
        }
        clauses.insert(conflict.clone(), Origin::Learned);
        debug_assert!(
            trail.clause_is_false(conflict),
            "learned conflict clause must be false under the trail"
        );
        let step = TraceStep::Learn {
            clause: conflict.clone(),
        };
        self.record(step);
        Ok(())
    }

    // -- Theory reasoning ----------------------------------------------------

    /// T-Propagate: assert a literal whose negation would make the trail
    /// infeasible, with the explanation as reason.
    ///
    /// `requested` supplies the lemma instead of the explain procedure; it is
    /// verified (valid in the theory, contains the literal, all other
    /// literals false) rather than trusted.
    pub fn rule_t_propagate(
        &mut self,
        literal: &Literal,
        requested: Option<&Clause>,
    ) -> Result<(), RuleError> {
        if !self.basis.contains(literal) {
            return Err(RuleError::NotInBasis(literal.to_string()));
        }
        match &self.state {
            State::Search { .. } => {}
            _ => return Err(RuleError::NotSearch { rule: "t-propagate" }),
        }
        let (trail, _) = match &self.state {
            State::Search { trail, clauses } => (trail, clauses),
            _ => unreachable!(),
        };
        if trail.value_literal(literal).is_some() {
            return Err(RuleError::NotUndef(literal.to_string()));
        }
        let mut extended = trail.asserted_literals();
        extended.push(literal.negated());
        if !self.theory.infeasible(&extended, trail.assignment()) {
            return Err(RuleError::NotInfeasible {
                rule: "t-propagate",
            });
        }
        let explanation = match requested {
            Some(clause) => {
                if !self.theory.is_valid(clause) {
                    return Err(RuleError::RequestedLemmaInvalid(clause.to_string()));
                }
                if !clause.contains(literal) {
                    return Err(RuleError::ExplanationMissingLiteral(
                        clause.to_string(),
                        literal.to_string(),
                    ));
                }
                for other in clause.literals() {
                    if other == literal {
                        continue;
                    }
                    if trail.value_literal(other) != Some(false) {
                        return Err(RuleError::RequestedLemmaNotFalse(other.to_string()));
                    }
                }
                clause.clone()
            }
            None => {
                let explanation = self
                    .theory
                    .explain(&extended, trail.assignment(), ExplanationKind::Propagation)?
                    .clause;
                if !explanation.contains(literal) {
                    // The trail was already infeasible on its own; this is a
                    // conflict, not a propagation.
                    return Err(RuleError::ExplanationMissingLiteral(
                        explanation.to_string(),
                        literal.to_string(),
                    ));
                }
                explanation
            }
        };
        let (trail, _) = self.search_parts("t-propagate")?;
        trail
            .push(TrailElement::TheoryPropagation {
                reason: explanation.clone(),
                literal: literal.clone(),
            })
            .expect("undefined literal is unassigned");
        self.record(TraceStep::TPropagate {
            literal: literal.clone(),
            explanation: explanation.clone(),
        });
        self.register_clause(&explanation);
        self.debug_check_consistency();
        Ok(())
    }

    /// T-Decide: assign a theory value that keeps the trail consistent.
    pub fn rule_t_decide(&mut self, var: &TheoryVar, value: &Rat) -> Result<(), RuleError> {
        let clause_vars = self.clause_theory_vars();
        let (trail, _) = self.search_parts("t-decide")?;
        if !clause_vars.contains(var) {
            return Err(RuleError::VarNotInClauses(var.to_string()));
        }
        if trail.assignment().is_assigned(var) {
            return Err(RuleError::VarAssigned(var.to_string()));
        }
        let mut extended = trail.assignment().clone();
        extended
            .bind(var.clone(), value.clone())
            .expect("variable is unassigned");
        if !crate::theory::is_consistent(&trail.asserted_literals(), &extended) {
            return Err(RuleError::InconsistentDecision {
                var: var.to_string(),
                value: value.to_string(),
            });
        }
        trail
            .push(TrailElement::TheoryDecision {
                var: var.clone(),
                value: value.clone(),
            })
            .expect("variable is unassigned");
        self.record(TraceStep::TDecide {
            var: var.clone(),
            value: value.clone(),
        });
        self.debug_check_consistency();
        Ok(())
    }

    /// T-Conflict: the trail itself is infeasible; enter the conflict state
    /// on its explanation. `requested` as in [`Engine::rule_t_propagate`].
    pub fn rule_t_conflict(&mut self, requested: Option<&Clause>) -> Result<(), RuleError> {
        match &self.state {
            State::Search { .. } => {}
            _ => return Err(RuleError::NotSearch { rule: "t-conflict" }),
        }
        let (trail, _) = match &self.state {
            State::Search { trail, clauses } => (trail, clauses),
            _ => unreachable!(),
        };
        if !self
            .theory
            .infeasible(&trail.asserted_literals(), trail.assignment())
        {
            return Err(RuleError::NotInfeasible { rule: "t-conflict" });
        }
        let explanation = match requested {
            Some(clause) => {
                if !self.theory.is_valid(clause) {
                    return Err(RuleError::RequestedLemmaInvalid(clause.to_string()));
                }
                for lit in clause.literals() {
                    if trail.value_literal(lit) != Some(false) {
                        return Err(RuleError::RequestedLemmaNotFalse(lit.to_string()));
                    }
                }
                clause.clone()
            }
            None => {
                let explanation = self
                    .theory
                    .explain(
                        &trail.asserted_literals(),
                        trail.assignment(),
                        ExplanationKind::Conflict,
                    )?
                    .clause;
                debug_assert!(
                    trail.clause_is_false(&explanation),
                    "explanation must be false under the trail"
                );
                explanation
            }
        };
        let state = std::mem::replace(
            &mut self.state,
            State::Unsat {
                clauses: ClauseSet::new(),
            },
        );
        if let State::Search { trail, clauses } = state {
            self.state = State::Conflict {
                trail,
                clauses,
                conflict: explanation.clone(),
            };
        }
        self.record(TraceStep::TConflict {
            explanation: explanation.clone(),
        });
        self.register_clause(&explanation);
        Ok(())
    }

    /// T-Backjump-Decide: the conflict clause has several undefined literals
    /// below a theory decision; drop back to that prefix and decide one of
    /// them.
    pub fn rule_t_backjump_decide(&mut self, literal: &Literal) -> Result<(), RuleError> {
        let split = {
            let (trail, _, conflict) = self.conflict_parts("t-backjump-decide")?;
            if !conflict.contains(literal) {
                return Err(RuleError::LiteralNotInClause(
                    literal.to_string(),
                    conflict.to_string(),
                ));
            }
            let mut found = None;
            for split in (0..trail.len()).rev() {
                if !matches!(
                    trail.elements()[split],
                    TrailElement::TheoryDecision { .. }
                ) {
                    continue;
                }
                let snapshot = trail.snapshot(split);
                if snapshot.value_literal(literal).is_some() {
                    continue;
                }
                let other_undef = conflict
                    .literals()
                    .iter()
                    .filter(|l| *l != literal)
                    .any(|l| snapshot.value_literal(l).is_none());
                if other_undef {
                    found = Some(split);
                    break;
                }
            }
            found.ok_or(RuleError::NoValidSplit)?
        };
        let (trail, clauses, _) = self.conflict_parts("t-backjump-decide")?;
        trail.truncate(split);
        trail
            .push(TrailElement::BoolDecision(literal.clone()))
            .expect("literal is undefined under the prefix");
        let clauses = clauses.clone();
        let trail = trail.clone();
        self.state = State::Search { trail, clauses };
        self.record(TraceStep::TBackjumpDecide {
            literal: literal.clone(),
        });
        self.debug_check_consistency();
        Ok(())
    }

    // -- Replay ----------------------------------------------------------

    /// Applies one recorded step and verifies the application reproduced it
    /// exactly.
    pub fn apply(&mut self, step: &TraceStep) -> Result<(), RuleError> {
        match step {
            TraceStep::Decide { literal } => self.rule_decide(literal)?,
            TraceStep::Propagate { clause, literal } => self.rule_propagate(clause, literal)?,
            TraceStep::Conflict { clause } => self.rule_conflict(clause)?,
            TraceStep::Sat => self.rule_sat()?,
            TraceStep::Forget { clause } => self.rule_forget(clause)?,
            TraceStep::Restart => self.rule_restart()?,
            TraceStep::Resolve { .. } => self.rule_resolve()?,
            TraceStep::Consume1 | TraceStep::Consume2 | TraceStep::TConsume => {
                self.rule_consume()?
            }
            TraceStep::Backjump { literal } => self.rule_backjump(literal)?,
            TraceStep::Unsat => self.rule_unsat()?,
            TraceStep::Learn { clause } => {
                let current = self.state.conflict().cloned();
                if current.as_ref() != Some(clause) {
                    return Err(RuleError::TraceMismatch {
                        expected: clause.to_string(),
                        applied: current.map(|c| c.to_string()).unwrap_or_default(),
                    });
                }
                self.rule_learn()?
            }
            TraceStep::TPropagate {
                literal,
                explanation,
            } => self.rule_t_propagate(literal, Some(explanation))?,
            TraceStep::TDecide { var, value } => self.rule_t_decide(var, value)?,
            TraceStep::TConflict { explanation } => self.rule_t_conflict(Some(explanation))?,
            TraceStep::TBackjumpDecide { literal } => self.rule_t_backjump_decide(literal)?,
        }
        let applied = self
            .records
            .iter()
            .rev()
            .find_map(|r| match r {
                Record::Step(s) => Some(s),
                Record::BasisGrow(_) => None,
            })
            .expect("a step was just recorded");
        if applied != step {
            return Err(RuleError::TraceMismatch {
                expected: format!("{step:?}"),
                applied: format!("{applied:?}"),
            });
        }
        Ok(())
    }
}

/// Replays a trace against the inputs, checking every precondition and that
/// the re-run reproduces the recorded trace exactly.
pub fn replay<T: Theory>(
    inputs: ClauseSet,
    theory: T,
    trace: &Trace,
) -> Result<Engine<T>, ReplayError> {
    let mut engine = Engine::new(inputs, theory);
    for (index, record) in trace.records.iter().enumerate() {
        match record {
            Record::BasisGrow(lits) => {
                if engine.steps == 0 {
                    engine.preregister(lits);
                } else if !lits.iter().all(|l| engine.basis.contains(l)) {
                    return Err(ReplayError::BasisMismatch { index });
                }
            }
            Record::Step(step) => engine
                .apply(step)
                .map_err(|source| ReplayError::Rule { index, source })?,
        }
    }
    if engine.records != trace.records {
        return Err(ReplayError::Diverged);
    }
    Ok(engine)
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rule_name())
    }
}
