//! Executable translations between machine traces and resolution proofs,
//! with exact step accounting in both directions.
//!
//! Trace-to-proof keeps one resolution or theory derivation per
//! clause-producing rule application; proof-to-trace replays each proof step
//! as a fixed rule sequence from an empty trail (decide the negated side
//! literals, force the clause, learn it, restart).

use std::collections::HashMap;

use crate::atoms::Literal;
use crate::clauses::{resolve, Clause, ClauseSet};
use crate::engine::{Engine, Record, ReplayError, RuleError, State, Trace, TraceStep};
use crate::resstar::{check, Proof, ProofStep, Strength, System};
use crate::theory::{FeasibilityMode, LraTheory, Theory};

/// Rule applications split into theory queries (theory propagation/conflict
/// on the machine side, theory derivation on the proof side) and everything
/// else.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepAccount {
    pub total: usize,
    pub theory_rules: usize,
    pub non_theory_rules: usize,
}

impl StepAccount {
    pub fn of_trace(trace: &Trace) -> Self {
        let total = trace.step_count();
        let theory_rules = trace.theory_rule_count();
        StepAccount {
            total,
            theory_rules,
            non_theory_rules: total - theory_rules,
        }
    }

    pub fn of_proof(proof: &Proof) -> Self {
        let mut theory_rules = 0;
        let mut non_theory_rules = 0;
        for step in &proof.steps {
            match step {
                ProofStep::Input { .. } => {}
                ProofStep::Resolution { .. } => non_theory_rules += 1,
                ProofStep::TheoryDerivation { .. } => theory_rules += 1,
            }
        }
        StepAccount {
            total: theory_rules + non_theory_rules,
            theory_rules,
            non_theory_rules,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("proof rejected: {0}")]
    Check(#[from] crate::resstar::CheckError),
    #[error("simulation rule failed: {0}")]
    Rule(#[from] RuleError),
    #[error("record {index}: replay failed: {source}")]
    Replay { index: usize, source: RuleError },
    #[error("record {index}: basis growth does not match the replayed run")]
    BasisMismatch { index: usize },
    #[error("simulation requires a search state with an empty trail")]
    TrailNotEmpty,
    #[error("clause {0} is not in the clause set")]
    ClauseNotPresent(String),
    #[error("antecedent {0} contains the pivot with both signs")]
    PivotPair(String),
    #[error("clause {0} is not a valid theory lemma")]
    InvalidLemma(String),
    #[error("strong derivation simulation needs the complete feasibility mode")]
    IncompleteMode,
    #[error("clause {0} was never introduced by the trace")]
    UnknownClause(String),
}

fn require_empty_search<T: Theory>(engine: &Engine<T>) -> Result<(), TranslateError> {
    match engine.state() {
        State::Search { trail, .. } if trail.is_empty() => Ok(()),
        _ => Err(TranslateError::TrailNotEmpty),
    }
}

/// Learns `resolve(left, right, pivot)` through decide/propagate/conflict/
/// resolve/learn/restart, using exactly `|C| + |D| + 5` rule applications
/// for a fresh non-tautological resolvent over disjoint side literals, and
/// none at all when there is nothing to learn. Uses no theory rules.
pub fn simulate_resolution<T: Theory>(
    engine: &mut Engine<T>,
    left: &Clause,
    right: &Clause,
    pivot: &Literal,
) -> Result<usize, TranslateError> {
    require_empty_search(engine)?;
    for clause in [left, right] {
        if !engine.state().clauses().contains(clause) {
            return Err(TranslateError::ClauseNotPresent(clause.to_string()));
        }
    }
    // The decide phase cannot falsify both signs of the pivot.
    if left.contains(&pivot.negated()) {
        return Err(TranslateError::PivotPair(left.to_string()));
    }
    if right.contains(pivot) {
        return Err(TranslateError::PivotPair(right.to_string()));
    }
    let resolvent = resolve(left, right, pivot).map_err(|e| {
        TranslateError::Rule(RuleError::LiteralNotInClause(
            pivot.to_string(),
            e.to_string(),
        ))
    })?;
    if resolvent.is_tautological() || engine.state().clauses().contains(&resolvent) {
        return Ok(0);
    }
    let before = engine.step_count();
    for lit in resolvent.literals() {
        engine.rule_decide(&lit.negated())?;
    }
    engine.rule_propagate(left, pivot)?;
    engine.rule_conflict(right)?;
    engine.rule_resolve()?;
    engine.rule_learn()?;
    engine.rule_restart()?;
    Ok(engine.step_count() - before)
}

/// Learns a valid lemma by deciding the negations of its literals and
/// raising the resulting theory conflict with the lemma as explanation:
/// exactly `|C| + 3` rule applications (or none when there is nothing to
/// learn). Requires the complete feasibility mode; an incomplete one may not
/// detect the constructed conflict.
pub fn simulate_strong_derivation<T: Theory>(
    engine: &mut Engine<T>,
    lemma: &Clause,
) -> Result<usize, TranslateError> {
    require_empty_search(engine)?;
    if engine.theory().mode() != FeasibilityMode::Complete {
        return Err(TranslateError::IncompleteMode);
    }
    if !engine.theory().is_valid(lemma) {
        return Err(TranslateError::InvalidLemma(lemma.to_string()));
    }
    if lemma.is_tautological() || engine.state().clauses().contains(lemma) {
        return Ok(0);
    }
    let before = engine.step_count();
    for lit in lemma.literals() {
        engine.rule_decide(&lit.negated())?;
    }
    engine.rule_t_conflict(Some(lemma))?;
    engine.rule_learn()?;
    engine.rule_restart()?;
    Ok(engine.step_count() - before)
}

/// Simulates a checked proof as a machine trace: every derived clause ends
/// up in the clause set, and a refutation finishes with a conflict on the
/// learned empty clause followed by the unsatisfiability transition.
pub fn res_to_mcsat(
    proof: &Proof,
    inputs: &ClauseSet,
) -> Result<(Trace, StepAccount), TranslateError> {
    check(proof, inputs, System::ResStarT)?;
    let mut engine = Engine::new(inputs.clone(), LraTheory::complete());
    // The construction assumes the basis covers every literal of the proof.
    let proof_literals: Vec<Literal> = proof
        .steps
        .iter()
        .flat_map(|s| s.clause().literals().iter().cloned())
        .collect();
    engine.preregister(&proof_literals);
    for step in &proof.steps {
        match step {
            ProofStep::Input { .. } => {}
            ProofStep::Resolution {
                left,
                right,
                pivot,
                ..
            } => {
                let left = proof.steps[*left].clause().clone();
                let right = proof.steps[*right].clause().clone();
                simulate_resolution(&mut engine, &left, &right, pivot)?;
            }
            ProofStep::TheoryDerivation { clause, .. } => {
                simulate_strong_derivation(&mut engine, clause)?;
            }
        }
    }
    if proof.is_refutation() {
        engine.rule_conflict(&Clause::empty())?;
        engine.rule_unsat()?;
    }
    let trace = engine.trace();
    let account = StepAccount::of_trace(&trace);
    Ok((trace, account))
}

/// Replays a trace and harvests its clause-producing steps: a resolution per
/// Resolve, a strong theory derivation per theory propagation or conflict,
/// nothing for the rest. The result checks under the unrestricted system and
/// is never longer than the trace.
pub fn mcsat_to_res(
    trace: &Trace,
    inputs: &ClauseSet,
) -> Result<(Proof, StepAccount), TranslateError> {
    let mut engine = Engine::new(inputs.clone(), LraTheory::new(trace.mode));
    let mut proof = Proof::default();
    let mut index_of: HashMap<Clause, usize> = HashMap::new();
    for clause in inputs.clauses() {
        proof.steps.push(ProofStep::Input {
            clause: clause.clone(),
        });
        index_of.insert(clause.clone(), proof.steps.len() - 1);
    }
    let mut ended_unsat = false;
    for (index, record) in trace.records.iter().enumerate() {
        match record {
            Record::BasisGrow(lits) => {
                if engine.step_count() == 0 {
                    engine.preregister(lits);
                } else if !lits.iter().all(|l| engine.basis().contains(l)) {
                    return Err(TranslateError::BasisMismatch { index });
                }
            }
            Record::Step(step) => {
                let emitted = match step {
                    TraceStep::Resolve { pivot, resolvent } => {
                        let trail = engine.state().trail().expect("resolve needs a conflict");
                        let reason = trail
                            .last()
                            .and_then(|e| e.reason())
                            .cloned()
                            .ok_or_else(|| TranslateError::Replay {
                                index,
                                source: RuleError::TrailTopMismatch(
                                    "resolve without a propagation on top".into(),
                                ),
                            })?;
                        let conflict = engine
                            .state()
                            .conflict()
                            .expect("resolve needs a conflict")
                            .clone();
                        Some((reason, conflict, pivot.clone(), resolvent.clone()))
                    }
                    _ => None,
                };
                engine
                    .apply(step)
                    .map_err(|source| TranslateError::Replay { index, source })?;
                match step {
                    TraceStep::Resolve { .. } => {
                        let (reason, conflict, pivot, resolvent) =
                            emitted.expect("captured before applying");
                        let left = *index_of.get(&reason).ok_or_else(|| {
                            TranslateError::UnknownClause(reason.to_string())
                        })?;
                        let right = *index_of.get(&conflict).ok_or_else(|| {
                            TranslateError::UnknownClause(conflict.to_string())
                        })?;
                        proof.steps.push(ProofStep::Resolution {
                            left,
                            right,
                            pivot,
                            resolvent: resolvent.clone(),
                        });
                        index_of
                            .entry(resolvent)
                            .or_insert(proof.steps.len() - 1);
                    }
                    TraceStep::TPropagate { explanation, .. }
                    | TraceStep::TConflict { explanation } => {
                        proof.steps.push(ProofStep::TheoryDerivation {
                            clause: explanation.clone(),
                            strength: Strength::Strong,
                        });
                        index_of
                            .entry(explanation.clone())
                            .or_insert(proof.steps.len() - 1);
                    }
                    TraceStep::Unsat => ended_unsat = true,
                    _ => {}
                }
            }
        }
    }
    proof.conclusion = if ended_unsat {
        Some(
            *index_of
                .get(&Clause::empty())
                .expect("unsat requires the empty clause"),
        )
    } else if proof.steps.is_empty() {
        None
    } else {
        Some(proof.steps.len() - 1)
    };
    let account = StepAccount::of_proof(&proof);
    Ok((proof, account))
}

impl From<ReplayError> for TranslateError {
    fn from(e: ReplayError) -> Self {
        match e {
            ReplayError::Rule { index, source } => TranslateError::Replay { index, source },
            ReplayError::BasisMismatch { index } => TranslateError::BasisMismatch { index },
            ReplayError::Diverged => TranslateError::Replay {
                index: 0,
                source: RuleError::TraceMismatch {
                    expected: "recorded trace".into(),
                    applied: "diverged".into(),
                },
            },
        }
    }
}
