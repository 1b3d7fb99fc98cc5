//! Proof objects and checkers for resolution with theory derivation.
//!
//! Proofs are DAG-ordered step sequences with back-references, so shared
//! subproofs are counted once. Theory derivation steps carry no certificate;
//! validity is re-derived at check time by the complete feasibility oracle.
//!
//! The regular (non-strong) restriction "every literal already occurs"
//! is checked against the input clauses plus all earlier steps, and treats a
//! literal as occurring when its atom does (either sign).

use std::collections::BTreeSet;

use crate::atoms::{Atom, Literal};
use crate::clauses::{resolve, Clause, ClauseSet};
use crate::theory::{LraTheory, Theory};

/// Regular derivations may only use literals that already occur; strong ones
/// may introduce new literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strength {
    Regular,
    Strong,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofStep {
    /// A clause of the input set.
    Input { clause: Clause },
    /// Resolution of two earlier steps over `pivot` (occurring positively in
    /// `left`, negated in `right`). The resolvent is stored so that checkers
    /// can reject a proof whose author computed it wrongly.
    Resolution {
        left: usize,
        right: usize,
        pivot: Literal,
        resolvent: Clause,
    },
    /// Introduction of a theory-valid clause.
    TheoryDerivation { clause: Clause, strength: Strength },
}

impl ProofStep {
    pub fn clause(&self) -> &Clause {
        match self {
            ProofStep::Input { clause } => clause,
            ProofStep::Resolution { resolvent, .. } => resolvent,
            ProofStep::TheoryDerivation { clause, .. } => clause,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
    /// Index of the step holding the conclusion (the empty clause for a
    /// refutation).
    pub conclusion: Option<usize>,
}

impl Proof {
    pub fn new(steps: Vec<ProofStep>) -> Self {
        let conclusion = if steps.is_empty() {
            None
        } else {
            Some(steps.len() - 1)
        };
        Proof { steps, conclusion }
    }

    /// Appends a resolution step, computing the resolvent. Panics when the
    /// pivot does not occur on both sides; construction-side misuse.
    pub fn push_resolution(&mut self, left: usize, right: usize, pivot: Literal) -> usize {
        let resolvent = resolve(
            self.steps[left].clause(),
            self.steps[right].clause(),
            &pivot,
        )
        .expect("pivot occurs in both antecedents");
        self.steps.push(ProofStep::Resolution {
            left,
            right,
            pivot,
            resolvent,
        });
        self.conclusion = Some(self.steps.len() - 1);
        self.steps.len() - 1
    }

    pub fn is_refutation(&self) -> bool {
        self.conclusion
            .map(|i| self.steps[i].clause().is_empty())
            .unwrap_or(false)
    }
}

/// Which proof system to check against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    ResT,
    ResStarT,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("step {step}: reference to step {reference} is not earlier")]
    MalformedIndex { step: usize, reference: usize },
    #[error("step {step}: input clause {clause} is not in the instance")]
    InputNotInInstance { step: usize, clause: String },
    #[error("step {step}: wrong resolvent: {detail}")]
    WrongResolvent { step: usize, detail: String },
    #[error("step {step}: clause {clause} is not valid in the theory")]
    InvalidLemma { step: usize, clause: String },
    #[error("step {step}: literal {literal} does not occur in the formula")]
    LiteralRestrictionViolated { step: usize, literal: String },
}

/// Checks a proof against the input clauses under the given system.
pub fn check(proof: &Proof, inputs: &ClauseSet, system: System) -> Result<(), CheckError> {
    let validity = LraTheory::complete();
    // Atoms available to the regular restriction: inputs plus earlier steps.
    let mut available: BTreeSet<Atom> = BTreeSet::new();
    if system == System::ResT {
        for clause in inputs.clauses() {
            for lit in clause.literals() {
                available.insert(lit.atom().clone());
            }
        }
    }
    for (index, step) in proof.steps.iter().enumerate() {
        match step {
            ProofStep::Input { clause } => {
                if !inputs.contains(clause) {
                    return Err(CheckError::InputNotInInstance {
                        step: index,
                        clause: clause.to_string(),
                    });
                }
            }
            ProofStep::Resolution {
                left,
                right,
                pivot,
                resolvent,
            } => {
                for &reference in [left, right] {
                    if reference >= index {
                        return Err(CheckError::MalformedIndex {
                            step: index,
                            reference,
                        });
                    }
                }
                let derived = resolve(
                    proof.steps[*left].clause(),
                    proof.steps[*right].clause(),
                    pivot,
                )
                .map_err(|e| CheckError::WrongResolvent {
                    step: index,
                    detail: e.to_string(),
                })?;
                if derived != *resolvent {
                    return Err(CheckError::WrongResolvent {
                        step: index,
                        detail: format!("stated {resolvent}, derived {derived}"),
                    });
                }
            }
            ProofStep::TheoryDerivation { clause, .. } => {
                if !validity.is_valid(clause) {
                    return Err(CheckError::InvalidLemma {
                        step: index,
                        clause: clause.to_string(),
                    });
                }
                if system == System::ResT {
                    for lit in clause.literals() {
                        if !available.contains(lit.atom()) {
                            return Err(CheckError::LiteralRestrictionViolated {
                                step: index,
                                literal: lit.to_string(),
                            });
                        }
                    }
                }
            }
        }
        if system == System::ResT {
            for lit in step.clause().literals() {
                available.insert(lit.atom().clone());
            }
        }
    }
    Ok(())
}

/// The paper's length metric: rule applications, i.e. non-input steps.
pub fn proof_length(proof: &Proof) -> usize {
    proof
        .steps
        .iter()
        .filter(|s| !matches!(s, ProofStep::Input { .. }))
        .count()
}
