//! Deterministic search strategy over the rule set: exhaust propagations,
//! then conflict checks, then decisions, with geometric restarts.

use crate::clauses::{Clause, ClauseSet, Origin};
use crate::engine::{Engine, Model, State, Trace};
use crate::theory::Theory;
use crate::trail::TrailElement;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Every rule application counts against this budget.
    pub max_steps: usize,
    /// When set, scheduled restarts also forget the older half of the
    /// learned clauses.
    pub forget_on_restart: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_steps: 500_000,
            forget_on_restart: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Sat(Model),
    Unsat,
    /// The step budget ran out before a verdict.
    StepLimit,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Outcome::Unsat)
    }
}

struct RestartSchedule {
    conflicts: usize,
    threshold: usize,
}

impl RestartSchedule {
    fn new() -> Self {
        RestartSchedule {
            conflicts: 0,
            threshold: 16,
        }
    }

    fn on_conflict(&mut self) {
        self.conflicts += 1;
    }

    fn due(&self) -> bool {
        self.conflicts >= self.threshold
    }

    fn bump(&mut self) {
        self.conflicts = 0;
        self.threshold = self.threshold * 3 / 2;
    }
}

/// Runs the engine to SAT/UNSAT (or the step budget) and returns the
/// verdict with the full trace. Identical inputs produce identical traces.
pub fn solve<T: Theory>(inputs: ClauseSet, theory: T, options: &SolveOptions) -> (Outcome, Trace) {
    let mut engine = Engine::new(inputs, theory);
    let mut schedule = RestartSchedule::new();
    let outcome = run(&mut engine, &mut schedule, options);
    if let Outcome::Sat(model) = &outcome {
        debug_assert!(
            model.satisfies_all(engine.state().clauses()),
            "SAT model must satisfy every clause"
        );
    }
    (outcome, engine.trace())
}

fn run<T: Theory>(
    engine: &mut Engine<T>,
    schedule: &mut RestartSchedule,
    options: &SolveOptions,
) -> Outcome {
    loop {
        if engine.step_count() >= options.max_steps {
            return Outcome::StepLimit;
        }
        match engine.state() {
            State::Sat { model, .. } => return Outcome::Sat(model.clone()),
            State::Unsat { .. } => return Outcome::Unsat,
            State::Search { .. } => {
                if let Some(outcome) = search_step(engine, schedule, options) {
                    return outcome;
                }
            }
            State::Conflict { .. } => {
                if let Some(outcome) = conflict_step(engine, schedule, options) {
                    return outcome;
                }
            }
        }
    }
}

/// One applicable search rule, in strategy order. Returns an outcome only on
/// the step budget.
fn search_step<T: Theory>(
    engine: &mut Engine<T>,
    schedule: &mut RestartSchedule,
    options: &SolveOptions,
) -> Option<Outcome> {
    let _ = options;
    // Boolean propagation first.
    if let Some((clause, literal)) = find_propagation(engine) {
        engine
            .rule_propagate(&clause, &literal)
            .expect("scanned propagation applies");
        return None;
    }
    let trail_infeasible = {
        let trail = engine.state().trail().expect("search state");
        engine
            .theory()
            .infeasible(&trail.asserted_literals(), trail.assignment())
    };
    // Theory propagation, unless the trail is already infeasible.
    if !trail_infeasible {
        if let Some(literal) = find_theory_propagation(engine) {
            engine
                .rule_t_propagate(&literal, None)
                .expect("scanned theory propagation applies");
            return None;
        }
    }
    // Conflicts.
    if let Some(clause) = find_false_clause(engine) {
        engine.rule_conflict(&clause).expect("clause is false");
        schedule.on_conflict();
        return None;
    }
    if trail_infeasible {
        engine
            .rule_t_conflict(None)
            .expect("trail is infeasible");
        schedule.on_conflict();
        return None;
    }
    // A complete conflict-free trail satisfies everything.
    if engine.trail_complete() {
        engine.rule_sat().expect("complete conflict-free trail");
        return None;
    }
    // Decide the first undefined basis literal.
    let undecided = {
        let trail = engine.state().trail().expect("search state");
        engine
            .basis()
            .iter()
            .find(|l| trail.value_literal(l).is_none())
            .cloned()
    };
    if let Some(literal) = undecided {
        engine.rule_decide(&literal).expect("literal is undefined");
        return None;
    }
    // Assign the first unassigned theory variable.
    let unassigned = {
        let trail = engine.state().trail().expect("search state");
        engine
            .clause_theory_vars()
            .into_iter()
            .find(|v| !trail.assignment().is_assigned(v))
    };
    if let Some(var) = unassigned {
        let value = {
            let trail = engine.state().trail().expect("search state");
            engine
                .theory()
                .pick_value(&var, &trail.asserted_literals(), trail.assignment())
                .expect("consistent value exists for an undetected variable")
        };
        engine
            .rule_t_decide(&var, &value)
            .expect("picked value is consistent");
        return None;
    }
    unreachable!("incomplete trail with nothing to decide");
}

/// One conflict-analysis rule, following the first-asserting-clause policy
/// with restart and theory-decision fallbacks.
fn conflict_step<T: Theory>(
    engine: &mut Engine<T>,
    schedule: &mut RestartSchedule,
    options: &SolveOptions,
) -> Option<Outcome> {
    let conflict = engine.state().conflict().expect("conflict state").clone();
    let known = engine.state().clauses().contains(&conflict);

    if conflict.is_empty() {
        if !known {
            engine.rule_learn().expect("clause is new");
        }
        engine.rule_unsat().expect("conflict clause is empty");
        return None;
    }
    if schedule.due() {
        if !known {
            engine.rule_learn().expect("clause is new");
        }
        engine.rule_restart().expect("conflict state");
        schedule.bump();
        if options.forget_on_restart {
            forget_older_half(engine);
        }
        return None;
    }
    if let Some((_, literal)) = engine.find_backjump() {
        if !known {
            engine.rule_learn().expect("clause is new");
        }
        engine
            .rule_backjump(&literal)
            .expect("scanned backjump applies");
        return None;
    }
    let top = engine
        .state()
        .trail()
        .expect("conflict state")
        .last()
        .cloned();
    match top {
        Some(TrailElement::BoolPropagation { literal, .. })
        | Some(TrailElement::TheoryPropagation { literal, .. }) => {
            if conflict.contains(&literal.negated()) {
                engine.rule_resolve().expect("pivot occurs in conflict");
            } else {
                engine.rule_consume().expect("propagation is unrelated");
            }
        }
        Some(TrailElement::BoolDecision(_)) => {
            // A decision whose negation occurs in the conflict would have
            // been an asserting split above.
            engine
                .rule_consume()
                .expect("decision is unrelated to the conflict");
        }
        Some(TrailElement::TheoryDecision { .. }) => {
            if engine.rule_consume().is_ok() {
                return None;
            }
            if let Some(literal) = find_theory_backjump_literal(engine, &conflict) {
                engine
                    .rule_t_backjump_decide(&literal)
                    .expect("scanned theory backjump applies");
                return None;
            }
            if !known {
                engine.rule_learn().expect("clause is new");
            }
            engine.rule_restart().expect("conflict state");
        }
        None => unreachable!("nonempty conflict clause over an empty trail"),
    }
    None
}

fn find_propagation<T: Theory>(engine: &Engine<T>) -> Option<(Clause, crate::Literal)> {
    let trail = engine.state().trail()?;
    for clause in engine.state().clauses().clauses() {
        let mut undef = None;
        let mut usable = true;
        for lit in clause.literals() {
            match trail.value_literal(lit) {
                Some(true) => {
                    usable = false;
                    break;
                }
                Some(false) => {}
                None => {
                    if undef.is_some() {
                        usable = false;
                        break;
                    }
                    undef = Some(lit.clone());
                }
            }
        }
        if usable {
            if let Some(literal) = undef {
                return Some((clause.clone(), literal));
            }
        }
    }
    None
}

fn find_theory_propagation<T: Theory>(engine: &Engine<T>) -> Option<crate::Literal> {
    let trail = engine.state().trail()?;
    let asserted = trail.asserted_literals();
    for literal in engine.basis().iter() {
        if trail.value_literal(literal).is_some() {
            continue;
        }
        let mut extended = asserted.clone();
        extended.push(literal.negated());
        if engine.theory().infeasible(&extended, trail.assignment()) {
            return Some(literal.clone());
        }
    }
    None
}

fn find_false_clause<T: Theory>(engine: &Engine<T>) -> Option<Clause> {
    let trail = engine.state().trail()?;
    engine
        .state()
        .clauses()
        .clauses()
        .find(|c| trail.clause_is_false(c))
        .cloned()
}

/// The literal for T-Backjump-Decide: at the deepest theory decision whose
/// prefix leaves at least two conflict literals undefined, the last such
/// literal in canonical order.
fn find_theory_backjump_literal<T: Theory>(
    engine: &Engine<T>,
    conflict: &Clause,
) -> Option<crate::Literal> {
    let trail = engine.state().trail()?;
    for split in (0..trail.len()).rev() {
        if !matches!(trail.elements()[split], TrailElement::TheoryDecision { .. }) {
            continue;
        }
        let snapshot = trail.snapshot(split);
        let undef: Vec<_> = conflict
            .literals()
            .iter()
            .filter(|l| snapshot.value_literal(l).is_none())
            .collect();
        if undef.len() >= 2 {
            return Some((*undef.last().unwrap()).clone());
        }
    }
    None
}

fn forget_older_half<T: Theory>(engine: &mut Engine<T>) {
    let learned: Vec<Clause> = engine
        .state()
        .clauses()
        .iter()
        .filter(|(_, origin)| *origin == Origin::Learned)
        .map(|(c, _)| c.clone())
        .collect();
    for clause in learned.iter().take(learned.len() / 2) {
        engine
            .rule_forget(clause)
            .expect("learned clause is present");
    }
}
