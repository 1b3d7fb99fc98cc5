use super::*;
use crate::canonicalize;
use crate::testing::build::*;
use crate::testing::oracle;
use crate::theory::{BoolTheory, LraTheory};
use crate::Vocab;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn engine(clauses: &[Clause]) -> Engine<LraTheory> {
    Engine::new(
        ClauseSet::from_inputs(clauses.iter().cloned()),
        LraTheory::complete(),
    )
}

#[test]
fn decide_requires_undefined_basis_literal() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let mut e = engine(&[canonicalize([a.clone()])]);
    e.rule_decide(&a.negated()).unwrap();
    assert!(matches!(
        e.rule_decide(&a),
        Err(RuleError::NotUndef(_))
    ));
    let b = blit(&mut v, "b", true);
    assert!(matches!(
        e.rule_decide(&b),
        Err(RuleError::NotInBasis(_))
    ));
}

#[test]
fn decide_rejects_theory_evaluated_literal() {
    let mut v = Vocab::new();
    let x_lt_1 = lt(&mut v, "x", 1);
    let mut e = engine(&[canonicalize([x_lt_1.clone()])]);
    e.rule_t_decide(&v.theory_var("x"), &crate::rat(2)).unwrap();
    // value is false by theory evaluation, hence not undefined
    assert!(matches!(
        e.rule_decide(&x_lt_1),
        Err(RuleError::NotUndef(_))
    ));
}

#[test]
fn propagate_examples() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let implication = canonicalize([a.negated(), b.clone()]);
    let mut e = engine(&[canonicalize([a.clone()]), implication.clone()]);
    // unit clause propagates from an empty trail
    e.rule_propagate(&canonicalize([a.clone()]), &a).unwrap();
    e.rule_propagate(&implication, &b).unwrap();
    assert_eq!(
        e.state().trail().unwrap().value_literal(&b),
        Some(true)
    );
}

#[test]
fn propagate_requires_all_others_false() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let clause = canonicalize([a.clone(), b.clone()]);
    let mut e = engine(&[clause.clone()]);
    assert!(matches!(
        e.rule_propagate(&clause, &b),
        Err(RuleError::LiteralNotFalse(_))
    ));
}

#[test]
fn conflict_examples() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let unit = canonicalize([a.clone()]);
    let mut e = engine(&[unit.clone()]);
    e.rule_decide(&a.negated()).unwrap();
    e.rule_conflict(&unit).unwrap();
    assert_eq!(e.state().conflict(), Some(&unit));
}

#[test]
fn conflict_by_theory_evaluation() {
    let mut v = Vocab::new();
    let x_lt_1 = lt(&mut v, "x", 1);
    let unit = canonicalize([x_lt_1]);
    let mut e = engine(&[unit.clone()]);
    e.rule_t_decide(&v.theory_var("x"), &crate::rat(2)).unwrap();
    e.rule_conflict(&unit).unwrap();
}

#[test]
fn conflict_requires_false_clause() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let unit = canonicalize([a]);
    let mut e = engine(&[unit.clone()]);
    assert!(matches!(
        e.rule_conflict(&unit),
        Err(RuleError::LiteralNotFalse(_))
    ));
}

#[test]
fn sat_examples() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let mut e = engine(&[canonicalize([a.clone()])]);
    assert!(matches!(e.rule_sat(), Err(RuleError::TrailIncomplete)));
    e.rule_decide(&a).unwrap();
    e.rule_sat().unwrap();
    match e.state() {
        State::Sat { model, .. } => assert!(model.satisfies_literal(&a)),
        other => panic!("expected SAT, got {other:?}"),
    }
}

#[test]
fn sat_with_theory_assignment() {
    let mut v = Vocab::new();
    let x_lt_1 = lt(&mut v, "x", 1);
    let mut e = engine(&[canonicalize([x_lt_1.clone()])]);
    e.rule_decide(&x_lt_1).unwrap();
    assert!(matches!(e.rule_sat(), Err(RuleError::TrailIncomplete)));
    e.rule_t_decide(&v.theory_var("x"), &crate::rat(0)).unwrap();
    e.rule_sat().unwrap();
}

#[test]
fn forget_examples() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let input = canonicalize([a.clone()]);
    let absent = canonicalize([a.clone(), b.clone()]);
    let mut e = engine(&[input.clone()]);
    assert!(matches!(
        e.rule_forget(&input),
        Err(RuleError::NotLearned(_))
    ));
    assert!(matches!(
        e.rule_forget(&absent),
        Err(RuleError::ClauseNotPresent(_))
    ));
}

#[test]
fn learn_then_forget_round_trips() {
    // derive {a} by resolution, learn it, forget it
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let a_or_b = canonicalize([a.clone(), b.clone()]);
    let not_b = canonicalize([b.negated()]);
    let mut e = engine(&[a_or_b.clone(), not_b.clone()]);
    e.rule_decide(&a.negated()).unwrap();
    e.rule_propagate(&not_b, &b.negated()).unwrap();
    e.rule_conflict(&a_or_b).unwrap();
    e.rule_resolve().unwrap();
    let learned = canonicalize([a.clone()]);
    assert_eq!(e.state().conflict(), Some(&learned));
    let before = e.state().clauses().len();
    e.rule_learn().unwrap();
    assert!(matches!(e.rule_learn(), Err(RuleError::AlreadyPresent(_))));
    assert_eq!(e.state().clauses().len(), before + 1);
    e.rule_restart().unwrap();
    e.rule_forget(&learned).unwrap();
    assert!(!e.state().clauses().contains(&learned));
    assert_eq!(e.state().clauses().len(), before);
}

#[test]
fn restart_examples() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let unit = canonicalize([a.clone()]);
    let mut e = engine(&[unit.clone()]);
    assert!(matches!(
        e.rule_restart(),
        Err(RuleError::NotConflict { .. })
    ));
    e.rule_decide(&a.negated()).unwrap();
    e.rule_conflict(&unit).unwrap();
    e.rule_restart().unwrap();
    match e.state() {
        State::Search { trail, clauses } => {
            assert!(trail.is_empty());
            assert_eq!(clauses.len(), 1);
        }
        other => panic!("expected search state, got {other:?}"),
    }
}

#[test]
fn resolve_chain_to_empty_clause() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let pos = canonicalize([a.clone()]);
    let neg = canonicalize([a.negated()]);
    let mut e = engine(&[pos.clone(), neg.clone()]);
    e.rule_propagate(&pos, &a).unwrap();
    e.rule_conflict(&neg).unwrap();
    e.rule_resolve().unwrap();
    assert_eq!(e.state().conflict(), Some(&Clause::empty()));
    e.rule_learn().unwrap();
    e.rule_unsat().unwrap();
    assert!(matches!(e.state(), State::Unsat { .. }));
}

#[test]
fn resolve_requires_negated_pivot_in_conflict() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let unit_a = canonicalize([a.clone()]);
    let clause_b = canonicalize([b.negated()]);
    let mut e = engine(&[unit_a.clone(), clause_b.clone(), canonicalize([b.clone()])]);
    e.rule_propagate(&unit_a, &a).unwrap();
    e.rule_propagate(&canonicalize([b.clone()]), &b).unwrap();
    e.rule_conflict(&clause_b).unwrap();
    // top propagation is b with ~b in conflict: resolve applies; but after
    // resolving once the next top is a, unrelated: resolve errs, consume1.
    e.rule_resolve().unwrap();
    assert!(matches!(
        e.rule_resolve(),
        Err(RuleError::TrailTopMismatch(_)) | Err(RuleError::PivotNotInConflict(_))
    ));
    e.rule_consume().unwrap();
}

#[test]
fn resolve_needs_propagation_on_top() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let unit = canonicalize([a.clone()]);
    let mut e = engine(&[unit.clone()]);
    e.rule_decide(&a.negated()).unwrap();
    e.rule_conflict(&unit).unwrap();
    assert!(matches!(
        e.rule_resolve(),
        Err(RuleError::TrailTopMismatch(_))
    ));
}

#[test]
fn consume_examples() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let unit_a = canonicalize([a.clone()]);
    let mut e = engine(&[unit_a.clone(), canonicalize([b.clone()])]);
    // unrelated decision on top: consume2
    e.rule_decide(&a.negated()).unwrap();
    e.rule_decide(&b.clone()).unwrap();
    e.rule_conflict(&unit_a).unwrap();
    e.rule_consume().unwrap();
    assert!(matches!(
        e.records().last(),
        Some(Record::Step(TraceStep::Consume2))
    ));
    // related decision on top: consume refuses
    assert!(matches!(
        e.rule_consume(),
        Err(RuleError::TrailTopMismatch(_))
    ));
}

#[test]
fn theory_consume_needs_conflict_false_without_decision() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let x_lt_1 = lt(&mut v, "x", 1);
    let unit_a = canonicalize([a.clone()]);
    let mut e = engine(&[unit_a.clone(), canonicalize([x_lt_1.clone()])]);
    let x = v.theory_var("x");
    // Boolean-only conflict: popping x keeps it false
    e.rule_decide(&a.negated()).unwrap();
    e.rule_t_decide(&x, &crate::rat(0)).unwrap();
    e.rule_conflict(&unit_a).unwrap();
    e.rule_consume().unwrap();
    assert!(matches!(
        e.records().last(),
        Some(Record::Step(TraceStep::TConsume))
    ));

    // theory-evaluated conflict: popping x un-falsifies it
    let mut e = engine(&[unit_a.clone(), canonicalize([x_lt_1.clone()])]);
    e.rule_t_decide(&x, &crate::rat(2)).unwrap();
    e.rule_conflict(&canonicalize([x_lt_1])).unwrap();
    assert!(matches!(
        e.rule_consume(),
        Err(RuleError::TrailTopMismatch(_))
    ));
}

#[test]
fn backjump_examples() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let c = blit(&mut v, "c", true);
    let clause = canonicalize([a.negated(), c.clone()]);
    let mut e = engine(&[canonicalize([a.clone()]), canonicalize([b.clone()]), clause.clone()]);
    e.rule_decide(&a).unwrap();
    e.rule_decide(&b).unwrap();
    e.rule_decide(&c.negated()).unwrap();
    e.rule_conflict(&clause).unwrap();
    e.rule_backjump(&c).unwrap();
    let trail = e.state().trail().unwrap();
    assert_eq!(trail.len(), 2);
    assert_eq!(trail.value_literal(&c), Some(true));
    assert_eq!(
        trail.elements()[1].reason(),
        Some(&clause)
    );
}

#[test]
fn backjump_requires_asserting_clause() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let clause = canonicalize([a.clone(), b.clone()]);
    let mut e = engine(&[clause.clone()]);
    e.rule_decide(&a.negated()).unwrap();
    e.rule_decide(&b.negated()).unwrap();
    e.rule_conflict(&clause).unwrap();
    // both literals undefined under the prefix before the first decision
    assert!(matches!(
        e.rule_backjump(&b),
        Ok(())
    ));
    // b is propagated at the split after the first decision: under prefix
    // [~a], a is false and b undefined, so the jump lands there.
    let trail = e.state().trail().unwrap();
    assert_eq!(trail.len(), 2);
}

#[test]
fn backjump_needs_a_decision_to_cross() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let pos = canonicalize([a.clone()]);
    let neg = canonicalize([a.negated()]);
    let mut e = engine(&[pos.clone(), neg.clone()]);
    e.rule_propagate(&pos, &a).unwrap();
    e.rule_conflict(&neg).unwrap();
    assert!(matches!(
        e.rule_backjump(&a.negated()),
        Err(RuleError::NoValidSplit)
    ));
}

#[test]
fn unsat_requires_empty_conflict() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let unit = canonicalize([a.clone()]);
    let mut e = engine(&[unit.clone()]);
    assert!(matches!(e.rule_unsat(), Err(RuleError::NotConflict { .. })));
    e.rule_decide(&a.negated()).unwrap();
    e.rule_conflict(&unit).unwrap();
    assert!(matches!(
        e.rule_unsat(),
        Err(RuleError::ConflictNotEmpty(_))
    ));
}

#[test]
fn t_propagate_examples() {
    let mut v = Vocab::new();
    let x_lt_1 = lt(&mut v, "x", 1);
    let mut e = engine(&[canonicalize([x_lt_1.clone()])]);
    let x = v.theory_var("x");
    e.rule_t_decide(&x, &crate::rat(0)).unwrap();
    // x = 0 makes ~(x<1) infeasible... but (x<1) already evaluates true, so
    // it is not undefined: precondition error.
    assert!(matches!(
        e.rule_t_propagate(&x_lt_1, None),
        Err(RuleError::NotUndef(_))
    ));

    // with a fresh literal over an assigned variable:
    let mut v2 = Vocab::new();
    let x_lt_1 = lt(&mut v2, "x", 1);
    let x_lt_2 = lt(&mut v2, "x", 2);
    let mut e = engine(&[canonicalize([x_lt_1.clone()]), canonicalize([x_lt_2.clone()])]);
    e.rule_decide(&x_lt_1).unwrap();
    // asserting ~(x<2) alongside (x<1) is infeasible: propagate (x<2)
    e.rule_t_propagate(&x_lt_2, None).unwrap();
    let trail = e.state().trail().unwrap();
    assert_eq!(trail.value_literal(&x_lt_2), Some(true));
    let reason = trail.elements()[1].reason().unwrap();
    assert!(reason.contains(&x_lt_2));
    assert!(LraTheory::complete().is_valid(reason));
    // feasible extension: error
    let mut e2 = engine(&[canonicalize([x_lt_1.clone()])]);
    assert!(matches!(
        e2.rule_t_propagate(&x_lt_1, None),
        Err(RuleError::NotInfeasible { .. })
    ));
}

#[test]
fn t_decide_examples() {
    let mut v = Vocab::new();
    let x_lt_1 = lt(&mut v, "x", 1);
    let mut e = engine(&[canonicalize([x_lt_1.clone()])]);
    let x = v.theory_var("x");
    e.rule_decide(&x_lt_1).unwrap();
    assert!(matches!(
        e.rule_t_decide(&x, &crate::rat(2)),
        Err(RuleError::InconsistentDecision { .. })
    ));
    e.rule_t_decide(&x, &crate::rat(0)).unwrap();
    assert!(matches!(
        e.rule_t_decide(&x, &crate::rat(0)),
        Err(RuleError::VarAssigned(_))
    ));
    let y = v.theory_var("y");
    assert!(matches!(
        e.rule_t_decide(&y, &crate::rat(0)),
        Err(RuleError::VarNotInClauses(_))
    ));
}

#[test]
fn t_conflict_examples() {
    let mut v = Vocab::new();
    let l0 = lt(&mut v, "x", 0);
    let g1 = gt(&mut v, "x", 1);
    let mut e = engine(&[canonicalize([l0.clone()]), canonicalize([g1.clone()])]);
    assert!(matches!(
        e.rule_t_conflict(None),
        Err(RuleError::NotInfeasible { .. })
    ));
    e.rule_decide(&l0).unwrap();
    e.rule_decide(&g1).unwrap();
    e.rule_t_conflict(None).unwrap();
    assert_eq!(
        e.state().conflict(),
        Some(&canonicalize([l0.negated(), g1.negated()]))
    );
}

#[test]
fn t_conflict_not_detected_in_univariate_mode() {
    let mut v = Vocab::new();
    let sum_lt = lin(&mut v, &[("x", 1), ("y", 1)], RawRelation::Lt, 0);
    let sum_gt = lin(&mut v, &[("x", 1), ("y", 1)], RawRelation::Gt, 1);
    let clauses = [canonicalize([sum_lt.clone()]), canonicalize([sum_gt.clone()])];
    let mut e = Engine::new(
        ClauseSet::from_inputs(clauses.iter().cloned()),
        LraTheory::univariate(),
    );
    e.rule_decide(&sum_lt).unwrap();
    e.rule_decide(&sum_gt).unwrap();
    assert!(matches!(
        e.rule_t_conflict(None),
        Err(RuleError::NotInfeasible { .. })
    ));
    // the same state conflicts in complete mode
    let mut e = Engine::new(
        ClauseSet::from_inputs(clauses.iter().cloned()),
        LraTheory::complete(),
    );
    e.rule_decide(&sum_lt).unwrap();
    e.rule_decide(&sum_gt).unwrap();
    e.rule_t_conflict(None).unwrap();
}

#[test]
fn t_backjump_decide_examples() {
    let mut v = Vocab::new();
    let b = blit(&mut v, "b", true);
    let c = blit(&mut v, "c", true);
    let x_lt_1 = lt(&mut v, "x", 1);
    let clause = canonicalize([b.clone(), c.clone()]);
    let mut e = engine(&[clause.clone(), canonicalize([x_lt_1.clone()])]);
    let x = v.theory_var("x");
    e.rule_t_decide(&x, &crate::rat(0)).unwrap();
    e.rule_decide(&b.negated()).unwrap();
    e.rule_decide(&c.negated()).unwrap();
    e.rule_conflict(&clause).unwrap();
    // both b and c undefined under the prefix before x: decide one
    e.rule_t_backjump_decide(&c).unwrap();
    let trail = e.state().trail().unwrap();
    assert_eq!(trail.len(), 1);
    assert!(matches!(
        trail.elements()[0],
        crate::trail::TrailElement::BoolDecision(_)
    ));

    // without a theory decision the rule does not apply
    let mut e = engine(&[clause.clone()]);
    e.rule_decide(&b.negated()).unwrap();
    e.rule_decide(&c.negated()).unwrap();
    e.rule_conflict(&clause).unwrap();
    assert!(matches!(
        e.rule_t_backjump_decide(&c),
        Err(RuleError::NoValidSplit)
    ));
}

// -- driver ---------------------------------------------------------------

#[test]
fn solve_examples() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let unsat = ClauseSet::from_inputs([canonicalize([a.clone()]), canonicalize([a.negated()])]);
    let (outcome, _) = solve(unsat, LraTheory::complete(), &SolveOptions::default());
    assert!(outcome.is_unsat());

    let sat = ClauseSet::from_inputs([canonicalize([a.clone(), b.clone()])]);
    let (outcome, _) = solve(sat.clone(), LraTheory::complete(), &SolveOptions::default());
    match outcome {
        Outcome::Sat(model) => assert!(model.satisfies_all(&sat)),
        other => panic!("expected SAT, got {other:?}"),
    }

    let mut v = Vocab::new();
    let lra_unsat = ClauseSet::from_inputs([
        canonicalize([lt(&mut v, "x", 0)]),
        canonicalize([gt(&mut v, "x", 1)]),
    ]);
    let (outcome, trace) = solve(lra_unsat, LraTheory::complete(), &SolveOptions::default());
    assert!(outcome.is_unsat());
    assert!(trace.steps().any(|s| matches!(s, TraceStep::TConflict { .. })));
}

#[test]
fn solve_reports_step_limit() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let b = blit(&mut v, "b", true);
    let inputs = ClauseSet::from_inputs([canonicalize([a, b])]);
    let (outcome, trace) = solve(
        inputs,
        LraTheory::complete(),
        &SolveOptions {
            max_steps: 1,
            forget_on_restart: false,
        },
    );
    assert!(matches!(outcome, Outcome::StepLimit));
    assert!(trace.step_count() <= 2);
}

#[test]
fn solve_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (_, clauses) = crate::testing::gen::random_mixed_instance(&mut rng, 3, 2, 6);
        let inputs = ClauseSet::from_inputs(clauses);
        let (_, t1) = solve(inputs.clone(), LraTheory::complete(), &SolveOptions::default());
        let (_, t2) = solve(inputs, LraTheory::complete(), &SolveOptions::default());
        assert_eq!(t1, t2);
    }
}

#[test]
fn solve_matches_brute_force_on_boolean_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..150 {
        let (_, clauses) = crate::testing::gen::random_cnf(&mut rng, 4, 8);
        let expected = oracle::brute_force_sat(&clauses);
        let inputs = ClauseSet::from_inputs(clauses);
        let (outcome, _) = solve(inputs, LraTheory::complete(), &SolveOptions::default());
        assert_eq!(outcome.is_sat(), expected);
    }
}

#[test]
fn solve_matches_oracles_on_mixed_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let (_, clauses) = crate::testing::gen::random_mixed_instance(&mut rng, 3, 2, 8);
        let expected = oracle::brute_force_sat(&clauses);
        let inputs = ClauseSet::from_inputs(clauses);
        let (outcome, trace) = solve(
            inputs.clone(),
            LraTheory::complete(),
            &SolveOptions::default(),
        );
        assert_eq!(outcome.is_sat(), expected, "inputs: {:?}", inputs);
        // replay reproduces the run
        let replayed = replay(inputs, LraTheory::complete(), &trace).unwrap();
        assert_eq!(replayed.records(), trace.records.as_slice());
    }
}

#[test]
fn bool_theory_runs_plain_cdcl() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..80 {
        let (_, clauses) = crate::testing::gen::random_cnf(&mut rng, 4, 10);
        let expected = oracle::brute_force_sat(&clauses);
        let inputs = ClauseSet::from_inputs(clauses);
        let (outcome, trace) = solve(inputs, BoolTheory, &SolveOptions::default());
        assert_eq!(outcome.is_sat(), expected);
        assert_eq!(trace.theory_rule_count(), 0);
    }
}

#[test]
fn solve_with_forgetting_still_answers() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let options = SolveOptions {
        max_steps: 500_000,
        forget_on_restart: true,
    };
    for _ in 0..40 {
        let (_, clauses) = crate::testing::gen::random_cnf(&mut rng, 5, 14);
        let expected = oracle::brute_force_sat(&clauses);
        let inputs = ClauseSet::from_inputs(clauses);
        let (outcome, _) = solve(inputs, LraTheory::complete(), &options);
        assert_eq!(outcome.is_sat(), expected);
    }
}

#[test]
fn replay_rejects_corrupted_traces() {
    let mut v = Vocab::new();
    let a = blit(&mut v, "a", true);
    let inputs = ClauseSet::from_inputs([canonicalize([a.clone()]), canonicalize([a.negated()])]);
    let (_, trace) = solve(inputs.clone(), LraTheory::complete(), &SolveOptions::default());
    // drop a record in the middle
    let mut corrupted = trace.clone();
    corrupted.records.remove(0);
    assert!(replay(inputs, LraTheory::complete(), &corrupted).is_err());
}

#[test]
fn univariate_solve_handles_bound_cycles() {
    let mut v = Vocab::new();
    let xy = lin(&mut v, &[("x", 1), ("y", -1)], RawRelation::Lt, 0);
    let yx = lin(&mut v, &[("x", -1), ("y", 1)], RawRelation::Lt, 0);
    let inputs = ClauseSet::from_inputs([canonicalize([xy]), canonicalize([yx])]);
    let (outcome, trace) = solve(
        inputs.clone(),
        LraTheory::univariate(),
        &SolveOptions::default(),
    );
    assert!(outcome.is_unsat());
    // the trace replays in univariate mode
    let replayed = replay(inputs, LraTheory::univariate(), &trace).unwrap();
    assert!(matches!(replayed.state(), State::Unsat { .. }));
}
