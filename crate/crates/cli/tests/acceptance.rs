//! Acceptance suite: one test per criterion, each printing a pass line and
//! holding its stated runtime budget. Run with
//! `cargo test -p mcres-cli --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use mcres_cli::gen::{diamond_core, generate, Family};
use mcres_core::engine::{replay, solve, Engine, Outcome, SolveOptions};
use mcres_core::resstar::{check, proof_length, Proof, ProofStep, Strength, System};
use mcres_core::testing::build::*;
use mcres_core::testing::{gen as tgen, oracle};
use mcres_core::theory::{LraTheory, Theory};
use mcres_core::translate::{
    mcsat_to_res, res_to_mcsat, simulate_resolution, simulate_strong_derivation,
};
use mcres_core::{canonicalize, Atom, ClauseSet, Literal, Vocab};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_budget(start: Instant, limit: Duration, label: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "{label} exceeded its runtime budget: {elapsed:?} >= {limit:?}"
    );
}

fn fresh_bools(vocab: &mut Vocab, prefix: &str, count: usize) -> Vec<Literal> {
    (0..count)
        .map(|i| Literal::positive(Atom::Bool(vocab.bool_atom(&format!("{prefix}{i}")))))
        .collect()
}

/// Criterion 1: simulating a resolution step takes exactly |C| + |D| + 5
/// rule applications for side-clause sizes 0..6 over fresh Boolean atoms,
/// and none in the tautology/membership cases.
#[test]
fn criterion_1_resolution_step_bound() {
    let start = Instant::now();
    for c_size in 0..=6usize {
        for d_size in 0..=6usize {
            let mut vocab = Vocab::new();
            let pivot = Literal::positive(Atom::Bool(vocab.bool_atom("pivot")));
            let c_lits = fresh_bools(&mut vocab, "c", c_size);
            let d_lits = fresh_bools(&mut vocab, "d", d_size);
            let left = canonicalize(c_lits.iter().cloned().chain([pivot.clone()]));
            let right = canonicalize(d_lits.iter().cloned().chain([pivot.negated()]));
            let inputs = ClauseSet::from_inputs([left.clone(), right.clone()]);
            let mut engine = Engine::new(inputs, LraTheory::complete());
            let steps = simulate_resolution(&mut engine, &left, &right, &pivot).unwrap();
            assert_eq!(steps, c_size + d_size + 5, "|C|={c_size} |D|={d_size}");
            let resolvent = canonicalize(c_lits.iter().chain(d_lits.iter()).cloned());
            assert!(engine.state().clauses().contains(&resolvent));
            assert_eq!(engine.trace().theory_rule_count(), 0);

            // membership case: repeating the same step does nothing
            assert_eq!(
                simulate_resolution(&mut engine, &left, &right, &pivot).unwrap(),
                0
            );

            // tautology case: make one side literal clash
            if c_size >= 1 && d_size >= 1 {
                let mut vocab = Vocab::new();
                let pivot = Literal::positive(Atom::Bool(vocab.bool_atom("pivot")));
                let shared = Literal::positive(Atom::Bool(vocab.bool_atom("s")));
                let c_rest = fresh_bools(&mut vocab, "c", c_size - 1);
                let d_rest = fresh_bools(&mut vocab, "d", d_size - 1);
                let left = canonicalize(
                    c_rest.iter().cloned().chain([shared.clone(), pivot.clone()]),
                );
                let right = canonicalize(
                    d_rest
                        .iter()
                        .cloned()
                        .chain([shared.negated(), pivot.negated()]),
                );
                let inputs = ClauseSet::from_inputs([left.clone(), right.clone()]);
                let mut engine = Engine::new(inputs, LraTheory::complete());
                assert_eq!(
                    simulate_resolution(&mut engine, &left, &right, &pivot).unwrap(),
                    0
                );
            }
        }
    }
    assert_budget(start, Duration::from_secs(1), "criterion 1");
    println!("criterion 1 (resolution simulation is exactly |C|+|D|+5 steps): PASS");
}

/// Criterion 2: simulating a strong theory derivation takes exactly |C| + 3
/// rule applications for valid lemmas. Lemma sizes cover 1..6 variables
/// (literal counts 2..6); a single-literal valid lemma does not exist in
/// this atom language (a lone nonzero linear constraint is always
/// satisfiable), which is asserted alongside.
#[test]
fn criterion_2_strong_derivation_step_bound() {
    let start = Instant::now();
    let theory = LraTheory::complete();
    let mut sizes_seen = Vec::new();
    for vars in 1..=6usize {
        let mut vocab = Vocab::new();
        let lemma = if vars == 1 {
            canonicalize([lt(&mut vocab, "x1", 0).negated(), lt(&mut vocab, "x1", 1)])
        } else {
            // negation of the strict cycle x1 < x2 < ... < xk < x1
            canonicalize((0..vars).map(|i| {
                let from = format!("x{}", i + 1);
                let to = format!("x{}", (i + 1) % vars + 1);
                lin(
                    &mut vocab,
                    &[(from.as_str(), 1), (to.as_str(), -1)],
                    RawRelation::Lt,
                    0,
                )
                .negated()
            }))
        };
        assert!(theory.is_valid(&lemma));
        assert!(oracle::clause_valid(&lemma));
        let mut engine = Engine::new(ClauseSet::new(), LraTheory::complete());
        engine.preregister(&lemma.literals().to_vec());
        let steps = simulate_strong_derivation(&mut engine, &lemma).unwrap();
        assert_eq!(steps, lemma.len() + 3, "lemma over {vars} variables");
        assert!(engine.state().clauses().contains(&lemma));
        assert_eq!(engine.trace().theory_rule_count(), 1);
        assert_eq!(simulate_strong_derivation(&mut engine, &lemma).unwrap(), 0);
        sizes_seen.push(lemma.len());
    }
    for size in 2..=6 {
        assert!(sizes_seen.contains(&size), "missing lemma size {size}");
    }
    // No single-literal lemma is valid: each candidate's negation is a
    // single satisfiable constraint.
    let mut vocab = Vocab::new();
    for lit in [
        lt(&mut vocab, "x1", 0),
        lt(&mut vocab, "x1", 0).negated(),
        le(&mut vocab, "x1", 3),
        eq_lit(&mut vocab, "x1", 1),
        eq_lit(&mut vocab, "x1", 1).negated(),
        lin(&mut vocab, &[("x1", 2), ("x2", -3)], RawRelation::Le, 4),
    ] {
        assert!(!theory.is_valid(&canonicalize([lit])));
    }
    assert_budget(start, Duration::from_secs(1), "criterion 2");
    println!("criterion 2 (strong derivation simulation is exactly |C|+3 steps): PASS");
}

/// Criterion 3: 100 random refutations translate to valid, replayable
/// traces that learn every derived clause, within the length bound.
/// Criterion 5's theory-rule parity is asserted on every one of them.
#[test]
fn criterion_3_forward_simulation_soundness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    for round in 0..100 {
        let (inputs, proof) = tgen::random_refutation(&mut rng);
        assert_eq!(check(&proof, &inputs, System::ResStarT), Ok(()));
        assert!(proof.steps.len() <= 15);

        let (trace, account) = res_to_mcsat(&proof, &inputs).unwrap();
        let engine = replay(inputs.clone(), LraTheory::complete(), &trace)
            .unwrap_or_else(|e| panic!("round {round}: replay failed: {e}"));

        // every derived clause is in the final clause set
        for step in &proof.steps {
            if !matches!(step, ProofStep::Input { .. }) {
                assert!(
                    engine.state().clauses().contains(step.clause()),
                    "round {round}: derived clause {} not learned",
                    step.clause()
                );
            }
        }

        // the paper's polynomial bound
        let clause_sizes: usize = proof.steps.iter().map(|s| s.clause().len()).sum();
        assert!(
            account.total <= clause_sizes + 5 * proof.steps.len(),
            "round {round}: {} steps exceed the bound",
            account.total
        );

        // refutations finish with a conflict on the empty clause, then unsat
        assert!(proof.is_refutation());
        assert!(matches!(
            engine.state(),
            mcres_core::engine::State::Unsat { .. }
        ));

        // theory-rule parity (criterion 5)
        let derivations = proof
            .steps
            .iter()
            .filter(|s| matches!(s, ProofStep::TheoryDerivation { .. }))
            .count();
        assert_eq!(trace.theory_rule_count(), derivations);
    }
    assert_budget(start, Duration::from_secs(10), "criterion 3");
    println!("criterion 3 (100 random refutations simulate soundly within the bound): PASS");
}

fn unsat_translates(inputs: &ClauseSet, mode: mcres_core::theory::FeasibilityMode) -> (usize, usize) {
    let options = SolveOptions::default();
    let (outcome, trace) = solve(inputs.clone(), LraTheory::new(mode), &options);
    assert!(
        outcome.is_unsat(),
        "expected UNSAT within the step budget"
    );
    let (proof, account) = mcsat_to_res(&trace, inputs).unwrap();
    assert_eq!(check(&proof, inputs, System::ResStarT), Ok(()));
    assert!(proof.is_refutation());
    assert!(proof_length(&proof) <= trace.step_count());
    assert_eq!(account.theory_rules, trace.theory_rule_count());
    (trace.step_count(), proof_length(&proof))
}

/// Criterion 4: every UNSAT engine run on the generated families and 200
/// random CNFs translates to an accepted refutation no longer than the
/// trace. Criterion 5's parity is asserted on every translation.
#[test]
fn criterion_4_reverse_simulation() {
    let start = Instant::now();
    use mcres_core::theory::FeasibilityMode::{Complete, UnivariateOnly};
    for n in 1..=6 {
        let (_, inputs) = generate(Family::Chain, n, 0).unwrap();
        unsat_translates(&inputs, Complete);
    }
    for n in 1..=3 {
        let (_, inputs) = generate(Family::Pigeonhole, n, 0).unwrap();
        unsat_translates(&inputs, Complete);
    }
    for n in 1..=3 {
        let (_, inputs) = generate(Family::LraDiamond, n, 0).unwrap();
        unsat_translates(&inputs, Complete);
        unsat_translates(&inputs, UnivariateOnly);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    let mut unsat_count = 0;
    for _ in 0..200 {
        let (_, clauses) = tgen::random_cnf(&mut rng, 5, 12);
        let inputs = ClauseSet::from_inputs(clauses.clone());
        let (outcome, trace) = solve(
            inputs.clone(),
            LraTheory::complete(),
            &SolveOptions::default(),
        );
        match outcome {
            Outcome::Unsat => {
                unsat_count += 1;
                let (proof, account) = mcsat_to_res(&trace, &inputs).unwrap();
                assert_eq!(check(&proof, &inputs, System::ResStarT), Ok(()));
                assert!(proof.is_refutation());
                assert!(proof_length(&proof) <= trace.step_count());
                assert_eq!(account.theory_rules, trace.theory_rule_count());
            }
            Outcome::Sat(model) => {
                assert!(model.satisfies_all(&inputs));
            }
            Outcome::StepLimit => panic!("step budget hit on a desk-scale instance"),
        }
    }
    assert!(unsat_count >= 40, "too few UNSAT samples: {unsat_count}");
    assert_budget(start, Duration::from_secs(30), "criterion 4");
    println!(
        "criterion 4 (families and {unsat_count}/200 random UNSAT runs translate and check): PASS"
    );
}

/// Criterion 5: theory-rule counts agree exactly between the two sides, in
/// both translation directions. (Also asserted inline in criteria 3 and 4;
/// this re-checks a dedicated sample.)
#[test]
fn criterion_5_theory_rule_parity() {
    let start = Instant::now();
    // forward: every theory derivation becomes exactly one theory conflict
    let mut rng = ChaCha8Rng::seed_from_u64(0x5A5A);
    for _ in 0..30 {
        let (inputs, proof) = tgen::random_refutation(&mut rng);
        let derivations = proof
            .steps
            .iter()
            .filter(|s| matches!(s, ProofStep::TheoryDerivation { .. }))
            .count();
        let (trace, account) = res_to_mcsat(&proof, &inputs).unwrap();
        assert_eq!(trace.theory_rule_count(), derivations);
        assert_eq!(account.theory_rules, derivations);
    }
    // backward: every theory propagation/conflict becomes exactly one
    // theory derivation
    for n in 1..=3 {
        let (_, inputs) = generate(Family::LraDiamond, n, 0).unwrap();
        let (outcome, trace) = solve(
            inputs.clone(),
            LraTheory::complete(),
            &SolveOptions::default(),
        );
        assert!(outcome.is_unsat());
        let (proof, account) = mcsat_to_res(&trace, &inputs).unwrap();
        let derivations = proof
            .steps
            .iter()
            .filter(|s| matches!(s, ProofStep::TheoryDerivation { .. }))
            .count();
        assert_eq!(trace.theory_rule_count(), derivations);
        assert_eq!(account.theory_rules, derivations);
    }
    assert_budget(start, Duration::from_secs(10), "criterion 5");
    println!("criterion 5 (theory-rule counts match exactly on both sides): PASS");
}

/// Criterion 6: the solver's verdict matches the brute-force assignment
/// oracle on random CNFs and an independent elimination oracle on random
/// linear systems, on 550 instances.
#[test]
fn criterion_6_engine_verdict_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x06AC);
    let mut checked = 0;
    for _ in 0..300 {
        let (_, clauses) = tgen::random_cnf(&mut rng, 5, 12);
        let expected = oracle::brute_force_sat(&clauses);
        let inputs = ClauseSet::from_inputs(clauses);
        let (outcome, _) = solve(inputs, LraTheory::complete(), &SolveOptions::default());
        assert_eq!(outcome.is_sat(), expected);
        checked += 1;
    }
    for _ in 0..250 {
        let (_, clauses) = tgen::random_lra_system(&mut rng, 3, 6);
        let lits: Vec<Literal> = clauses.iter().map(|c| c.literals()[0].clone()).collect();
        let expected = oracle::fm_feasible(&oracle::constraints_of(&lits));
        let inputs = ClauseSet::from_inputs(clauses);
        let (outcome, _) = solve(inputs, LraTheory::complete(), &SolveOptions::default());
        assert_eq!(outcome.is_sat(), expected);
        checked += 1;
    }
    assert!(checked >= 500);
    assert_budget(start, Duration::from_secs(30), "criterion 6");
    println!("criterion 6 (solver matches the oracles on {checked} instances): PASS");
}

/// Criterion 7: a strong lemma over a fresh literal passes the unrestricted
/// system and fails the regular restriction.
#[test]
fn criterion_7_restriction_separates_systems() {
    let mut vocab = Vocab::new();
    let a = blit(&mut vocab, "a", true);
    let x_lt_0 = lt(&mut vocab, "x", 0);
    let x_lt_1 = lt(&mut vocab, "x", 1); // never occurs in the inputs
    let c1 = canonicalize([a.clone(), x_lt_0.clone()]);
    let c2 = canonicalize([a.negated()]);
    let inputs = ClauseSet::from_inputs([c1.clone(), c2.clone()]);
    let lemma = canonicalize([x_lt_0.negated(), x_lt_1.clone()]);
    let mut proof = Proof::new(vec![
        ProofStep::Input { clause: c1 },
        ProofStep::Input { clause: c2 },
        ProofStep::TheoryDerivation {
            clause: lemma,
            strength: Strength::Strong,
        },
    ]);
    proof.push_resolution(2, 0, x_lt_0.negated()); // {a, x<1}
    assert_eq!(check(&proof, &inputs, System::ResStarT), Ok(()));
    match check(&proof, &inputs, System::ResT) {
        Err(mcres_core::resstar::CheckError::LiteralRestrictionViolated { step, literal }) => {
            assert_eq!(step, 2);
            assert_eq!(literal, x_lt_1.to_string());
        }
        other => panic!("expected a literal-restriction rejection, got {other:?}"),
    }
    println!("criterion 7 (strong lemma separates Res(T) from the unrestricted system): PASS");
}

/// Criterion 8: a purely multivariate infeasible core is invisible to the
/// univariate feasibility mode but decided in complete mode, and the
/// instances solve UNSAT in complete mode.
#[test]
fn criterion_8_mode_separation() {
    let start = Instant::now();
    let empty = mcres_core::theory::Assignment::new();
    for n in 2..=3 {
        let core = diamond_core(n);
        assert!(
            !LraTheory::univariate().infeasible(&core, &empty),
            "univariate mode must not detect the multivariate core (n={n})"
        );
        assert!(
            LraTheory::complete().infeasible(&core, &empty),
            "complete mode must detect the core (n={n})"
        );
        let (_, inputs) = generate(Family::LraDiamond, n, 0).unwrap();
        let (outcome, _) = solve(inputs, LraTheory::complete(), &SolveOptions::default());
        assert!(outcome.is_unsat());
    }
    // n = 1 is univariate: detected in both modes (also UNSAT both ways)
    let core = diamond_core(1);
    assert!(LraTheory::univariate().infeasible(&core, &empty));
    assert!(LraTheory::complete().infeasible(&core, &empty));
    assert_budget(start, Duration::from_secs(5), "criterion 8");
    println!("criterion 8 (univariate mode misses exactly the multivariate cores): PASS");
}
