//! Benchmark harness: solve the instance families (plus random CNFs), push
//! every UNSAT trace through the proof translation and checker, and report
//! the step accounts of both sides.

use mcres_core::engine::{solve, Outcome, SolveOptions, Trace};
use mcres_core::resstar::{check, proof_length, System};
use mcres_core::theory::{FeasibilityMode, LraTheory};
use mcres_core::translate::{mcsat_to_res, StepAccount};
use mcres_core::ClauseSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gen::{bench_random_cnf, generate, Family};

pub struct BenchConfig {
    pub max_n: usize,
    pub seed: u64,
    pub mode: FeasibilityMode,
    pub random: usize,
    pub max_steps: usize,
}

struct Row {
    name: String,
    verdict: &'static str,
    trace: StepAccount,
    proof: Option<StepAccount>,
    check: &'static str,
}

fn run_one(name: String, clauses: ClauseSet, mode: FeasibilityMode, max_steps: usize) -> (Row, bool) {
    let options = SolveOptions {
        max_steps,
        forget_on_restart: false,
    };
    let (outcome, trace) = solve(clauses.clone(), LraTheory::new(mode), &options);
    let trace_account = StepAccount::of_trace(&trace);
    match outcome {
        Outcome::Sat(model) => {
            let ok = model.satisfies_all(&clauses);
            (
                Row {
                    name,
                    verdict: "SAT",
                    trace: trace_account,
                    proof: None,
                    check: if ok { "model-ok" } else { "model-BAD" },
                },
                ok,
            )
        }
        Outcome::Unsat => match translate_and_check(&trace, &clauses) {
            Ok(proof_account) => (
                Row {
                    name,
                    verdict: "UNSAT",
                    trace: trace_account,
                    proof: Some(proof_account),
                    check: "accepted",
                },
                true,
            ),
            Err(reason) => {
                eprintln!("{name}: {reason}");
                (
                    Row {
                        name,
                        verdict: "UNSAT",
                        trace: trace_account,
                        proof: None,
                        check: "REJECTED",
                    },
                    false,
                )
            }
        },
        Outcome::StepLimit => (
            Row {
                name,
                verdict: "UNKNOWN",
                trace: trace_account,
                proof: None,
                check: "-",
            },
            false,
        ),
    }
}

fn translate_and_check(trace: &Trace, inputs: &ClauseSet) -> Result<StepAccount, String> {
    let (proof, account) = mcsat_to_res(trace, inputs).map_err(|e| e.to_string())?;
    check(&proof, inputs, System::ResStarT).map_err(|e| e.to_string())?;
    if !proof.is_refutation() {
        return Err("translated proof is not a refutation".into());
    }
    if proof_length(&proof) > trace.step_count() {
        return Err("proof longer than trace".into());
    }
    Ok(account)
}

pub fn run_bench(config: &BenchConfig) -> bool {
    let mut rows = Vec::new();
    let mut all_ok = true;
    for family in [Family::Chain, Family::Pigeonhole, Family::LraDiamond] {
        let cap = match family {
            Family::Pigeonhole => config.max_n.min(3),
            _ => config.max_n,
        };
        for n in 1..=cap {
            let (_, clauses) = generate(family, n, config.seed).expect("n >= 1");
            let (row, ok) = run_one(
                format!("{}({n})", family.name()),
                clauses,
                config.mode,
                config.max_steps,
            );
            rows.push(row);
            all_ok &= ok;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..config.random {
        let (_, clauses) = bench_random_cnf(&mut rng, 5, 12);
        let (row, ok) = run_one(
            format!("random-cnf#{i}"),
            clauses,
            config.mode,
            config.max_steps,
        );
        rows.push(row);
        all_ok &= ok;
    }

    println!(
        "{:<16} {:<8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}  {}",
        "instance",
        "verdict",
        "t.total",
        "t.thy",
        "t.non",
        "p.total",
        "p.thy",
        "p.non",
        "check"
    );
    for row in &rows {
        let (pt, pth, pn) = match &row.proof {
            Some(a) => (
                a.total.to_string(),
                a.theory_rules.to_string(),
                a.non_theory_rules.to_string(),
            ),
            None => ("-".into(), "-".into(), "-".into()),
        };
        println!(
            "{:<16} {:<8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}  {}",
            row.name,
            row.verdict,
            row.trace.total,
            row.trace.theory_rules,
            row.trace.non_theory_rules,
            pt,
            pth,
            pn,
            row.check
        );
    }
    all_ok
}
