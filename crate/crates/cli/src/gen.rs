//! Deterministic benchmark instance families.

use mcres_core::{
    canonicalize, linear_literal, rat, Atom, Clause, ClauseSet, Literal, Origin, RawRelation,
    Vocab,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// PHP(n+1, n): n+1 pigeons into n holes, one pigeon per hole.
    Pigeonhole,
    /// An implication chain forcing n propagations, then a contradiction.
    Chain,
    /// n = 1: contradictory bounds on one variable. n >= 2: a strict
    /// inequality cycle over n variables whose infeasibility is purely
    /// multivariate.
    LraDiamond,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Pigeonhole => "pigeonhole",
            Family::Chain => "chain",
            Family::LraDiamond => "lra-diamond",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid parameter: {0}")]
pub struct GenError(String);

/// Generates an instance. The family shape is fixed; a nonzero seed only
/// shuffles clause order (deterministically).
pub fn generate(family: Family, n: usize, seed: u64) -> Result<(Vocab, ClauseSet), GenError> {
    if n < 1 {
        return Err(GenError(format!("{} needs n >= 1, got {n}", family.name())));
    }
    let (vocab, mut clauses) = match family {
        Family::Pigeonhole => pigeonhole(n),
        Family::Chain => chain(n),
        Family::LraDiamond => lra_diamond(n),
    };
    if seed != 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        clauses.shuffle(&mut rng);
    }
    Ok((vocab, ClauseSet::from_inputs(clauses)))
}

fn pigeonhole(n: usize) -> (Vocab, Vec<Clause>) {
    let mut vocab = Vocab::new();
    let atom = |v: &mut Vocab, pigeon: usize, hole: usize| {
        Literal::positive(Atom::Bool(v.bool_atom(&format!("p{pigeon}_{hole}"))))
    };
    // declare in pigeon-major order for stable ids
    for pigeon in 1..=n + 1 {
        for hole in 1..=n {
            atom(&mut vocab, pigeon, hole);
        }
    }
    let mut clauses = Vec::new();
    for pigeon in 1..=n + 1 {
        clauses.push(canonicalize(
            (1..=n).map(|hole| atom(&mut vocab, pigeon, hole)),
        ));
    }
    for hole in 1..=n {
        for first in 1..=n + 1 {
            for second in first + 1..=n + 1 {
                clauses.push(canonicalize([
                    atom(&mut vocab, first, hole).negated(),
                    atom(&mut vocab, second, hole).negated(),
                ]));
            }
        }
    }
    (vocab, clauses)
}

fn chain(n: usize) -> (Vocab, Vec<Clause>) {
    let mut vocab = Vocab::new();
    let atoms: Vec<Literal> = (1..=n)
        .map(|i| Literal::positive(Atom::Bool(vocab.bool_atom(&format!("a{i}")))))
        .collect();
    let mut clauses = vec![canonicalize([atoms[0].clone()])];
    for i in 0..n - 1 {
        clauses.push(canonicalize([atoms[i].negated(), atoms[i + 1].clone()]));
    }
    clauses.push(canonicalize([atoms[n - 1].negated()]));
    (vocab, clauses)
}

fn lra_diamond(n: usize) -> (Vocab, Vec<Clause>) {
    let mut vocab = Vocab::new();
    let vars: Vec<_> = (1..=n)
        .map(|i| vocab.theory_var(&format!("x{i}")))
        .collect();
    let mut clauses = Vec::new();
    if n == 1 {
        let below = linear_literal(
            [(vars[0].clone(), rat(1))],
            RawRelation::Lt,
            rat(0),
            true,
        )
        .unwrap();
        let above = linear_literal(
            [(vars[0].clone(), rat(1))],
            RawRelation::Gt,
            rat(1),
            true,
        )
        .unwrap();
        clauses.push(canonicalize([below]));
        clauses.push(canonicalize([above]));
    } else {
        for i in 0..n {
            let next = (i + 1) % n;
            let edge = linear_literal(
                [(vars[i].clone(), rat(1)), (vars[next].clone(), rat(-1))],
                RawRelation::Lt,
                rat(0),
                true,
            )
            .unwrap();
            clauses.push(canonicalize([edge]));
        }
    }
    (vocab, clauses)
}

/// The purely multivariate core of `lra-diamond(n)` for n >= 2: the asserted
/// cycle literals.
pub fn diamond_core(n: usize) -> Vec<Literal> {
    let (_, clauses) = lra_diamond(n);
    clauses
        .iter()
        .map(|c| c.literals()[0].clone())
        .collect()
}

/// Small random CNF used by the benchmark harness.
pub fn bench_random_cnf(rng: &mut ChaCha8Rng, max_vars: usize, max_clauses: usize) -> (Vocab, ClauseSet) {
    use rand::Rng;
    let mut vocab = Vocab::new();
    let nvars = rng.gen_range(1..=max_vars);
    let atoms: Vec<_> = (0..nvars)
        .map(|i| vocab.bool_atom(&format!("p{i}")))
        .collect();
    let nclauses = rng.gen_range(1..=max_clauses);
    let mut set = ClauseSet::new();
    for _ in 0..nclauses {
        let width = rng.gen_range(1..=3.min(nvars));
        let mut order: Vec<usize> = (0..nvars).collect();
        order.shuffle(rng);
        set.insert(
            canonicalize(order.into_iter().take(width).map(|i| {
                Literal::new(Atom::Bool(atoms[i].clone()), rng.gen_bool(0.5))
            })),
            Origin::Input,
        );
    }
    (vocab, set)
}
