//! Seeded random generators for desk-scale test inputs.

use std::collections::{BTreeSet, HashMap};

use rand::prelude::*;

use crate::atoms::{Atom, Literal, RawRelation, Vocab};
use crate::clauses::{canonicalize, Clause, ClauseSet, Origin};
use crate::resstar::{Proof, ProofStep, Strength};
use crate::testing::oracle;
use crate::{linear_literal, rat};

/// Random CNF over Boolean atoms only: up to `max_vars` variables and
/// `max_clauses` clauses of width 1..=3.
pub fn random_cnf(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> (Vocab, Vec<Clause>) {
    let mut vocab = Vocab::new();
    let nvars = rng.gen_range(1..=max_vars);
    let atoms: Vec<_> = (0..nvars)
        .map(|i| vocab.bool_atom(&format!("p{i}")))
        .collect();
    let nclauses = rng.gen_range(1..=max_clauses);
    let mut clauses = Vec::with_capacity(nclauses);
    for _ in 0..nclauses {
        let width = rng.gen_range(1..=3.min(nvars));
        let mut picked: Vec<usize> = (0..nvars).collect();
        picked.shuffle(rng);
        picked.truncate(width);
        let lits = picked.into_iter().map(|i| {
            Literal::new(
                crate::Atom::Bool(atoms[i].clone()),
                rng.gen_bool(0.5),
            )
        });
        clauses.push(canonicalize(lits));
    }
    (vocab, clauses)
}

/// A random linear literal over up to `max_vars` variables named `x0..`,
/// with coefficients in -3..=3 and bounds in -4..=4.
pub fn random_linear_literal(rng: &mut impl Rng, vocab: &mut Vocab, max_vars: usize) -> Literal {
    loop {
        let nvars = rng.gen_range(1..=max_vars);
        let mut used: Vec<usize> = (0..max_vars).collect();
        used.shuffle(rng);
        used.truncate(nvars);
        let terms: Vec<_> = used
            .into_iter()
            .map(|i| (vocab.theory_var(&format!("x{i}")), rat(rng.gen_range(-3..=3))))
            .collect();
        let rel = match rng.gen_range(0..5) {
            0 => RawRelation::Lt,
            1 => RawRelation::Le,
            2 => RawRelation::Eq,
            3 => RawRelation::Gt,
            _ => RawRelation::Ge,
        };
        let bound = rat(rng.gen_range(-4..=4));
        let positive = rng.gen_bool(0.8);
        if let Ok(lit) = linear_literal(terms, rel, bound, positive) {
            return lit;
        }
        // all coefficients happened to be zero; resample
    }
}

/// A random conjunction of linear constraints, as unit clauses.
pub fn random_lra_system(
    rng: &mut impl Rng,
    max_vars: usize,
    max_cons: usize,
) -> (Vocab, Vec<Clause>) {
    let mut vocab = Vocab::new();
    let ncons = rng.gen_range(1..=max_cons);
    let clauses = (0..ncons)
        .map(|_| canonicalize([random_linear_literal(rng, &mut vocab, max_vars)]))
        .collect();
    (vocab, clauses)
}

/// A small pool of related linear literals over two variables, used to give
/// random proofs theory content.
fn lra_pool(vocab: &mut Vocab) -> Vec<Literal> {
    let x0 = vocab.theory_var("x0");
    let x1 = vocab.theory_var("x1");
    let lit = |terms: Vec<(_, _)>, rel, bound: i64| {
        linear_literal(terms, rel, rat(bound), true).unwrap()
    };
    vec![
        lit(vec![(x0.clone(), rat(1))], RawRelation::Lt, 0),
        lit(vec![(x0.clone(), rat(1))], RawRelation::Lt, 1),
        lit(vec![(x1.clone(), rat(1))], RawRelation::Le, 1),
        lit(
            vec![(x0.clone(), rat(1)), (x1.clone(), rat(1))],
            RawRelation::Lt,
            2,
        ),
        lit(vec![(x1.clone(), rat(1))], RawRelation::Eq, 0),
    ]
}

/// Valid-lemma candidates over the pool (filtered again at generation time).
fn lemma_candidates(vocab: &mut Vocab) -> Vec<Clause> {
    let pool = lra_pool(vocab);
    let x0 = vocab.theory_var("x0");
    let x1 = vocab.theory_var("x1");
    let x0_lt_2 = linear_literal([(x0, rat(1))], RawRelation::Lt, rat(2), true).unwrap();
    let x1_le_2 = linear_literal([(x1, rat(1))], RawRelation::Le, rat(2), true).unwrap();
    vec![
        canonicalize([pool[0].negated(), pool[1].clone()]),
        canonicalize([pool[0].negated(), x0_lt_2.clone()]),
        canonicalize([pool[2].negated(), x1_le_2]),
        canonicalize([pool[0].negated(), pool[2].negated(), pool[3].clone()]),
        canonicalize([pool[1].negated(), pool[4].negated(), pool[3].clone()]),
        canonicalize([pool[1].negated(), x0_lt_2]),
    ]
}

fn distinct_atoms(clauses: &[&Clause]) -> BTreeSet<Atom> {
    clauses
        .iter()
        .flat_map(|c| c.literals().iter().map(|l| l.atom().clone()))
        .collect()
}

/// A random refutation with its input clause set: a complete binomial
/// resolution tree over 1..=3 atoms (each mapped to a fresh Boolean atom or
/// a pool literal), where theory-valid width-m clauses may enter as strong
/// derivations instead of inputs, plus a few unused valid lemmas. Bounded by
/// 15 proof steps, 6 distinct atoms and 3 theory variables; every derived
/// clause is fresh and non-tautological.
pub fn random_refutation(rng: &mut impl Rng) -> (ClauseSet, Proof) {
    let mut vocab = Vocab::new();
    let m = rng.gen_range(1..=3usize);
    let mut pool = lra_pool(&mut vocab);
    pool.shuffle(rng);
    let mapped: Vec<Literal> = (0..m)
        .map(|i| {
            if rng.gen_bool(0.5) && !pool.is_empty() {
                pool.pop().unwrap()
            } else {
                Literal::positive(Atom::Bool(vocab.bool_atom(&format!("b{i}"))))
            }
        })
        .collect();

    let pattern = |mask: usize| -> Clause {
        canonicalize((0..m).map(|i| {
            if mask >> i & 1 == 1 {
                mapped[i].clone()
            } else {
                mapped[i].negated()
            }
        }))
    };

    // Every clause the tree will contain: sign patterns over atom prefixes.
    let mut tree_clauses: BTreeSet<Clause> = BTreeSet::new();
    for width in 0..=m {
        for mask in 0..(1usize << width) {
            tree_clauses.insert(canonicalize((0..width).map(|i| {
                if mask >> i & 1 == 1 {
                    mapped[i].clone()
                } else {
                    mapped[i].negated()
                }
            })));
        }
    }

    let mut proof = Proof::default();
    let mut inputs = ClauseSet::new();

    // Unused valid lemmas, kept within the step and atom budgets.
    let step_budget = 15usize.saturating_sub((1 << m) + ((1 << m) - 1));
    let mut lemmas = Vec::new();
    if step_budget > 0 {
        let mut candidates = lemma_candidates(&mut vocab);
        candidates.shuffle(rng);
        let want = rng.gen_range(0..=step_budget.min(3));
        for candidate in candidates {
            if lemmas.len() >= want {
                break;
            }
            if candidate.is_tautological()
                || tree_clauses.contains(&candidate)
                || lemmas.contains(&candidate)
                || !oracle::clause_valid(&candidate)
            {
                continue;
            }
            lemmas.push(candidate);
        }
        // Stay within six distinct atoms overall.
        loop {
            let mut all: Vec<&Clause> = tree_clauses.iter().collect();
            all.extend(lemmas.iter());
            if distinct_atoms(&all).len() <= 6 {
                break;
            }
            lemmas.pop();
        }
    }
    for lemma in lemmas {
        proof.steps.push(ProofStep::TheoryDerivation {
            clause: lemma,
            strength: Strength::Strong,
        });
    }

    // Width-m clauses: inputs, or strong derivations when theory-valid.
    let mut index: HashMap<usize, usize> = HashMap::new();
    for mask in 0..(1usize << m) {
        let clause = pattern(mask);
        if oracle::clause_valid(&clause) && rng.gen_bool(0.6) {
            proof.steps.push(ProofStep::TheoryDerivation {
                clause,
                strength: Strength::Strong,
            });
        } else {
            inputs.insert(clause.clone(), Origin::Input);
            proof.steps.push(ProofStep::Input { clause });
        }
        index.insert(mask, proof.steps.len() - 1);
    }

    // Resolve away atoms from the highest down to the empty clause.
    for level in (0..m).rev() {
        let mut next: HashMap<usize, usize> = HashMap::new();
        for mask in 0..(1usize << level) {
            let with = index[&(mask | (1 << level))];
            let without = index[&mask];
            let step = proof.push_resolution(with, without, mapped[level].clone());
            next.insert(mask, step);
        }
        index = next;
    }
    debug_assert!(proof.is_refutation());
    debug_assert!(proof.steps.len() <= 15);
    (inputs, proof)
}

/// Random mixed instance: Boolean atoms and linear atoms in the same clauses.
pub fn random_mixed_instance(
    rng: &mut impl Rng,
    max_bools: usize,
    max_vars: usize,
    max_clauses: usize,
) -> (Vocab, Vec<Clause>) {
    let mut vocab = Vocab::new();
    let nbools = rng.gen_range(1..=max_bools);
    let bool_atoms: Vec<_> = (0..nbools)
        .map(|i| vocab.bool_atom(&format!("p{i}")))
        .collect();
    // Draw linear atoms from a small pool so they recur across clauses.
    let pool_size = rng.gen_range(1..=3);
    let pool: Vec<Literal> = (0..pool_size)
        .map(|_| random_linear_literal(rng, &mut vocab, max_vars))
        .collect();
    let nclauses = rng.gen_range(1..=max_clauses);
    let mut clauses = Vec::with_capacity(nclauses);
    for _ in 0..nclauses {
        let width = rng.gen_range(1..=3);
        let mut lits = Vec::with_capacity(width);
        for _ in 0..width {
            if rng.gen_bool(0.5) {
                let atom = bool_atoms[rng.gen_range(0..nbools)].clone();
                lits.push(Literal::new(crate::Atom::Bool(atom), rng.gen_bool(0.5)));
            } else {
                let lit = pool[rng.gen_range(0..pool.len())].clone();
                lits.push(if rng.gen_bool(0.5) { lit } else { lit.negated() });
            }
        }
        clauses.push(canonicalize(lits));
    }
    (vocab, clauses)
}
