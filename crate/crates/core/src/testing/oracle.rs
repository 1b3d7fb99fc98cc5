//! Independent decision oracles used only by test suites.
//!
//! Nothing here shares code with the solving path in `theory`: constraints
//! are re-extracted from literals with their own negation semantics, kept in
//! dense form, and decided by two unrelated procedures (basic-point
//! enumeration and a small recursive elimination). Disequalities are handled
//! by exhaustive case splitting rather than any convexity shortcut.
//!
//! Inputs are expected to be desk-scale (a handful of variables, small
//! integer coefficients); the box bound below is sized for that.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::atoms::{Atom, Literal, Relation, TheoryVar};
use crate::clauses::Clause;
use crate::{rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleOp {
    Lt,
    Le,
    Ge,
    Gt,
    Eq,
    Ne,
}

/// One constraint as the oracle sees it: `sum coeffs OP bound`.
#[derive(Clone, Debug)]
pub struct OracleCon {
    pub coeffs: Vec<(TheoryVar, Rat)>,
    pub op: OracleOp,
    pub bound: Rat,
}

/// Reads a literal as a constraint. Boolean literals have no theory content.
pub fn oracle_constraint(lit: &Literal) -> Option<OracleCon> {
    let lin = match lit.atom() {
        Atom::Linear(lin) => lin,
        Atom::Bool(_) => return None,
    };
    let op = match (lin.relation(), lit.is_positive()) {
        (Relation::Lt, true) => OracleOp::Lt,
        (Relation::Le, true) => OracleOp::Le,
        (Relation::Eq, true) => OracleOp::Eq,
        (Relation::Lt, false) => OracleOp::Ge,
        (Relation::Le, false) => OracleOp::Gt,
        (Relation::Eq, false) => OracleOp::Ne,
    };
    Some(OracleCon {
        coeffs: lin.terms().to_vec(),
        op,
        bound: lin.bound().clone(),
    })
}

/// Constraints asserted by a set of literals (Boolean literals ignored).
pub fn constraints_of(lits: &[Literal]) -> Vec<OracleCon> {
    lits.iter().filter_map(oracle_constraint).collect()
}

fn vars_of(cons: &[OracleCon]) -> Vec<TheoryVar> {
    let mut vars: BTreeSet<TheoryVar> = BTreeSet::new();
    for c in cons {
        for (v, _) in &c.coeffs {
            vars.insert(v.clone());
        }
    }
    vars.into_iter().collect()
}

fn dense(coeffs: &[(TheoryVar, Rat)], vars: &[TheoryVar]) -> Vec<Rat> {
    let mut row = vec![Rat::zero(); vars.len()];
    for (v, c) in coeffs {
        let idx = vars.iter().position(|w| w == v).unwrap();
        row[idx] = c.clone();
    }
    row
}

/// Replaces every `!=` by `<` or `>` in all combinations and tries each
/// resulting system with `f`.
fn split_disequalities(cons: &[OracleCon], f: &dyn Fn(&[OracleCon]) -> bool) -> bool {
    let ne_positions: Vec<usize> = cons
        .iter()
        .enumerate()
        .filter(|(_, c)| c.op == OracleOp::Ne)
        .map(|(i, _)| i)
        .collect();
    if ne_positions.is_empty() {
        return f(cons);
    }
    assert!(ne_positions.len() <= 16, "too many disequalities for oracle");
    for mask in 0u32..(1 << ne_positions.len()) {
        let mut alt = cons.to_vec();
        for (bit, &pos) in ne_positions.iter().enumerate() {
            alt[pos].op = if mask & (1 << bit) != 0 {
                OracleOp::Lt
            } else {
                OracleOp::Gt
            };
        }
        if f(&alt) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Basic-point enumeration
// ---------------------------------------------------------------------------

/// Decides feasibility over the rationals by enumerating basic points.
///
/// The system is boxed with `|x_i| <= 10^6` and every strict inequality gets
/// a shared slack variable `eps`; the original system is feasible iff some
/// basic point of the boxed closed system has `eps > 0`. Valid for the small
/// integer coefficients used in tests (any feasible system of that size has
/// a solution comfortably inside the box).
pub fn vertex_feasible(cons: &[OracleCon]) -> bool {
    split_disequalities(cons, &vertex_feasible_no_ne)
}

fn vertex_feasible_no_ne(cons: &[OracleCon]) -> bool {
    if cons.is_empty() {
        return true;
    }
    let vars = vars_of(cons);
    let n = vars.len();
    let dim = n + 1; // last column is eps
    let big = rat(1_000_000);

    // Rows: a . (x, eps) <= b, or equality when marked.
    let mut rows: Vec<(Vec<Rat>, Rat, bool)> = Vec::new();
    for c in cons {
        let mut a = dense(&c.coeffs, &vars);
        a.push(Rat::zero());
        let b = c.bound.clone();
        match c.op {
            OracleOp::Le => rows.push((a, b, false)),
            OracleOp::Lt => {
                a[n] = Rat::one();
                rows.push((a, b, false));
            }
            OracleOp::Ge => {
                let neg: Vec<Rat> = a.iter().map(|x| -x.clone()).collect();
                rows.push((neg, -b, false));
            }
            OracleOp::Gt => {
                let mut neg: Vec<Rat> = a.iter().map(|x| -x.clone()).collect();
                neg[n] = Rat::one();
                rows.push((neg, -b, false));
            }
            OracleOp::Eq => rows.push((a, b, true)),
            OracleOp::Ne => unreachable!("disequalities are split before enumeration"),
        }
    }
    // 0 <= eps <= 1 and the box.
    let mut eps_low = vec![Rat::zero(); dim];
    eps_low[n] = -Rat::one();
    rows.push((eps_low, Rat::zero(), false));
    let mut eps_high = vec![Rat::zero(); dim];
    eps_high[n] = Rat::one();
    rows.push((eps_high, Rat::one(), false));
    for i in 0..n {
        let mut up = vec![Rat::zero(); dim];
        up[i] = Rat::one();
        rows.push((up, big.clone(), false));
        let mut down = vec![Rat::zero(); dim];
        down[i] = -Rat::one();
        rows.push((down, big.clone(), false));
    }

    let mut subset = vec![0usize; dim];
    subsets(rows.len(), dim, &mut subset, 0, 0, &mut |chosen| {
        let matrix: Vec<Vec<Rat>> = chosen.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs: Vec<Rat> = chosen.iter().map(|&i| rows[i].1.clone()).collect();
        let point = match solve_square(matrix, rhs) {
            Some(p) => p,
            None => return false,
        };
        if !point[n].is_positive() {
            return false;
        }
        rows.iter().all(|(a, b, is_eq)| {
            let lhs: Rat = a
                .iter()
                .zip(&point)
                .map(|(c, x)| c * x)
                .fold(Rat::zero(), |acc, t| acc + t);
            if *is_eq {
                lhs == *b
            } else {
                lhs <= *b
            }
        })
    })
}

/// Calls `found` on each k-subset of 0..n until it returns true.
fn subsets(
    n: usize,
    k: usize,
    buf: &mut Vec<usize>,
    start: usize,
    depth: usize,
    found: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if depth == k {
        return found(&buf[..k]);
    }
    for i in start..n {
        buf[depth] = i;
        if subsets(n, k, buf, i + 1, depth + 1, found) {
            return true;
        }
    }
    false
}

/// Gaussian elimination over the rationals; `None` when singular.
fn solve_square(mut m: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &delta;
            }
            let delta = &factor * &b[col];
            b[r] = &b[r] - &delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

// ---------------------------------------------------------------------------
// Standalone elimination oracle
// ---------------------------------------------------------------------------

/// Feasibility by plain variable elimination on dense rows. Written as a
/// second, unrelated implementation; equalities are split into two
/// inequalities and disequalities into explicit cases.
pub fn fm_feasible(cons: &[OracleCon]) -> bool {
    split_disequalities(cons, &fm_feasible_no_ne)
}

fn fm_feasible_no_ne(cons: &[OracleCon]) -> bool {
    let vars = vars_of(cons);
    // (coefficients, strict, rhs) meaning a.x < rhs or a.x <= rhs
    let mut rows: Vec<(Vec<Rat>, bool, Rat)> = Vec::new();
    for c in cons {
        let a = dense(&c.coeffs, &vars);
        let neg: Vec<Rat> = a.iter().map(|x| -x.clone()).collect();
        match c.op {
            OracleOp::Lt => rows.push((a, true, c.bound.clone())),
            OracleOp::Le => rows.push((a, false, c.bound.clone())),
            OracleOp::Gt => rows.push((neg, true, -c.bound.clone())),
            OracleOp::Ge => rows.push((neg, false, -c.bound.clone())),
            OracleOp::Eq => {
                rows.push((a, false, c.bound.clone()));
                rows.push((neg, false, -c.bound.clone()));
            }
            OracleOp::Ne => unreachable!("disequalities are split before elimination"),
        }
    }
    eliminate(rows, 0, vars.len())
}

fn eliminate(rows: Vec<(Vec<Rat>, bool, Rat)>, col: usize, ncols: usize) -> bool {
    if col == ncols {
        return rows
            .iter()
            .all(|(_, strict, rhs)| if *strict { rhs.is_positive() } else { !rhs.is_negative() });
    }
    let mut next: Vec<(Vec<Rat>, bool, Rat)> = Vec::new();
    let mut uppers: Vec<&(Vec<Rat>, bool, Rat)> = Vec::new();
    let mut lowers: Vec<&(Vec<Rat>, bool, Rat)> = Vec::new();
    for row in &rows {
        if row.0[col].is_zero() {
            next.push(row.clone());
        } else if row.0[col].is_positive() {
            uppers.push(row);
        } else {
            lowers.push(row);
        }
    }
    for (ua, ustrict, ub) in &uppers {
        for (la, lstrict, lb) in &lowers {
            // upper: cu*x + r <= ub with cu > 0, lower: cl*x + s <= lb with cl < 0.
            // Scale by -cl and cu respectively and add; x drops out.
            let cu = &ua[col];
            let cl = &la[col];
            let a: Vec<Rat> = ua
                .iter()
                .zip(la.iter())
                .map(|(u, l)| u * &(-cl.clone()) + l * cu)
                .collect();
            let b = ub * &(-cl.clone()) + lb * cu;
            next.push((a, *ustrict || *lstrict, b));
        }
    }
    eliminate(next, col + 1, ncols)
}

// ---------------------------------------------------------------------------
// Truth-table SMT oracle
// ---------------------------------------------------------------------------

/// Brute-force satisfiability: enumerates polarities of every atom (Boolean
/// and linear alike), keeps assignments satisfying all clauses, and accepts
/// when the linear constraints implied by the chosen polarities are feasible.
pub fn brute_force_sat(clauses: &[Clause]) -> bool {
    let atoms: Vec<Atom> = {
        let mut set: BTreeSet<Atom> = BTreeSet::new();
        for c in clauses {
            for l in c.literals() {
                set.insert(l.atom().clone());
            }
        }
        set.into_iter().collect()
    };
    assert!(atoms.len() <= 20, "too many atoms for brute force");
    for mask in 0u64..(1u64 << atoms.len()) {
        let truth = |atom: &Atom| -> bool {
            let idx = atoms.binary_search(atom).unwrap();
            mask & (1 << idx) != 0
        };
        let all_satisfied = clauses.iter().all(|c| {
            c.literals()
                .iter()
                .any(|l| truth(l.atom()) == l.is_positive())
        });
        if !all_satisfied {
            continue;
        }
        let cons: Vec<OracleCon> = atoms
            .iter()
            .filter(|a| matches!(a, Atom::Linear(_)))
            .map(|a| {
                let lit = Literal::new(a.clone(), truth(a));
                oracle_constraint(&lit).unwrap()
            })
            .collect();
        if fm_feasible(&cons) {
            return true;
        }
    }
    false
}

/// Oracle-side validity: tautology or infeasible negation of the linear part.
pub fn clause_valid(clause: &Clause) -> bool {
    if clause.is_tautological() {
        return true;
    }
    // A non-tautological clause is valid only through its linear part: a
    // Boolean sub-clause without complementary pair can always be falsified.
    // The empty system is feasible, so a clause with no linear literal ends
    // up invalid here as it should.
    let negated: Vec<OracleCon> = clause
        .literals()
        .iter()
        .filter_map(|l| oracle_constraint(&l.negated()))
        .collect();
    !fm_feasible(&negated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::build::*;
    use crate::Vocab;

    fn system(lits: &[Literal]) -> Vec<OracleCon> {
        constraints_of(lits)
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut v = Vocab::new();
        let sys = system(&[lt(&mut v, "x", 0), gt(&mut v, "x", 1)]);
        assert!(!vertex_feasible(&sys));
        assert!(!fm_feasible(&sys));
    }

    #[test]
    fn single_bound_is_feasible() {
        let mut v = Vocab::new();
        let sys = system(&[lt(&mut v, "x", 0)]);
        assert!(vertex_feasible(&sys));
        assert!(fm_feasible(&sys));
    }

    #[test]
    fn multivariate_contradiction_is_infeasible() {
        let mut v = Vocab::new();
        let a = lin(&mut v, &[("x", 1), ("y", 1)], RawRelation::Lt, 0);
        let b = lin(&mut v, &[("x", 1), ("y", 1)], RawRelation::Gt, 1);
        let sys = system(&[a, b]);
        assert!(!vertex_feasible(&sys));
        assert!(!fm_feasible(&sys));
    }

    #[test]
    fn strict_cycle_is_infeasible() {
        let mut v = Vocab::new();
        let xy = lin(&mut v, &[("x", 1), ("y", -1)], RawRelation::Lt, 0);
        let yz = lin(&mut v, &[("y", 1), ("z", -1)], RawRelation::Lt, 0);
        let zx = lin(&mut v, &[("z", 1), ("x", -1)], RawRelation::Lt, 0);
        let sys = system(&[xy.clone(), yz.clone(), zx.clone()]);
        assert!(!vertex_feasible(&sys));
        assert!(!fm_feasible(&sys));
        // dropping any edge leaves it feasible
        let sys = system(&[xy, yz]);
        assert!(vertex_feasible(&sys));
        assert!(fm_feasible(&sys));
    }

    #[test]
    fn open_interval_is_feasible() {
        let mut v = Vocab::new();
        let sys = system(&[gt(&mut v, "x", 0), lt(&mut v, "x", 1)]);
        assert!(vertex_feasible(&sys));
        assert!(fm_feasible(&sys));
    }

    #[test]
    fn pinned_point_with_disequality_is_infeasible() {
        let mut v = Vocab::new();
        let sys = system(&[
            le(&mut v, "x", 0),
            ge(&mut v, "x", 0),
            eq_lit(&mut v, "x", 0).negated(),
        ]);
        assert!(!vertex_feasible(&sys));
        assert!(!fm_feasible(&sys));

        let sys = system(&[le(&mut v, "x", 0), eq_lit(&mut v, "x", 1).negated()]);
        assert!(vertex_feasible(&sys));
        assert!(fm_feasible(&sys));
    }

    #[test]
    fn equality_chain_with_disequality() {
        let mut v = Vocab::new();
        let x_eq_y = lin(&mut v, &[("x", 1), ("y", -1)], RawRelation::Eq, 0);
        let sys = system(&[x_eq_y.clone(), x_eq_y.negated()]);
        assert!(!vertex_feasible(&sys));
        assert!(!fm_feasible(&sys));
    }

    #[test]
    fn far_away_regions_stay_inside_the_box()
    {
        let mut v = Vocab::new();
        let sys = system(&[gt(&mut v, "x", 5), lt(&mut v, "x", 6)]);
        assert!(vertex_feasible(&sys));
        assert!(fm_feasible(&sys));
    }

    #[test]
    fn brute_force_matches_hand_results() {
        let mut v = Vocab::new();
        let a = blit(&mut v, "a", true);
        let b = blit(&mut v, "b", true);
        // {a|b} is satisfiable, {a},{~a} is not
        assert!(brute_force_sat(&[crate::canonicalize([a.clone(), b])]));
        assert!(!brute_force_sat(&[
            crate::canonicalize([a.clone()]),
            crate::canonicalize([a.negated()]),
        ]));
        // mixed: {x<0}, {x>1} unsat; {a | x<0} sat
        let mut v = Vocab::new();
        let l0 = lt(&mut v, "x", 0);
        let g1 = gt(&mut v, "x", 1);
        assert!(!brute_force_sat(&[
            crate::canonicalize([l0.clone()]),
            crate::canonicalize([g1]),
        ]));
        let a = blit(&mut v, "a", true);
        assert!(brute_force_sat(&[crate::canonicalize([a, l0])]));
    }

    #[test]
    fn clause_validity_examples() {
        let mut v = Vocab::new();
        // {~(x<0), ~(x>1)} is valid, {x<0} is not, {a, ~a} is valid
        let lemma = crate::canonicalize([lt(&mut v, "x", 0).negated(), gt(&mut v, "x", 1).negated()]);
        assert!(clause_valid(&lemma));
        let not_lemma = crate::canonicalize([lt(&mut v, "x", 0)]);
        assert!(!clause_valid(&not_lemma));
        let a = blit(&mut v, "a", true);
        assert!(clause_valid(&crate::canonicalize([a.clone(), a.negated()])));
        assert!(!clause_valid(&crate::canonicalize([a])));
    }
}
