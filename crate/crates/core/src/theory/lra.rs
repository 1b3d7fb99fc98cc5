//! Linear rational arithmetic via Fourier-Motzkin elimination.
//!
//! Feasibility works on inequality rows with strictness flags; equalities
//! are split into two rows and disequalities are handled by checking whether
//! the inequality region forces the excluded hyperplane. Explanations come
//! out of the same elimination run: every derived row keeps the set of
//! asserted literals it was combined from, so a violated row over assigned
//! variables is both a valid consequence of its origins and false under the
//! current assignment.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::atoms::{Atom, Literal, Relation, TheoryVar};
use crate::clauses::{canonicalize, Clause};
use crate::theory::{
    is_consistent, Assignment, Explanation, ExplanationKind, FeasibilityMode, Theory, TheoryError,
};
use crate::{linear_literal, RawRelation, Rat};

/// Origin tag for constraint rows introduced by a disequality case split;
/// never a core literal index.
const SYNTHETIC: usize = usize::MAX;

/// `sum(terms) < bound` or `sum(terms) <= bound`, tagged with the indices of
/// the core literals entailing it.
#[derive(Clone, Debug)]
struct Row {
    terms: BTreeMap<TheoryVar, Rat>,
    strict: bool,
    bound: Rat,
    origins: BTreeSet<usize>,
}

impl Row {
    fn constant_holds(&self) -> bool {
        debug_assert!(self.terms.is_empty());
        if self.strict {
            self.bound.is_positive()
        } else {
            !self.bound.is_negative()
        }
    }

    fn value_at(&self, assignment: &Assignment) -> Option<Rat> {
        let mut sum = Rat::zero();
        for (v, c) in &self.terms {
            sum += c * assignment.get(v)?;
        }
        Some(sum)
    }

    fn holds_at(&self, assignment: &Assignment) -> Option<bool> {
        let sum = self.value_at(assignment)?;
        Some(if self.strict {
            sum < self.bound
        } else {
            sum <= self.bound
        })
    }
}

/// `sum(terms) != bound`.
#[derive(Clone, Debug)]
struct Diseq {
    terms: BTreeMap<TheoryVar, Rat>,
    bound: Rat,
    origin: usize,
}

fn negated_terms(terms: &BTreeMap<TheoryVar, Rat>) -> BTreeMap<TheoryVar, Rat> {
    terms.iter().map(|(v, c)| (v.clone(), -c.clone())).collect()
}

/// Adds the constraints asserted by `lit` to the system. Polarity determines
/// the direction: a negated `<` is `>=`, a negated `<=` is `>`, a negated
/// `=` is a disequality.
fn push_literal(lit: &Literal, origin: usize, rows: &mut Vec<Row>, diseqs: &mut Vec<Diseq>) {
    let lin = match lit.atom() {
        Atom::Linear(lin) => lin,
        Atom::Bool(_) => return,
    };
    let terms: BTreeMap<TheoryVar, Rat> = lin.terms().iter().cloned().collect();
    let bound = lin.bound().clone();
    let mut origins = BTreeSet::new();
    origins.insert(origin);
    match (lin.relation(), lit.is_positive()) {
        (Relation::Lt, true) => rows.push(Row {
            terms,
            strict: true,
            bound,
            origins,
        }),
        (Relation::Le, true) => rows.push(Row {
            terms,
            strict: false,
            bound,
            origins,
        }),
        (Relation::Eq, true) => {
            rows.push(Row {
                terms: terms.clone(),
                strict: false,
                bound: bound.clone(),
                origins: origins.clone(),
            });
            rows.push(Row {
                terms: negated_terms(&terms),
                strict: false,
                bound: -bound,
                origins,
            });
        }
        (Relation::Lt, false) => rows.push(Row {
            terms: negated_terms(&terms),
            strict: false,
            bound: -bound,
            origins,
        }),
        (Relation::Le, false) => rows.push(Row {
            terms: negated_terms(&terms),
            strict: true,
            bound: -bound,
            origins,
        }),
        (Relation::Eq, false) => diseqs.push(Diseq {
            terms,
            bound,
            origin,
        }),
    }
}

fn build_system(lits: &[Literal]) -> (Vec<Row>, Vec<Diseq>) {
    let mut rows = Vec::new();
    let mut diseqs = Vec::new();
    for (i, lit) in lits.iter().enumerate() {
        push_literal(lit, i, &mut rows, &mut diseqs);
    }
    (rows, diseqs)
}

fn substitute_row(row: &Row, assignment: &Assignment) -> Row {
    let mut terms = BTreeMap::new();
    let mut bound = row.bound.clone();
    for (v, c) in &row.terms {
        match assignment.get(v) {
            Some(val) => bound -= c * val,
            None => {
                terms.insert(v.clone(), c.clone());
            }
        }
    }
    Row {
        terms,
        strict: row.strict,
        bound,
        origins: row.origins.clone(),
    }
}

fn substitute_system(
    rows: &[Row],
    diseqs: &[Diseq],
    assignment: &Assignment,
) -> (Vec<Row>, Vec<Diseq>) {
    let rows = rows.iter().map(|r| substitute_row(r, assignment)).collect();
    let diseqs = diseqs
        .iter()
        .map(|d| {
            let tmp = Row {
                terms: d.terms.clone(),
                strict: false,
                bound: d.bound.clone(),
                origins: BTreeSet::new(),
            };
            let s = substitute_row(&tmp, assignment);
            Diseq {
                terms: s.terms,
                bound: s.bound,
                origin: d.origin,
            }
        })
        .collect();
    (rows, diseqs)
}

/// One elimination step: every pair of an upper and a lower bound on `var`
/// combines into a row without it.
fn eliminate_var(rows: Vec<Row>, var: &TheoryVar) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::new();
    let mut uppers: Vec<Row> = Vec::new();
    let mut lowers: Vec<Row> = Vec::new();
    for row in rows {
        match row.terms.get(var) {
            None => out.push(row),
            Some(c) if c.is_positive() => uppers.push(row),
            Some(_) => lowers.push(row),
        }
    }
    for u in &uppers {
        for l in &lowers {
            let cu = u.terms[var].clone();
            let cl = l.terms[var].clone();
            // (-cl)*u + cu*l cancels var; both scales are positive.
            let su = -cl;
            let sl = cu;
            let mut terms: BTreeMap<TheoryVar, Rat> = BTreeMap::new();
            for (v, c) in &u.terms {
                if v != var {
                    terms.insert(v.clone(), c * &su);
                }
            }
            for (v, c) in &l.terms {
                if v == var {
                    continue;
                }
                let entry = terms.entry(v.clone()).or_insert_with(Rat::zero);
                *entry += c * &sl;
            }
            terms.retain(|_, c| !c.is_zero());
            let bound = &u.bound * &su + &l.bound * &sl;
            let origins: BTreeSet<usize> = u.origins.union(&l.origins).cloned().collect();
            out.push(Row {
                terms,
                strict: u.strict || l.strict,
                bound,
                origins,
            });
        }
    }
    dedupe(out)
}

/// Normalizes rows (positive scaling to a unit leading coefficient) and
/// drops duplicates and trivially true constants. First occurrence wins, so
/// the result is deterministic in the input order.
fn dedupe(rows: Vec<Row>) -> Vec<Row> {
    let mut seen: BTreeSet<(Vec<(TheoryVar, Rat)>, bool, Rat)> = BTreeSet::new();
    let mut out = Vec::new();
    for mut row in rows {
        if row.terms.is_empty() && row.constant_holds() {
            continue;
        }
        if let Some((_, lead)) = row.terms.iter().next() {
            let scale = lead.abs();
            for (_, c) in row.terms.iter_mut() {
                *c = &*c / &scale;
            }
            row.bound = &row.bound / &scale;
        }
        let key = (
            row.terms.iter().map(|(v, c)| (v.clone(), c.clone())).collect(),
            row.strict,
            row.bound.clone(),
        );
        if seen.insert(key) {
            out.push(row);
        }
    }
    out
}

/// Eliminates, in canonical order, every variable `keep` rejects.
fn eliminate_all(mut rows: Vec<Row>, keep: &dyn Fn(&TheoryVar) -> bool) -> Vec<Row> {
    loop {
        let var = rows
            .iter()
            .flat_map(|r| r.terms.keys())
            .filter(|v| !keep(v))
            .min()
            .cloned();
        match var {
            Some(v) => rows = eliminate_var(rows, &v),
            None => return rows,
        }
    }
}

fn rows_feasible(rows: Vec<Row>) -> bool {
    eliminate_all(rows, &|_| false)
        .iter()
        .all(Row::constant_holds)
}

/// Feasibility of inequalities plus disequalities. A disequality makes the
/// system infeasible exactly when the inequality region forces the excluded
/// hyperplane (a convex set avoids a finite union of hyperplanes unless it
/// lies inside one of them), so each is checked against both open sides.
fn system_feasible(rows: &[Row], diseqs: &[Diseq]) -> bool {
    if !rows_feasible(rows.to_vec()) {
        return false;
    }
    for d in diseqs {
        if d.terms.is_empty() {
            if d.bound.is_zero() {
                return false;
            }
            continue;
        }
        let below = Row {
            terms: d.terms.clone(),
            strict: true,
            bound: d.bound.clone(),
            origins: BTreeSet::from([SYNTHETIC]),
        };
        let above = Row {
            terms: negated_terms(&d.terms),
            strict: true,
            bound: -d.bound.clone(),
            origins: BTreeSet::from([SYNTHETIC]),
        };
        let mut with_below = rows.to_vec();
        with_below.push(below);
        let mut with_above = rows.to_vec();
        with_above.push(above);
        if !rows_feasible(with_below) && !rows_feasible(with_above) {
            return false;
        }
    }
    true
}

/// A violated projection row: the core literals it came from, and its
/// literal form unless it is a constant contradiction.
struct Witness {
    origins: BTreeSet<usize>,
    literal: Option<Literal>,
}

/// Picks the first (in canonical row order) derived row that fails under the
/// assignment, preferring constant contradictions since they need no new
/// literal in the lemma.
fn choose_witness(derived: &[Row], assignment: &Assignment) -> Option<Witness> {
    let mut violated: Vec<&Row> = derived
        .iter()
        .filter(|r| {
            if r.terms.is_empty() {
                !r.constant_holds()
            } else {
                r.holds_at(assignment) == Some(false)
            }
        })
        .collect();
    violated.sort_by_key(|r| {
        (
            r.terms.iter().map(|(v, c)| (v.clone(), c.clone())).collect::<Vec<_>>(),
            r.strict,
            r.bound.clone(),
        )
    });
    let row = violated.first()?;
    let literal = if row.terms.is_empty() {
        None
    } else {
        Some(
            linear_literal(
                row.terms.iter().map(|(v, c)| (v.clone(), c.clone())),
                if row.strict {
                    RawRelation::Lt
                } else {
                    RawRelation::Le
                },
                row.bound.clone(),
                true,
            )
            .expect("derived row has nonzero coefficients"),
        )
    };
    Some(Witness {
        origins: row.origins.clone(),
        literal,
    })
}

fn unassigned_vars(atom: &Atom, assignment: &Assignment) -> usize {
    match atom.as_linear() {
        Some(lin) => lin.vars().filter(|v| !assignment.is_assigned(v)).count(),
        None => 0,
    }
}

/// Linear rational arithmetic with a configurable feasibility mode.
#[derive(Clone, Copy, Debug)]
pub struct LraTheory {
    mode: FeasibilityMode,
}

impl LraTheory {
    pub fn new(mode: FeasibilityMode) -> Self {
        LraTheory { mode }
    }

    pub fn complete() -> Self {
        Self::new(FeasibilityMode::Complete)
    }

    pub fn univariate() -> Self {
        Self::new(FeasibilityMode::UnivariateOnly)
    }

    /// The linear literals the active mode may reason about, sorted and
    /// deduplicated for deterministic cores.
    fn relevant(&self, asserted: &[Literal], assignment: &Assignment) -> Vec<Literal> {
        let mut lits: Vec<Literal> = asserted
            .iter()
            .filter(|l| matches!(l.atom(), Atom::Linear(_)))
            .cloned()
            .collect();
        lits.sort();
        lits.dedup();
        if self.mode == FeasibilityMode::UnivariateOnly {
            lits.retain(|l| unassigned_vars(l.atom(), assignment) == 1);
        }
        lits
    }

    fn substituted_infeasible(lits: &[Literal], assignment: &Assignment) -> bool {
        let (rows, diseqs) = build_system(lits);
        let (rows, diseqs) = substitute_system(&rows, &diseqs, assignment);
        !system_feasible(&rows, &diseqs)
    }
}

impl Theory for LraTheory {
    fn mode(&self) -> FeasibilityMode {
        self.mode
    }

    fn infeasible(&self, asserted: &[Literal], assignment: &Assignment) -> bool {
        let lits = self.relevant(asserted, assignment);
        Self::substituted_infeasible(&lits, assignment)
    }

    fn explain(
        &self,
        asserted: &[Literal],
        assignment: &Assignment,
        kind: ExplanationKind,
    ) -> Result<Explanation, TheoryError> {
        if !is_consistent(asserted, assignment) {
            return Err(TheoryError::InconsistentAssertions);
        }
        let mut core = self.relevant(asserted, assignment);
        if !Self::substituted_infeasible(&core, assignment) {
            return Err(TheoryError::NotInfeasible);
        }
        // Greedy drop-one minimization in canonical order.
        let mut i = 0;
        while i < core.len() {
            let mut without = core.clone();
            without.remove(i);
            if Self::substituted_infeasible(&without, assignment) {
                core = without;
            } else {
                i += 1;
            }
        }

        let (rows, diseqs) = build_system(&core);
        let keep = |v: &TheoryVar| assignment.is_assigned(v);
        let mut lits: BTreeSet<Literal> = BTreeSet::new();

        if diseqs.is_empty() {
            let derived = eliminate_all(rows, &keep);
            let w = choose_witness(&derived, assignment).ok_or(TheoryError::NoWitness)?;
            for &o in &w.origins {
                lits.insert(core[o].negated());
            }
            if let Some(l) = w.literal {
                lits.insert(l);
            }
        } else {
            // A locally minimal core holds at most one disequality: if the
            // inequality region avoided both excluded hyperplanes
            // individually, it would avoid their union.
            debug_assert_eq!(diseqs.len(), 1);
            let d = &diseqs[0];
            let branches = [
                Row {
                    terms: d.terms.clone(),
                    strict: true,
                    bound: d.bound.clone(),
                    origins: BTreeSet::from([SYNTHETIC]),
                },
                Row {
                    terms: negated_terms(&d.terms),
                    strict: true,
                    bound: -d.bound.clone(),
                    origins: BTreeSet::from([SYNTHETIC]),
                },
            ];
            for branch in branches {
                let mut sys = rows.clone();
                sys.push(branch);
                let derived = eliminate_all(sys, &keep);
                let w = choose_witness(&derived, assignment).ok_or(TheoryError::NoWitness)?;
                for &o in &w.origins {
                    if o != SYNTHETIC {
                        lits.insert(core[o].negated());
                    }
                }
                if let Some(l) = w.literal {
                    lits.insert(l);
                }
            }
            lits.insert(core[d.origin].negated());
        }
        Ok(Explanation {
            clause: canonicalize(lits),
            kind,
        })
    }

    fn is_valid(&self, clause: &Clause) -> bool {
        if clause.is_tautological() {
            return true;
        }
        // Valid iff the negation of the linear part is infeasible; Boolean
        // literals cannot contribute outside a complementary pair.
        let negated: Vec<Literal> = clause
            .literals()
            .iter()
            .filter(|l| matches!(l.atom(), Atom::Linear(_)))
            .map(|l| l.negated())
            .collect();
        if negated.is_empty() {
            return false;
        }
        Self::substituted_infeasible(&negated, &Assignment::new())
    }

    fn pick_value(
        &self,
        var: &TheoryVar,
        asserted: &[Literal],
        assignment: &Assignment,
    ) -> Option<Rat> {
        debug_assert!(!assignment.is_assigned(var));
        // Bounds from literals whose only unassigned variable is `var`.
        let mut lower: Option<(Rat, bool)> = None;
        let mut upper: Option<(Rat, bool)> = None;
        let mut excluded: BTreeSet<Rat> = BTreeSet::new();
        for lit in asserted {
            if lit.atom().as_linear().is_none() {
                continue;
            }
            let lin = lit.atom().as_linear().unwrap();
            let relevant = lin
                .vars()
                .all(|v| v == var || assignment.is_assigned(v))
                && lin.vars().any(|v| v == var);
            if !relevant {
                continue;
            }
            let mut rows = Vec::new();
            let mut diseqs = Vec::new();
            push_literal(lit, 0, &mut rows, &mut diseqs);
            let (rows, diseqs) = substitute_system(&rows, &diseqs, assignment);
            for row in rows {
                let coeff = row.terms.get(var).cloned().unwrap_or_else(Rat::zero);
                debug_assert!(!coeff.is_zero());
                let value = &row.bound / &coeff;
                if coeff.is_positive() {
                    // x <= value (or <)
                    let tighter = match &upper {
                        None => true,
                        Some((u, us)) => value < *u || (value == *u && row.strict && !us),
                    };
                    if tighter {
                        upper = Some((value, row.strict));
                    }
                } else {
                    // x >= value (or >)
                    let tighter = match &lower {
                        None => true,
                        Some((l, ls)) => value > *l || (value == *l && row.strict && !ls),
                    };
                    if tighter {
                        lower = Some((value, row.strict));
                    }
                }
            }
            for d in diseqs {
                let coeff = d.terms.get(var).cloned().unwrap_or_else(Rat::zero);
                debug_assert!(!coeff.is_zero());
                excluded.insert(&d.bound / &coeff);
            }
        }

        if let (Some((l, ls)), Some((u, us))) = (&lower, &upper) {
            if l > u || (l == u && (*ls || *us)) {
                return None;
            }
            if l == u {
                return if excluded.contains(l) {
                    None
                } else {
                    Some(l.clone())
                };
            }
        }

        // Smallest denominator first; within one denominator non-negative
        // numerators ascending, then negative ones closest to zero.
        let margin = excluded.len() as i64 + 1;
        let q_cap: u64 = match (&lower, &upper) {
            (Some((l, _)), Some((u, _))) => {
                let len = u - l;
                let need = crate::rat(margin + 2) / len;
                (need.ceil().to_integer().max(1.into()))
                    .try_into()
                    .unwrap_or(u64::MAX)
            }
            _ => 1,
        };
        for q in 1..=q_cap.saturating_add(2) {
            let qr = crate::rat(q as i64);
            let p_lo = lower.as_ref().map(|(l, strict)| {
                let scaled = l * &qr;
                let mut p = scaled.ceil().to_integer();
                if *strict && Rat::from_integer(p.clone()) == scaled {
                    p += 1;
                }
                p
            });
            let p_hi = upper.as_ref().map(|(u, strict)| {
                let scaled = u * &qr;
                let mut p = scaled.floor().to_integer();
                if *strict && Rat::from_integer(p.clone()) == scaled {
                    p -= 1;
                }
                p
            });
            if let (Some(lo), Some(hi)) = (&p_lo, &p_hi) {
                if lo > hi {
                    continue;
                }
            }
            let zero = num_bigint::BigInt::from(0);
            // Non-negative candidates.
            let start = p_lo.clone().unwrap_or_else(|| zero.clone()).max(zero.clone());
            let end = match &p_hi {
                Some(hi) => hi.clone(),
                None => &start + margin,
            };
            let mut p = start.clone();
            while p <= end {
                let candidate = Rat::new(p.clone(), qr.numer().clone());
                if !excluded.contains(&candidate) {
                    return Some(candidate);
                }
                p += 1;
            }
            // Negative candidates, closest to zero first.
            let neg_one = num_bigint::BigInt::from(-1);
            let hi_n = p_hi.clone().unwrap_or_else(|| neg_one.clone()).min(neg_one);
            let lo_n = match &p_lo {
                Some(lo) => lo.clone(),
                None => &hi_n - margin,
            };
            let mut p = hi_n.clone();
            while p >= lo_n {
                let candidate = Rat::new(p.clone(), qr.numer().clone());
                if !excluded.contains(&candidate) {
                    return Some(candidate);
                }
                p -= 1;
            }
        }
        None
    }
}
