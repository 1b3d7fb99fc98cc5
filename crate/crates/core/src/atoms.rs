//! Atoms, literals and the symbol table they are built over.
//!
//! Every atom is stored in a canonical form so that structural equality
//! coincides with identity of the stored constraint:
//!
//! * linear atoms keep their terms sorted by variable and scaled so that the
//!   first nonzero coefficient is exactly `1`; a raw constraint whose leading
//!   coefficient is negative is represented by the *negation* of the flipped
//!   atom (the relation set `{<, <=, =}` is closed under scaling by positive
//!   rationals only),
//! * `>` and `>=` are likewise expressed through negated `<=` / `<` atoms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::Rat;

/// A theory (rational) variable. Identity is the numeric id; the name is
/// carried along purely for display and serialization.
#[derive(Clone, Debug)]
pub struct TheoryVar {
    id: u32,
    name: Arc<str>,
}

impl TheoryVar {
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl PartialEq for TheoryVar {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for TheoryVar {}
impl PartialOrd for TheoryVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for TheoryVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id)
    }
}
impl Hash for TheoryVar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}
impl fmt::Display for TheoryVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A Boolean atom (a propositional variable). Same identity rules as
/// [`TheoryVar`].
#[derive(Clone, Debug)]
pub struct BoolAtom {
    id: u32,
    name: Arc<str>,
}

impl BoolAtom {
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl PartialEq for BoolAtom {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for BoolAtom {}
impl PartialOrd for BoolAtom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for BoolAtom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id)
    }
}
impl Hash for BoolAtom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}
impl fmt::Display for BoolAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Interns Boolean atoms and theory variables by name, assigning dense ids in
/// declaration order. Ids are what canonical ordering is based on, so parsing
/// the same declarations in the same order reproduces identical atoms.
#[derive(Debug, Default, Clone)]
pub struct Vocab {
    bools: Vec<BoolAtom>,
    vars: Vec<TheoryVar>,
    bool_by_name: HashMap<Arc<str>, u32>,
    var_by_name: HashMap<Arc<str>, u32>,
}

impl Vocab {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bool_atom(&mut self, name: &str) -> BoolAtom {
        if let Some(&id) = self.bool_by_name.get(name) {
            return self.bools[id as usize].clone();
        }
        let name: Arc<str> = Arc::from(name);
        let id = self.bools.len() as u32;
        let atom = BoolAtom {
            id,
            name: name.clone(),
        };
        self.bools.push(atom.clone());
        self.bool_by_name.insert(name, id);
        atom
    }

    pub fn theory_var(&mut self, name: &str) -> TheoryVar {
        if let Some(&id) = self.var_by_name.get(name) {
            return self.vars[id as usize].clone();
        }
        let name: Arc<str> = Arc::from(name);
        let id = self.vars.len() as u32;
        let var = TheoryVar {
            id,
            name: name.clone(),
        };
        self.vars.push(var.clone());
        self.var_by_name.insert(name, id);
        var
    }

    pub fn lookup_bool(&self, name: &str) -> Option<BoolAtom> {
        self.bool_by_name
            .get(name)
            .map(|&id| self.bools[id as usize].clone())
    }

    pub fn lookup_var(&self, name: &str) -> Option<TheoryVar> {
        self.var_by_name
            .get(name)
            .map(|&id| self.vars[id as usize].clone())
    }

    pub fn bools(&self) -> impl Iterator<Item = &BoolAtom> {
        self.bools.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &TheoryVar> {
        self.vars.iter()
    }
}

/// Relation of a canonical linear atom. `>` and `>=` are not representable
/// directly; they live in the polarity of the enclosing literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Lt,
    Le,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        })
    }
}

/// Relation as written in input, before canonicalization folds `>`/`>=` into
/// literal polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RawRelation {
    Lt,
    Le,
    Eq,
    Gt,
    Ge,
}

/// A canonical linear constraint `t1*x1 + ... + tn*xn REL bound` with the
/// terms sorted by variable and the first coefficient equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearAtom {
    terms: Vec<(TheoryVar, Rat)>,
    relation: Relation,
    bound: Rat,
}

impl LinearAtom {
    pub fn terms(&self) -> &[(TheoryVar, Rat)] {
        &self.terms
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    pub fn vars(&self) -> impl Iterator<Item = &TheoryVar> {
        self.terms.iter().map(|(v, _)| v)
    }
}

impl fmt::Display for LinearAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (var, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*{}", coeff, var)?;
        }
        write!(f, " {} {}", self.relation, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtomError {
    #[error("linear atom has no nonzero coefficient")]
    ZeroCoefficients,
}

/// An atom: either a propositional variable or a canonical linear constraint.
/// The derived order (Boolean atoms before linear ones, each kind by its own
/// canonical key) is the total order all clause canonicalization uses.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Bool(BoolAtom),
    Linear(LinearAtom),
}

impl Atom {
    pub fn as_linear(&self) -> Option<&LinearAtom> {
        match self {
            Atom::Linear(lin) => Some(lin),
            Atom::Bool(_) => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Bool(b) => b.fmt(f),
            Atom::Linear(lin) => write!(f, "[{}]", lin),
        }
    }
}

/// An atom with a sign. Negative linear literals denote the complement
/// relation: `~(t < b)` is `t >= b`, `~(t <= b)` is `t > b`, `~(t = b)` is
/// `t != b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    atom: Atom,
    positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom, positive }
    }

    pub fn positive(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn negative(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn atom(&self) -> &Atom {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn negated(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        self.atom.fmt(f)
    }
}

/// Builds the canonical literal for a raw linear constraint.
///
/// Zero coefficients are dropped; the remaining terms are sorted by variable
/// and scaled by the inverse of the leading coefficient. Scaling by a
/// negative rational flips the relation, and `>`-style relations are folded
/// into the literal sign, so the resulting atom always has relation in
/// `{<, <=, =}` and leading coefficient 1.
pub fn linear_literal(
    terms: impl IntoIterator<Item = (TheoryVar, Rat)>,
    relation: RawRelation,
    bound: Rat,
    positive: bool,
) -> Result<Literal, AtomError> {
    let mut map: Vec<(TheoryVar, Rat)> = Vec::new();
    for (var, coeff) in terms {
        if coeff.is_zero() {
            continue;
        }
        match map.iter_mut().find(|(v, _)| *v == var) {
            Some((_, c)) => *c += coeff,
            None => map.push((var, coeff)),
        }
    }
    map.retain(|(_, c)| !c.is_zero());
    if map.is_empty() {
        return Err(AtomError::ZeroCoefficients);
    }
    map.sort_by(|(a, _), (b, _)| a.cmp(b));

    // Fold > / >= into a sign flip: t > b == ~(t <= b), t >= b == ~(t < b).
    let (mut relation, mut positive) = match relation {
        RawRelation::Lt => (Relation::Lt, positive),
        RawRelation::Le => (Relation::Le, positive),
        RawRelation::Eq => (Relation::Eq, positive),
        RawRelation::Gt => (Relation::Le, !positive),
        RawRelation::Ge => (Relation::Lt, !positive),
    };

    let lead = map[0].1.clone();
    let bound = bound / &lead;
    for (_, c) in &mut map {
        *c = &*c / &lead;
    }
    if lead.is_negative() {
        // Scaling by a negative rational reverses the inequality; expressed
        // again through the literal sign.
        match relation {
            Relation::Lt => {
                relation = Relation::Le;
                positive = !positive;
            }
            Relation::Le => {
                relation = Relation::Lt;
                positive = !positive;
            }
            Relation::Eq => {}
        }
    }
    debug_assert!(map[0].1.is_one());
    Ok(Literal {
        atom: Atom::Linear(LinearAtom {
            terms: map,
            relation,
            bound,
        }),
        positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn vocab() -> (Vocab, TheoryVar, TheoryVar) {
        let mut v = Vocab::new();
        let x = v.theory_var("x");
        let y = v.theory_var("y");
        (v, x, y)
    }

    #[test]
    fn negation_is_involutive() {
        let mut v = Vocab::new();
        let a = Literal::positive(Atom::Bool(v.bool_atom("a")));
        assert_eq!(a.negated().negated(), a);
        let (_, x, _) = vocab();
        let l = linear_literal([(x, rat(3))], RawRelation::Lt, rat(1), true).unwrap();
        assert_eq!(l.negated().negated(), l);
    }

    #[test]
    fn leading_coefficient_is_scaled_to_one() {
        let (_, x, y) = vocab();
        // 3x - 6y < 9  ==>  x - 2y < 3
        let l = linear_literal(
            [(x.clone(), rat(3)), (y.clone(), rat(-6))],
            RawRelation::Lt,
            rat(9),
            true,
        )
        .unwrap();
        let lin = l.atom().as_linear().unwrap();
        assert_eq!(lin.terms()[0].1, rat(1));
        assert_eq!(lin.terms()[1].1, rat(-2));
        assert_eq!(*lin.bound(), rat(3));
        assert_eq!(lin.relation(), Relation::Lt);
        assert!(l.is_positive());
    }

    #[test]
    fn negative_leading_coefficient_flips_polarity() {
        let (_, x, _) = vocab();
        // -x < 3  ==  x > -3  ==  ~(x <= -3)
        let l = linear_literal([(x.clone(), rat(-1))], RawRelation::Lt, rat(3), true).unwrap();
        assert!(!l.is_positive());
        let lin = l.atom().as_linear().unwrap();
        assert_eq!(lin.relation(), Relation::Le);
        assert_eq!(*lin.bound(), rat(-3));
        // and the same constraint written as x > -3 canonicalizes identically
        let m = linear_literal([(x, rat(1))], RawRelation::Gt, rat(-3), true).unwrap();
        assert_eq!(l, m);
    }

    #[test]
    fn zero_coefficients_are_rejected() {
        let (_, x, _) = vocab();
        let err = linear_literal([(x, rat(0))], RawRelation::Lt, rat(1), true).unwrap_err();
        assert_eq!(err, AtomError::ZeroCoefficients);
    }

    #[test]
    fn duplicate_variables_are_merged() {
        let (_, x, _) = vocab();
        // 2x + 3x <= 10  ==>  x <= 2
        let l = linear_literal(
            [(x.clone(), rat(2)), (x, rat(3))],
            RawRelation::Le,
            rat(10),
            true,
        )
        .unwrap();
        let lin = l.atom().as_linear().unwrap();
        assert_eq!(lin.terms().len(), 1);
        assert_eq!(*lin.bound(), rat(2));
    }

    #[test]
    fn literal_order_puts_negative_before_positive() {
        let mut v = Vocab::new();
        let a = Atom::Bool(v.bool_atom("a"));
        assert!(Literal::negative(a.clone()) < Literal::positive(a));
    }
}
