//! Ground atoms and propositional formulae over them.
//!
//! A state is a finite set of atoms, read as the valuation that maps exactly
//! those atoms to true. Both checkers share this module, so the model
//! relation is defined once.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A fully ground predicate application; no variables, equality already
/// resolved away during instantiation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(pred: impl Into<String>, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        GroundAtom {
            pred: pred.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.pred)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// Ground propositional formula: verum, an atom, or a negation, conjunction,
/// or disjunction of formulae.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Atom(GroundAtom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(a: GroundAtom) -> Formula {
        Formula::Atom(a)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Falsum, encoded as the negated verum.
    pub fn bottom() -> Formula {
        Formula::not(Formula::Top)
    }

    /// Conjunction of a list; the empty conjunction is the verum.
    pub fn conj(parts: Vec<Formula>) -> Formula {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => Formula::Top,
            Some(last) => iter.fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    /// Disjunction of a list; the empty disjunction is the falsum.
    pub fn disj(parts: Vec<Formula>) -> Formula {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => Formula::bottom(),
            Some(last) => iter.fold(last, |acc, f| Formula::or(f, acc)),
        }
    }

    /// The set of atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<GroundAtom>) {
        match self {
            Formula::Top => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// The model relation: does the valuation given by `state` satisfy the
    /// formula?
    pub fn eval(&self, state: &BTreeSet<GroundAtom>) -> bool {
        match self {
            Formula::Top => true,
            Formula::Atom(a) => state.contains(a),
            Formula::Not(f) => !f.eval(state),
            Formula::And(a, b) => a.eval(state) && b.eval(state),
            Formula::Or(a, b) => a.eval(state) || b.eval(state),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "true"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}
