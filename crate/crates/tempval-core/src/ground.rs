//! Instantiation of action schemata into ground actions.
//!
//! A durative schema grounds into a start snap action, an end snap action,
//! and an invariant formula: conditions and effects are partitioned by their
//! temporal annotation. Equality atoms between ground objects are resolved to
//! verum or falsum here, so everything downstream is purely propositional.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{ActionSchemaAst, EffectTime, FormulaAst, TermAst, TimeQualifier};
use crate::formula::{Formula, GroundAtom};

/// An instantaneous action: a precondition, atoms it adds, atoms it deletes.
/// Effects apply delete-first, then add.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SnapAction {
    pub pre: Formula,
    pub add: BTreeSet<GroundAtom>,
    pub del: BTreeSet<GroundAtom>,
}

impl SnapAction {
    pub fn new(pre: Formula, add: BTreeSet<GroundAtom>, del: BTreeSet<GroundAtom>) -> Self {
        SnapAction { pre, add, del }
    }

    /// A snap action that only checks a condition and changes nothing.
    pub fn precondition_only(pre: Formula) -> Self {
        SnapAction {
            pre,
            add: BTreeSet::new(),
            del: BTreeSet::new(),
        }
    }

    pub fn is_effect_free(&self) -> bool {
        self.add.is_empty() && self.del.is_empty()
    }
}

impl fmt::Display for SnapAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<pre={}, add={{", self.pre)?;
        for (i, a) in self.add.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}, del={{")?;
        for (i, a) in self.del.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}>")
    }
}

/// A ground durative action: start and end snap actions plus the invariant
/// that must hold while the action runs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundDurativeAction {
    pub start: SnapAction,
    pub end: SnapAction,
    pub invariant: Formula,
}

/// The invariant of a durative action viewed as an effect-free snap action.
pub fn invariant_as_snap(action: &GroundDurativeAction) -> SnapAction {
    SnapAction::precondition_only(action.invariant.clone())
}

/// Result of instantiating a schema: durative or instantaneous.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroundAction {
    Durative(GroundDurativeAction),
    Simple(SnapAction),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundError {
    ArityMismatch { action: String, expected: usize, got: usize },
    UnboundVariable { action: String, variable: String },
    /// The same atom is both added and deleted by one snap action, which
    /// would make its effect ambiguous.
    ConflictingEffect { action: String, atom: GroundAtom },
}

impl fmt::Display for GroundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundError::ArityMismatch { action, expected, got } => {
                write!(f, "action {action} expects {expected} arguments, got {got}")
            }
            GroundError::UnboundVariable { action, variable } => {
                write!(f, "action {action} references unbound variable ?{variable}")
            }
            GroundError::ConflictingEffect { action, atom } => {
                write!(f, "action {action} both adds and deletes {atom}")
            }
        }
    }
}

impl core::error::Error for GroundError {}

struct Substitution<'a> {
    action: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Substitution<'a> {
    fn apply(&self, term: &'a TermAst) -> Result<String, GroundError> {
        match term {
            TermAst::Object { name, .. } => Ok(name.clone()),
            TermAst::Variable { name, .. } => match self.map.get(name.as_str()) {
                Some(obj) => Ok(String::from(*obj)),
                None => Err(GroundError::UnboundVariable {
                    action: String::from(self.action),
                    variable: name.clone(),
                }),
            },
        }
    }

    fn atom(&self, pred: &str, args: &'a [TermAst]) -> Result<GroundAtom, GroundError> {
        let mut ground = Vec::with_capacity(args.len());
        for t in args {
            ground.push(self.apply(t)?);
        }
        Ok(GroundAtom {
            pred: String::from(pred),
            args: ground,
        })
    }

    fn formula(&self, ast: &'a FormulaAst) -> Result<Formula, GroundError> {
        Ok(match ast {
            FormulaAst::Atom { pred, args, .. } => Formula::Atom(self.atom(pred, args)?),
            // Equality between ground objects is decided right here.
            FormulaAst::Equal { left, right, .. } => {
                if self.apply(left)? == self.apply(right)? {
                    Formula::Top
                } else {
                    Formula::bottom()
                }
            }
            FormulaAst::Not { body, .. } => Formula::not(self.formula(body)?),
            FormulaAst::And { parts, .. } => {
                let mut ground = Vec::with_capacity(parts.len());
                for p in parts {
                    ground.push(self.formula(p)?);
                }
                Formula::conj(ground)
            }
            FormulaAst::Or { parts, .. } => {
                let mut ground = Vec::with_capacity(parts.len());
                for p in parts {
                    ground.push(self.formula(p)?);
                }
                Formula::disj(ground)
            }
        })
    }
}

/// Grounds a formula that contains no variables, such as a problem goal.
pub fn ground_formula_closed(ast: &FormulaAst) -> Result<Formula, GroundError> {
    let subst = Substitution {
        action: "goal",
        map: BTreeMap::new(),
    };
    subst.formula(ast)
}

/// Instantiates `schema` with `args`.
///
/// Conditions and effects are split by annotation: at-start parts form the
/// start snap action, at-end parts the end snap action, and the over-all
/// conditions conjoin into the invariant. Missing branches yield empty effect
/// sets and verum preconditions. Same schema and arguments always produce a
/// structurally equal result.
pub fn instantiate(schema: &ActionSchemaAst, args: &[String]) -> Result<GroundAction, GroundError> {
    if schema.parameters.len() != args.len() {
        return Err(GroundError::ArityMismatch {
            action: schema.name.clone(),
            expected: schema.parameters.len(),
            got: args.len(),
        });
    }
    let mut map = BTreeMap::new();
    for (param, arg) in schema.parameters.iter().zip(args) {
        map.insert(param.name.as_str(), arg.as_str());
    }
    let subst = Substitution {
        action: &schema.name,
        map,
    };

    let mut start_pre = Vec::new();
    let mut end_pre = Vec::new();
    let mut inv = Vec::new();
    for (qualifier, cond) in &schema.conditions {
        let ground = subst.formula(cond)?;
        match qualifier {
            TimeQualifier::AtStart => start_pre.push(ground),
            TimeQualifier::AtEnd => end_pre.push(ground),
            TimeQualifier::OverAll => inv.push(ground),
        }
    }

    let mut start = SnapAction::precondition_only(Formula::conj(start_pre));
    let mut end = SnapAction::precondition_only(Formula::conj(end_pre));
    for timed in &schema.effects {
        let atom = subst.atom(&timed.literal.pred, &timed.literal.args)?;
        let snap = match timed.time {
            EffectTime::AtStart => &mut start,
            EffectTime::AtEnd => &mut end,
        };
        let (target, other) = if timed.literal.positive {
            (&mut snap.add, &snap.del)
        } else {
            (&mut snap.del, &snap.add)
        };
        if other.contains(&atom) {
            return Err(GroundError::ConflictingEffect {
                action: schema.name.clone(),
                atom,
            });
        }
        target.insert(atom);
    }

    if schema.is_durative() {
        Ok(GroundAction::Durative(GroundDurativeAction {
            start,
            end,
            invariant: Formula::conj(inv),
        }))
    } else {
        // Non-durative schema: everything was tagged at-start by the parser,
        // so the start snap action already holds the whole action.
        Ok(GroundAction::Simple(start))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{
        DurationConstraint, DurationExpr, LiteralAst, Span, TimedLiteral, TypedName,
    };
    use crate::rational::Rational;
    use alloc::vec;

    fn var(name: &str) -> TermAst {
        TermAst::Variable {
            span: Span::default(),
            name: String::from(name),
        }
    }

    fn param(name: &str, ty: &str) -> TypedName {
        TypedName {
            span: Span::default(),
            name: String::from(name),
            ty: crate::ast::EitherType::primitive(ty),
        }
    }

    fn atom_ast(pred: &str, args: &[&str]) -> FormulaAst {
        FormulaAst::Atom {
            span: Span::default(),
            pred: String::from(pred),
            args: args.iter().map(|a| var(a)).collect(),
        }
    }

    fn lit(time: EffectTime, positive: bool, pred: &str, args: &[&str]) -> TimedLiteral {
        TimedLiteral {
            time,
            literal: LiteralAst {
                span: Span::default(),
                positive,
                pred: String::from(pred),
                args: args.iter().map(|a| var(a)).collect(),
            },
        }
    }

    fn ga(pred: &str, args: &[&str]) -> GroundAtom {
        GroundAtom::new(pred, args.iter().copied())
    }

    fn open_door_schema() -> ActionSchemaAst {
        ActionSchemaAst {
            span: Span::default(),
            name: String::from("op"),
            parameters: vec![param("e", "elevator")],
            duration: DurationConstraint::Equal(DurationExpr::Literal {
                span: Span::default(),
                value: Rational::one(),
            }),
            conditions: vec![(
                TimeQualifier::AtStart,
                FormulaAst::Not {
                    span: Span::default(),
                    body: alloc::boxed::Box::new(atom_ast("el-op", &["e"])),
                },
            )],
            effects: vec![lit(EffectTime::AtEnd, true, "el-op", &["e"])],
        }
    }

    fn enter_schema() -> ActionSchemaAst {
        ActionSchemaAst {
            span: Span::default(),
            name: String::from("en"),
            parameters: vec![param("p", "passenger"), param("e", "elevator"), param("f", "floor")],
            duration: DurationConstraint::AtMost(DurationExpr::Literal {
                span: Span::default(),
                value: Rational::one(),
            }),
            conditions: vec![
                (
                    TimeQualifier::AtStart,
                    FormulaAst::And {
                        span: Span::default(),
                        parts: vec![atom_ast("p-at", &["p", "f"]), atom_ast("el-at", &["e", "f"])],
                    },
                ),
                (TimeQualifier::OverAll, atom_ast("el-op", &["e"])),
            ],
            effects: vec![
                lit(EffectTime::AtStart, false, "p-at", &["p", "f"]),
                lit(EffectTime::AtEnd, true, "in-el", &["p", "e"]),
            ],
        }
    }

    fn close_schema() -> ActionSchemaAst {
        ActionSchemaAst {
            span: Span::default(),
            name: String::from("cl"),
            parameters: vec![param("e", "elevator")],
            duration: DurationConstraint::Equal(DurationExpr::Literal {
                span: Span::default(),
                value: Rational::one(),
            }),
            conditions: vec![(TimeQualifier::AtStart, atom_ast("el-op", &["e"]))],
            effects: vec![lit(EffectTime::AtEnd, false, "el-op", &["e"])],
        }
    }

    #[test]
    fn open_door_grounds_to_expected_snaps() {
        let action = instantiate(&open_door_schema(), &[String::from("e1")]).unwrap();
        let GroundAction::Durative(a) = action else {
            panic!("durative expected")
        };
        assert_eq!(a.start.pre, Formula::not(Formula::atom(ga("el-op", &["e1"]))));
        assert!(a.start.is_effect_free());
        assert_eq!(a.end.pre, Formula::Top);
        assert_eq!(a.end.add, BTreeSet::from([ga("el-op", &["e1"])]));
        assert!(a.end.del.is_empty());
        assert_eq!(a.invariant, Formula::Top);
    }

    #[test]
    fn enter_grounds_with_partitioned_effects() {
        let args = [String::from("p0"), String::from("e1"), String::from("f1")];
        let GroundAction::Durative(a) = instantiate(&enter_schema(), &args).unwrap() else {
            panic!("durative expected")
        };
        assert_eq!(
            a.start.pre,
            Formula::and(
                Formula::atom(ga("p-at", &["p0", "f1"])),
                Formula::atom(ga("el-at", &["e1", "f1"])),
            )
        );
        assert_eq!(a.start.del, BTreeSet::from([ga("p-at", &["p0", "f1"])]));
        assert!(a.start.add.is_empty());
        assert_eq!(a.end.add, BTreeSet::from([ga("in-el", &["p0", "e1"])]));
        assert!(a.end.del.is_empty());
        assert_eq!(a.invariant, Formula::atom(ga("el-op", &["e1"])));
    }

    #[test]
    fn close_door_grounds_to_expected_snaps() {
        let GroundAction::Durative(a) = instantiate(&close_schema(), &[String::from("e0")]).unwrap()
        else {
            panic!("durative expected")
        };
        assert_eq!(a.start.pre, Formula::atom(ga("el-op", &["e0"])));
        assert_eq!(a.end.del, BTreeSet::from([ga("el-op", &["e0"])]));
        assert!(a.end.add.is_empty());
        assert_eq!(a.invariant, Formula::Top);
    }

    #[test]
    fn invariant_snap_is_effect_free() {
        let args = [String::from("p0"), String::from("e1"), String::from("f1")];
        let GroundAction::Durative(a) = instantiate(&enter_schema(), &args).unwrap() else {
            panic!()
        };
        let snap = invariant_as_snap(&a);
        assert!(snap.is_effect_free());
        assert_eq!(snap.pre, Formula::atom(ga("el-op", &["e1"])));

        let GroundAction::Durative(op) = instantiate(&open_door_schema(), &[String::from("e1")]).unwrap()
        else {
            panic!()
        };
        assert_eq!(invariant_as_snap(&op), SnapAction::precondition_only(Formula::Top));
    }

    #[test]
    fn instantiate_is_deterministic() {
        let args = [String::from("p1"), String::from("e0"), String::from("f0")];
        assert_eq!(
            instantiate(&enter_schema(), &args).unwrap(),
            instantiate(&enter_schema(), &args).unwrap()
        );
    }

    #[test]
    fn equality_atoms_fold_at_instantiation() {
        let schema = ActionSchemaAst {
            span: Span::default(),
            name: String::from("pick"),
            parameters: vec![param("a", "object"), param("b", "object")],
            duration: DurationConstraint::None,
            conditions: vec![(
                TimeQualifier::AtStart,
                FormulaAst::Not {
                    span: Span::default(),
                    body: alloc::boxed::Box::new(FormulaAst::Equal {
                        span: Span::default(),
                        left: var("a"),
                        right: var("b"),
                    }),
                },
            )],
            effects: vec![],
        };
        let distinct = [String::from("x"), String::from("y")];
        let GroundAction::Simple(snap) = instantiate(&schema, &distinct).unwrap() else {
            panic!()
        };
        assert_eq!(snap.pre, Formula::not(Formula::bottom()));

        let same = [String::from("x"), String::from("x")];
        let GroundAction::Simple(snap) = instantiate(&schema, &same).unwrap() else {
            panic!()
        };
        assert_eq!(snap.pre, Formula::not(Formula::Top));
    }

    #[test]
    fn conflicting_effect_is_rejected() {
        let schema = ActionSchemaAst {
            span: Span::default(),
            name: String::from("flip"),
            parameters: vec![param("x", "object")],
            duration: DurationConstraint::Equal(DurationExpr::Literal {
                span: Span::default(),
                value: Rational::one(),
            }),
            conditions: vec![],
            effects: vec![
                lit(EffectTime::AtStart, true, "p", &["x"]),
                lit(EffectTime::AtStart, false, "p", &["x"]),
            ],
        };
        let err = instantiate(&schema, &[String::from("o")]).unwrap_err();
        assert!(matches!(err, GroundError::ConflictingEffect { .. }));
    }

    #[test]
    fn arity_is_checked() {
        let err = instantiate(&open_door_schema(), &[]).unwrap_err();
        assert!(matches!(err, GroundError::ArityMismatch { expected: 1, got: 0, .. }));
    }
}
