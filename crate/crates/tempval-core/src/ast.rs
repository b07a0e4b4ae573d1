//! Source-level syntax trees for domains, problems, and plans.
//!
//! The trees are independent of the surface syntax; the companion crate's
//! parsers produce them and the checks in [`crate::wf`] consume them. Every
//! node carries the source position it was read from so diagnostics can point
//! back into the file. Names are normalized to lowercase by the parsers.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::Rational;

/// A position in a source file, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub const fn new(line: u32, col: u32) -> Span {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

/// The requirement flags the validator understands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Requirement {
    Strips,
    Equality,
    Typing,
    NegativePreconditions,
    DisjunctivePreconditions,
    DurativeActions,
    DurationInequalities,
}

impl Requirement {
    pub const ALL: [Requirement; 7] = [
        Requirement::Strips,
        Requirement::Equality,
        Requirement::Typing,
        Requirement::NegativePreconditions,
        Requirement::DisjunctivePreconditions,
        Requirement::DurativeActions,
        Requirement::DurationInequalities,
    ];

    pub fn as_flag(&self) -> &'static str {
        match self {
            Requirement::Strips => ":strips",
            Requirement::Equality => ":equality",
            Requirement::Typing => ":typing",
            Requirement::NegativePreconditions => ":negative-preconditions",
            Requirement::DisjunctivePreconditions => ":disjunctive-preconditions",
            Requirement::DurativeActions => ":durative-actions",
            Requirement::DurationInequalities => ":duration-inequalities",
        }
    }

    pub fn from_flag(flag: &str) -> Option<Requirement> {
        Requirement::ALL.iter().copied().find(|r| r.as_flag() == flag)
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_flag())
    }
}

/// A union type: a nonempty list of distinct primitive type names. A plain
/// type is the singleton case.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EitherType(Vec<String>);

impl EitherType {
    /// Builds a union type, dropping repeated primitives.
    pub fn new(names: Vec<String>) -> EitherType {
        assert!(!names.is_empty(), "union type needs at least one primitive");
        let mut seen = BTreeSet::new();
        let mut distinct = Vec::new();
        for n in names {
            if seen.insert(n.clone()) {
                distinct.push(n);
            }
        }
        EitherType(distinct)
    }

    pub fn primitive(name: impl Into<String>) -> EitherType {
        EitherType(alloc::vec![name.into()])
    }

    pub fn object() -> EitherType {
        EitherType::primitive("object")
    }

    pub fn primitives(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for EitherType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            f.write_str(&self.0[0])
        } else {
            write!(f, "(either")?;
            for n in &self.0 {
                write!(f, " {n}")?;
            }
            write!(f, ")")
        }
    }
}

/// A name with a type annotation: a schema parameter, a predicate parameter,
/// or a problem object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedName {
    pub span: Span,
    pub name: String,
    pub ty: EitherType,
}

/// One `name - supertype` edge from the type declarations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub span: Span,
    pub name: String,
    pub supertype: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateDecl {
    pub span: Span,
    pub name: String,
    pub params: Vec<TypedName>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDecl {
    pub span: Span,
    pub name: String,
    pub params: Vec<TypedName>,
}

/// A term in a lifted formula: a schema variable (`?x`) or an object name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermAst {
    Variable { span: Span, name: String },
    Object { span: Span, name: String },
}

impl TermAst {
    pub fn name(&self) -> &str {
        match self {
            TermAst::Variable { name, .. } | TermAst::Object { name, .. } => name,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            TermAst::Variable { span, .. } | TermAst::Object { span, .. } => *span,
        }
    }
}

/// A lifted formula as written in a condition or goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaAst {
    Atom { span: Span, pred: String, args: Vec<TermAst> },
    Equal { span: Span, left: TermAst, right: TermAst },
    Not { span: Span, body: Box<FormulaAst> },
    And { span: Span, parts: Vec<FormulaAst> },
    Or { span: Span, parts: Vec<FormulaAst> },
}

impl FormulaAst {
    pub fn span(&self) -> Span {
        match self {
            FormulaAst::Atom { span, .. }
            | FormulaAst::Equal { span, .. }
            | FormulaAst::Not { span, .. }
            | FormulaAst::And { span, .. }
            | FormulaAst::Or { span, .. } => *span,
        }
    }
}

/// Where a condition must hold relative to a durative action's interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeQualifier {
    AtStart,
    AtEnd,
    OverAll,
}

/// Effects can only fire at the start or at the end of the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EffectTime {
    AtStart,
    AtEnd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralAst {
    pub span: Span,
    pub positive: bool,
    pub pred: String,
    pub args: Vec<TermAst>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedLiteral {
    pub time: EffectTime,
    pub literal: LiteralAst,
}

/// The right-hand side of a duration comparison: a literal or a lookup of a
/// ground function value. Arithmetic inside duration constraints is not
/// supported and is rejected at parse time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DurationExpr {
    Literal { span: Span, value: Rational },
    Function { span: Span, name: String, args: Vec<TermAst> },
}

impl DurationExpr {
    pub fn span(&self) -> Span {
        match self {
            DurationExpr::Literal { span, .. } | DurationExpr::Function { span, .. } => *span,
        }
    }
}

/// Constraint on `?duration`; `None` marks a non-durative schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DurationConstraint {
    None,
    Equal(DurationExpr),
    AtMost(DurationExpr),
    AtLeast(DurationExpr),
    All(Vec<DurationConstraint>),
}

/// An action schema. For non-durative schemata the duration constraint is
/// `None`, all conditions are tagged `AtStart`, and all effects `AtStart`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSchemaAst {
    pub span: Span,
    pub name: String,
    pub parameters: Vec<TypedName>,
    pub duration: DurationConstraint,
    pub conditions: Vec<(TimeQualifier, FormulaAst)>,
    pub effects: Vec<TimedLiteral>,
}

impl ActionSchemaAst {
    pub fn is_durative(&self) -> bool {
        !matches!(self.duration, DurationConstraint::None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainAst {
    pub name: String,
    pub requirements: BTreeSet<Requirement>,
    pub types: Vec<TypeDecl>,
    pub predicates: Vec<PredicateDecl>,
    pub functions: Vec<FunctionDecl>,
    pub schemata: Vec<ActionSchemaAst>,
}

impl DomainAst {
    pub fn schema(&self, name: &str) -> Option<&ActionSchemaAst> {
        self.schemata.iter().find(|s| s.name == name)
    }
}

/// A ground atom as written in an init section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundAtomAst {
    pub span: Span,
    pub pred: String,
    pub args: Vec<String>,
}

/// `(= (f a b) q)` in an init section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FluentAssignment {
    pub span: Span,
    pub name: String,
    pub args: Vec<String>,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemAst {
    pub name: String,
    pub domain: String,
    pub objects: Vec<TypedName>,
    pub init: Vec<GroundAtomAst>,
    pub fluents: Vec<FluentAssignment>,
    pub goal: FormulaAst,
}

/// One scheduled action: `<time>: (<name> <args>*)[<duration>]`, the bracket
/// part present exactly when the schema is durative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub span: Span,
    pub time: Rational,
    pub action: String,
    pub args: Vec<String>,
    pub duration: Option<Rational>,
}

/// Steps in file order; ordering by time is a semantic concern, not a
/// syntactic one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlanAst {
    pub steps: Vec<PlanStep>,
}
