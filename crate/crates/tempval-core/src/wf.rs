//! Typing and well-formedness checks on domains, problems, and plans.
//!
//! Checks accumulate every error they find instead of stopping at the first.
//! The sub-typing rule for union types: an argument fits a parameter iff each
//! of the argument's primitive types reaches at least one of the parameter's
//! primitives in the declared type hierarchy.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{
    ActionSchemaAst, DomainAst, DurationConstraint, DurationExpr, EitherType, FormulaAst, PlanAst,
    ProblemAst, Span, TermAst, TypeDecl, TypedName,
};
use crate::rational::Rational;

pub const OBJECT_TYPE: &str = "object";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WfCategory {
    UndeclaredName,
    ArityMismatch,
    TypeMismatch,
    DurationViolation,
    UndefinedFunctionValue,
    DuplicateDefinition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WfError {
    pub category: WfCategory,
    /// The offending name.
    pub name: String,
    pub span: Span,
    pub detail: String,
}

impl WfError {
    fn new(category: WfCategory, name: &str, span: Span, detail: String) -> Self {
        WfError {
            category,
            name: name.to_string(),
            span,
            detail,
        }
    }
}

impl fmt::Display for WfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.detail)
    }
}

impl core::error::Error for WfError {}

/// The reflexive-transitive reachability relation over primitive type names,
/// rooted at `object`.
#[derive(Clone, Debug)]
pub struct SubtypeGraph {
    ancestors: BTreeMap<String, BTreeSet<String>>,
}

impl SubtypeGraph {
    /// Builds the graph from the declared `name - supertype` edges. Types
    /// used only as supertypes are implicitly declared under `object`.
    /// Reports duplicate declarations and cyclic hierarchies.
    pub fn build(types: &[TypeDecl]) -> (SubtypeGraph, Vec<WfError>) {
        let mut errors = Vec::new();
        let mut parent: BTreeMap<String, String> = BTreeMap::new();
        for decl in types {
            if parent.contains_key(&decl.name) {
                errors.push(WfError::new(
                    WfCategory::DuplicateDefinition,
                    &decl.name,
                    decl.span,
                    format!("type {} declared twice", decl.name),
                ));
                continue;
            }
            parent.insert(decl.name.clone(), decl.supertype.clone());
        }
        let mut names: BTreeSet<String> = parent.keys().cloned().collect();
        names.extend(parent.values().cloned());
        names.insert(OBJECT_TYPE.to_string());

        let mut ancestors = BTreeMap::new();
        for name in &names {
            let mut seen = BTreeSet::new();
            let mut current = name.clone();
            loop {
                if !seen.insert(current.clone()) {
                    errors.push(WfError::new(
                        WfCategory::TypeMismatch,
                        name,
                        types
                            .iter()
                            .find(|t| t.name == *name)
                            .map(|t| t.span)
                            .unwrap_or_default(),
                        format!("type {name} does not reach object (cyclic hierarchy)"),
                    ));
                    break;
                }
                if current == OBJECT_TYPE {
                    break;
                }
                current = parent.get(&current).cloned().unwrap_or_else(|| OBJECT_TYPE.to_string());
            }
            seen.insert(OBJECT_TYPE.to_string());
            ancestors.insert(name.clone(), seen);
        }
        (SubtypeGraph { ancestors }, errors)
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.ancestors.contains_key(name)
    }

    /// True iff `sub` reaches `sup` through the supertype edges (reflexive).
    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        self.ancestors.get(sub).is_some_and(|a| a.contains(sup))
    }

    pub fn declared_types(&self) -> impl Iterator<Item = &String> {
        self.ancestors.keys()
    }
}

/// Union-type compatibility: every primitive of `arg` must reach some
/// primitive of `param`. Unknown primitives are errors.
pub fn of_type(arg: &EitherType, param: &EitherType, g: &SubtypeGraph) -> Result<bool, WfError> {
    for side in [arg, param] {
        for name in side.primitives() {
            if !g.is_declared(name) {
                return Err(WfError::new(
                    WfCategory::UndeclaredName,
                    name,
                    Span::default(),
                    format!("unknown type {name}"),
                ));
            }
        }
    }
    Ok(arg
        .primitives()
        .iter()
        .all(|a| param.primitives().iter().any(|p| g.is_subtype(a, p))))
}

/// Ground function values from a problem's init section.
#[derive(Clone, Debug, Default)]
pub struct FunctionTable {
    values: BTreeMap<(String, Vec<String>), Rational>,
}

impl FunctionTable {
    /// Collects `(= (f args) value)` assignments; a second value for the same
    /// ground term is a duplicate definition.
    pub fn build(problem: &ProblemAst) -> (FunctionTable, Vec<WfError>) {
        let mut errors = Vec::new();
        let mut values = BTreeMap::new();
        for assignment in &problem.fluents {
            let key = (assignment.name.clone(), assignment.args.clone());
            if values.contains_key(&key) {
                errors.push(WfError::new(
                    WfCategory::DuplicateDefinition,
                    &assignment.name,
                    assignment.span,
                    format!(
                        "function value for ({} {}) assigned twice",
                        assignment.name,
                        assignment.args.join(" ")
                    ),
                ));
                continue;
            }
            values.insert(key, assignment.value.clone());
        }
        (FunctionTable { values }, errors)
    }

    pub fn get(&self, name: &str, args: &[String]) -> Option<&Rational> {
        self.values.get(&(name.to_string(), args.to_vec()))
    }
}

struct Checker<'a> {
    domain: &'a DomainAst,
    graph: SubtypeGraph,
    predicates: BTreeMap<&'a str, &'a [TypedName]>,
    functions: BTreeMap<&'a str, &'a [TypedName]>,
    errors: Vec<WfError>,
}

impl<'a> Checker<'a> {
    fn new(domain: &'a DomainAst) -> Checker<'a> {
        let (graph, errors) = SubtypeGraph::build(&domain.types);
        let mut checker = Checker {
            domain,
            graph,
            predicates: BTreeMap::new(),
            functions: BTreeMap::new(),
            errors,
        };
        for p in &domain.predicates {
            if checker.predicates.insert(p.name.as_str(), p.params.as_slice()).is_some() {
                checker.push(
                    WfCategory::DuplicateDefinition,
                    &p.name,
                    p.span,
                    format!("predicate {} declared twice", p.name),
                );
            }
        }
        for f in &domain.functions {
            if checker.functions.insert(f.name.as_str(), f.params.as_slice()).is_some() {
                checker.push(
                    WfCategory::DuplicateDefinition,
                    &f.name,
                    f.span,
                    format!("function {} declared twice", f.name),
                );
            }
        }
        checker
    }

    fn push(&mut self, category: WfCategory, name: &str, span: Span, detail: String) {
        self.errors.push(WfError::new(category, name, span, detail));
    }

    fn check_typed_names(&mut self, names: &[TypedName], what: &str) {
        let mut seen = BTreeSet::new();
        for tn in names {
            if !seen.insert(tn.name.as_str()) {
                self.push(
                    WfCategory::DuplicateDefinition,
                    &tn.name,
                    tn.span,
                    format!("{what} {} declared twice", tn.name),
                );
            }
            for prim in tn.ty.primitives() {
                if !self.graph.is_declared(prim) {
                    self.push(
                        WfCategory::UndeclaredName,
                        prim,
                        tn.span,
                        format!("{what} {} has unknown type {prim}", tn.name),
                    );
                }
            }
        }
    }

    /// Type of an argument term inside a schema body: the parameter's
    /// declared type for variables, the object's type in `objects` otherwise.
    fn term_type(
        &mut self,
        term: &TermAst,
        params: &BTreeMap<&str, &EitherType>,
        objects: &BTreeMap<&str, &EitherType>,
    ) -> Option<EitherType> {
        match term {
            TermAst::Variable { name, span } => match params.get(name.as_str()) {
                Some(ty) => Some((*ty).clone()),
                None => {
                    self.push(
                        WfCategory::UndeclaredName,
                        name,
                        *span,
                        format!("variable ?{name} is not a parameter"),
                    );
                    None
                }
            },
            TermAst::Object { name, span } => match objects.get(name.as_str()) {
                Some(ty) => Some((*ty).clone()),
                None => {
                    self.push(
                        WfCategory::UndeclaredName,
                        name,
                        *span,
                        format!("unknown object {name}"),
                    );
                    None
                }
            },
        }
    }

    fn check_application(
        &mut self,
        kind: &str,
        name: &str,
        span: Span,
        args: &[TermAst],
        params: &BTreeMap<&str, &EitherType>,
        objects: &BTreeMap<&str, &EitherType>,
    ) {
        let signature = match if kind == "function" {
            self.functions.get(name)
        } else {
            self.predicates.get(name)
        } {
            Some(sig) => *sig,
            None => {
                self.push(
                    WfCategory::UndeclaredName,
                    name,
                    span,
                    format!("undeclared {kind} {name}"),
                );
                return;
            }
        };
        if signature.len() != args.len() {
            self.push(
                WfCategory::ArityMismatch,
                name,
                span,
                format!("{kind} {name} expects {} arguments, got {}", signature.len(), args.len()),
            );
            return;
        }
        for (arg, param) in args.iter().zip(signature) {
            let Some(arg_ty) = self.term_type(arg, params, objects) else {
                continue;
            };
            match of_type(&arg_ty, &param.ty, &self.graph) {
                Ok(true) => {}
                Ok(false) => {
                    self.push(
                        WfCategory::TypeMismatch,
                        arg.name(),
                        arg.span(),
                        format!(
                            "argument {} of {kind} {name} has type {} where {} is expected",
                            arg.name(),
                            arg_ty,
                            param.ty
                        ),
                    );
                }
                Err(e) => self.errors.push(e),
            }
        }
    }

    fn check_formula(
        &mut self,
        formula: &FormulaAst,
        params: &BTreeMap<&str, &EitherType>,
        objects: &BTreeMap<&str, &EitherType>,
    ) {
        match formula {
            FormulaAst::Atom { span, pred, args } => {
                self.check_application("predicate", pred, *span, args, params, objects);
            }
            FormulaAst::Equal { left, right, .. } => {
                self.term_type(left, params, objects);
                self.term_type(right, params, objects);
            }
            FormulaAst::Not { body, .. } => self.check_formula(body, params, objects),
            FormulaAst::And { parts, .. } | FormulaAst::Or { parts, .. } => {
                for p in parts {
                    self.check_formula(p, params, objects);
                }
            }
        }
    }

    fn check_duration_decl(
        &mut self,
        constraint: &DurationConstraint,
        params: &BTreeMap<&str, &EitherType>,
    ) {
        let empty = BTreeMap::new();
        match constraint {
            DurationConstraint::None => {}
            DurationConstraint::Equal(expr)
            | DurationConstraint::AtMost(expr)
            | DurationConstraint::AtLeast(expr) => {
                if let DurationExpr::Function { span, name, args } = expr {
                    self.check_application("function", name, *span, args, params, &empty);
                }
            }
            DurationConstraint::All(parts) => {
                for p in parts {
                    self.check_duration_decl(p, params);
                }
            }
        }
    }

    fn check_schema(&mut self, schema: &ActionSchemaAst) {
        self.check_typed_names(&schema.parameters, "parameter");
        let params: BTreeMap<&str, &EitherType> = schema
            .parameters
            .iter()
            .map(|p| (p.name.as_str(), &p.ty))
            .collect();
        let objects = BTreeMap::new();
        for (_, cond) in &schema.conditions {
            self.check_formula(cond, &params, &objects);
        }
        for timed in &schema.effects {
            self.check_application(
                "predicate",
                &timed.literal.pred,
                timed.literal.span,
                &timed.literal.args,
                &params,
                &objects,
            );
        }
        self.check_duration_decl(&schema.duration, &params);
    }

    fn check_domain(&mut self) {
        for p in &self.domain.predicates {
            self.check_typed_names(&p.params, "parameter");
        }
        for f in &self.domain.functions {
            self.check_typed_names(&f.params, "parameter");
        }
        let mut seen = BTreeSet::new();
        for schema in &self.domain.schemata {
            if !seen.insert(schema.name.as_str()) {
                self.push(
                    WfCategory::DuplicateDefinition,
                    &schema.name,
                    schema.span,
                    format!("action {} declared twice", schema.name),
                );
            }
        }
        for schema in self.domain.schemata.iter() {
            self.check_schema(schema);
        }
    }
}

/// Checks the domain together with a problem: declarations, arities, typing
/// of every application, groundness of init, and function assignments.
/// Returns every error found (empty means well-formed).
pub fn check_problem(domain: &DomainAst, problem: &ProblemAst) -> Vec<WfError> {
    let mut checker = Checker::new(domain);
    checker.check_domain();
    checker.check_typed_names(&problem.objects, "object");

    let objects: BTreeMap<&str, &EitherType> = problem
        .objects
        .iter()
        .map(|o| (o.name.as_str(), &o.ty))
        .collect();
    let no_params = BTreeMap::new();

    for atom in &problem.init {
        let args: Vec<TermAst> = atom
            .args
            .iter()
            .map(|a| TermAst::Object {
                span: atom.span,
                name: a.clone(),
            })
            .collect();
        checker.check_application("predicate", &atom.pred, atom.span, &args, &no_params, &objects);
    }
    for assignment in &problem.fluents {
        let args: Vec<TermAst> = assignment
            .args
            .iter()
            .map(|a| TermAst::Object {
                span: assignment.span,
                name: a.clone(),
            })
            .collect();
        checker.check_application(
            "function",
            &assignment.name,
            assignment.span,
            &args,
            &no_params,
            &objects,
        );
    }
    let (_, dup_errors) = FunctionTable::build(problem);
    checker.errors.extend(dup_errors);

    checker.check_formula(&problem.goal, &no_params, &objects);
    checker.errors
}

/// Evaluates a duration expression for a specific instantiation.
fn eval_duration_expr(
    expr: &DurationExpr,
    schema: &ActionSchemaAst,
    args: &[String],
    fns: &FunctionTable,
) -> Result<Rational, WfError> {
    match expr {
        DurationExpr::Literal { value, .. } => Ok(value.clone()),
        DurationExpr::Function { span, name, args: terms } => {
            let subst: BTreeMap<&str, &str> = schema
                .parameters
                .iter()
                .zip(args)
                .map(|(p, a)| (p.name.as_str(), a.as_str()))
                .collect();
            let mut ground = Vec::with_capacity(terms.len());
            for t in terms {
                match t {
                    TermAst::Object { name, .. } => ground.push(name.clone()),
                    TermAst::Variable { name, .. } => {
                        ground.push(subst.get(name.as_str()).map(|s| s.to_string()).ok_or_else(
                            || {
                                WfError::new(
                                    WfCategory::UndeclaredName,
                                    name,
                                    *span,
                                    format!("variable ?{name} is not a parameter"),
                                )
                            },
                        )?);
                    }
                }
            }
            fns.get(name, &ground).cloned().ok_or_else(|| {
                WfError::new(
                    WfCategory::UndefinedFunctionValue,
                    name,
                    *span,
                    format!("no value assigned to ({name} {})", ground.join(" ")),
                )
            })
        }
    }
}

fn duration_satisfied(
    constraint: &DurationConstraint,
    schema: &ActionSchemaAst,
    args: &[String],
    d: &Rational,
    fns: &FunctionTable,
) -> Result<bool, WfError> {
    Ok(match constraint {
        DurationConstraint::None => true,
        DurationConstraint::Equal(e) => d == &eval_duration_expr(e, schema, args, fns)?,
        DurationConstraint::AtMost(e) => d <= &eval_duration_expr(e, schema, args, fns)?,
        DurationConstraint::AtLeast(e) => d >= &eval_duration_expr(e, schema, args, fns)?,
        DurationConstraint::All(parts) => {
            for p in parts {
                if !duration_satisfied(p, schema, args, d, fns)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// Checks one plan step's duration against the schema's constraint, with
/// `?duration` bound to `d` and function terms looked up in `fns`.
pub fn check_duration(
    schema: &ActionSchemaAst,
    args: &[String],
    d: &Rational,
    fns: &FunctionTable,
) -> Result<(), WfError> {
    if duration_satisfied(&schema.duration, schema, args, d, fns)? {
        Ok(())
    } else {
        Err(WfError::new(
            WfCategory::DurationViolation,
            &schema.name,
            schema.span,
            format!("duration {d} violates the duration constraint of {}", schema.name),
        ))
    }
}

/// Every assignment of declared objects to a typed parameter list that
/// respects the sub-typing rule, in lexicographic object order.
pub fn type_correct_tuples(
    params: &[TypedName],
    objects: &[TypedName],
    g: &SubtypeGraph,
) -> Vec<Vec<String>> {
    let mut tuples = alloc::vec![Vec::new()];
    for param in params {
        let mut extended = Vec::new();
        for tuple in &tuples {
            for obj in objects {
                if of_type(&obj.ty, &param.ty, g).unwrap_or(false) {
                    let mut next = tuple.clone();
                    next.push(obj.name.clone());
                    extended.push(next);
                }
            }
        }
        tuples = extended;
    }
    tuples
}

/// Checks a plan against a domain and problem: every step names a known
/// schema, passes arity and typing, carries a duration exactly when the
/// schema is durative, and satisfies the duration constraint.
pub fn check_plan(domain: &DomainAst, problem: &ProblemAst, plan: &PlanAst) -> Vec<WfError> {
    let (graph, mut errors) = SubtypeGraph::build(&domain.types);
    let (fns, fn_errors) = FunctionTable::build(problem);
    errors.extend(fn_errors);
    let objects: BTreeMap<&str, &EitherType> = problem
        .objects
        .iter()
        .map(|o| (o.name.as_str(), &o.ty))
        .collect();

    for step in &plan.steps {
        let Some(schema) = domain.schema(&step.action) else {
            errors.push(WfError::new(
                WfCategory::UndeclaredName,
                &step.action,
                step.span,
                format!("plan references unknown action {}", step.action),
            ));
            continue;
        };
        if schema.parameters.len() != step.args.len() {
            errors.push(WfError::new(
                WfCategory::ArityMismatch,
                &step.action,
                step.span,
                format!(
                    "action {} expects {} arguments, got {}",
                    step.action,
                    schema.parameters.len(),
                    step.args.len()
                ),
            ));
            continue;
        }
        for (arg, param) in step.args.iter().zip(&schema.parameters) {
            let Some(arg_ty) = objects.get(arg.as_str()) else {
                errors.push(WfError::new(
                    WfCategory::UndeclaredName,
                    arg,
                    step.span,
                    format!("unknown object {arg} in plan step"),
                ));
                continue;
            };
            match of_type(arg_ty, &param.ty, &graph) {
                Ok(true) => {}
                Ok(false) => errors.push(WfError::new(
                    WfCategory::TypeMismatch,
                    arg,
                    step.span,
                    format!(
                        "argument {arg} of {} has type {} where {} is expected",
                        step.action, arg_ty, param.ty
                    ),
                )),
                Err(e) => errors.push(e),
            }
        }
        match (&step.duration, schema.is_durative()) {
            (Some(d), true) => {
                if let Err(e) = check_duration(schema, &step.args, d, &fns) {
                    errors.push(WfError {
                        span: step.span,
                        ..e
                    });
                }
            }
            (None, false) => {}
            (None, true) => errors.push(WfError::new(
                WfCategory::DurationViolation,
                &step.action,
                step.span,
                format!("durative action {} needs a duration", step.action),
            )),
            (Some(_), false) => errors.push(WfError::new(
                WfCategory::DurationViolation,
                &step.action,
                step.span,
                format!("action {} is instantaneous and takes no duration", step.action),
            )),
        }
    }
    errors
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn decl(name: &str, supertype: &str) -> TypeDecl {
        TypeDecl {
            span: Span::default(),
            name: name.to_string(),
            supertype: supertype.to_string(),
        }
    }

    fn elevator_types() -> Vec<TypeDecl> {
        vec![
            decl("floor", "object"),
            decl("elevator", "object"),
            decl("passenger", "object"),
        ]
    }

    #[test]
    fn every_declared_type_reaches_object() {
        let (g, errors) = SubtypeGraph::build(&elevator_types());
        assert!(errors.is_empty());
        for t in ["floor", "elevator", "passenger", "object"] {
            assert!(g.is_subtype(t, OBJECT_TYPE));
        }
    }

    #[test]
    fn of_type_on_singletons_and_unions() {
        let (g, _) = SubtypeGraph::build(&elevator_types());
        let elevator = EitherType::primitive("elevator");
        let passenger = EitherType::primitive("passenger");
        let object = EitherType::object();

        assert!(of_type(&elevator, &object, &g).unwrap());
        assert!(!of_type(&elevator, &passenger, &g).unwrap());
        // A union argument fits only if every member fits.
        let both = EitherType::new(vec!["elevator".to_string(), "passenger".to_string()]);
        assert!(!of_type(&both, &passenger, &g).unwrap());
        assert!(of_type(&both, &object, &g).unwrap());

        assert!(of_type(&EitherType::primitive("ghost"), &object, &g).is_err());
    }

    #[test]
    fn of_type_is_reflexive_and_monotone() {
        let (g, _) = SubtypeGraph::build(&elevator_types());
        let types = [
            EitherType::primitive("floor"),
            EitherType::primitive("elevator"),
            EitherType::new(vec!["floor".to_string(), "passenger".to_string()]),
            EitherType::object(),
        ];
        for t in &types {
            assert!(of_type(t, t, &g).unwrap());
        }
        // Enlarging the parameter union never flips acceptance to rejection.
        for arg in &types {
            for param in &types {
                if of_type(arg, param, &g).unwrap() {
                    let mut larger = param.primitives().to_vec();
                    larger.push("elevator".to_string());
                    let larger = EitherType::new(larger);
                    assert!(of_type(arg, &larger, &g).unwrap());
                }
            }
        }
    }

    #[test]
    fn chained_supertypes_resolve() {
        let (g, errors) =
            SubtypeGraph::build(&[decl("sub", "mid"), decl("mid", "top"), decl("top", "object")]);
        assert!(errors.is_empty());
        assert!(g.is_subtype("sub", "top"));
        assert!(g.is_subtype("sub", "object"));
        assert!(!g.is_subtype("top", "sub"));
    }

    #[test]
    fn cyclic_hierarchy_is_reported() {
        let (_, errors) = SubtypeGraph::build(&[decl("a", "b"), decl("b", "a")]);
        assert!(errors.iter().any(|e| e.category == WfCategory::TypeMismatch));
    }

    #[test]
    fn supertype_only_names_are_implicitly_declared() {
        let (g, errors) = SubtypeGraph::build(&[decl("car", "vehicle")]);
        assert!(errors.is_empty());
        assert!(g.is_declared("vehicle"));
        assert!(g.is_subtype("vehicle", OBJECT_TYPE));
    }
}
