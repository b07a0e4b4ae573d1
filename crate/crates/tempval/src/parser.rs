//! Recursive-descent parsers for domain, problem, and plan files.
//!
//! Domains and problems are read from s-expression trees; plan files are
//! line-oriented: `<time>: (<name> <args>*)[<duration>]`, the bracket part
//! present for durative actions only, `;` comments, any line order.

use std::fmt;

use tempval_core::ast::{
    ActionSchemaAst, DomainAst, DurationConstraint, DurationExpr, EffectTime, EitherType,
    FluentAssignment, FormulaAst, FunctionDecl, GroundAtomAst, LiteralAst, PlanAst, PlanStep,
    PredicateDecl, ProblemAst, Requirement, Span, TermAst, TimeQualifier, TimedLiteral, TypeDecl,
    TypedName,
};
use tempval_core::rational::Rational;

use crate::sexpr::{read_all, Sexp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileRole {
    Domain,
    Problem,
    Plan,
}

impl fmt::Display for FileRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileRole::Domain => "domain",
            FileRole::Problem => "problem",
            FileRole::Plan => "plan",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        role: FileRole,
        span: Span,
        expected: String,
        found: String,
    },
    /// A declared requirement flag outside the supported set.
    UnsupportedRequirement {
        role: FileRole,
        span: Span,
        flag: String,
    },
    /// Plan times and durations must be nonnegative; this is a semantic
    /// defect of the plan, not a syntax error.
    NegativeQuantity {
        span: Span,
        what: &'static str,
        value: Rational,
    },
}

impl ParseError {
    pub(crate) fn syntax(
        role: FileRole,
        span: Span,
        expected: impl Into<String>,
        found: impl Into<String>,
    ) -> ParseError {
        ParseError::Syntax {
            role,
            span,
            expected: expected.into(),
            found: found.into(),
        }
    }

    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::UnsupportedRequirement { span, .. }
            | ParseError::NegativeQuantity { span, .. } => *span,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { role, span, expected, found } => {
                write!(f, "{role}, {span}: expected {expected}, found {found}")
            }
            ParseError::UnsupportedRequirement { role, span, flag } => {
                write!(f, "{role}, {span}: unsupported requirement {flag}")
            }
            ParseError::NegativeQuantity { span, what, value } => {
                write!(f, "plan, {span}: negative {what} {value}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

struct Cx {
    role: FileRole,
}

impl Cx {
    fn err(&self, span: Span, expected: impl Into<String>, found: impl Into<String>) -> ParseError {
        ParseError::syntax(self.role, span, expected, found)
    }

    fn sym<'a>(&self, sexp: &'a Sexp, expected: &str) -> Result<(&'a str, Span), ParseError> {
        match sexp {
            Sexp::Sym { text, span } => Ok((text, *span)),
            Sexp::List { .. } => Err(self.err(sexp.span(), expected, sexp.describe())),
        }
    }

    fn list<'a>(&self, sexp: &'a Sexp, expected: &str) -> Result<(&'a [Sexp], Span), ParseError> {
        match sexp {
            Sexp::List { items, span } => Ok((items, *span)),
            Sexp::Sym { .. } => Err(self.err(sexp.span(), expected, sexp.describe())),
        }
    }

    /// `x y z - ty a b - (either t u) c` with untyped trailers defaulting to
    /// `object`. `variables` selects between `?name` and plain-name items.
    fn typed_list(&self, items: &[Sexp], variables: bool) -> Result<Vec<TypedName>, ParseError> {
        let mut out = Vec::new();
        let mut pending: Vec<(String, Span)> = Vec::new();
        let mut iter = items.iter().peekable();
        while let Some(item) = iter.next() {
            let (text, span) = self.sym(item, if variables { "a variable" } else { "a name" })?;
            if text == "-" {
                let ty_sexp = iter
                    .next()
                    .ok_or_else(|| self.err(span, "a type after -", "end of list"))?;
                let ty = self.either_type(ty_sexp)?;
                if pending.is_empty() {
                    return Err(self.err(span, "names before -", "-"));
                }
                for (name, span) in pending.drain(..) {
                    out.push(TypedName { span, name, ty: ty.clone() });
                }
            } else {
                let name = self.item_name(text, span, variables)?;
                pending.push((name, span));
            }
        }
        for (name, span) in pending {
            out.push(TypedName { span, name, ty: EitherType::object() });
        }
        Ok(out)
    }

    fn item_name(&self, text: &str, span: Span, variable: bool) -> Result<String, ParseError> {
        if variable {
            match text.strip_prefix('?') {
                Some(rest) if !rest.is_empty() => Ok(rest.to_string()),
                _ => Err(self.err(span, "a variable like ?x", text)),
            }
        } else if text.starts_with('?') || text.is_empty() {
            Err(self.err(span, "a name", text))
        } else {
            Ok(text.to_string())
        }
    }

    fn either_type(&self, sexp: &Sexp) -> Result<EitherType, ParseError> {
        match sexp {
            Sexp::Sym { text, span } => {
                if text.starts_with('?') {
                    Err(self.err(*span, "a type name", text.as_str()))
                } else {
                    Ok(EitherType::primitive(text.clone()))
                }
            }
            Sexp::List { items, span } => {
                let mut iter = items.iter();
                match iter.next() {
                    Some(Sexp::Sym { text, .. }) if text == "either" => {}
                    _ => return Err(self.err(*span, "(either ...)", sexp.describe())),
                }
                let mut names = Vec::new();
                for item in iter {
                    let (name, _) = self.sym(item, "a type name")?;
                    names.push(name.to_string());
                }
                if names.is_empty() {
                    return Err(self.err(*span, "at least one type inside (either ...)", ")"));
                }
                Ok(EitherType::new(names))
            }
        }
    }

    fn term(&self, sexp: &Sexp) -> Result<TermAst, ParseError> {
        let (text, span) = self.sym(sexp, "a term")?;
        Ok(match text.strip_prefix('?') {
            Some(rest) if !rest.is_empty() => TermAst::Variable { span, name: rest.to_string() },
            _ => TermAst::Object { span, name: text.to_string() },
        })
    }

    fn formula(&self, sexp: &Sexp) -> Result<FormulaAst, ParseError> {
        let (items, span) = self.list(sexp, "a formula")?;
        let Some((head, rest)) = items.split_first() else {
            // `(and)` is the verum; a bare `()` has no reading.
            return Err(self.err(span, "a formula", "()"));
        };
        let (op, _) = self.sym(head, "a connective or predicate name")?;
        match op {
            "and" | "or" => {
                let parts = rest.iter().map(|p| self.formula(p)).collect::<Result<_, _>>()?;
                Ok(if op == "and" {
                    FormulaAst::And { span, parts }
                } else {
                    FormulaAst::Or { span, parts }
                })
            }
            "not" => match rest {
                [body] => Ok(FormulaAst::Not {
                    span,
                    body: Box::new(self.formula(body)?),
                }),
                _ => Err(self.err(span, "exactly one formula inside (not ...)", sexp.describe())),
            },
            "=" => match rest {
                [l, r] => Ok(FormulaAst::Equal {
                    span,
                    left: self.term(l)?,
                    right: self.term(r)?,
                }),
                _ => Err(self.err(span, "two terms inside (= ...)", sexp.describe())),
            },
            _ => {
                let args = rest.iter().map(|t| self.term(t)).collect::<Result<_, _>>()?;
                Ok(FormulaAst::Atom { span, pred: op.to_string(), args })
            }
        }
    }

    fn literal(&self, sexp: &Sexp) -> Result<LiteralAst, ParseError> {
        let (items, span) = self.list(sexp, "a literal")?;
        let Some((head, rest)) = items.split_first() else {
            return Err(self.err(span, "a literal", "()"));
        };
        let (op, _) = self.sym(head, "a predicate name or not")?;
        if op == "not" {
            match rest {
                [inner] => {
                    let mut lit = self.literal(inner)?;
                    if !lit.positive {
                        return Err(self.err(span, "an atom inside (not ...)", "(not ...)"));
                    }
                    lit.positive = false;
                    lit.span = span;
                    Ok(lit)
                }
                _ => Err(self.err(span, "exactly one atom inside (not ...)", sexp.describe())),
            }
        } else {
            let args = rest.iter().map(|t| self.term(t)).collect::<Result<_, _>>()?;
            Ok(LiteralAst { span, positive: true, pred: op.to_string(), args })
        }
    }

    /// A literal or an `and` of literals.
    fn literal_conj(&self, sexp: &Sexp, out: &mut Vec<LiteralAst>) -> Result<(), ParseError> {
        let (items, _) = self.list(sexp, "an effect")?;
        if let Some(Sexp::Sym { text, .. }) = items.first() {
            if text == "and" {
                for item in &items[1..] {
                    self.literal_conj(item, out)?;
                }
                return Ok(());
            }
        }
        out.push(self.literal(sexp)?);
        Ok(())
    }
}

fn define_body(cx: &Cx, text: &str, kind: &str) -> Result<(String, Vec<Sexp>), ParseError> {
    let forms = read_all(text, cx.role)?;
    let mut iter = forms.into_iter();
    let Some(form) = iter.next() else {
        return Err(cx.err(Span::new(1, 1), format!("(define ({kind} ...) ...)"), "end of input"));
    };
    if let Some(extra) = iter.next() {
        return Err(cx.err(extra.span(), "end of input", extra.describe()));
    }
    let (items, span) = cx.list(&form, "(define ...)")?;
    let mut iter = items.iter();
    match iter.next() {
        Some(Sexp::Sym { text, .. }) if text == "define" => {}
        other => {
            let found = other.map_or_else(|| ")".to_string(), |s| s.describe());
            return Err(cx.err(span, "define", found));
        }
    }
    let head = iter
        .next()
        .ok_or_else(|| cx.err(span, format!("({kind} <name>)"), ")"))?;
    let (head_items, head_span) = cx.list(head, &format!("({kind} <name>)"))?;
    let name = match head_items {
        [Sexp::Sym { text: k, .. }, Sexp::Sym { text: name, .. }] if k == kind => name.clone(),
        _ => return Err(cx.err(head_span, format!("({kind} <name>)"), head.describe())),
    };
    Ok((name, iter.cloned().collect()))
}

fn section_key<'a>(cx: &Cx, section: &'a Sexp) -> Result<(&'a str, &'a [Sexp], Span), ParseError> {
    let (items, span) = cx.list(section, "a section like (:predicates ...)")?;
    match items.first() {
        Some(Sexp::Sym { text, .. }) if text.starts_with(':') => Ok((text, &items[1..], span)),
        _ => Err(cx.err(span, "a section keyword", section.describe())),
    }
}

fn parse_requirements(cx: &Cx, body: &[Sexp]) -> Result<Vec<Requirement>, ParseError> {
    let mut flags = Vec::new();
    for item in body {
        let (text, span) = cx.sym(item, "a requirement flag")?;
        match Requirement::from_flag(text) {
            Some(req) => flags.push(req),
            None => {
                return Err(ParseError::UnsupportedRequirement {
                    role: cx.role,
                    span,
                    flag: text.to_string(),
                })
            }
        }
    }
    Ok(flags)
}

fn parse_types(cx: &Cx, body: &[Sexp]) -> Result<Vec<TypeDecl>, ParseError> {
    let typed = cx.typed_list(body, false)?;
    Ok(typed
        .into_iter()
        .map(|tn| {
            let supertype = tn.ty.primitives()[0].clone();
            TypeDecl { span: tn.span, name: tn.name, supertype }
        })
        .collect())
}

fn parse_predicates(cx: &Cx, body: &[Sexp]) -> Result<Vec<PredicateDecl>, ParseError> {
    body.iter()
        .map(|decl| {
            let (items, span) = cx.list(decl, "a predicate declaration")?;
            let Some((head, rest)) = items.split_first() else {
                return Err(cx.err(span, "a predicate name", "()"));
            };
            let (name, _) = cx.sym(head, "a predicate name")?;
            Ok(PredicateDecl {
                span,
                name: name.to_string(),
                params: cx.typed_list(rest, true)?,
            })
        })
        .collect()
}

fn parse_functions(cx: &Cx, body: &[Sexp]) -> Result<Vec<FunctionDecl>, ParseError> {
    // Function declarations form a typed list themselves; the only type we
    // accept for them is `number`, and it may be omitted.
    let mut out = Vec::new();
    let mut iter = body.iter().peekable();
    while let Some(item) = iter.next() {
        if let Sexp::Sym { text, span } = item {
            if text == "-" {
                let ty = iter
                    .next()
                    .ok_or_else(|| cx.err(*span, "a type after -", "end of list"))?;
                let (ty_name, ty_span) = cx.sym(ty, "number")?;
                if ty_name != "number" {
                    return Err(cx.err(ty_span, "number", ty_name));
                }
                if out.is_empty() {
                    return Err(cx.err(*span, "function declarations before -", "-"));
                }
                continue;
            }
        }
        let (items, span) = cx.list(item, "a function declaration")?;
        let Some((head, rest)) = items.split_first() else {
            return Err(cx.err(span, "a function name", "()"));
        };
        let (name, _) = cx.sym(head, "a function name")?;
        out.push(FunctionDecl {
            span,
            name: name.to_string(),
            params: cx.typed_list(rest, true)?,
        });
    }
    Ok(out)
}

fn parse_number(cx: &Cx, sexp: &Sexp) -> Result<(Rational, Span), ParseError> {
    let (text, span) = cx.sym(sexp, "a number")?;
    match Rational::from_decimal_str(text) {
        Ok(value) => Ok((value, span)),
        Err(e) => Err(cx.err(
            Span::new(span.line, span.col + e.offset as u32),
            "a decimal number",
            text,
        )),
    }
}

fn parse_duration_expr(cx: &Cx, sexp: &Sexp) -> Result<DurationExpr, ParseError> {
    match sexp {
        Sexp::Sym { .. } => {
            let (value, span) = parse_number(cx, sexp)?;
            Ok(DurationExpr::Literal { span, value })
        }
        Sexp::List { items, span } => {
            let Some((head, rest)) = items.split_first() else {
                return Err(cx.err(*span, "a function application", "()"));
            };
            let (name, _) = cx.sym(head, "a function name")?;
            // Only literals and ground function lookups are supported inside
            // duration constraints; arithmetic is rejected outright.
            if matches!(name, "+" | "-" | "*" | "/") {
                return Err(cx.err(*span, "a function lookup (arithmetic is not supported)", name));
            }
            let args = rest.iter().map(|t| cx.term(t)).collect::<Result<_, _>>()?;
            Ok(DurationExpr::Function { span: *span, name: name.to_string(), args })
        }
    }
}

fn parse_duration_constraint(cx: &Cx, sexp: &Sexp) -> Result<DurationConstraint, ParseError> {
    let (items, span) = cx.list(sexp, "a duration constraint")?;
    let Some((head, rest)) = items.split_first() else {
        return Err(cx.err(span, "a duration constraint", "()"));
    };
    let (op, _) = cx.sym(head, "=, <=, >= or and")?;
    if op == "and" {
        let parts = rest
            .iter()
            .map(|p| parse_duration_constraint(cx, p))
            .collect::<Result<_, _>>()?;
        return Ok(DurationConstraint::All(parts));
    }
    let [var, expr] = rest else {
        return Err(cx.err(span, "(?duration <expr>)", sexp.describe()));
    };
    let (var_name, var_span) = cx.sym(var, "?duration")?;
    if var_name != "?duration" {
        return Err(cx.err(var_span, "?duration", var_name));
    }
    let expr = parse_duration_expr(cx, expr)?;
    match op {
        "=" => Ok(DurationConstraint::Equal(expr)),
        "<=" => Ok(DurationConstraint::AtMost(expr)),
        ">=" => Ok(DurationConstraint::AtLeast(expr)),
        other => Err(cx.err(span, "=, <= or >=", other)),
    }
}

fn parse_timed_conditions(
    cx: &Cx,
    sexp: &Sexp,
    out: &mut Vec<(TimeQualifier, FormulaAst)>,
) -> Result<(), ParseError> {
    let (items, span) = cx.list(sexp, "a timed condition")?;
    match items.first() {
        Some(Sexp::Sym { text, .. }) if text == "and" => {
            for item in &items[1..] {
                parse_timed_conditions(cx, item, out)?;
            }
            Ok(())
        }
        Some(Sexp::Sym { text, .. }) if text == "at" || text == "over" => {
            let [_, when, formula] = items else {
                return Err(cx.err(span, "(at start <f>), (at end <f>) or (over all <f>)", sexp.describe()));
            };
            let (when, when_span) = cx.sym(when, "start, end or all")?;
            let qualifier = match (text.as_str(), when) {
                ("at", "start") => TimeQualifier::AtStart,
                ("at", "end") => TimeQualifier::AtEnd,
                ("over", "all") => TimeQualifier::OverAll,
                _ => return Err(cx.err(when_span, "start, end or all", when)),
            };
            out.push((qualifier, cx.formula(formula)?));
            Ok(())
        }
        _ => Err(cx.err(span, "(at ...), (over all ...) or (and ...)", sexp.describe())),
    }
}

fn parse_timed_effects(
    cx: &Cx,
    sexp: &Sexp,
    out: &mut Vec<TimedLiteral>,
) -> Result<(), ParseError> {
    let (items, span) = cx.list(sexp, "a timed effect")?;
    match items.first() {
        Some(Sexp::Sym { text, .. }) if text == "and" => {
            for item in &items[1..] {
                parse_timed_effects(cx, item, out)?;
            }
            Ok(())
        }
        Some(Sexp::Sym { text, .. }) if text == "at" => {
            let [_, when, effect] = items else {
                return Err(cx.err(span, "(at start <effect>) or (at end <effect>)", sexp.describe()));
            };
            let (when, when_span) = cx.sym(when, "start or end")?;
            let time = match when {
                "start" => EffectTime::AtStart,
                "end" => EffectTime::AtEnd,
                _ => return Err(cx.err(when_span, "start or end", when)),
            };
            let mut literals = Vec::new();
            cx.literal_conj(effect, &mut literals)?;
            out.extend(literals.into_iter().map(|literal| TimedLiteral { time, literal }));
            Ok(())
        }
        _ => Err(cx.err(span, "(at ...) or (and ...)", sexp.describe())),
    }
}

fn parse_schema_body(
    cx: &Cx,
    name: String,
    span: Span,
    body: &[Sexp],
    durative: bool,
) -> Result<ActionSchemaAst, ParseError> {
    let mut parameters = Vec::new();
    let mut duration = DurationConstraint::None;
    let mut conditions = Vec::new();
    let mut effects = Vec::new();
    let mut saw_duration = false;

    let mut iter = body.iter();
    while let Some(key_sexp) = iter.next() {
        let (key, key_span) = cx.sym(key_sexp, "a keyword like :parameters")?;
        let value = iter
            .next()
            .ok_or_else(|| cx.err(key_span, format!("a value after {key}"), ")"))?;
        match key {
            ":parameters" => {
                let (items, _) = cx.list(value, "a parameter list")?;
                parameters = cx.typed_list(items, true)?;
            }
            ":duration" if durative => {
                duration = parse_duration_constraint(cx, value)?;
                saw_duration = true;
            }
            ":condition" if durative => parse_timed_conditions(cx, value, &mut conditions)?,
            ":effect" if durative => parse_timed_effects(cx, value, &mut effects)?,
            ":precondition" if !durative => {
                conditions.push((TimeQualifier::AtStart, cx.formula(value)?));
            }
            ":effect" if !durative => {
                let mut literals = Vec::new();
                cx.literal_conj(value, &mut literals)?;
                effects.extend(literals.into_iter().map(|literal| TimedLiteral {
                    time: EffectTime::AtStart,
                    literal,
                }));
            }
            other => {
                return Err(cx.err(
                    key_span,
                    if durative {
                        ":parameters, :duration, :condition or :effect"
                    } else {
                        ":parameters, :precondition or :effect"
                    },
                    other,
                ))
            }
        }
    }
    if durative && !saw_duration {
        return Err(cx.err(span, format!("a :duration constraint for {name}"), ")"));
    }
    Ok(ActionSchemaAst { span, name, parameters, duration, conditions, effects })
}

/// Parses a domain file. All declared requirements must come from the
/// supported set.
pub fn parse_domain(text: &str) -> Result<DomainAst, ParseError> {
    let cx = Cx { role: FileRole::Domain };
    let (name, sections) = define_body(&cx, text, "domain")?;
    let mut domain = DomainAst {
        name,
        requirements: Default::default(),
        types: Vec::new(),
        predicates: Vec::new(),
        functions: Vec::new(),
        schemata: Vec::new(),
    };
    for section in &sections {
        let (key, body, span) = section_key(&cx, section)?;
        match key {
            ":requirements" => domain.requirements.extend(parse_requirements(&cx, body)?),
            ":types" => domain.types.extend(parse_types(&cx, body)?),
            ":predicates" => domain.predicates.extend(parse_predicates(&cx, body)?),
            ":functions" => domain.functions.extend(parse_functions(&cx, body)?),
            ":durative-action" | ":action" => {
                let durative = key == ":durative-action";
                let Some((head, rest)) = body.split_first() else {
                    return Err(cx.err(span, "an action name", ")"));
                };
                let (name, _) = cx.sym(head, "an action name")?;
                domain
                    .schemata
                    .push(parse_schema_body(&cx, name.to_string(), span, rest, durative)?);
            }
            other => {
                return Err(cx.err(
                    span,
                    ":requirements, :types, :predicates, :functions, :durative-action or :action",
                    other,
                ))
            }
        }
    }
    Ok(domain)
}

/// Parses a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemAst, ParseError> {
    let cx = Cx { role: FileRole::Problem };
    let (name, sections) = define_body(&cx, text, "problem")?;
    let mut domain = String::new();
    let mut objects = Vec::new();
    let mut init = Vec::new();
    let mut fluents = Vec::new();
    let mut goal = None;
    for section in &sections {
        let (key, body, span) = section_key(&cx, section)?;
        match key {
            ":domain" => match body {
                [sym] => domain = cx.sym(sym, "a domain name")?.0.to_string(),
                _ => return Err(cx.err(span, "(:domain <name>)", section.describe())),
            },
            ":objects" => objects.extend(cx.typed_list(body, false)?),
            ":init" => {
                for item in body {
                    let (items, item_span) = cx.list(item, "an init atom or function assignment")?;
                    match items.first() {
                        Some(Sexp::Sym { text, .. }) if text == "=" => {
                            let [_, fn_app, value] = items else {
                                return Err(cx.err(item_span, "(= (<fn> <args>*) <number>)", item.describe()));
                            };
                            let (fn_items, fn_span) = cx.list(fn_app, "a function application")?;
                            let Some((fn_head, fn_args)) = fn_items.split_first() else {
                                return Err(cx.err(fn_span, "a function name", "()"));
                            };
                            let (fn_name, _) = cx.sym(fn_head, "a function name")?;
                            let args = fn_args
                                .iter()
                                .map(|a| Ok(cx.sym(a, "an object name")?.0.to_string()))
                                .collect::<Result<_, ParseError>>()?;
                            let (value, _) = parse_number(&cx, value)?;
                            fluents.push(FluentAssignment {
                                span: item_span,
                                name: fn_name.to_string(),
                                args,
                                value,
                            });
                        }
                        Some(Sexp::Sym { text: pred, .. }) => {
                            let args = items[1..]
                                .iter()
                                .map(|a| Ok(cx.sym(a, "an object name")?.0.to_string()))
                                .collect::<Result<_, ParseError>>()?;
                            init.push(GroundAtomAst { span: item_span, pred: pred.clone(), args });
                        }
                        _ => return Err(cx.err(item_span, "a predicate name", item.describe())),
                    }
                }
            }
            ":goal" => match body {
                [formula] => goal = Some(cx.formula(formula)?),
                _ => return Err(cx.err(span, "(:goal <formula>)", section.describe())),
            },
            other => {
                return Err(cx.err(span, ":domain, :objects, :init or :goal", other));
            }
        }
    }
    let goal = goal.ok_or_else(|| cx.err(Span::new(1, 1), "a (:goal ...) section", "end of input"))?;
    Ok(ProblemAst { name, domain, objects, init, fluents, goal })
}

struct LineScanner<'a> {
    line: &'a str,
    line_no: u32,
    pos: usize,
}

impl<'a> LineScanner<'a> {
    fn span(&self) -> Span {
        Span::new(self.line_no, self.pos as u32 + 1)
    }

    fn rest(&self) -> &'a str {
        &self.line[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.line.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn found(&self) -> String {
        match self.rest().chars().next() {
            Some(c) => c.to_string(),
            None => "end of line".to_string(),
        }
    }

    fn number(&mut self, what: &'static str) -> Result<Rational, ParseError> {
        let start = self.pos;
        let token: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.'))
            .collect();
        if token.is_empty() {
            return Err(ParseError::syntax(FileRole::Plan, self.span(), "a decimal number", self.found()));
        }
        let value = Rational::from_decimal_str(&token).map_err(|e| {
            ParseError::syntax(
                FileRole::Plan,
                Span::new(self.line_no, (start + e.offset) as u32 + 1),
                "a decimal number",
                token.clone(),
            )
        })?;
        self.pos += token.len();
        if value.is_negative() {
            return Err(ParseError::NegativeQuantity {
                span: Span::new(self.line_no, start as u32 + 1),
                what,
                value,
            });
        }
        Ok(value)
    }

    fn symbol(&mut self) -> Result<String, ParseError> {
        let token: String = self
            .rest()
            .chars()
            .take_while(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | '[' | ']' | ':' | ';'))
            .collect();
        if token.is_empty() {
            Err(ParseError::syntax(FileRole::Plan, self.span(), "a name", self.found()))
        } else {
            self.pos += token.len();
            Ok(token.to_ascii_lowercase())
        }
    }
}

/// Parses a plan file. Steps stay in file order; sorting by time is the
/// validator's concern. Times and durations must be nonnegative.
pub fn parse_plan(text: &str) -> Result<PlanAst, ParseError> {
    let mut steps = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find(';') {
            Some(cut) => &raw_line[..cut],
            None => raw_line,
        };
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut s = LineScanner { line, line_no: idx as u32 + 1, pos: 0 };
        s.skip_ws();
        let step_span = s.span();
        let time = s.number("time")?;
        s.skip_ws();
        if !s.eat(':') {
            return Err(ParseError::syntax(FileRole::Plan, s.span(), ":", s.found()));
        }
        s.skip_ws();
        if !s.eat('(') {
            return Err(ParseError::syntax(FileRole::Plan, s.span(), "(", s.found()));
        }
        s.skip_ws();
        let action = s.symbol()?;
        let mut args = Vec::new();
        loop {
            s.skip_ws();
            if s.eat(')') {
                break;
            }
            args.push(s.symbol()?);
        }
        s.skip_ws();
        let duration = if s.eat('[') {
            s.skip_ws();
            let d = s.number("duration")?;
            s.skip_ws();
            if !s.eat(']') {
                return Err(ParseError::syntax(FileRole::Plan, s.span(), "]", s.found()));
            }
            Some(d)
        } else {
            None
        };
        s.skip_ws();
        if !s.rest().is_empty() {
            return Err(ParseError::syntax(FileRole::Plan, s.span(), "end of line", s.found()));
        }
        steps.push(PlanStep { span: step_span, time, action, args, duration });
    }
    Ok(PlanAst { steps })
}
