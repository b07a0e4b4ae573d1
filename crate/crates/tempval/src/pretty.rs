//! Renders syntax trees back to their file formats.

use std::fmt::Write;

use tempval_core::ast::{
    ActionSchemaAst, DomainAst, DurationConstraint, DurationExpr, EffectTime, FormulaAst,
    LiteralAst, PlanAst, ProblemAst, TermAst, TimeQualifier, TypedName,
};

fn typed_list(out: &mut String, names: &[TypedName], variable: bool) {
    for (i, tn) in names.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        if variable {
            out.push('?');
        }
        let _ = write!(out, "{} - {}", tn.name, tn.ty);
    }
}

fn term(out: &mut String, t: &TermAst) {
    match t {
        TermAst::Variable { name, .. } => {
            let _ = write!(out, "?{name}");
        }
        TermAst::Object { name, .. } => out.push_str(name),
    }
}

fn formula(out: &mut String, f: &FormulaAst) {
    match f {
        FormulaAst::Atom { pred, args, .. } => {
            let _ = write!(out, "({pred}");
            for a in args {
                out.push(' ');
                term(out, a);
            }
            out.push(')');
        }
        FormulaAst::Equal { left, right, .. } => {
            out.push_str("(= ");
            term(out, left);
            out.push(' ');
            term(out, right);
            out.push(')');
        }
        FormulaAst::Not { body, .. } => {
            out.push_str("(not ");
            formula(out, body);
            out.push(')');
        }
        FormulaAst::And { parts, .. } | FormulaAst::Or { parts, .. } => {
            out.push_str(if matches!(f, FormulaAst::And { .. }) { "(and" } else { "(or" });
            for p in parts {
                out.push(' ');
                formula(out, p);
            }
            out.push(')');
        }
    }
}

fn literal(out: &mut String, l: &LiteralAst) {
    if !l.positive {
        out.push_str("(not ");
    }
    let _ = write!(out, "({}", l.pred);
    for a in &l.args {
        out.push(' ');
        term(out, a);
    }
    out.push(')');
    if !l.positive {
        out.push(')');
    }
}

fn duration_expr(out: &mut String, e: &DurationExpr) {
    match e {
        DurationExpr::Literal { value, .. } => {
            let _ = write!(out, "{value}");
        }
        DurationExpr::Function { name, args, .. } => {
            let _ = write!(out, "({name}");
            for a in args {
                out.push(' ');
                term(out, a);
            }
            out.push(')');
        }
    }
}

fn duration_constraint(out: &mut String, c: &DurationConstraint) {
    match c {
        DurationConstraint::None => {}
        DurationConstraint::Equal(e) => {
            out.push_str("(= ?duration ");
            duration_expr(out, e);
            out.push(')');
        }
        DurationConstraint::AtMost(e) => {
            out.push_str("(<= ?duration ");
            duration_expr(out, e);
            out.push(')');
        }
        DurationConstraint::AtLeast(e) => {
            out.push_str("(>= ?duration ");
            duration_expr(out, e);
            out.push(')');
        }
        DurationConstraint::All(parts) => {
            out.push_str("(and");
            for p in parts {
                out.push(' ');
                duration_constraint(out, p);
            }
            out.push(')');
        }
    }
}

fn schema(out: &mut String, s: &ActionSchemaAst) {
    let durative = s.is_durative();
    let _ = write!(
        out,
        "  ({} {}\n    :parameters (",
        if durative { ":durative-action" } else { ":action" },
        s.name
    );
    typed_list(out, &s.parameters, true);
    out.push(')');
    if durative {
        out.push_str("\n    :duration ");
        duration_constraint(out, &s.duration);
        out.push_str("\n    :condition (and");
        for (q, f) in &s.conditions {
            out.push_str(match q {
                TimeQualifier::AtStart => " (at start ",
                TimeQualifier::AtEnd => " (at end ",
                TimeQualifier::OverAll => " (over all ",
            });
            formula(out, f);
            out.push(')');
        }
        out.push_str(")\n    :effect (and");
        for e in &s.effects {
            out.push_str(match e.time {
                EffectTime::AtStart => " (at start ",
                EffectTime::AtEnd => " (at end ",
            });
            literal(out, &e.literal);
            out.push(')');
        }
        out.push_str(")\n  )\n");
    } else {
        out.push_str("\n    :precondition (and");
        for (_, f) in &s.conditions {
            out.push(' ');
            formula(out, f);
        }
        out.push_str(")\n    :effect (and");
        for e in &s.effects {
            out.push(' ');
            literal(out, &e.literal);
        }
        out.push_str(")\n  )\n");
    }
}

pub fn domain_to_string(d: &DomainAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", d.name);
    if !d.requirements.is_empty() {
        out.push_str("  (:requirements");
        for r in &d.requirements {
            let _ = write!(out, " {r}");
        }
        out.push_str(")\n");
    }
    if !d.types.is_empty() {
        out.push_str("  (:types");
        for t in &d.types {
            let _ = write!(out, " {} - {}", t.name, t.supertype);
        }
        out.push_str(")\n");
    }
    if !d.predicates.is_empty() {
        out.push_str("  (:predicates\n");
        for p in &d.predicates {
            let _ = write!(out, "    ({}", p.name);
            if !p.params.is_empty() {
                out.push(' ');
                typed_list(&mut out, &p.params, true);
            }
            out.push_str(")\n");
        }
        out.push_str("  )\n");
    }
    if !d.functions.is_empty() {
        out.push_str("  (:functions");
        for f in &d.functions {
            let _ = write!(out, " ({}", f.name);
            if !f.params.is_empty() {
                out.push(' ');
                typed_list(&mut out, &f.params, true);
            }
            out.push_str(") - number");
        }
        out.push_str(")\n");
    }
    for s in &d.schemata {
        schema(&mut out, s);
    }
    out.push_str(")\n");
    out
}

pub fn problem_to_string(p: &ProblemAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", p.name);
    let _ = writeln!(out, "  (:domain {})", p.domain);
    if !p.objects.is_empty() {
        out.push_str("  (:objects ");
        typed_list(&mut out, &p.objects, false);
        out.push_str(")\n");
    }
    out.push_str("  (:init\n");
    for atom in &p.init {
        let _ = write!(out, "    ({}", atom.pred);
        for a in &atom.args {
            let _ = write!(out, " {a}");
        }
        out.push_str(")\n");
    }
    for fl in &p.fluents {
        let _ = write!(out, "    (= ({}", fl.name);
        for a in &fl.args {
            let _ = write!(out, " {a}");
        }
        let _ = writeln!(out, ") {})", fl.value);
    }
    out.push_str("  )\n  (:goal ");
    formula(&mut out, &p.goal);
    out.push_str(")\n)\n");
    out
}

pub fn plan_to_string(p: &PlanAst) -> String {
    let mut out = String::new();
    for step in &p.steps {
        let _ = write!(out, "{}: ({}", step.time, step.action);
        for a in &step.args {
            let _ = write!(out, " {a}");
        }
        out.push(')');
        if let Some(d) = &step.duration {
            let _ = write!(out, "[{d}]");
        }
        out.push('\n');
    }
    out
}
