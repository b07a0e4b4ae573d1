//! Typing, duration, and grounding checks driven through the parsed fixtures.

use tempval::driver;
use tempval::parser::{parse_domain, parse_plan, parse_problem};
use tempval_core::ground::{instantiate, GroundAction};
use tempval_core::rational::Rational;
use tempval_core::wf::{
    check_duration, check_plan, check_problem, type_correct_tuples, FunctionTable, SubtypeGraph,
    WfCategory,
};

const DOMAIN: &str = include_str!("../fixtures/elevators-domain.pddl");
const PROBLEM: &str = include_str!("../fixtures/elevators-problem.pddl");
const PLAN: &str = include_str!("../fixtures/elevators.tplan");

#[test]
fn fixtures_are_well_formed() {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(PROBLEM).unwrap();
    let plan = parse_plan(PLAN).unwrap();
    assert_eq!(check_problem(&domain, &problem), []);
    assert_eq!(check_plan(&domain, &problem, &plan), []);
}

#[test]
fn misplaced_object_type_in_init_is_a_type_mismatch() {
    let domain = parse_domain(DOMAIN).unwrap();
    // A passenger where a floor belongs.
    let problem = parse_problem(&PROBLEM.replace("(el-at e0 f0)", "(el-at e0 p0)")).unwrap();
    let errors = check_problem(&domain, &problem);
    assert!(errors.iter().any(|e| e.category == WfCategory::TypeMismatch && e.name == "p0"));
}

#[test]
fn undeclared_goal_predicate_is_reported() {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(&PROBLEM.replace("(p-at p0 f0)", "(happy p0)")).unwrap();
    let errors = check_problem(&domain, &problem);
    assert!(errors
        .iter()
        .any(|e| e.category == WfCategory::UndeclaredName && e.name == "happy"));
}

#[test]
fn duplicate_function_assignment_is_reported() {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(
        &PROBLEM.replace("(= (el-dur f0 f1) 1)", "(= (el-dur f0 f1) 1) (= (el-dur f0 f1) 2)"),
    )
    .unwrap();
    let errors = check_problem(&domain, &problem);
    assert!(errors
        .iter()
        .any(|e| e.category == WfCategory::DuplicateDefinition && e.name == "el-dur"));
}

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

#[test]
fn duration_constraints_evaluate_against_the_function_table() {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(PROBLEM).unwrap();
    let (fns, errors) = FunctionTable::build(&problem);
    assert!(errors.is_empty());

    // mv's duration must equal the declared travel time.
    let mv = domain.schema("mv").unwrap();
    assert!(check_duration(mv, &args(&["e1", "f1", "f0"]), &Rational::one(), &fns).is_ok());
    let err = check_duration(mv, &args(&["e1", "f1", "f0"]), &Rational::new(2, 1), &fns).unwrap_err();
    assert_eq!(err.category, WfCategory::DurationViolation);

    // Boarding takes at most one time unit.
    let en = domain.schema("en").unwrap();
    assert!(check_duration(en, &args(&["p0", "e1", "f1"]), &Rational::new(1, 2), &fns).is_ok());
    // Zero duration satisfies an at-most constraint.
    assert!(check_duration(en, &args(&["p0", "e1", "f1"]), &Rational::zero(), &fns).is_ok());

    // Opening the door takes exactly one time unit.
    let op = domain.schema("op").unwrap();
    let err = check_duration(op, &args(&["e1"]), &Rational::new(2, 1), &fns).unwrap_err();
    assert_eq!(err.category, WfCategory::DurationViolation);
}

#[test]
fn missing_function_value_is_reported() {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(&PROBLEM.replace("(= (el-dur f1 f0) 1)", "")).unwrap();
    let (fns, _) = FunctionTable::build(&problem);
    let mv = domain.schema("mv").unwrap();
    let err = check_duration(mv, &args(&["e1", "f1", "f0"]), &Rational::one(), &fns).unwrap_err();
    assert_eq!(err.category, WfCategory::UndefinedFunctionValue);
}

#[test]
fn plan_steps_are_checked_against_schemata() {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(PROBLEM).unwrap();

    let unknown = parse_plan("0: (teleport e1)[1]").unwrap();
    let errors = check_plan(&domain, &problem, &unknown);
    assert!(errors.iter().any(|e| e.category == WfCategory::UndeclaredName));

    let wrong_arity = parse_plan("0: (op e1 e0)[1]").unwrap();
    let errors = check_plan(&domain, &problem, &wrong_arity);
    assert!(errors.iter().any(|e| e.category == WfCategory::ArityMismatch));

    let wrong_type = parse_plan("0: (op p0)[1]").unwrap();
    let errors = check_plan(&domain, &problem, &wrong_type);
    assert!(errors.iter().any(|e| e.category == WfCategory::TypeMismatch));

    let missing_duration = parse_plan("0: (op e1)").unwrap();
    let errors = check_plan(&domain, &problem, &missing_duration);
    assert!(errors.iter().any(|e| e.category == WfCategory::DurationViolation));

    let bad_duration = parse_plan("0: (op e1)[2]").unwrap();
    let errors = check_plan(&domain, &problem, &bad_duration);
    assert!(errors.iter().any(|e| e.category == WfCategory::DurationViolation));
}

// Instantiating every schema over every type-correct argument tuple yields
// exactly 8 + 2 + 2 + 8 + 8 = 28 ground durative actions.
#[test]
fn elevator_domain_grounds_to_twenty_eight_actions() {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(PROBLEM).unwrap();
    let (graph, errors) = SubtypeGraph::build(&domain.types);
    assert!(errors.is_empty());

    let mut total = 0;
    let mut per_schema = Vec::new();
    for schema in &domain.schemata {
        let tuples = type_correct_tuples(&schema.parameters, &problem.objects, &graph);
        for tuple in &tuples {
            let action = instantiate(schema, tuple).unwrap();
            assert!(matches!(action, GroundAction::Durative(_)));
        }
        per_schema.push((schema.name.clone(), tuples.len()));
        total += tuples.len();
    }
    assert_eq!(
        per_schema,
        [
            ("mv".to_string(), 8),
            ("op".to_string(), 2),
            ("cl".to_string(), 2),
            ("en".to_string(), 8),
            ("ex".to_string(), 8),
        ]
    );
    assert_eq!(total, 28);
}

#[test]
fn grounded_atom_universe_covers_all_typed_instantiations() {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(PROBLEM).unwrap();
    let plan = parse_plan(PLAN).unwrap();
    let grounded = driver::ground(&domain, &problem, &plan).unwrap();
    // el-at: 2x2, p-at: 2x2, in-el: 2x2, el-op: 2.
    assert_eq!(grounded.problem.atoms.len(), 14);
    assert!(grounded.problem.init.is_subset(&grounded.problem.atoms));
    assert_eq!(grounded.plan.entries.len(), 11);
}
