//! End-to-end pipeline behavior beyond the happy path.

use tempval::difftest::verdicts;
use tempval::driver::{self, check_texts, CheckOptions, Verdict};
use tempval::parser::{parse_domain, parse_plan, parse_problem};
use tempval_core::semantics::{reference_valid, InvariantMode};
use tempval_core::validator::{Mutation, ValidationError};

const DOMAIN: &str = include_str!("../fixtures/elevators-domain.pddl");
const PROBLEM: &str = include_str!("../fixtures/elevators-problem.pddl");
const PLAN: &str = include_str!("../fixtures/elevators.tplan");

fn grounded(plan_text: &str) -> (tempval_core::GroundProblem, tempval_core::TemporalPlan) {
    let domain = parse_domain(DOMAIN).unwrap();
    let problem = parse_problem(PROBLEM).unwrap();
    let plan = parse_plan(plan_text).unwrap();
    let g = driver::ground(&domain, &problem, &plan).unwrap();
    (g.problem, g.plan)
}

#[test]
fn fixture_plan_is_valid_under_both_list_and_balanced_paths() {
    for force_list_path in [false, true] {
        let report = check_texts(
            DOMAIN,
            PROBLEM,
            PLAN,
            CheckOptions {
                mode: InvariantMode::RightClosed,
                force_list_path,
            },
        );
        assert!(report.verdict.is_valid());
        assert_eq!(report.steps, 11);
        assert!(report.happenings > 11);
    }
}

#[test]
fn fixture_plan_is_valid_under_the_strict_variant_too() {
    let report = check_texts(
        DOMAIN,
        PROBLEM,
        PLAN,
        CheckOptions {
            mode: InvariantMode::Strict,
            force_list_path: false,
        },
    );
    assert!(report.verdict.is_valid());
}

#[test]
fn removing_the_door_reopening_invalidates_the_plan() {
    let mutated: Vec<&str> = PLAN.lines().filter(|l| *l != "4: (op e1)[1]").collect();
    let report = check_texts(DOMAIN, PROBLEM, &mutated.join("\n"), CheckOptions::default());
    // The exit action's door-open invariant fails; the invariant snap's
    // precondition is what trips.
    let Verdict::Invalid(ValidationError::PreconditionUnsatisfied { .. }) = &report.verdict else {
        panic!("expected a precondition failure, got {}", report.verdict)
    };
    // The declarative checker agrees.
    let (problem, plan) = grounded(&mutated.join("\n"));
    assert!(!reference_valid(&problem, &plan, InvariantMode::RightClosed));
}

#[test]
fn rescheduled_door_close_agrees_with_the_declarative_checker() {
    // Moving the close of elevator 1 from 2 to 1.25 bundles its start with
    // two boarding snaps. Neither checker objects: the door stays open until
    // 2.25, past every boarding window that needs it.
    let mutated = PLAN.replace("2: (cl e1)[1]", "1.25: (cl e1)[1]");
    let (problem, plan) = grounded(&mutated);
    for mode in [InvariantMode::RightClosed, InvariantMode::Strict] {
        let (reference, executable) = verdicts(&problem, &plan, mode, Mutation::None);
        assert_eq!(reference, executable);
        assert!(reference, "the rescheduled plan is valid under {mode:?}");
    }
    let report = check_texts(DOMAIN, PROBLEM, &mutated, CheckOptions::default());
    assert!(report.verdict.is_valid());
}

#[test]
fn unknown_action_is_ill_formed_not_invalid() {
    let report = check_texts(DOMAIN, PROBLEM, "0: (warp e1)[1]", CheckOptions::default());
    let Verdict::IllFormed(messages) = &report.verdict else {
        panic!("expected ill-formed, got {}", report.verdict)
    };
    assert!(messages[0].contains("unknown action"));
    assert_eq!(report.verdict.exit_code(), 1);
}

#[test]
fn negative_time_is_ill_formed_and_syntax_noise_is_a_parse_failure() {
    let report = check_texts(DOMAIN, PROBLEM, "-1: (op e1)[1]", CheckOptions::default());
    assert!(matches!(report.verdict, Verdict::IllFormed(_)));

    let report = check_texts(DOMAIN, PROBLEM, "0 (op e1)[1]", CheckOptions::default());
    assert!(matches!(report.verdict, Verdict::ParseFailure(_)));
    assert_eq!(report.verdict.exit_code(), 2);
}

#[test]
fn duplicate_steps_merge_into_one_happening() {
    // The same boarding twice at the same instant: identical snap actions
    // merge, so nothing interferes with itself.
    let plan = "0.75: (en p1 e0 f0)[0.5]\n0.75: (en p1 e0 f0)[0.5]";
    let (problem, plan) = grounded(plan);
    assert!(reference_valid(
        &{
            let mut p = problem.clone();
            p.goal = tempval_core::Formula::Top;
            p
        },
        &plan,
        InvariantMode::RightClosed
    ));
    let seq = tempval_core::validator::simplify_plan(&plan, InvariantMode::RightClosed);
    assert_eq!(seq[0].acts.len(), 1);
}

#[test]
fn fixture_plan_happening_time_points() {
    let (_, plan) = grounded(PLAN);
    let htps = plan.happening_time_points();

    // Independent enumeration: every start and every start-plus-duration,
    // deduplicated. Six coincidences among the 22 endpoints leave 16 points.
    let mut brute = std::collections::BTreeSet::new();
    for entry in &plan.entries {
        brute.insert(entry.start().clone());
        brute.insert(entry.end_time());
    }
    assert_eq!(htps.iter().cloned().collect::<std::collections::BTreeSet<_>>(), brute);
    assert_eq!(htps.len(), 16);
    assert_eq!(
        htps[..5],
        [
            tempval_core::Rational::zero(),
            tempval_core::Rational::new(3, 4),
            tempval_core::Rational::one(),
            tempval_core::Rational::new(5, 4),
            tempval_core::Rational::new(3, 2),
        ]
    );
}

#[test]
fn goal_failure_reports_the_postcondition() {
    // A plan that executes fine but stops short of the goal.
    let report = check_texts(DOMAIN, PROBLEM, "0.75: (en p1 e0 f0)[0.5]", CheckOptions::default());
    let Verdict::Invalid(e) = &report.verdict else {
        panic!("expected invalid, got {}", report.verdict)
    };
    assert_eq!(e.to_string(), "Postcondition does not hold");
}
