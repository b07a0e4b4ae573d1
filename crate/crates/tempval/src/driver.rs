//! The end-to-end pipeline: parse, check well-formedness, ground, build the
//! happening sequence, execute, check the goal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use tempval_core::ast::{DomainAst, PlanAst, ProblemAst};
use tempval_core::formula::GroundAtom;
use tempval_core::ground::{
    ground_formula_closed, instantiate, GroundAction, GroundError,
};
use tempval_core::rational::Rational;
use tempval_core::semantics::{GroundProblem, InvariantMode, PlanEntry, TemporalPlan};
use tempval_core::validator::{
    check_goal, simplify_plan, simplify_plan_balanced, timed_snaps_with_placement, valid_hap_seq,
    Mutation, SnapOrigin, ValidationError, BALANCED_PATH_THRESHOLD,
};
use tempval_core::wf::{self, type_correct_tuples, SubtypeGraph, WfError};

use crate::parser::{parse_domain, parse_plan, parse_problem, ParseError};

pub const VALID_PLAN: &str = "valid Plan";

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub mode: InvariantMode,
    pub force_list_path: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            mode: InvariantMode::RightClosed,
            force_list_path: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Valid,
    Invalid(ValidationError),
    IllFormed(Vec<String>),
    ParseFailure(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    /// The CLI exit code this verdict maps to: 0 valid, 1 invalid or
    /// ill-formed, 2 parse or IO failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Valid => 0,
            Verdict::Invalid(_) | Verdict::IllFormed(_) => 1,
            Verdict::ParseFailure(_) => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str(VALID_PLAN),
            Verdict::Invalid(e) => write!(f, "error: {e}"),
            Verdict::IllFormed(_) => f.write_str("error: ill-formed input"),
            Verdict::ParseFailure(_) => f.write_str("error: parse failure"),
        }
    }
}

/// What one validation run did.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub verdict: Verdict,
    pub message: String,
    pub duration: Duration,
    pub happenings: usize,
    pub steps: usize,
}

/// A plan step resolved against the domain: the ground action plus the label
/// it is printed under.
pub struct GroundedPlan {
    pub problem: GroundProblem,
    pub plan: TemporalPlan,
    /// `(name, args)` per plan entry, parallel to `plan.entries`.
    pub labels: Vec<(String, Vec<String>)>,
}

#[derive(Debug)]
pub enum GroundFailure {
    Wf(Vec<WfError>),
    Ground(GroundError),
}

impl GroundFailure {
    pub fn messages(&self) -> Vec<String> {
        match self {
            GroundFailure::Wf(errors) => errors.iter().map(|e| e.to_string()).collect(),
            GroundFailure::Ground(e) => vec![e.to_string()],
        }
    }
}

/// Builds the ground problem and plan from checked syntax trees. The atom
/// universe is every type-correct instantiation of the declared predicates;
/// actions are grounded lazily, one per plan step.
pub fn ground(
    domain: &DomainAst,
    problem: &ProblemAst,
    plan: &PlanAst,
) -> Result<GroundedPlan, GroundFailure> {
    let mut wf_errors = wf::check_problem(domain, problem);
    wf_errors.extend(wf::check_plan(domain, problem, plan));
    if !wf_errors.is_empty() {
        return Err(GroundFailure::Wf(wf_errors));
    }

    let (graph, _) = SubtypeGraph::build(&domain.types);
    let atoms = atom_universe(domain, problem, &graph);
    let init = problem
        .init
        .iter()
        .map(|a| GroundAtom::new(a.pred.clone(), a.args.iter().cloned()))
        .collect();
    let goal = ground_formula_closed(&problem.goal).map_err(GroundFailure::Ground)?;

    let mut entries = Vec::with_capacity(plan.steps.len());
    let mut labels = Vec::with_capacity(plan.steps.len());
    let mut actions = Vec::new();
    for step in &plan.steps {
        let schema = domain.schema(&step.action).expect("checked by wf");
        let action = instantiate(schema, &step.args).map_err(GroundFailure::Ground)?;
        actions.push(action.clone());
        let entry = match action {
            GroundAction::Durative(action) => PlanEntry::Durative {
                action,
                start: step.time.clone(),
                duration: step.duration.clone().expect("checked by wf"),
            },
            GroundAction::Simple(action) => PlanEntry::Simple {
                action,
                start: step.time.clone(),
            },
        };
        entries.push(entry);
        labels.push((step.action.clone(), step.args.clone()));
    }
    actions.sort();
    actions.dedup();

    Ok(GroundedPlan {
        problem: GroundProblem {
            atoms,
            actions,
            init,
            goal,
        },
        plan: TemporalPlan { entries },
        labels,
    })
}

fn atom_universe(
    domain: &DomainAst,
    problem: &ProblemAst,
    graph: &SubtypeGraph,
) -> BTreeSet<GroundAtom> {
    let mut universe = BTreeSet::new();
    for pred in &domain.predicates {
        for tuple in type_correct_tuples(&pred.params, &problem.objects, graph) {
            universe.insert(GroundAtom::new(pred.name.clone(), tuple));
        }
    }
    universe
}

/// Runs the executable checker on a grounded plan; returns the happening
/// count alongside the outcome.
pub fn run_grounded(
    grounded: &GroundedPlan,
    options: CheckOptions,
) -> (Result<(), ValidationError>, usize) {
    let seq = if !options.force_list_path
        && grounded.plan.entries.len() > BALANCED_PATH_THRESHOLD
    {
        simplify_plan_balanced(&grounded.plan, options.mode)
    } else {
        simplify_plan(&grounded.plan, options.mode)
    };
    let happenings = seq.len();
    let outcome = valid_hap_seq(&seq, &grounded.problem)
        .and_then(|state| check_goal(&grounded.problem, &state));
    (outcome, happenings)
}

fn parse_failure(start: Instant, steps: usize, e: &ParseError) -> RunReport {
    let verdict = match e {
        ParseError::NegativeQuantity { .. } => Verdict::IllFormed(vec![e.to_string()]),
        _ => Verdict::ParseFailure(e.to_string()),
    };
    RunReport {
        message: e.to_string(),
        duration: start.elapsed(),
        happenings: 0,
        steps,
        verdict,
    }
}

/// The whole pipeline on raw file texts.
pub fn check_texts(
    domain_text: &str,
    problem_text: &str,
    plan_text: &str,
    options: CheckOptions,
) -> RunReport {
    let start = Instant::now();
    let domain = match parse_domain(domain_text) {
        Ok(d) => d,
        Err(e) => return parse_failure(start, 0, &e),
    };
    let problem = match parse_problem(problem_text) {
        Ok(p) => p,
        Err(e) => return parse_failure(start, 0, &e),
    };
    let plan = match parse_plan(plan_text) {
        Ok(p) => p,
        Err(e) => return parse_failure(start, 0, &e),
    };
    let steps = plan.steps.len();
    let grounded = match ground(&domain, &problem, &plan) {
        Ok(g) => g,
        Err(failure) => {
            let messages = failure.messages();
            return RunReport {
                message: messages.join("\n"),
                duration: start.elapsed(),
                happenings: 0,
                steps,
                verdict: Verdict::IllFormed(messages),
            };
        }
    };
    let (outcome, happenings) = run_grounded(&grounded, options);
    let (verdict, message) = match outcome {
        Ok(()) => (Verdict::Valid, VALID_PLAN.to_string()),
        Err(e) => {
            let message = format!("{e}\n{}", e.detail());
            (Verdict::Invalid(e), message)
        }
    };
    RunReport {
        verdict,
        message,
        duration: start.elapsed(),
        happenings,
        steps,
    }
}

/// One line per happening: `<time>: {<snap-descriptions>}`, times as exact
/// decimals when terminating and fractions otherwise. Snap actions are
/// described by the plan step they come from and their role in it.
pub fn happenings_dump(grounded: &GroundedPlan, mode: InvariantMode) -> String {
    let htps = grounded.plan.happening_time_points();
    let mut timeline: BTreeMap<Rational, BTreeSet<String>> = BTreeMap::new();
    for (entry, (name, args)) in grounded.plan.entries.iter().zip(&grounded.labels) {
        let mut placement = |a: &Rational, b: &Rational| Rational::midpoint(a, b);
        for (t, origin, _) in
            timed_snaps_with_placement(&htps, entry, mode, Mutation::None, &mut placement)
        {
            let mut label = format!("({name}");
            for a in args {
                label.push(' ');
                label.push_str(a);
            }
            label.push(')');
            label.push_str(match origin {
                SnapOrigin::Start => "_start",
                SnapOrigin::End => "_end",
                SnapOrigin::Invariant => "_inv",
                SnapOrigin::Simple => "",
            });
            timeline.entry(t).or_default().insert(label);
        }
    }
    let mut out = String::new();
    for (time, labels) in timeline {
        let labels: Vec<String> = labels.into_iter().collect();
        out.push_str(&format!("{time}: {{{}}}\n", labels.join(", ")));
    }
    out
}
