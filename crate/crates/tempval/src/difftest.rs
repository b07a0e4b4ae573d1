//! Differential testing of the two checker routes.
//!
//! Every case builds a random ground instance and asks both the declarative
//! checker and the executable pipeline for a verdict, under both invariant
//! modes. Any disagreement is a finding; it is shrunk greedily before being
//! reported. With a seeded [`Mutation`] the harness doubles as a
//! bug-detection check: each seeded bug must produce disagreements.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use tempval_core::formula::Formula;
use tempval_core::ground::GroundAction;
use tempval_core::semantics::{reference_valid, GroundProblem, InvariantMode, PlanEntry, TemporalPlan};
use tempval_core::validator::{validate_plan_mutated, Mutation};

use crate::gen::{case_instance, GenBounds};

#[derive(Clone, Debug)]
pub struct Disagreement {
    pub case_index: u64,
    pub mode: InvariantMode,
    pub reference: bool,
    pub executable: bool,
    pub reproducer: String,
}

#[derive(Debug, Default)]
pub struct DiffReport {
    pub cases: u64,
    pub disagreements: Vec<Disagreement>,
    pub elapsed: Duration,
}

impl DiffReport {
    pub fn agreed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Both verdicts for one instance under one mode.
pub fn verdicts(
    problem: &GroundProblem,
    plan: &TemporalPlan,
    mode: InvariantMode,
    mutation: Mutation,
) -> (bool, bool) {
    let reference = reference_valid(problem, plan, mode);
    let executable = validate_plan_mutated(problem, plan, mode, mutation).is_ok();
    (reference, executable)
}

fn disagrees(
    problem: &GroundProblem,
    plan: &TemporalPlan,
    mode: InvariantMode,
    mutation: Mutation,
) -> bool {
    let (r, e) = verdicts(problem, plan, mode, mutation);
    r != e
}

/// Greedy shrink: drop plan entries, then initial atoms, as long as the
/// disagreement survives.
fn shrink(
    problem: &GroundProblem,
    plan: &TemporalPlan,
    mode: InvariantMode,
    mutation: Mutation,
) -> (GroundProblem, TemporalPlan) {
    let mut problem = problem.clone();
    let mut plan = plan.clone();
    loop {
        let mut reduced = false;
        let mut i = 0;
        while i < plan.entries.len() {
            let mut candidate = plan.clone();
            candidate.entries.remove(i);
            if disagrees(&problem, &candidate, mode, mutation) {
                plan = candidate;
                reduced = true;
            } else {
                i += 1;
            }
        }
        for atom in problem.init.clone() {
            let mut candidate = problem.clone();
            candidate.init.remove(&atom);
            if disagrees(&candidate, &plan, mode, mutation) {
                problem = candidate;
                reduced = true;
            }
        }
        if !reduced {
            return (problem, plan);
        }
    }
}

fn render_reproducer(problem: &GroundProblem, plan: &TemporalPlan) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "init: {:?}", problem.init);
    let _ = writeln!(out, "goal: {}", problem.goal);
    for entry in &plan.entries {
        match entry {
            PlanEntry::Durative { action, start, duration } => {
                let _ = writeln!(
                    out,
                    "at {start} for {duration}: start {}, end {}, invariant {}",
                    action.start, action.end, action.invariant
                );
            }
            PlanEntry::Simple { action, start } => {
                let _ = writeln!(out, "at {start}: {action}");
            }
        }
    }
    out
}

/// Runs `count` random cases under both invariant modes. Deterministic in
/// `seed`; cases are independent, so the corpus for a seed never depends on
/// how many cases ran before.
pub fn run_difftest(seed: u64, count: u64, bounds: GenBounds, mutation: Mutation) -> DiffReport {
    let start = Instant::now();
    let mut report = DiffReport::default();
    for index in 0..count {
        let (problem, plan) = case_instance(seed, index, bounds);
        for mode in [InvariantMode::RightClosed, InvariantMode::Strict] {
            let (reference, executable) = verdicts(&problem, &plan, mode, mutation);
            if reference != executable {
                let (small_problem, small_plan) = shrink(&problem, &plan, mode, mutation);
                report.disagreements.push(Disagreement {
                    case_index: index,
                    mode,
                    reference,
                    executable,
                    reproducer: render_reproducer(&small_problem, &small_plan),
                });
            }
        }
        report.cases += 1;
    }
    report.elapsed = start.elapsed();
    report
}

/// Like [`run_difftest`] with the invariant-interval bug seeded on the
/// declarative side instead: the reference runs with the opposite interval
/// mode while the pipeline runs with the requested one.
pub fn run_difftest_reference_off_by_one(seed: u64, count: u64, bounds: GenBounds) -> DiffReport {
    let start = Instant::now();
    let mut report = DiffReport::default();
    for index in 0..count {
        let (problem, plan) = case_instance(seed, index, bounds);
        let flipped = reference_valid(&problem, &plan, InvariantMode::Strict);
        let executable =
            validate_plan_mutated(&problem, &plan, InvariantMode::RightClosed, Mutation::None)
                .is_ok();
        if flipped != executable {
            report.disagreements.push(Disagreement {
                case_index: index,
                mode: InvariantMode::RightClosed,
                reference: flipped,
                executable,
                reproducer: render_reproducer(&problem, &plan),
            });
        }
        report.cases += 1;
    }
    report.elapsed = start.elapsed();
    report
}

/// Gathers `count` instances whose plans execute successfully end to end
/// (goal aside), for properties that only make sense on valid runs. Returns
/// fewer if the attempt budget runs out.
pub fn collect_valid_instances(
    seed: u64,
    count: usize,
    bounds: GenBounds,
    max_attempts: u64,
) -> Vec<(GroundProblem, TemporalPlan)> {
    let mut out = Vec::new();
    let mut index = 0;
    while out.len() < count && index < max_attempts {
        let (mut problem, plan) = case_instance(seed, index, bounds);
        index += 1;
        if plan.entries.is_empty() {
            continue;
        }
        // Only execution matters here; neutralize the goal.
        problem.goal = Formula::Top;
        if validate_plan_mutated(&problem, &plan, InvariantMode::RightClosed, Mutation::None).is_ok()
        {
            out.push((problem, plan));
        }
    }
    out
}

/// True if the problem's action set could ever interfere at equal times;
/// used by tests that need interference-rich corpora.
pub fn has_effectful_actions(problem: &GroundProblem) -> bool {
    problem.actions.iter().any(|a| match a {
        GroundAction::Durative(d) => !d.start.is_effect_free() || !d.end.is_effect_free(),
        GroundAction::Simple(s) => !s.is_effect_free(),
    })
}
