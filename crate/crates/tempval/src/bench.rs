//! Synthetic chain plans for the performance envelope.

use std::time::{Duration, Instant};

use tempval_core::formula::{Formula, GroundAtom};
use tempval_core::ground::{GroundAction, GroundDurativeAction, SnapAction};
use tempval_core::rational::Rational;
use tempval_core::semantics::{GroundProblem, InvariantMode, PlanEntry, TemporalPlan};
use tempval_core::validator::{
    check_goal, simplify_plan, simplify_plan_balanced, valid_hap_seq,
};

#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub valid: bool,
    pub duration: Duration,
    pub happenings: usize,
    pub steps: usize,
}

/// A valid plan of `n` durative actions handing a token down a chain: action
/// `i` runs over `[2i, 2i+1]`, consumes `p_i`, holds `run_i` as its invariant,
/// and produces `p_{i+1}`. Entries are emitted latest-first, so nothing may
/// rely on file order matching time order.
pub fn chain_instance(n: usize) -> (GroundProblem, TemporalPlan) {
    let p = |i: usize| GroundAtom::new(format!("p{i}"), Vec::<String>::new());
    let run = |i: usize| GroundAtom::new(format!("run{i}"), Vec::<String>::new());

    let mut atoms = std::collections::BTreeSet::new();
    let mut entries = Vec::with_capacity(n);
    let mut actions = Vec::with_capacity(n);
    for i in (0..n).rev() {
        atoms.insert(p(i));
        atoms.insert(run(i));
        let action = GroundDurativeAction {
            start: SnapAction::new(
                Formula::atom(p(i)),
                [run(i)].into_iter().collect(),
                [p(i)].into_iter().collect(),
            ),
            end: SnapAction::new(
                Formula::atom(run(i)),
                [p(i + 1)].into_iter().collect(),
                [run(i)].into_iter().collect(),
            ),
            invariant: Formula::atom(run(i)),
        };
        actions.push(GroundAction::Durative(action.clone()));
        entries.push(PlanEntry::Durative {
            action,
            start: Rational::from_integer(2 * i as i64),
            duration: Rational::one(),
        });
    }
    atoms.insert(p(n));

    let problem = GroundProblem {
        atoms,
        actions,
        init: [p(0)].into_iter().collect(),
        goal: Formula::atom(p(n)),
    };
    (problem, TemporalPlan { entries })
}

/// Validates the `n`-action chain and reports timing. `force_list_path`
/// selects the sorted-list construction over the balanced tree.
pub fn run_bench(n: usize, force_list_path: bool) -> BenchOutcome {
    let (problem, plan) = chain_instance(n);
    let start = Instant::now();
    let mode = InvariantMode::RightClosed;
    let seq = if force_list_path {
        simplify_plan(&plan, mode)
    } else {
        simplify_plan_balanced(&plan, mode)
    };
    let valid = valid_hap_seq(&seq, &problem)
        .and_then(|state| check_goal(&problem, &state))
        .is_ok();
    BenchOutcome {
        valid,
        duration: start.elapsed(),
        happenings: seq.len(),
        steps: plan.entries.len(),
    }
}
