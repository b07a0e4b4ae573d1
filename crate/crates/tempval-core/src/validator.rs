//! The executable checker: build the happening sequence a plan induces, then
//! execute it with enabled-ness checks.
//!
//! A durative entry spanning `[t, t+d]` contributes its start snap at `t`,
//! its end snap at `t+d`, and one effect-free invariant snap strictly inside
//! every gap between consecutive happening time points covered by the
//! interval (at the midpoint by default; any interior point is equivalent).
//! Happenings are kept strictly sorted by time, either by sorted insertion
//! into a list or through a balanced ordered map; both paths produce the same
//! sequence, and plans longer than [`BALANCED_PATH_THRESHOLD`] steps take the
//! balanced path.
//!
//! [`Mutation`] deliberately breaks one step of the pipeline at a time. The
//! differential and property suites must catch every variant; it exists for
//! them and is never enabled in normal validation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::Formula;
use crate::ground::{invariant_as_snap, SnapAction};
use crate::rational::Rational;
use crate::semantics::{
    apply_effects, models, non_interfering, GroundProblem, InvariantMode, PlanEntry, State,
    TemporalPlan,
};

/// Plans with more steps than this take the balanced-tree construction path.
pub const BALANCED_PATH_THRESHOLD: usize = 64;

/// A time-stamped set of snap actions executed simultaneously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Happening {
    pub time: Rational,
    pub acts: BTreeSet<SnapAction>,
}

/// Happenings with strictly ascending times.
pub type HappeningSequence = Vec<Happening>;

/// Why a happening sequence failed to execute. Step indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationError {
    Interference {
        step: usize,
        time: Rational,
        first: SnapAction,
        second: SnapAction,
    },
    PreconditionUnsatisfied {
        step: usize,
        time: Rational,
        action: SnapAction,
    },
    GoalUnsatisfied {
        goal: Formula,
    },
}

impl ValidationError {
    /// A multi-line description naming the offending time and actions.
    pub fn detail(&self) -> String {
        use alloc::format;
        match self {
            ValidationError::Interference { time, first, second, .. } => {
                format!("at time {time}: {first} interferes with {second}")
            }
            ValidationError::PreconditionUnsatisfied { time, action, .. } => {
                format!("at time {time}: {action} is not enabled")
            }
            ValidationError::GoalUnsatisfied { goal } => {
                format!("final state does not satisfy {goal}")
            }
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::Interference { step, .. } => {
                write!(f, "at step {step}: Actions in happening interfering")
            }
            ValidationError::PreconditionUnsatisfied { step, .. } => {
                write!(f, "at step {step}: Precondition not satisfied")
            }
            ValidationError::GoalUnsatisfied { .. } => {
                write!(f, "Postcondition does not hold")
            }
        }
    }
}

impl core::error::Error for ValidationError {}

/// Fault injection for the differential harness: each variant seeds one
/// plausible implementation bug.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Off-by-one in the invariant interval: invariant snaps for the gap
    /// ending exactly at the action's end point are dropped (or added, in
    /// strict mode).
    InvariantGapOffByOne,
    /// End snap actions of durative entries are never inserted.
    MissedEndSnap,
    /// Effects apply add-first, delete-second.
    DeleteAfterAdd,
    /// New happenings are appended instead of spliced in time order.
    UnsortedInsert,
    /// The pairwise non-interference check is skipped.
    SkipPairwiseCheck,
}

/// Where a snap action placed on the timeline came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SnapOrigin {
    Start,
    End,
    Invariant,
    Simple,
}

/// Inserts `snap` at time `t`, preserving strictly ascending times: merged
/// into an existing happening with equal time, spliced in between otherwise.
/// An empty sequence, a time before the first happening, and a time after the
/// last are the boundary cases.
pub fn insert_action(seq: &mut HappeningSequence, t: Rational, snap: SnapAction) {
    match seq.binary_search_by(|h| h.time.cmp(&t)) {
        Ok(i) => {
            seq[i].acts.insert(snap);
        }
        Err(i) => {
            seq.insert(
                i,
                Happening {
                    time: t,
                    acts: BTreeSet::from([snap]),
                },
            );
        }
    }
}

// The seeded-bug variant of `insert_action`: merging still works, but a new
// time lands at the back regardless of order.
fn insert_action_unsorted(seq: &mut HappeningSequence, t: Rational, snap: SnapAction) {
    if let Some(h) = seq.iter_mut().find(|h| h.time == t) {
        h.acts.insert(snap);
    } else {
        seq.push(Happening {
            time: t,
            acts: BTreeSet::from([snap]),
        });
    }
}

/// The consecutive pairs of happening time points whose gap lies inside a
/// durative entry's interval `[start, end]`, under the given invariant mode.
/// `htps` must be strictly sorted.
fn covered_gaps<'a>(
    htps: &'a [Rational],
    start: &Rational,
    end: &Rational,
    mode: InvariantMode,
    mutation: Mutation,
) -> Vec<(&'a Rational, &'a Rational)> {
    // Right-closed coverage takes every gap whose right edge is at most the
    // action's end point; strict coverage stops one gap short. The seeded
    // off-by-one flips that choice.
    let take_end_gap = match mode {
        InvariantMode::RightClosed => mutation != Mutation::InvariantGapOffByOne,
        InvariantMode::Strict => mutation == Mutation::InvariantGapOffByOne,
    };
    let lo = htps.partition_point(|t| t < start);
    let mut gaps = Vec::new();
    for window in htps[lo..].windows(2) {
        let (a, b) = (&window[0], &window[1]);
        if b > end {
            break;
        }
        if b < end || take_end_gap {
            gaps.push((a, b));
        }
        if b == end {
            break;
        }
    }
    gaps
}

/// All timed snap actions a plan entry contributes, with their origins.
/// Invariant snaps are placed by `place`, which must return a point strictly
/// inside the gap it is given; the default placement is the midpoint.
pub fn timed_snaps_with_placement(
    htps: &[Rational],
    entry: &PlanEntry,
    mode: InvariantMode,
    mutation: Mutation,
    place: &mut dyn FnMut(&Rational, &Rational) -> Rational,
) -> Vec<(Rational, SnapOrigin, SnapAction)> {
    let mut out = Vec::new();
    match entry {
        PlanEntry::Simple { action, start } => {
            out.push((start.clone(), SnapOrigin::Simple, action.clone()));
        }
        PlanEntry::Durative { action, start, .. } => {
            let end = entry.end_time();
            out.push((start.clone(), SnapOrigin::Start, action.start.clone()));
            if mutation != Mutation::MissedEndSnap {
                out.push((end.clone(), SnapOrigin::End, action.end.clone()));
            }
            let inv = invariant_as_snap(action);
            for (a, b) in covered_gaps(htps, start, &end, mode, mutation) {
                out.push((place(a, b), SnapOrigin::Invariant, inv.clone()));
            }
        }
    }
    out
}

fn midpoint_placement(a: &Rational, b: &Rational) -> Rational {
    Rational::midpoint(a, b)
}

/// Inserts everything one plan entry contributes into a happening sequence.
/// `htps` must be the happening time points of the whole plan.
pub fn simplify_action(
    htps: &[Rational],
    entry: &PlanEntry,
    seq: &mut HappeningSequence,
    mode: InvariantMode,
    mutation: Mutation,
) {
    for (t, _, snap) in
        timed_snaps_with_placement(htps, entry, mode, mutation, &mut midpoint_placement)
    {
        if mutation == Mutation::UnsortedInsert {
            insert_action_unsorted(seq, t, snap);
        } else {
            insert_action(seq, t, snap);
        }
    }
}

/// Builds the happening sequence induced by a plan, via sorted list
/// insertion.
pub fn simplify_plan(plan: &TemporalPlan, mode: InvariantMode) -> HappeningSequence {
    simplify_plan_mutated(plan, mode, Mutation::None)
}

pub fn simplify_plan_mutated(
    plan: &TemporalPlan,
    mode: InvariantMode,
    mutation: Mutation,
) -> HappeningSequence {
    let htps = plan.happening_time_points();
    let mut seq = HappeningSequence::new();
    for entry in &plan.entries {
        simplify_action(&htps, entry, &mut seq, mode, mutation);
    }
    seq
}

/// Same contract as [`simplify_plan`], but happenings are collected in a
/// balanced ordered map keyed by time and emitted in order. Extensionally
/// equal to the list path.
pub fn simplify_plan_balanced(plan: &TemporalPlan, mode: InvariantMode) -> HappeningSequence {
    let htps = plan.happening_time_points();
    let mut tree: BTreeMap<Rational, BTreeSet<SnapAction>> = BTreeMap::new();
    for entry in &plan.entries {
        for (t, _, snap) in
            timed_snaps_with_placement(&htps, entry, mode, Mutation::None, &mut midpoint_placement)
        {
            tree.entry(t).or_default().insert(snap);
        }
    }
    tree.into_iter()
        .map(|(time, acts)| Happening { time, acts })
        .collect()
}

/// Builds the sequence with invariant snaps at caller-chosen interior points
/// instead of midpoints. Any placement strictly inside each gap induces the
/// same verdicts and final state.
pub fn simplify_plan_with_placement(
    plan: &TemporalPlan,
    mode: InvariantMode,
    mut place: impl FnMut(&Rational, &Rational) -> Rational,
) -> HappeningSequence {
    let htps = plan.happening_time_points();
    let mut seq = HappeningSequence::new();
    for entry in &plan.entries {
        for (t, _, snap) in
            timed_snaps_with_placement(&htps, entry, mode, Mutation::None, &mut place)
        {
            insert_action(&mut seq, t, snap);
        }
    }
    seq
}

/// Decides whether `seq` is a happening sequence induced by `plan`: strictly
/// sorted; every entry's start and end snaps appear at their times; every
/// covered gap holds an invariant snap strictly inside it; every happening is
/// nonempty and built solely from snap actions the plan can contribute.
pub fn is_induced(plan: &TemporalPlan, seq: &[Happening], mode: InvariantMode) -> bool {
    // (iv) strictly ascending times.
    if !seq.windows(2).all(|w| w[0].time < w[1].time) {
        return false;
    }
    // Closure: nonempty happenings, all snaps stem from the plan.
    let possible = plan.possible_snaps();
    for h in seq {
        if h.acts.is_empty() || !h.acts.iter().all(|a| possible.contains(a)) {
            return false;
        }
    }

    let at = |t: &Rational| seq.iter().find(|h| &h.time == t);
    let htps = plan.happening_time_points();
    for entry in &plan.entries {
        match entry {
            PlanEntry::Simple { action, start } => {
                if !at(start).is_some_and(|h| h.acts.contains(action)) {
                    return false;
                }
            }
            PlanEntry::Durative { action, start, .. } => {
                let end = entry.end_time();
                // (i) start snap at the start time.
                if !at(start).is_some_and(|h| h.acts.contains(&action.start)) {
                    return false;
                }
                // (ii) end snap at the end time.
                if !at(&end).is_some_and(|h| h.acts.contains(&action.end)) {
                    return false;
                }
                // (iii) an invariant snap strictly inside every covered gap.
                let inv = invariant_as_snap(action);
                for (a, b) in covered_gaps(&htps, start, &end, mode, Mutation::None) {
                    let found = seq
                        .iter()
                        .any(|h| &h.time > a && &h.time < b && h.acts.contains(&inv));
                    if !found {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Executes a happening sequence from the problem's initial state: at each
/// happening the snap actions must be pairwise non-interfering and enabled,
/// then their effects apply. Returns the final state; the goal check is the
/// caller's job so the two checker routes can compare final states.
pub fn valid_hap_seq(seq: &[Happening], problem: &GroundProblem) -> Result<State, ValidationError> {
    valid_hap_seq_mutated(seq, problem, Mutation::None)
}

pub fn valid_hap_seq_mutated(
    seq: &[Happening],
    problem: &GroundProblem,
    mutation: Mutation,
) -> Result<State, ValidationError> {
    let mut state = problem.init.clone();
    for (i, h) in seq.iter().enumerate() {
        let step = i + 1;
        if mutation != Mutation::SkipPairwiseCheck {
            let acts: Vec<&SnapAction> = h.acts.iter().collect();
            for x in 0..acts.len() {
                for y in (x + 1)..acts.len() {
                    if !non_interfering(acts[x], acts[y]) {
                        return Err(ValidationError::Interference {
                            step,
                            time: h.time.clone(),
                            first: acts[x].clone(),
                            second: acts[y].clone(),
                        });
                    }
                }
            }
        }
        for a in &h.acts {
            if !models(&state, &a.pre) {
                return Err(ValidationError::PreconditionUnsatisfied {
                    step,
                    time: h.time.clone(),
                    action: a.clone(),
                });
            }
        }
        state = if mutation == Mutation::DeleteAfterAdd {
            let mut next = state;
            for a in &h.acts {
                for atom in &a.add {
                    next.insert(atom.clone());
                }
            }
            for a in &h.acts {
                for atom in &a.del {
                    next.remove(atom);
                }
            }
            next
        } else {
            apply_effects(&h.acts, &state)
        };
    }
    Ok(state)
}

/// Checks the goal against a final state.
pub fn check_goal(problem: &GroundProblem, state: &State) -> Result<(), ValidationError> {
    if models(state, &problem.goal) {
        Ok(())
    } else {
        Err(ValidationError::GoalUnsatisfied {
            goal: problem.goal.clone(),
        })
    }
}

/// The whole executable route: build the induced happening sequence (list or
/// balanced path by plan size), execute it, check the goal. Returns the final
/// state on success.
pub fn validate_plan(
    problem: &GroundProblem,
    plan: &TemporalPlan,
    mode: InvariantMode,
) -> Result<State, ValidationError> {
    let seq = if plan.entries.len() > BALANCED_PATH_THRESHOLD {
        simplify_plan_balanced(plan, mode)
    } else {
        simplify_plan(plan, mode)
    };
    let state = valid_hap_seq(&seq, problem)?;
    check_goal(problem, &state)?;
    Ok(state)
}

/// [`validate_plan`] with a seeded bug, for the differential harness.
pub fn validate_plan_mutated(
    problem: &GroundProblem,
    plan: &TemporalPlan,
    mode: InvariantMode,
    mutation: Mutation,
) -> Result<State, ValidationError> {
    let seq = simplify_plan_mutated(plan, mode, mutation);
    let state = valid_hap_seq_mutated(&seq, problem, mutation)?;
    check_goal(problem, &state)?;
    Ok(state)
}
