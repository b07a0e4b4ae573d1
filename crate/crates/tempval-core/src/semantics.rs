//! The declarative validity definition, used as the oracle side of the
//! differential test.
//!
//! Validity is a fold over the happening time points of a plan: at each point
//! the running invariants must hold, the snap actions executing there must be
//! enabled and pairwise non-interfering, and then their effects apply
//! delete-first. No happening sequence is ever materialized on this route.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::formula::{Formula, GroundAtom};
use crate::ground::{invariant_as_snap, GroundAction, GroundDurativeAction, SnapAction};
use crate::rational::Rational;

/// A state: the set of atoms that are true.
pub type State = BTreeSet<GroundAtom>;

/// A ground planning problem: the atom universe, the available ground
/// actions, the initial state, and the goal condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundProblem {
    pub atoms: BTreeSet<GroundAtom>,
    pub actions: Vec<GroundAction>,
    pub init: State,
    pub goal: Formula,
}

/// One scheduled entry of a temporal plan. Times and durations are
/// nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlanEntry {
    Durative {
        action: GroundDurativeAction,
        start: Rational,
        duration: Rational,
    },
    Simple {
        action: SnapAction,
        start: Rational,
    },
}

impl PlanEntry {
    pub fn start(&self) -> &Rational {
        match self {
            PlanEntry::Durative { start, .. } | PlanEntry::Simple { start, .. } => start,
        }
    }

    /// Start plus duration for durative entries, the start itself otherwise.
    pub fn end_time(&self) -> Rational {
        match self {
            PlanEntry::Durative { start, duration, .. } => start + duration,
            PlanEntry::Simple { start, .. } => start.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TemporalPlan {
    pub entries: Vec<PlanEntry>,
}

/// Which states an invariant is checked against. The interval is always open
/// at the start; the variants differ in whether the state entering the end
/// point of the action is included.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InvariantMode {
    /// Open interval `t' < t < t'+d`.
    Strict,
    /// Half-open interval `t' < t <= t'+d`. This is the default: the
    /// executable checker guards the state entering each action's end point,
    /// and the two routes must agree.
    #[default]
    RightClosed,
}

impl InvariantMode {
    /// Does an action spanning `[start, end]` cover the instant `t` for
    /// invariant purposes?
    pub fn covers(&self, start: &Rational, end: &Rational, t: &Rational) -> bool {
        match self {
            InvariantMode::Strict => start < t && t < end,
            InvariantMode::RightClosed => start < t && t <= end,
        }
    }
}

/// The model relation.
pub fn models(state: &State, formula: &Formula) -> bool {
    formula.eval(state)
}

/// Two snap actions may execute simultaneously iff neither one's effects
/// touch the other's precondition atoms and their add and delete sets do not
/// cross.
pub fn non_interfering(a: &SnapAction, b: &SnapAction) -> bool {
    let disjoint_pre_eff = |x: &SnapAction, y: &SnapAction| {
        let pre_atoms = x.pre.atoms();
        pre_atoms.is_disjoint(&y.add) && pre_atoms.is_disjoint(&y.del)
    };
    disjoint_pre_eff(a, b)
        && disjoint_pre_eff(b, a)
        && a.add.is_disjoint(&b.del)
        && b.add.is_disjoint(&a.del)
}

/// Applies the joint effects of a set of snap actions: the union of deletes
/// is removed first, then the union of adds is inserted.
pub fn apply_effects(acts: &BTreeSet<SnapAction>, state: &State) -> State {
    let mut next = state.clone();
    for a in acts {
        for atom in &a.del {
            next.remove(atom);
        }
    }
    for a in acts {
        for atom in &a.add {
            next.insert(atom.clone());
        }
    }
    next
}

impl TemporalPlan {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The sorted, duplicate-free sequence of all start and end times.
    pub fn happening_time_points(&self) -> Vec<Rational> {
        let mut points = BTreeSet::new();
        for entry in &self.entries {
            points.insert(entry.start().clone());
            points.insert(entry.end_time());
        }
        points.into_iter().collect()
    }

    /// The snap actions executing at time `t`: starts of entries beginning
    /// there, ends of entries finishing there, and instantaneous entries
    /// scheduled there. Structurally identical snap actions merge.
    pub fn snap_set_at(&self, t: &Rational) -> BTreeSet<SnapAction> {
        let mut set = BTreeSet::new();
        for entry in &self.entries {
            match entry {
                PlanEntry::Durative { action, start, .. } => {
                    if start == t {
                        set.insert(action.start.clone());
                    }
                    if &entry.end_time() == t {
                        set.insert(action.end.clone());
                    }
                }
                PlanEntry::Simple { action, start } => {
                    if start == t {
                        set.insert(action.clone());
                    }
                }
            }
        }
        set
    }

    /// The invariants of the actions running at time `t`.
    pub fn invariants_at(&self, t: &Rational, mode: InvariantMode) -> BTreeSet<Formula> {
        let mut set = BTreeSet::new();
        for entry in &self.entries {
            if let PlanEntry::Durative { action, start, .. } = entry {
                if mode.covers(start, &entry.end_time(), t) {
                    set.insert(action.invariant.clone());
                }
            }
        }
        set
    }

    /// Returns the plan with every time and duration multiplied by `factor`.
    /// Verdicts only depend on the order and coincidence structure of time
    /// points, so scaling by a positive factor must never change them.
    pub fn scale_times(&self, factor: &Rational) -> TemporalPlan {
        let entries = self
            .entries
            .iter()
            .map(|entry| match entry {
                PlanEntry::Durative { action, start, duration } => PlanEntry::Durative {
                    action: action.clone(),
                    start: start * factor,
                    duration: duration * factor,
                },
                PlanEntry::Simple { action, start } => PlanEntry::Simple {
                    action: action.clone(),
                    start: start * factor,
                },
            })
            .collect();
        TemporalPlan { entries }
    }

    /// All snap actions any entry of this plan can contribute to a happening
    /// sequence: starts, ends, invariant snaps, and instantaneous actions.
    pub fn possible_snaps(&self) -> BTreeSet<SnapAction> {
        let mut set = BTreeSet::new();
        for entry in &self.entries {
            match entry {
                PlanEntry::Durative { action, .. } => {
                    set.insert(action.start.clone());
                    set.insert(action.end.clone());
                    set.insert(invariant_as_snap(action));
                }
                PlanEntry::Simple { action, .. } => {
                    set.insert(action.clone());
                }
            }
        }
        set
    }
}

fn pairwise_non_interfering(acts: &BTreeSet<SnapAction>) -> bool {
    let v: Vec<&SnapAction> = acts.iter().collect();
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if !non_interfering(v[i], v[j]) {
                return false;
            }
        }
    }
    true
}

/// The declarative validity check: fold over the happening time points from
/// the initial state, requiring at each point that all running invariants
/// hold, every snap action executing there is enabled, and the set is
/// pairwise non-interfering; finally the goal must hold.
pub fn reference_valid(problem: &GroundProblem, plan: &TemporalPlan, mode: InvariantMode) -> bool {
    let mut state = problem.init.clone();
    for t in plan.happening_time_points() {
        for inv in plan.invariants_at(&t, mode) {
            if !models(&state, &inv) {
                return false;
            }
        }
        let acts = plan.snap_set_at(&t);
        for a in &acts {
            if !models(&state, &a.pre) {
                return false;
            }
        }
        if !pairwise_non_interfering(&acts) {
            return false;
        }
        state = apply_effects(&acts, &state);
    }
    models(&state, &problem.goal)
}
