//! Random ground instances for the differential harness.
//!
//! Instances stay deliberately small: a handful of propositional atoms, a few
//! actions with shallow formulae, short plans whose times are rationals with
//! small denominators so that start/end coincidences actually happen.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use tempval_core::formula::{Formula, GroundAtom};
use tempval_core::ground::{GroundAction, GroundDurativeAction, SnapAction};
use tempval_core::rational::Rational;
use tempval_core::semantics::{GroundProblem, PlanEntry, State, TemporalPlan};

#[derive(Clone, Copy, Debug)]
pub struct GenBounds {
    pub max_atoms: usize,
    pub max_actions: usize,
    pub max_steps: usize,
    pub max_denominator: i64,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds {
            max_atoms: 8,
            max_actions: 6,
            max_steps: 6,
            max_denominator: 8,
        }
    }
}

pub struct InstanceGen {
    rng: SmallRng,
    bounds: GenBounds,
    /// Friendly instances lean toward satisfiable preconditions and trivial
    /// invariants, so a useful share of the corpus is actually valid.
    friendly: bool,
}

// One case index must always map to the same instance regardless of what ran
// before, so each instance gets its own stream derived from (seed, index).
fn mix(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl InstanceGen {
    pub fn for_case(seed: u64, index: u64, bounds: GenBounds) -> InstanceGen {
        InstanceGen {
            rng: SmallRng::seed_from_u64(mix(seed, index)),
            bounds,
            friendly: index.is_multiple_of(2),
        }
    }

    fn atom(&mut self, universe: &[GroundAtom]) -> GroundAtom {
        universe[self.rng.gen_range(0..universe.len())].clone()
    }

    fn formula(&mut self, universe: &[GroundAtom], depth: u32) -> Formula {
        let friendly_cut = if self.friendly { 50 } else { 25 };
        match self.rng.gen_range(0..100) {
            x if x < friendly_cut => Formula::Top,
            x if x < 70 || depth == 0 => Formula::atom(self.atom(universe)),
            x if x < 80 => Formula::not(self.formula(universe, depth - 1)),
            x if x < 90 => Formula::and(
                self.formula(universe, depth - 1),
                self.formula(universe, depth - 1),
            ),
            _ => Formula::or(
                self.formula(universe, depth - 1),
                self.formula(universe, depth - 1),
            ),
        }
    }

    fn effect_set(&mut self, universe: &[GroundAtom]) -> std::collections::BTreeSet<GroundAtom> {
        let size = self.rng.gen_range(0..=2usize.min(universe.len()));
        (0..size).map(|_| self.atom(universe)).collect()
    }

    fn snap(&mut self, universe: &[GroundAtom]) -> SnapAction {
        let pre = self.formula(universe, 2);
        let add = self.effect_set(universe);
        let mut del = self.effect_set(universe);
        // Mostly keep adds and deletes apart, the way instantiated schemata
        // have them; sometimes let one atom overlap so the delete-then-add
        // order is observable.
        if self.rng.gen_range(0..100) < 85 {
            del = del.difference(&add).cloned().collect();
        } else if add.is_empty() || del.is_empty() {
        } else {
            let shared = self.atom(universe);
            let mut with_shared = add.clone();
            with_shared.insert(shared.clone());
            del.insert(shared);
            return SnapAction::new(pre, with_shared, del);
        }
        SnapAction::new(pre, add, del)
    }

    fn action(&mut self, universe: &[GroundAtom]) -> GroundAction {
        if self.rng.gen_range(0..100) < 20 {
            return GroundAction::Simple(self.snap(universe));
        }
        let invariant = if self.friendly && self.rng.gen_range(0..100) < 60 {
            Formula::Top
        } else {
            self.formula(universe, 1)
        };
        GroundAction::Durative(GroundDurativeAction {
            start: self.snap(universe),
            end: self.snap(universe),
            invariant,
        })
    }

    fn time(&mut self, max_units: i64) -> Rational {
        let den = self.rng.gen_range(1..=self.bounds.max_denominator);
        let num = self.rng.gen_range(0..=max_units * den);
        Rational::new(num, den)
    }

    /// Generates one problem/plan pair within the bounds.
    pub fn instance(&mut self) -> (GroundProblem, TemporalPlan) {
        let atom_count = self.rng.gen_range(2..=self.bounds.max_atoms);
        let universe: Vec<GroundAtom> = (0..atom_count)
            .map(|i| GroundAtom::new(format!("p{i}"), Vec::<String>::new()))
            .collect();

        let action_count = self.rng.gen_range(1..=self.bounds.max_actions);
        let actions: Vec<GroundAction> = (0..action_count).map(|_| self.action(&universe)).collect();

        let init: State = universe
            .iter()
            .filter(|_| self.rng.gen_bool(if self.friendly { 0.6 } else { 0.4 }))
            .cloned()
            .collect();

        let goal = if self.friendly {
            match self.rng.gen_range(0..3) {
                0 => Formula::Top,
                1 => Formula::atom(self.atom(&universe)),
                _ => self.formula(&universe, 1),
            }
        } else {
            self.formula(&universe, 2)
        };

        let step_count = self.rng.gen_range(0..=self.bounds.max_steps);
        let entries = (0..step_count)
            .map(|_| {
                let action = actions[self.rng.gen_range(0..actions.len())].clone();
                match action {
                    GroundAction::Durative(action) => {
                        let duration = if self.rng.gen_range(0..100) < 5 {
                            Rational::zero()
                        } else {
                            self.time(2)
                        };
                        PlanEntry::Durative {
                            action,
                            start: self.time(4),
                            duration,
                        }
                    }
                    GroundAction::Simple(action) => PlanEntry::Simple {
                        action,
                        start: self.time(4),
                    },
                }
            })
            .collect();

        let problem = GroundProblem {
            atoms: universe.into_iter().collect(),
            actions,
            init,
            goal,
        };
        (problem, TemporalPlan { entries })
    }
}

/// The instance for one difftest case; deterministic in `(seed, index)`.
pub fn case_instance(seed: u64, index: u64, bounds: GenBounds) -> (GroundProblem, TemporalPlan) {
    InstanceGen::for_case(seed, index, bounds).instance()
}
