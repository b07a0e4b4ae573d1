//! Property suite over randomly generated ground plans.

use std::collections::BTreeSet;

use proptest::prelude::*;

use tempval_core::formula::{Formula, GroundAtom};
use tempval_core::ground::{GroundDurativeAction, SnapAction};
use tempval_core::rational::Rational;
use tempval_core::semantics::{
    apply_effects, non_interfering, reference_valid, GroundProblem, InvariantMode, PlanEntry,
    State, TemporalPlan,
};
use tempval_core::validator::{
    is_induced, simplify_plan, simplify_plan_balanced, valid_hap_seq,
};

fn atom() -> impl Strategy<Value = GroundAtom> {
    (0usize..6).prop_map(|i| GroundAtom::new(format!("p{i}"), Vec::<String>::new()))
}

fn universe() -> BTreeSet<GroundAtom> {
    (0usize..6)
        .map(|i| GroundAtom::new(format!("p{i}"), Vec::<String>::new()))
        .collect()
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        2 => Just(Formula::Top),
        3 => atom().prop_map(Formula::atom),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn atom_set() -> impl Strategy<Value = BTreeSet<GroundAtom>> {
    proptest::collection::btree_set(atom(), 0..3)
}

fn snap() -> impl Strategy<Value = SnapAction> {
    (formula(), atom_set(), atom_set()).prop_map(|(pre, add, del)| SnapAction::new(pre, add, del))
}

fn time() -> impl Strategy<Value = Rational> {
    (0i64..=24, 1i64..=8).prop_map(|(n, d)| Rational::new(n, d))
}

fn entry() -> impl Strategy<Value = PlanEntry> {
    prop_oneof![
        4 => (snap(), snap(), formula(), time(), time()).prop_map(
            |(start, end, invariant, t, d)| PlanEntry::Durative {
                action: GroundDurativeAction { start, end, invariant },
                start: t,
                duration: d,
            }
        ),
        1 => (snap(), time()).prop_map(|(action, start)| PlanEntry::Simple { action, start }),
    ]
}

fn plan() -> impl Strategy<Value = TemporalPlan> {
    proptest::collection::vec(entry(), 0..6).prop_map(|entries| TemporalPlan { entries })
}

fn problem() -> impl Strategy<Value = GroundProblem> {
    (atom_set(), formula()).prop_map(|(init, goal)| GroundProblem {
        atoms: universe(),
        actions: Vec::new(),
        init,
        goal,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // The happening time points are exactly the set of start and end times,
    // strictly sorted.
    #[test]
    fn happening_time_points_match_brute_force(plan in plan()) {
        let htps = plan.happening_time_points();
        prop_assert!(htps.windows(2).all(|w| w[0] < w[1]));
        let mut brute = BTreeSet::new();
        for entry in &plan.entries {
            brute.insert(entry.start().clone());
            brute.insert(entry.end_time());
        }
        prop_assert_eq!(htps.into_iter().collect::<BTreeSet<_>>(), brute);
    }

    #[test]
    fn non_interference_is_symmetric(a in snap(), b in snap()) {
        prop_assert_eq!(non_interfering(&a, &b), non_interfering(&b, &a));
    }

    #[test]
    fn apply_effects_is_idempotent(acts in proptest::collection::btree_set(snap(), 0..4), state in atom_set()) {
        let once = apply_effects(&acts, &state);
        prop_assert_eq!(apply_effects(&acts, &once), once.clone());
    }

    // Both construction paths produce the same happening sequence.
    #[test]
    fn list_and_balanced_paths_agree(plan in plan()) {
        for mode in [InvariantMode::RightClosed, InvariantMode::Strict] {
            prop_assert_eq!(simplify_plan(&plan, mode), simplify_plan_balanced(&plan, mode));
        }
    }

    // The built sequence is always an induced happening sequence of its plan.
    #[test]
    fn built_sequences_are_induced(plan in plan()) {
        for mode in [InvariantMode::RightClosed, InvariantMode::Strict] {
            prop_assert!(is_induced(&plan, &simplify_plan(&plan, mode), mode));
        }
    }

    // The declarative verdict only depends on the plan as a set of entries.
    #[test]
    fn reference_verdict_is_permutation_invariant(
        (problem, plan, shuffled) in (problem(), plan()).prop_flat_map(|(problem, plan)| {
            let entries = plan.entries.clone();
            (Just(problem), Just(plan), Just(entries).prop_shuffle())
        })
    ) {
        let shuffled = TemporalPlan { entries: shuffled };
        for mode in [InvariantMode::RightClosed, InvariantMode::Strict] {
            prop_assert_eq!(
                reference_valid(&problem, &plan, mode),
                reference_valid(&problem, &shuffled, mode)
            );
        }
    }

    // Every intermediate state of an execution stays inside the atom
    // universe, so preconditions are never evaluated against foreign atoms.
    #[test]
    fn execution_states_stay_inside_the_universe(problem in problem(), plan in plan()) {
        let seq = simplify_plan(&plan, InvariantMode::RightClosed);
        let mut state: State = problem.init.clone();
        prop_assert!(state.is_subset(&problem.atoms));
        for happening in &seq {
            state = apply_effects(&happening.acts, &state);
            prop_assert!(state.is_subset(&problem.atoms));
        }
        // And the checker's final state, when it succeeds, is that same fold.
        if let Ok(final_state) = valid_hap_seq(&seq, &problem) {
            prop_assert_eq!(final_state, state);
        }
    }

    // Scaling every time by the same positive factor never changes either
    // verdict.
    #[test]
    fn verdicts_survive_time_scaling(problem in problem(), plan in plan()) {
        let factor = Rational::new(1, 1_000_000_000);
        let scaled = plan.scale_times(&factor);
        for mode in [InvariantMode::RightClosed, InvariantMode::Strict] {
            prop_assert_eq!(
                reference_valid(&problem, &plan, mode),
                reference_valid(&problem, &scaled, mode)
            );
            let plain = valid_hap_seq(&simplify_plan(&plan, mode), &problem).is_ok();
            let after = valid_hap_seq(&simplify_plan(&scaled, mode), &problem).is_ok();
            prop_assert_eq!(plain, after);
        }
    }
}
