//! Validation core for the durative-action fragment of PDDL 2.1.
//!
//! The crate is split along the validation pipeline:
//!
//! * [`rational`]: exact rational time arithmetic (no epsilon anywhere),
//! * [`ast`]: source-level syntax trees for domains, problems, and plans,
//! * [`wf`]: typing and well-formedness checks,
//! * [`ground`]: instantiation of action schemata into ground snap actions,
//! * [`semantics`]: the declarative validity definition used as an oracle,
//! * [`validator`]: the executable checker that builds and runs a happening
//!   sequence.
//!
//! [`semantics::reference_valid`] and [`validator::validate_plan`] decide the
//! same question along two independent routes; the companion crate
//! differentially tests one against the other.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ast;
pub mod formula;
pub mod ground;
pub mod rational;
pub mod semantics;
pub mod validator;
pub mod wf;

pub use formula::{Formula, GroundAtom};
pub use ground::{GroundAction, GroundDurativeAction, SnapAction};
pub use rational::Rational;
pub use semantics::{GroundProblem, InvariantMode, PlanEntry, State, TemporalPlan};
pub use validator::{Happening, Mutation, ValidationError};
