#![no_std]
//! Detecting incompatibilities between an agent's goals and selecting a
//! compatible subset to pursue, using instrumental arguments built from plan
//! rules and abstract argumentation semantics.

extern crate alloc;

pub mod arguments;
pub mod attacks;
pub mod frameworks;
pub mod kb;
pub mod literal;
pub mod postulates;
pub mod rational;
pub mod semantics;

pub use arguments::{ArgError, ArgId, Argument, ArgumentStore, Equivalence, PartialPlan};
pub use attacks::{
    rebuttal_attacks, resource_attacks, resource_entails, superfluous_attacks, AttackKind,
    AttackRelation, ResourceFormula, SuperfluityCase, Witness,
};
pub use frameworks::{build_af, goal_attacks, successful_filter, ArgFramework, FrameworkError, GoalFramework};
pub use kb::{KbBuilder, KbError, KnowledgeBase, PlanRule, Premise, RuleId};
pub use literal::{Atom, Literal, ResourceAtom, Term};
pub use rational::Rational;
pub use semantics::{select, Digraph, NodeSet, Policy, SelectionResult, SemanticsError, Valuation};
