//! The end-to-end computation shared by every command.

use goal_arbiter_core::arguments::{ArgError, ArgumentStore};
use goal_arbiter_core::attacks::{rebuttal_attacks, resource_attacks, superfluous_attacks, AttackRelation};
use goal_arbiter_core::frameworks::{build_af, goal_attacks, successful_filter, ArgFramework, FrameworkError, GoalFramework};
use goal_arbiter_core::kb::KnowledgeBase;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Arguments(#[from] ArgError),
    #[error("{0}")]
    Framework(#[from] FrameworkError),
}

/// Arguments, the three attack relations and the general frameworks of one KB.
pub struct Analysis {
    pub store: ArgumentStore,
    pub terminal: AttackRelation,
    pub resource: AttackRelation,
    pub superfluous: AttackRelation,
    pub general: ArgFramework,
    pub filtered: ArgFramework,
}

impl Analysis {
    pub fn run(kb: &KnowledgeBase) -> Result<Self, PipelineError> {
        let store = ArgumentStore::enumerate(kb)?;
        Self::over(store)
    }

    pub fn over(store: ArgumentStore) -> Result<Self, PipelineError> {
        let terminal = rebuttal_attacks(&store);
        let resource = resource_attacks(&store, store.kb().resources());
        let superfluous = superfluous_attacks(&store);
        let general = build_af(&[&terminal, &resource, &superfluous], &store)?;
        let filtered = successful_filter(&general, &store, store.kb().preferences())?;
        Ok(Analysis {
            store,
            terminal,
            resource,
            superfluous,
            general,
            filtered,
        })
    }

    pub fn goal_framework(&self) -> Result<GoalFramework, FrameworkError> {
        goal_attacks(&self.filtered, &self.store)
    }
}
