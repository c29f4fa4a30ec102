//! Knowledge-base files, reports, Graphviz export and the command-line front
//! end for [`goal_arbiter_core`].

pub mod cli;
pub mod dot;
pub mod dsl;
pub mod pipeline;
pub mod report;

pub use goal_arbiter_core as core;
