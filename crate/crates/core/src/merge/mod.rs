//! Merge search over the time-indexed binary model.
//!
//! A pool of schedules is encoded as step matrices `x[i][t]`; cells that
//! take the same value in every pool member are aggregated into one binary
//! group variable ([`partition`]), groups are refined at random time points
//! ([`random_split`]), and the aggregated program ([`RestrictedModel`]) is
//! solved by an embedded branch and bound ([`solve_restricted`]). The outer
//! loop ([`ms_pacs`]) feeds the pool from parallel ant colonies.

mod bnb;
mod lp;
mod ms_pacs;
mod partition;
mod restricted;
mod split;

pub use bnb::{solve_exact, solve_restricted, SolveLimits, SolveOutcome, SolveStatus};
pub use lp::export_lp;
pub use ms_pacs::{ms_pacs, MsIteration, MsParams, MsResult, MsTraceRow};
pub use partition::{partition, Cell, Partition, SolutionPool};
pub use restricted::{build_restricted, ConstraintKind, LinearConstraint, RestrictedModel, Sense};
pub use split::random_split;
