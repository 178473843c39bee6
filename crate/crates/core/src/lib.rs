//! Net-present-value project scheduling with merge search.
//!
//! This crate solves the resource-constrained project scheduling problem
//! where every task carries a cash flow and the objective is to maximise the
//! discounted value `Σ c_i · exp(-α (s_i + d_i))` subject to precedence,
//! renewable resource limits and a common deadline.
//!
//! The main solver, [`merge::ms_pacs`], alternates two phases:
//!
//! 1. several independent ant colony system colonies ([`paco`]) produce a
//!    pool of good, diverse schedules;
//! 2. the time-indexed binary encodings of the pool are used to aggregate
//!    the variables of the exact model into groups that take identical values
//!    in every pool member ([`merge::partition`]), the groups are randomly
//!    refined ([`merge::random_split`]) and the resulting restricted binary
//!    program is solved by the embedded branch and bound
//!    ([`merge::solve_restricted`]).
//!
//! The numeric core is generic over the floating point type through
//! [`Scalar`]; `f64` is the default everywhere and the aliases at the crate
//! root name the common instantiations.

pub mod acs;
pub mod cli;
pub mod error;
pub mod merge;
pub mod model;
pub mod paco;
pub mod rng;
pub mod scalar;
pub mod schedule;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use schedule::Schedule;

/// Instance with 64-bit cash flows and discount rate.
pub type Instance = model::Instance<f64>;
/// Instance with 32-bit cash flows and discount rate.
pub type Instance32 = model::Instance<f32>;
/// Pheromone matrix over `f64`.
pub type PheromoneMatrix = acs::PheromoneMatrix<f64>;
/// ACS parameters over `f64`.
pub type AcsParams = acs::AcsParams<f64>;
/// Merge search parameters over `f64`.
pub type MsParams = merge::MsParams<f64>;
/// Restricted model over `f64`.
pub type RestrictedModel<'a> = merge::RestrictedModel<'a, f64>;
