use std::io::Write;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::bnb::{solve_restricted, SolveLimits, SolveStatus};
use super::lp::export_lp;
use super::partition::{partition, SolutionPool};
use super::restricted::build_restricted;
use super::split::random_split;
use crate::acs::{AcsParams, Budget};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::paco::{run_paco, thread_cap, PacoMode, PacoParams};
use crate::rng;
use crate::scalar::Scalar;
use crate::schedule::{npv, Schedule};

#[derive(Clone, Debug)]
pub struct MsParams<F> {
    /// Colonies feeding the pool each iteration.
    pub colonies: usize,
    pub t_total: Duration,
    /// Time limit of each restricted solve.
    pub t_iter: Duration,
    /// Maximum number of parts per group after splitting.
    pub k: usize,
    pub acs: AcsParams<F>,
    /// ACS iterations per colony per merge iteration.
    pub acs_iterations: usize,
    /// Stops after this many merge iterations even if time remains.
    pub max_iterations: Option<usize>,
    /// Node cap of each restricted solve.
    pub node_limit: Option<u64>,
    pub threads: usize,
    /// Keep the LP text of the last restricted model.
    pub export_lp: bool,
}

impl<F: Scalar> Default for MsParams<F> {
    fn default() -> Self {
        MsParams {
            colonies: 5,
            t_total: Duration::from_secs(900),
            t_iter: Duration::from_secs(60),
            k: 500,
            acs: AcsParams::default(),
            acs_iterations: 2000,
            max_iterations: None,
            node_limit: None,
            threads: thread_cap(),
            export_lp: false,
        }
    }
}

impl<F: Scalar> MsParams<F> {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Argument("split count K must be at least 1".into()));
        }
        if self.t_iter > self.t_total {
            return Err(Error::Argument("t_iter exceeds t_total".into()));
        }
        if self.colonies < 1 {
            return Err(Error::Argument("at least one colony is required".into()));
        }
        self.acs.validate()
    }
}

/// One row of the run trace CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MsTraceRow {
    pub iter: usize,
    pub pool_best: f64,
    pub groups_pre: usize,
    pub groups_post: usize,
    pub solver_status: SolveStatus,
    pub incumbent_npv: f64,
    pub wall_secs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MsIteration {
    pub row: MsTraceRow,
    pub pool_npvs: Vec<f64>,
    pub solve_npv: f64,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct MsResult<F> {
    pub best: Schedule,
    pub npv: F,
    pub iterations: Vec<MsIteration>,
    pub lp: Option<String>,
}

impl<F: Scalar> MsResult<F> {
    pub fn write_trace<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for it in &self.iterations {
            w.serialize(&it.row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Merge search fed by pooled parallel colonies. Each iteration runs the
/// colonies (colony 0 seeded with the best-so-far), merges the pool with
/// the best-so-far, splits the partition, and solves the restricted model
/// warm-started from the best pool member. At least one iteration runs even
/// when `t_total` is already spent.
pub fn ms_pacs<F: Scalar>(instance: &Instance<F>, params: &MsParams<F>, seed: u64) -> Result<MsResult<F>> {
    params.validate()?;
    instance.ensure_solvable()?;
    let start = Instant::now();
    let deadline = start.checked_add(params.t_total);
    let paco = PacoParams {
        colonies: params.colonies,
        acs: params.acs.clone(),
        mode: PacoMode::Pooled,
        threads: params.threads,
    };
    let mut best: Option<(Schedule, F)> = None;
    let mut iterations = Vec::new();
    let mut lp = None;
    for iter in 0.. {
        let tag = 2 * iter as u64;
        let budget = Budget::iterations(params.acs_iterations).with_deadline(deadline);
        let colonies = run_paco(instance, &paco, best.as_ref().map(|b| &b.0), budget, rng::derive_seed(seed, tag))?;

        let mut schedules: Vec<Schedule> = best.iter().map(|b| b.0.clone()).collect();
        schedules.extend(colonies.schedules());
        let pool_npvs: Vec<F> = schedules.iter().map(|s| npv(s, instance)).collect();
        let warm = (0..schedules.len()).fold(0, |acc, j| if pool_npvs[j] > pool_npvs[acc] { j } else { acc });
        let pool_best = pool_npvs[warm];
        let warm_start = schedules[warm].clone();

        let pool = SolutionPool::new(instance, schedules)?;
        let coarse = partition(&pool)?;
        let groups_pre = coarse.len();
        let mut split_rng = rng::stream(rng::derive_seed(seed, tag + 1), rng::SPLIT_STREAM);
        let fine = random_split(&coarse, params.k, &mut split_rng);
        let groups_post = fine.len();
        let model = build_restricted(fine, instance, &warm_start)?;

        let remaining = deadline.map_or(params.t_iter, |d| d.saturating_duration_since(Instant::now()));
        let limits = SolveLimits::time(params.t_iter.min(remaining)).with_nodes(params.node_limit);
        let out = solve_restricted(&model, limits)?;
        if params.export_lp {
            lp = Some(export_lp(&model));
        }

        if best.as_ref().is_none_or(|(_, v)| out.npv > *v) {
            best = Some((out.schedule.clone(), out.npv));
        }
        let incumbent_npv = best.as_ref().map_or(f64::NAN, |b| b.1.as_f64());
        iterations.push(MsIteration {
            row: MsTraceRow {
                iter,
                pool_best: pool_best.as_f64(),
                groups_pre,
                groups_post,
                solver_status: out.status,
                incumbent_npv,
                wall_secs: start.elapsed().as_secs_f64(),
            },
            pool_npvs: pool_npvs.iter().map(|v| v.as_f64()).collect(),
            solve_npv: out.npv.as_f64(),
            nodes: out.nodes,
        });

        if params.max_iterations.is_some_and(|cap| iter + 1 >= cap) || deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
    }
    let (best, value) = best.expect("at least one iteration ran");
    Ok(MsResult { best, npv: value, iterations, lp })
}
