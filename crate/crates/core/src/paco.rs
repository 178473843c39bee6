//! Several independent ACS colonies run concurrently.
//!
//! Colony `c` draws from stream `COLONY_STREAM_BASE + c` of the round seed,
//! so results depend only on the seed and the colony count, never on the
//! number of worker threads. Colonies share nothing while a round runs;
//! bests are collected by colony index at the round barrier.
//!
//! * [`PacoMode::Pooled`]: one round; colony 0 is seeded with the given
//!   best-so-far schedule and the best of every colony is returned (the
//!   solution pool of merge search).
//! * [`PacoMode::Standalone`]: rounds of `sync_interval` iterations; after
//!   each round every colony whose best is worse than the global best adopts
//!   it as its own best-so-far.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::acs::{AcsParams, Budget, Colony, Solution};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::rng;
use crate::scalar::Scalar;
use crate::schedule::Schedule;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "NPVMERGE_THREADS";

/// Worker thread cap: `NPVMERGE_THREADS` if set and positive, otherwise the
/// available parallelism.
pub fn thread_cap() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PacoMode {
    Standalone { sync_interval: usize },
    Pooled,
}

#[derive(Clone, Debug)]
pub struct PacoParams<F> {
    pub colonies: usize,
    pub acs: AcsParams<F>,
    pub mode: PacoMode,
    pub threads: usize,
}

impl<F: Scalar> PacoParams<F> {
    pub fn new(colonies: usize, acs: AcsParams<F>, mode: PacoMode) -> Self {
        PacoParams { colonies, acs, mode, threads: thread_cap() }
    }
}

#[derive(Clone, Debug)]
pub struct ColonyPool<F> {
    /// Best solution of each colony, indexed by colony.
    pub bests: Vec<Solution<F>>,
    pub global_best: Solution<F>,
    pub rounds: usize,
    /// Global best value after each round.
    pub round_bests: Vec<F>,
}

impl<F: Scalar> ColonyPool<F> {
    pub fn schedules(&self) -> Vec<Schedule> {
        self.bests.iter().map(|s| s.schedule.clone()).collect()
    }
}

/// Runs `work(c, &mut state_c)` for every colony on up to `threads` workers.
fn for_each_parallel<T: Send, W>(states: &mut [T], threads: usize, work: W)
where
    W: Fn(usize, &mut T) + Sync,
{
    let threads = threads.max(1).min(states.len());
    if threads <= 1 {
        for (c, s) in states.iter_mut().enumerate() {
            work(c, s);
        }
        return;
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<&mut T>> = states.iter_mut().map(Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let c = next.fetch_add(1, Ordering::Relaxed);
                let Some(slot) = slots.get(c) else { break };
                let mut guard = slot.lock().expect("colony slot poisoned");
                work(c, &mut guard);
            });
        }
    });
}

/// Runs `params.colonies` colonies. See the module docs for the two modes.
pub fn run_paco<F: Scalar>(
    instance: &Instance<F>,
    params: &PacoParams<F>,
    seed_best: Option<&Schedule>,
    budget: Budget,
    seed: u64,
) -> Result<ColonyPool<F>> {
    if params.colonies < 1 {
        return Err(Error::Argument("at least one colony is required".into()));
    }
    let mut colonies = (0..params.colonies)
        .map(|c| Colony::new(instance, params.acs.clone(), rng::stream(seed, rng::COLONY_STREAM_BASE + c as u64)))
        .collect::<Result<Vec<_>>>()?;
    if let Some(s) = seed_best {
        colonies[0].seed(s.to_permutation())?;
    }

    let mut round_bests = Vec::new();
    let mut rounds = 0;
    let mut global: Option<Solution<F>> = None;
    match params.mode {
        PacoMode::Pooled => {
            for_each_parallel(&mut colonies, params.threads, |_, colony| colony.run(budget));
            rounds = 1;
            global = collect_global(&colonies, global);
            round_bests.push(global.as_ref().map_or(F::neg_infinity(), |g| g.npv));
        }
        PacoMode::Standalone { sync_interval } => {
            let interval = sync_interval.max(1);
            let mut done = 0usize;
            loop {
                let remaining = budget.iterations.map(|cap| cap.saturating_sub(done));
                if remaining == Some(0) || budget.deadline.is_some_and(|d| Instant::now() >= d) {
                    break;
                }
                let chunk = remaining.map_or(interval, |r| r.min(interval));
                let round_budget = Budget { iterations: Some(chunk), deadline: budget.deadline };
                for_each_parallel(&mut colonies, params.threads, |_, colony| colony.run(round_budget));
                done += chunk;
                rounds += 1;
                global = collect_global(&colonies, global);
                if let Some(g) = &global {
                    for colony in &mut colonies {
                        colony.offer(g);
                    }
                }
                round_bests.push(global.as_ref().map_or(F::neg_infinity(), |g| g.npv));
            }
        }
    }

    let bests: Vec<Solution<F>> = colonies.into_iter().map(Colony::into_best).collect();
    let global_best = bests
        .iter()
        .chain(global.as_ref())
        .fold(None::<&Solution<F>>, |acc, s| match acc {
            Some(a) if a.npv >= s.npv => Some(a),
            _ => Some(s),
        })
        .expect("at least one colony")
        .clone();
    Ok(ColonyPool { bests, global_best, rounds, round_bests })
}

fn collect_global<F: Scalar>(colonies: &[Colony<'_, F>], previous: Option<Solution<F>>) -> Option<Solution<F>> {
    let mut global = previous;
    for colony in colonies {
        if let Some(b) = colony.best() {
            if global.as_ref().is_none_or(|g| b.npv > g.npv) {
                global = Some(b.clone());
            }
        }
    }
    global
}
