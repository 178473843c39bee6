//! Single-colony Ant Colony System over task permutations.
//!
//! Pheromone `τ[i][j]` is the desirability of putting task `j` at position
//! `i`. Ants build precedence-consistent permutations position by position;
//! each choice is greedy (`argmax τ`) with probability `q0` and roulette
//! otherwise, and the chosen entry is immediately updated with
//! `τ := τ·ρ + τ_min`. After every iteration the best-so-far permutation is
//! reinforced with `τ := τ·ρ + reward` and the matrix is reset once the
//! convergence factor passes its threshold.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::rng::ChaCha8Rng;
use crate::scalar::Scalar;
use crate::schedule::{npv, Decoder, Schedule};

#[derive(Clone, Debug, PartialEq)]
pub struct AcsParams<F> {
    pub n_ants: usize,
    pub q0: F,
    /// Multiplier applied to an entry on both updates.
    pub rho: F,
    /// Constant added to reinforced entries by the global update.
    pub reward: F,
    pub tau_min: F,
    pub tau_init: F,
    pub convergence_threshold: F,
}

impl<F: Scalar> Default for AcsParams<F> {
    fn default() -> Self {
        AcsParams {
            n_ants: 10,
            q0: F::of(0.9),
            rho: F::of(0.1),
            reward: F::of(0.01),
            tau_min: F::of(0.001),
            tau_init: F::of(0.5),
            convergence_threshold: F::of(0.99),
        }
    }
}

impl<F: Scalar> AcsParams<F> {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.rho, self.reward, self.tau_min, self.tau_init, self.convergence_threshold];
        if self.n_ants == 0 || positive.iter().any(|v| !(*v > F::zero())) {
            return Err(Error::Argument("ACS parameters must be positive".into()));
        }
        if !(self.q0 >= F::zero() && self.q0 <= F::one()) {
            return Err(Error::Argument(format!("q0 = {} outside [0, 1]", self.q0)));
        }
        if self.tau_init < self.tau_min {
            return Err(Error::Argument("initial pheromone below tau_min".into()));
        }
        Ok(())
    }
}

/// Row-major `n × n` pheromone matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PheromoneMatrix<F> {
    n: usize,
    tau: Vec<F>,
}

impl<F: Scalar> PheromoneMatrix<F> {
    pub fn uniform(n: usize, value: F) -> Self {
        PheromoneMatrix { n, tau: vec![value; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, position: usize, task: usize) -> F {
        self.tau[position * self.n + task]
    }

    #[inline]
    pub fn set(&mut self, position: usize, task: usize, value: F) {
        self.tau[position * self.n + task] = value;
    }

    pub fn row(&self, position: usize) -> &[F] {
        &self.tau[position * self.n..(position + 1) * self.n]
    }

    pub fn min_value(&self) -> F {
        self.tau.iter().copied().fold(F::infinity(), F::min)
    }

    pub fn reset(&mut self, value: F) {
        self.tau.iter_mut().for_each(|t| *t = value);
    }

    /// `τ[i][k] := τ[i][k]·ρ + τ_min` for a task just chosen at position `i`.
    pub fn local_update(&mut self, position: usize, task: usize, rho: F, tau_min: F) {
        let v = self.get(position, task);
        self.set(position, task, v * rho + tau_min);
    }

    /// `τ[i][best[i]] := τ[i][best[i]]·ρ + reward` for every position.
    pub fn global_update(&mut self, best: &[usize], rho: F, reward: F) {
        for (i, &task) in best.iter().enumerate() {
            let v = self.get(i, task);
            self.set(i, task, v * rho + reward);
        }
    }

    /// Mean over positions of the largest row share `max_j τ_ij / Σ_j τ_ij`.
    pub fn convergence_factor(&self) -> F {
        if self.n == 0 {
            return F::one();
        }
        let total: F = (0..self.n)
            .map(|i| {
                let row = self.row(i);
                let sum: F = row.iter().copied().sum();
                let max = row.iter().copied().fold(F::zero(), F::max);
                if sum > F::zero() {
                    max / sum
                } else {
                    F::zero()
                }
            })
            .sum();
        total / F::of(self.n as f64)
    }
}

/// Builds one precedence-consistent permutation, applying the local update
/// to each chosen entry.
pub fn construct_permutation<F: Scalar>(
    tau: &mut PheromoneMatrix<F>,
    instance: &Instance<F>,
    params: &AcsParams<F>,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let n = instance.n();
    let mut indegree: Vec<usize> = (0..n).map(|j| instance.predecessors(j).len()).collect();
    // kept sorted by task id so ties and the roulette order are stable
    let mut eligible: Vec<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
    let mut order = Vec::with_capacity(n);
    for position in 0..n {
        assert!(!eligible.is_empty(), "no eligible task at position {position}: precedence is cyclic");
        let q = F::of(1.0 - rng.gen::<f64>());
        let slot = if eligible.len() == 1 {
            0
        } else if q < params.q0 {
            argmax_slot(tau, position, &eligible)
        } else {
            roulette_slot(tau, position, &eligible, rng)
        };
        let task = eligible.remove(slot);
        tau.local_update(position, task, params.rho, params.tau_min);
        order.push(task);
        for &succ in instance.successors(task) {
            indegree[succ] -= 1;
            if indegree[succ] == 0 {
                let at = eligible.partition_point(|&e| e < succ);
                eligible.insert(at, succ);
            }
        }
    }
    order
}

fn argmax_slot<F: Scalar>(tau: &PheromoneMatrix<F>, position: usize, eligible: &[usize]) -> usize {
    let mut best = 0;
    for (slot, &task) in eligible.iter().enumerate().skip(1) {
        if tau.get(position, task) > tau.get(position, eligible[best]) {
            best = slot;
        }
    }
    best
}

fn roulette_slot<F: Scalar>(
    tau: &PheromoneMatrix<F>,
    position: usize,
    eligible: &[usize],
    rng: &mut ChaCha8Rng,
) -> usize {
    let total: F = eligible.iter().map(|&t| tau.get(position, t)).sum();
    let target = F::of(rng.gen::<f64>()) * total;
    let mut acc = F::zero();
    for (slot, &task) in eligible.iter().enumerate() {
        acc = acc + tau.get(position, task);
        if target < acc {
            return slot;
        }
    }
    eligible.len() - 1
}

/// Precedence consistency of a permutation of `0..n`.
pub fn is_precedence_consistent<F: Scalar>(permutation: &[usize], instance: &Instance<F>) -> bool {
    let n = instance.n();
    if permutation.len() != n {
        return false;
    }
    let mut position = vec![usize::MAX; n];
    for (k, &t) in permutation.iter().enumerate() {
        if t >= n || position[t] != usize::MAX {
            return false;
        }
        position[t] = k;
    }
    instance.precedence().iter().all(|&(i, j)| position[i] < position[j])
}

/// Termination for colonies: an iteration cap, a deadline, or both.
/// An empty budget allows unlimited iterations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub iterations: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn iterations(n: usize) -> Self {
        Budget { iterations: Some(n), deadline: None }
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = match (self.deadline, deadline) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn is_zero(&self) -> bool {
        self.iterations == Some(0) || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// A permutation together with its decoded schedule and value.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<F> {
    pub permutation: Vec<usize>,
    pub schedule: Schedule,
    pub npv: F,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iteration: usize,
    pub best_npv: f64,
    pub cf: f64,
}

/// State of one colony; resumable so that parallel colonies can exchange
/// solutions between rounds.
pub struct Colony<'a, F> {
    instance: &'a Instance<F>,
    params: AcsParams<F>,
    tau: PheromoneMatrix<F>,
    rng: ChaCha8Rng,
    decoder: Decoder<'a, F>,
    best: Option<Solution<F>>,
    iterations: usize,
    resets: usize,
    trace: Option<Vec<IterationTrace>>,
}

impl<'a, F: Scalar> Colony<'a, F> {
    pub fn new(instance: &'a Instance<F>, params: AcsParams<F>, rng: ChaCha8Rng) -> Result<Self> {
        params.validate()?;
        instance.ensure_solvable()?;
        Ok(Colony {
            instance,
            tau: PheromoneMatrix::uniform(instance.n(), params.tau_init),
            params,
            rng,
            decoder: Decoder::new(instance),
            best: None,
            iterations: 0,
            resets: 0,
            trace: None,
        })
    }

    /// Records one trace row per iteration from now on.
    pub fn record_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn trace(&self) -> &[IterationTrace] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn best(&self) -> Option<&Solution<F>> {
        self.best.as_ref()
    }

    pub fn pheromones(&self) -> &PheromoneMatrix<F> {
        &self.tau
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn resets(&self) -> usize {
        self.resets
    }

    pub fn evaluate(&mut self, permutation: Vec<usize>) -> Solution<F> {
        let schedule = self.decoder.decode(&permutation);
        let value = npv(&schedule, self.instance);
        Solution { permutation, schedule, npv: value }
    }

    /// Replaces the best-so-far when `candidate` is strictly better (or
    /// nothing is set yet). Returns whether it was adopted.
    pub fn offer(&mut self, candidate: &Solution<F>) -> bool {
        let better = self.best.as_ref().is_none_or(|b| candidate.npv > b.npv);
        if better {
            self.best = Some(candidate.clone());
        }
        better
    }

    /// Seeds the best-so-far from a permutation.
    pub fn seed(&mut self, permutation: Vec<usize>) -> Result<()> {
        if !is_precedence_consistent(&permutation, self.instance) {
            return Err(Error::Argument("seed permutation is not precedence-consistent".into()));
        }
        let sol = self.evaluate(permutation);
        self.offer(&sol);
        Ok(())
    }

    /// Runs one iteration: `n_ants` constructions, best-so-far update,
    /// global update, convergence check.
    pub fn step(&mut self) {
        let mut iteration_best: Option<Solution<F>> = None;
        for _ in 0..self.params.n_ants {
            let perm = construct_permutation(&mut self.tau, self.instance, &self.params, &mut self.rng);
            let sol = self.evaluate(perm);
            if iteration_best.as_ref().is_none_or(|b| sol.npv > b.npv) {
                iteration_best = Some(sol);
            }
        }
        if let Some(ib) = iteration_best {
            self.offer(&ib);
        }
        if let Some(best) = &self.best {
            self.tau.global_update(&best.permutation, self.params.rho, self.params.reward);
        }
        let cf = self.tau.convergence_factor();
        if cf > self.params.convergence_threshold {
            self.tau.reset(self.params.tau_init);
            self.resets += 1;
        }
        self.iterations += 1;
        if let Some(trace) = &mut self.trace {
            trace.push(IterationTrace {
                iteration: self.iterations,
                best_npv: self.best.as_ref().map_or(f64::NAN, |b| b.npv.as_f64()),
                cf: cf.as_f64(),
            });
        }
    }

    /// Iterates until `budget` is exhausted; the deadline is checked between
    /// iterations.
    pub fn run(&mut self, budget: Budget) {
        let mut done = 0usize;
        loop {
            if budget.iterations.is_some_and(|cap| done >= cap) {
                break;
            }
            if budget.deadline.is_some_and(|d| Instant::now() >= d) {
                break;
            }
            self.step();
            done += 1;
        }
    }

    /// Best-so-far, or a single greedy construction when nothing was found.
    pub fn into_best(mut self) -> Solution<F> {
        if let Some(best) = self.best.take() {
            return best;
        }
        self.greedy()
    }

    fn greedy(&mut self) -> Solution<F> {
        let mut greedy = self.params.clone();
        greedy.q0 = F::one();
        let mut tau = PheromoneMatrix::uniform(self.instance.n(), self.params.tau_init);
        let perm = construct_permutation(&mut tau, self.instance, &greedy, &mut self.rng);
        self.evaluate(perm)
    }
}

#[derive(Clone, Debug)]
pub struct ColonyResult<F> {
    pub best: Solution<F>,
    pub iterations: usize,
    pub trace: Vec<IterationTrace>,
}

/// Runs a single colony from a fresh pheromone matrix. With a zero budget
/// the seed (or one greedy construction) is returned.
pub fn run_colony<F: Scalar>(
    instance: &Instance<F>,
    params: &AcsParams<F>,
    seed_solution: Option<Vec<usize>>,
    budget: Budget,
    rng: ChaCha8Rng,
) -> Result<ColonyResult<F>> {
    let mut colony = Colony::new(instance, params.clone(), rng)?;
    colony.record_trace();
    if let Some(seed) = seed_solution {
        colony.seed(seed)?;
    }
    colony.run(budget);
    let iterations = colony.iterations();
    let trace = colony.trace().to_vec();
    Ok(ColonyResult { best: colony.into_best(), iterations, trace })
}
