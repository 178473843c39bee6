#![allow(dead_code)]

use npvmerge::merge::{Partition, SolutionPool};
use npvmerge::model::{Instance, Task};
use npvmerge::Schedule;
use rand::Rng;

/// Bounds for [`tiny_instance`].
#[derive(Clone, Copy, Debug)]
pub struct TinyBounds {
    pub min_n: usize,
    pub max_n: usize,
    pub max_deadline: u32,
    pub max_resources: usize,
    pub max_duration: u32,
}

impl TinyBounds {
    pub const ORACLE: TinyBounds =
        TinyBounds { min_n: 3, max_n: 6, max_deadline: 14, max_resources: 2, max_duration: 3 };
    pub const FULL_SPLIT: TinyBounds =
        TinyBounds { min_n: 2, max_n: 4, max_deadline: 10, max_resources: 2, max_duration: 3 };
}

/// Random instance whose topological serial schedule meets the deadline.
pub fn tiny_instance<R: Rng>(rng: &mut R, bounds: TinyBounds) -> Instance<f64> {
    loop {
        let n = rng.gen_range(bounds.min_n..=bounds.max_n);
        let k = rng.gen_range(0..=bounds.max_resources);
        let limits: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
        let tasks: Vec<Task<f64>> = (0..n)
            .map(|id| Task {
                id,
                duration: rng.gen_range(1..=bounds.max_duration),
                cashflow: rng.gen_range(-500.0..1000.0),
                demand: limits.iter().map(|&r| rng.gen_range(0..=r)).collect(),
            })
            .collect();
        let density = rng.gen_range(0.0..0.6);
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density) {
                    arcs.push((i, j));
                }
            }
        }
        let deadline = rng.gen_range((bounds.max_deadline / 2).max(1)..=bounds.max_deadline);
        let alpha = rng.gen_range(0.005..0.2);
        let inst = Instance::new("tiny", tasks, arcs, limits).unwrap().with_deadline(deadline).with_discount(alpha);
        if inst.ensure_solvable().is_ok() {
            return inst;
        }
    }
}

/// Discounted value of completion times, computed from scratch.
pub fn value_of(inst: &Instance<f64>, completions: &[u32]) -> f64 {
    completions.iter().enumerate().map(|(i, &c)| inst.cashflow(i) * (-inst.discount() * c as f64).exp()).sum()
}

/// Feasibility of completion times against the original constraints:
/// durations fit the horizon, precedence, and per-period resource use.
pub fn completions_feasible(inst: &Instance<f64>, completions: &[u32]) -> bool {
    let n = inst.n();
    let horizon = inst.deadline();
    for i in 0..n {
        if completions[i] < inst.duration(i) || completions[i] > horizon {
            return false;
        }
    }
    for &(i, j) in inst.precedence() {
        if completions[j] - inst.duration(j) < completions[i] {
            return false;
        }
    }
    for p in 0..horizon {
        for (m, &cap) in inst.limits().iter().enumerate() {
            let used: u32 = (0..n)
                .filter(|&i| completions[i] - inst.duration(i) <= p && p < completions[i])
                .map(|i| inst.demand(i, m))
                .sum();
            if used > cap {
                return false;
            }
        }
    }
    true
}

/// Calls `visit` on every feasible completion vector.
pub fn for_each_feasible(inst: &Instance<f64>, mut visit: impl FnMut(&[u32])) {
    let n = inst.n();
    let mut c: Vec<u32> = (0..n).map(|i| inst.duration(i)).collect();
    if c.iter().any(|&v| v > inst.deadline()) {
        return;
    }
    loop {
        if completions_feasible(inst, &c) {
            visit(&c);
        }
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            c[k] += 1;
            if c[k] <= inst.deadline() {
                break;
            }
            c[k] = inst.duration(k);
            k += 1;
        }
    }
}

/// Exhaustive optimum over all completion vectors, with its argmax.
pub fn brute_force(inst: &Instance<f64>) -> Option<(f64, Vec<u32>)> {
    let mut best: Option<(f64, Vec<u32>)> = None;
    for_each_feasible(inst, |c| {
        let v = value_of(inst, c);
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, c.to_vec()));
        }
    });
    best
}

/// Feasibility of an `n × δ` 0/1 matrix under the time-indexed model: each
/// row is non-decreasing and ends in 1, the first 1 of row `i` is its
/// completion time, and those completion times satisfy release, precedence
/// and resource constraints.
pub fn matrix_feasible(inst: &Instance<f64>, x: &[Vec<u8>]) -> bool {
    let horizon = inst.deadline() as usize;
    let mut completions = Vec::with_capacity(x.len());
    for row in x {
        if row.len() != horizon || row[horizon - 1] != 1 || row.windows(2).any(|w| w[0] > w[1]) {
            return false;
        }
        completions.push(row.iter().position(|&v| v == 1).unwrap() as u32 + 1);
    }
    completions_feasible(inst, &completions)
}

/// Builds the step matrix of completion times.
pub fn step_matrix(completions: &[u32], horizon: u32) -> Vec<Vec<u8>> {
    completions.iter().map(|&c| (1..=horizon).map(|t| u8::from(t >= c)).collect()).collect()
}

/// Three tasks of unit duration over 11 time points with no resources,
/// so that any completion times are feasible.
pub fn golden_instance() -> Instance<f64> {
    let tasks = (0..3).map(|id| Task { id, duration: 1, cashflow: 100.0, demand: vec![] }).collect();
    Instance::new("golden", tasks, vec![], vec![]).unwrap().with_deadline(11).with_discount(0.01)
}

/// Completion times of the three example solutions, one vector per
/// solution. Task 2 completes at 3, 9 and 7, which leaves a group of four
/// cells (task 2, times 3..=6) equal to 1 only in the first solution.
pub const GOLDEN_COMPLETIONS: [[u32; 3]; 3] = [[5, 3, 10], [8, 9, 11], [1, 7, 10]];

pub fn golden_pool() -> (Instance<f64>, SolutionPool) {
    let inst = golden_instance();
    let schedules = GOLDEN_COMPLETIONS.iter().map(|c| Schedule::from_completions(&inst, c).unwrap()).collect();
    let pool = SolutionPool::new(&inst, schedules).unwrap();
    (inst, pool)
}

/// Checks that every cell is in exactly one group and that `group_of` agrees.
pub fn is_valid_cover(p: &Partition) -> bool {
    let mut seen = vec![false; p.n() * p.horizon() as usize];
    for (g, group) in p.groups().iter().enumerate() {
        if group.is_empty() {
            return false;
        }
        for c in group {
            let at = c.task * p.horizon() as usize + (c.time as usize - 1);
            if seen[at] || p.group_of(c.task, c.time) != g {
                return false;
            }
            seen[at] = true;
        }
    }
    seen.iter().all(|&s| s)
}

/// Checks that all cells of each group share one across-pool value vector.
pub fn groups_are_uniform(p: &Partition, pool: &SolutionPool) -> bool {
    p.groups().iter().all(|group| {
        let vector = |task, time| pool.encodings().iter().map(|e| e.value(task, time)).collect::<Vec<_>>();
        let first = vector(group[0].task, group[0].time);
        group.iter().all(|c| vector(c.task, c.time) == first)
    })
}

/// Checks that distinct groups carry distinct value vectors.
pub fn groups_are_maximal(p: &Partition, pool: &SolutionPool) -> bool {
    let mut vectors: Vec<Vec<bool>> =
        p.groups().iter().map(|g| pool.encodings().iter().map(|e| e.value(g[0].task, g[0].time)).collect()).collect();
    let total = vectors.len();
    vectors.sort();
    vectors.dedup();
    vectors.len() == total
}

/// Uniformly random precedence-consistent permutation.
pub fn random_topological<R: Rng>(inst: &Instance<f64>, rng: &mut R) -> Vec<usize> {
    let n = inst.n();
    let mut indegree: Vec<usize> = (0..n).map(|j| inst.predecessors(j).len()).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        let task = ready.swap_remove(rng.gen_range(0..ready.len()));
        order.push(task);
        for &s in inst.successors(task) {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.push(s);
            }
        }
    }
    order
}

pub const SMALL: TinyBounds = TinyBounds { min_n: 1, max_n: 5, max_deadline: 10, max_resources: 2, max_duration: 3 };
