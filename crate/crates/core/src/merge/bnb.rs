//! Branch and bound over the group variables of a restricted model.
//!
//! A node is the vector of completion windows `[lo_i, hi_i]`: cell `(i, t)`
//! is fixed to 0 when `t < lo_i` and to 1 when `t ≥ hi_i`. Fixing one cell
//! of a group fixes the whole group, which narrows the windows of every task
//! the group touches. Propagation runs to a fixpoint over group fixings,
//! precedence (`lo_j ≥ lo_i + d_j`, `hi_i ≤ hi_j − d_j`) and timetabling on
//! compulsory parts. The bound takes every task at the better end of its
//! window and ignores resources.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::partition::Partition;
use super::restricted::{build_restricted, RestrictedModel};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::Scalar;
use crate::schedule::{check_feasible, serial_schedule, Schedule};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveLimits {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

impl SolveLimits {
    pub fn unlimited() -> Self {
        SolveLimits::default()
    }

    pub fn time(limit: Duration) -> Self {
        SolveLimits { time: Some(limit), nodes: None }
    }

    pub fn with_nodes(mut self, nodes: Option<u64>) -> Self {
        self.nodes = nodes;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    TimeLimit,
    NodeLimit,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::TimeLimit => "time_limit",
            SolveStatus::NodeLimit => "node_limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome<F> {
    pub schedule: Schedule,
    pub npv: F,
    pub status: SolveStatus,
    pub nodes: u64,
}

impl<F> SolveOutcome<F> {
    pub fn optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

#[derive(Clone, Debug)]
struct Bounds {
    lo: Vec<u32>,
    hi: Vec<u32>,
}

struct Pending<F> {
    bound: F,
    seq: u64,
    bounds: Bounds,
}

impl<F: Scalar> PartialEq for Pending<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<F: Scalar> Eq for Pending<F> {}

impl<F: Scalar> PartialOrd for Pending<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Scalar> Ord for Pending<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.partial_cmp(&other.bound).unwrap_or(Ordering::Equal).then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Search<'m, F> {
    instance: &'m Instance<F>,
    partition: &'m Partition,
    horizon: u32,
    /// `value[i * (δ + 2) + C] = c_i e^{−α C}`
    value: Vec<F>,
    /// Groups by decreasing objective mass.
    order: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    cells: Vec<(usize, u32, bool)>,
    tasks: Vec<usize>,
    queued: Vec<bool>,
    usage: Vec<u32>,
}

impl<'m, F: Scalar> Search<'m, F> {
    fn new(model: &'m RestrictedModel<'_, F>) -> Self {
        let instance = model.instance();
        let horizon = instance.deadline();
        let width = horizon as usize + 2;
        let alpha = instance.discount();
        let mut value = Vec::with_capacity(instance.n() * width);
        for i in 0..instance.n() {
            let c = instance.cashflow(i);
            value.extend((0..width).map(|t| c * (-alpha * F::of(t as f64)).exp()));
        }
        let mass = model.mass();
        let mut order: Vec<usize> = (0..model.n_groups()).collect();
        order.sort_by(|&a, &b| mass[b].partial_cmp(&mass[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
        Search {
            instance,
            partition: model.partition(),
            horizon,
            value,
            order,
            stamp: vec![0; model.n_groups()],
            epoch: 0,
            cells: Vec::new(),
            tasks: Vec::new(),
            queued: vec![false; instance.n()],
            usage: vec![0; instance.k() * horizon as usize],
        }
    }

    #[inline]
    fn val(&self, i: usize, completion: u32) -> F {
        self.value[i * (self.horizon as usize + 2) + completion as usize]
    }

    fn bound(&self, b: &Bounds) -> F {
        (0..b.lo.len()).map(|i| self.val(i, b.lo[i]).max(self.val(i, b.hi[i]))).sum()
    }

    fn is_leaf(b: &Bounds) -> bool {
        b.lo.iter().zip(&b.hi).all(|(l, h)| l == h)
    }

    fn set_lo(&mut self, b: &mut Bounds, i: usize, v: u32) -> bool {
        if v <= b.lo[i] {
            return true;
        }
        if v > b.hi[i] {
            return false;
        }
        for t in b.lo[i].max(1)..v.min(self.horizon + 1) {
            self.cells.push((i, t, false));
        }
        b.lo[i] = v;
        self.enqueue(i);
        true
    }

    fn set_hi(&mut self, b: &mut Bounds, i: usize, v: u32) -> bool {
        if v >= b.hi[i] {
            return true;
        }
        if v < b.lo[i] {
            return false;
        }
        for t in v.max(1)..b.hi[i].min(self.horizon + 1) {
            self.cells.push((i, t, true));
        }
        b.hi[i] = v;
        self.enqueue(i);
        true
    }

    fn enqueue(&mut self, i: usize) {
        if !self.queued[i] {
            self.queued[i] = true;
            self.tasks.push(i);
        }
    }

    fn reset_queues(&mut self) {
        self.cells.clear();
        for &i in &self.tasks {
            self.queued[i] = false;
        }
        self.tasks.clear();
    }

    /// Runs pending fixings to a fixpoint; `false` on a wipe-out.
    fn propagate(&mut self, b: &mut Bounds) -> bool {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = u32::MAX);
            self.epoch = 1;
        }
        let ok = self.fixpoint(b);
        self.reset_queues();
        ok
    }

    fn fixpoint(&mut self, b: &mut Bounds) -> bool {
        let instance = self.instance;
        let partition = self.partition;
        loop {
            while let Some((i, t, v)) = self.cells.pop() {
                let g = partition.group_of(i, t);
                if self.stamp[g] == self.epoch {
                    continue;
                }
                self.stamp[g] = self.epoch;
                for c in partition.group(g) {
                    let ok = if v { self.set_hi(b, c.task, c.time) } else { self.set_lo(b, c.task, c.time + 1) };
                    if !ok {
                        return false;
                    }
                }
            }
            if let Some(i) = self.tasks.pop() {
                self.queued[i] = false;
                let d = instance.duration(i);
                for &j in instance.successors(i) {
                    if !self.set_lo(b, j, b.lo[i] + instance.duration(j)) {
                        return false;
                    }
                }
                for &h in instance.predecessors(i) {
                    if !self.set_hi(b, h, b.hi[i] - d) {
                        return false;
                    }
                }
                continue;
            }
            match self.timetable(b) {
                None => return false,
                Some(true) => continue,
                Some(false) => return true,
            }
        }
    }

    /// Checks compulsory parts against capacities and pushes windows away
    /// from periods where a task cannot fit. `Some(changed)` or `None` on a
    /// conflict.
    fn timetable(&mut self, b: &mut Bounds) -> Option<bool> {
        let instance = self.instance;
        let k = instance.k();
        if k == 0 {
            return Some(false);
        }
        let h = self.horizon as usize;
        self.usage.iter_mut().for_each(|u| *u = 0);
        for i in 0..instance.n() {
            let d = instance.duration(i);
            let (from, to) = (b.hi[i] - d, b.lo[i]);
            for m in 0..k {
                let r = instance.demand(i, m);
                if r > 0 {
                    for p in from..to {
                        self.usage[m * h + p as usize] += r;
                    }
                }
            }
        }
        let limits = instance.limits();
        for m in 0..k {
            if self.usage[m * h..(m + 1) * h].iter().any(|&u| u > limits[m]) {
                return None;
            }
        }
        let mut changed = false;
        for i in 0..instance.n() {
            if b.lo[i] == b.hi[i] {
                continue;
            }
            let task = instance.task(i);
            if task.demand.iter().all(|&r| r == 0) {
                continue;
            }
            let (lo, hi) = {
                let d = task.duration;
                let own = (b.hi[i] - d)..b.lo[i];
                let usage = &self.usage;
                let conflict = |p: u32| {
                    !own.contains(&p)
                        && task
                            .demand
                            .iter()
                            .enumerate()
                            .any(|(m, &r)| r > 0 && usage[m * h + p as usize] + r > limits[m])
                };
                let mut s = b.lo[i] - d;
                while s + d <= b.hi[i] {
                    match (s..s + d).rev().find(|&p| conflict(p)) {
                        Some(p) => s = p + 1,
                        None => break,
                    }
                }
                if s + d > b.hi[i] {
                    return None;
                }
                let mut e = b.hi[i] - d;
                while let Some(p) = (e..e + d).find(|&p| conflict(p)) {
                    e = p - d;
                }
                (s + d, e + d)
            };
            if lo != b.lo[i] || hi != b.hi[i] {
                changed = true;
                if !self.set_lo(b, i, lo) || !self.set_hi(b, i, hi) {
                    return None;
                }
            }
        }
        Some(changed)
    }

    fn root(&mut self) -> Option<Bounds> {
        let n = self.instance.n();
        let mut b = Bounds { lo: vec![1; n], hi: vec![self.horizon + 1; n] };
        for i in 0..n {
            if !self.set_lo(&mut b, i, self.instance.duration(i).max(1)) || !self.set_hi(&mut b, i, self.horizon) {
                self.reset_queues();
                return None;
            }
        }
        self.propagate(&mut b).then_some(b)
    }

    fn branch_group(&self, b: &Bounds) -> Option<usize> {
        self.order.iter().copied().find(|&g| {
            let c = self.partition.group(g)[0];
            b.lo[c.task] <= c.time && c.time < b.hi[c.task]
        })
    }

    fn child(&mut self, parent: &Bounds, g: usize, v: bool) -> Option<Bounds> {
        let mut b = parent.clone();
        let c = self.partition.group(g)[0];
        self.cells.push((c.task, c.time, v));
        self.propagate(&mut b).then_some(b)
    }
}

/// Anytime branch and bound on `model`, warm-started from its incumbent.
/// Depth-first dives follow the child with the better bound; the sibling is
/// queued and dives restart from the best queued bound. The incumbent is
/// returned unchanged when the time limit is zero.
pub fn solve_restricted<F: Scalar>(model: &RestrictedModel<'_, F>, limits: SolveLimits) -> Result<SolveOutcome<F>> {
    let start = Instant::now();
    let instance = model.instance();
    let mut best = model.incumbent().completions(instance);
    let mut search = Search::new(model);
    let mut best_value: F = best.iter().enumerate().map(|(i, &c)| search.val(i, c)).sum();
    let finish = |completions: &[u32], status, nodes| -> Result<SolveOutcome<F>> {
        let schedule = Schedule::from_completions(instance, completions)
            .ok_or_else(|| Error::Internal("completion before duration".into()))?;
        let report = check_feasible(&schedule, instance);
        if !report.is_ok() {
            return Err(Error::Internal(format!("search produced an infeasible schedule: {:?}", report.violations)));
        }
        let npv = crate::schedule::npv(&schedule, instance);
        Ok(SolveOutcome { schedule, npv, status, nodes })
    };
    if limits.time == Some(Duration::ZERO) || limits.nodes == Some(0) {
        let status = if limits.time == Some(Duration::ZERO) { SolveStatus::TimeLimit } else { SolveStatus::NodeLimit };
        return finish(&best, status, 0);
    }
    let out_of_time = |nodes: u64| -> Option<SolveStatus> {
        if limits.nodes.is_some_and(|cap| nodes >= cap) {
            return Some(SolveStatus::NodeLimit);
        }
        if limits.time.is_some_and(|t| start.elapsed() >= t) {
            return Some(SolveStatus::TimeLimit);
        }
        None
    };

    let root =
        search.root().ok_or_else(|| Error::Internal("restricted model is infeasible despite its warm start".into()))?;
    let mut seq = 0u64;
    let mut heap = BinaryHeap::new();
    heap.push(Pending { bound: search.bound(&root), seq, bounds: root });
    let mut nodes = 0u64;
    let mut status = SolveStatus::Optimal;
    'search: while let Some(top) = heap.pop() {
        if top.bound <= best_value {
            break;
        }
        let mut current = top.bounds;
        loop {
            if let Some(stop) = out_of_time(nodes) {
                status = stop;
                break 'search;
            }
            nodes += 1;
            if Search::<F>::is_leaf(&current) {
                let value = search.bound(&current);
                if value > best_value {
                    best_value = value;
                    best = current.lo.clone();
                }
                break;
            }
            let g = search.branch_group(&current).expect("open window has an open cell");
            let mut kids: Vec<(F, Bounds)> = Vec::with_capacity(2);
            for v in [true, false] {
                if let Some(b) = search.child(&current, g, v) {
                    let bound = search.bound(&b);
                    if bound > best_value {
                        kids.push((bound, b));
                    }
                }
            }
            match kids.len() {
                0 => break,
                1 => current = kids.pop().expect("one child").1,
                _ => {
                    let (second, first) = (kids.pop().expect("two"), kids.pop().expect("two"));
                    let (dive, queue) = if second.0 > first.0 { (second, first) } else { (first, second) };
                    seq += 1;
                    heap.push(Pending { bound: queue.0, seq, bounds: queue.1 });
                    current = dive.1;
                }
            }
        }
    }
    finish(&best, status, nodes)
}

/// Solves the full time-indexed model: atomic partition, warm-started from a
/// serial schedule of the topological order.
pub fn solve_exact<F: Scalar>(instance: &Instance<F>, limits: SolveLimits) -> Result<SolveOutcome<F>> {
    instance.ensure_solvable()?;
    let warm = serial_schedule(instance, instance.topological_order())
        .ok_or_else(|| Error::Internal("no serial schedule".into()))?;
    let model = build_restricted(Partition::atomic(instance.n(), instance.deadline()), instance, &warm)?;
    solve_restricted(&model, limits)
}
