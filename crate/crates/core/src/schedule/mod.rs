//! Schedules, their evaluation and feasibility, the time-indexed binary
//! encoding, and the permutation decoder.

mod decode;
mod encoding;

pub use decode::{decode, Decoder};
pub use encoding::{encode_binary, BinaryEncoding};

use serde::{Deserialize, Serialize};

use crate::model::Instance;
use crate::scalar::Scalar;

/// Integer start period of every task. Task `i` occupies periods
/// `starts[i] .. starts[i] + d_i` and completes at `starts[i] + d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Schedule {
    pub starts: Vec<u32>,
}

impl Schedule {
    pub fn new(starts: Vec<u32>) -> Self {
        Schedule { starts }
    }

    pub fn completion<F: Scalar>(&self, instance: &Instance<F>, i: usize) -> u32 {
        self.starts[i] + instance.tasks()[i].duration
    }

    pub fn completions<F: Scalar>(&self, instance: &Instance<F>) -> Vec<u32> {
        (0..self.starts.len()).map(|i| self.completion(instance, i)).collect()
    }

    /// Builds a schedule from completion times; `None` if some completion
    /// precedes the task's duration.
    pub fn from_completions<F: Scalar>(instance: &Instance<F>, completions: &[u32]) -> Option<Self> {
        completions
            .iter()
            .zip(instance.tasks())
            .map(|(&c, t)| c.checked_sub(t.duration))
            .collect::<Option<Vec<_>>>()
            .map(Schedule::new)
    }

    /// Tasks ordered by start period, ties by id. The result is
    /// precedence-consistent whenever the schedule respects precedence.
    pub fn to_permutation(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.starts.len()).collect();
        order.sort_by_key(|&i| (self.starts[i], i));
        order
    }
}

/// Σ c_i · exp(−α (s_i + d_i)). No feasibility check.
pub fn npv<F: Scalar>(schedule: &Schedule, instance: &Instance<F>) -> F {
    let alpha = instance.discount();
    schedule
        .starts
        .iter()
        .zip(instance.tasks())
        .map(|(&s, t)| t.cashflow * (-alpha * F::of(f64::from(s + t.duration))).exp())
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `pred` does not complete before `succ` starts.
    Precedence { pred: usize, succ: usize },
    /// Usage of resource `resource` exceeds its limit in `period`.
    ResourceOverload { resource: usize, period: u32 },
    /// Task `task` completes after the deadline.
    Deadline { task: usize },
    /// Start vector has the wrong length.
    Shape { expected: usize, found: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_feasible<F: Scalar>(schedule: &Schedule, instance: &Instance<F>) -> FeasibilityReport {
    let n = instance.n();
    let mut violations = Vec::new();
    if schedule.starts.len() != n {
        violations.push(Violation::Shape { expected: n, found: schedule.starts.len() });
        return FeasibilityReport { violations };
    }
    for &(i, j) in instance.precedence() {
        if schedule.completion(instance, i) > schedule.starts[j] {
            violations.push(Violation::Precedence { pred: i, succ: j });
        }
    }
    let deadline = instance.deadline();
    let mut horizon = deadline;
    for i in 0..n {
        let c = schedule.completion(instance, i);
        if c > deadline {
            violations.push(Violation::Deadline { task: i });
        }
        horizon = horizon.max(c);
    }
    for (m, &cap) in instance.limits().iter().enumerate() {
        let mut usage = vec![0u64; horizon as usize];
        for (i, task) in instance.tasks().iter().enumerate() {
            let s = schedule.starts[i] as usize;
            for u in &mut usage[s..s + task.duration as usize] {
                *u += u64::from(task.demand[m]);
            }
        }
        for (t, &u) in usage.iter().enumerate() {
            if u > u64::from(cap) {
                violations.push(Violation::ResourceOverload { resource: m, period: t as u32 });
            }
        }
    }
    FeasibilityReport { violations }
}

/// Per-resource, per-period usage over `0..deadline`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceProfile {
    horizon: usize,
    usage: Vec<u32>,
}

impl ResourceProfile {
    pub fn empty(resources: usize, horizon: u32) -> Self {
        ResourceProfile { horizon: horizon as usize, usage: vec![0; resources * horizon as usize] }
    }

    /// Usage of `schedule`; periods past the horizon are ignored.
    pub fn of<F: Scalar>(schedule: &Schedule, instance: &Instance<F>) -> Self {
        let mut profile = Self::empty(instance.k(), instance.deadline());
        for (i, task) in instance.tasks().iter().enumerate() {
            let end = (schedule.starts[i] + task.duration).min(instance.deadline());
            profile.add(&task.demand, schedule.starts[i].min(end), end);
        }
        profile
    }

    pub fn usage(&self, resource: usize, period: u32) -> u32 {
        self.usage[resource * self.horizon + period as usize]
    }

    pub(crate) fn add(&mut self, demand: &[u32], from: u32, to: u32) {
        for (m, &r) in demand.iter().enumerate() {
            if r == 0 {
                continue;
            }
            let row = &mut self.usage[m * self.horizon..(m + 1) * self.horizon];
            for u in &mut row[from as usize..to as usize] {
                *u += r;
            }
        }
    }

    /// Whether `demand` fits on top of the current usage during `from..to`.
    pub(crate) fn fits(&self, demand: &[u32], limits: &[u32], from: u32, to: u32) -> bool {
        demand.iter().zip(limits).enumerate().all(|(m, (&r, &cap))| {
            r == 0
                || self.usage[m * self.horizon + from as usize..m * self.horizon + to as usize]
                    .iter()
                    .all(|&u| u + r <= cap)
        })
    }

    pub(crate) fn clear(&mut self) {
        self.usage.iter_mut().for_each(|u| *u = 0);
    }
}

/// Serial schedule generation: tasks in `order` (which must be
/// precedence-consistent) are started at the earliest precedence- and
/// resource-feasible period. `None` if some task cannot finish by the
/// deadline.
pub fn serial_schedule<F: Scalar>(instance: &Instance<F>, order: &[usize]) -> Option<Schedule> {
    let deadline = instance.deadline();
    let mut profile = ResourceProfile::empty(instance.k(), deadline);
    let mut starts = vec![0u32; instance.n()];
    let mut done = vec![false; instance.n()];
    for &j in order {
        let task = &instance.tasks()[j];
        let mut earliest = 0;
        for &i in instance.predecessors(j) {
            if !done[i] {
                return None;
            }
            earliest = earliest.max(starts[i] + instance.tasks()[i].duration);
        }
        let latest = deadline.checked_sub(task.duration)?;
        let s = (earliest..=latest).find(|&s| profile.fits(&task.demand, instance.limits(), s, s + task.duration))?;
        profile.add(&task.demand, s, s + task.duration);
        starts[j] = s;
        done[j] = true;
    }
    Some(Schedule::new(starts))
}

/// JSON form used for traces and golden files: `{starts, npv, feasible}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub starts: Vec<u32>,
    pub npv: f64,
    pub feasible: bool,
}

impl ScheduleRecord {
    pub fn new<F: Scalar>(schedule: &Schedule, instance: &Instance<F>) -> Self {
        ScheduleRecord {
            starts: schedule.starts.clone(),
            npv: npv(schedule, instance).as_f64(),
            feasible: check_feasible(schedule, instance).is_ok(),
        }
    }
}
