//! Forward-backward decoding of a task permutation into a schedule.
//!
//! Tasks are taken in permutation order. For each task not yet placed, the
//! set made of the task and all of its (transitive) successors that are
//! still unplaced is formed, and the sign of the undiscounted sum of their
//! cash flows decides the direction:
//!
//! * non-negative sets are placed forward: the first task of the set (in
//!   permutation order) whose predecessors are all placed is started at the
//!   earliest precedence- and resource-feasible period, then the set is
//!   scanned again from the beginning;
//! * negative sets are placed backward from the deadline: the last task of
//!   the set whose successors are all placed is started at the latest
//!   feasible period, then the set is scanned again from the end.
//!
//! Tasks of a forward set that still wait for a predecessor outside the set
//! are left for a later set. If some task has no feasible period in its
//! window, the whole permutation falls back to serial earliest-start
//! scheduling, and ultimately to the serial schedule of the instance's
//! topological order, which [`Instance::ensure_solvable`] guarantees to fit.

use super::{serial_schedule, ResourceProfile, Schedule};
use crate::model::Instance;
use crate::scalar::Scalar;

/// Reusable decoding buffers for one instance.
pub struct Decoder<'a, F> {
    instance: &'a Instance<F>,
    profile: ResourceProfile,
    starts: Vec<u32>,
    placed: Vec<bool>,
    position: Vec<usize>,
    mark: Vec<u32>,
    stamp: u32,
    set: Vec<usize>,
    stack: Vec<usize>,
}

impl<'a, F: Scalar> Decoder<'a, F> {
    pub fn new(instance: &'a Instance<F>) -> Self {
        let n = instance.n();
        Decoder {
            instance,
            profile: ResourceProfile::empty(instance.k(), instance.deadline()),
            starts: vec![0; n],
            placed: vec![false; n],
            position: vec![0; n],
            mark: vec![0; n],
            stamp: 0,
            set: Vec::with_capacity(n),
            stack: Vec::with_capacity(n),
        }
    }

    /// Decodes a precedence-consistent permutation into a feasible schedule.
    ///
    /// # Panics
    /// If the instance fails [`Instance::ensure_solvable`].
    pub fn decode(&mut self, permutation: &[usize]) -> Schedule {
        if let Some(s) = self.forward_backward(permutation) {
            return s;
        }
        if let Some(s) = serial_schedule(self.instance, permutation) {
            return s;
        }
        serial_schedule(self.instance, self.instance.topological_order())
            .expect("instance has no serial schedule within its deadline")
    }

    fn forward_backward(&mut self, permutation: &[usize]) -> Option<Schedule> {
        let inst = self.instance;
        if permutation.len() != inst.n() {
            return None;
        }
        self.profile.clear();
        self.placed.iter_mut().for_each(|p| *p = false);
        for (k, &task) in permutation.iter().enumerate() {
            self.position[task] = k;
        }
        for &p in permutation {
            if self.placed[p] {
                continue;
            }
            self.collect_closure(p);
            let value: F = self.set.iter().map(|&t| inst.cashflow(t)).sum();
            if value >= F::zero() {
                self.place_forward()?;
            } else {
                self.place_backward()?;
            }
        }
        self.placed.iter().all(|&p| p).then(|| Schedule::new(self.starts.clone()))
    }

    fn collect_closure(&mut self, root: usize) {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        self.set.clear();
        self.stack.clear();
        self.stack.push(root);
        self.mark[root] = self.stamp;
        while let Some(t) = self.stack.pop() {
            if !self.placed[t] {
                self.set.push(t);
            }
            for &s in self.instance.successors(t) {
                if self.mark[s] != self.stamp {
                    self.mark[s] = self.stamp;
                    self.stack.push(s);
                }
            }
        }
        let position = &self.position;
        self.set.sort_unstable_by_key(|&t| position[t]);
    }

    /// `[earliest, latest]` start window from placed neighbours and the deadline.
    fn window(&self, t: usize) -> Option<(u32, u32)> {
        let inst = self.instance;
        let d = inst.duration(t);
        let earliest = inst
            .predecessors(t)
            .iter()
            .filter(|&&i| self.placed[i])
            .map(|&i| self.starts[i] + inst.duration(i))
            .max()
            .unwrap_or(0);
        let mut latest = inst.deadline().checked_sub(d)?;
        for &j in inst.successors(t) {
            if self.placed[j] {
                latest = latest.min(self.starts[j].checked_sub(d)?);
            }
        }
        (earliest <= latest).then_some((earliest, latest))
    }

    fn commit(&mut self, t: usize, start: u32) {
        let task = self.instance.task(t);
        self.profile.add(&task.demand, start, start + task.duration);
        self.starts[t] = start;
        self.placed[t] = true;
    }

    fn place_forward(&mut self) -> Option<()> {
        let inst = self.instance;
        'rescan: loop {
            for idx in 0..self.set.len() {
                let t = self.set[idx];
                if self.placed[t] || !inst.predecessors(t).iter().all(|&i| self.placed[i]) {
                    continue;
                }
                let (lo, hi) = self.window(t)?;
                let task = inst.task(t);
                let s = (lo..=hi).find(|&s| self.profile.fits(&task.demand, inst.limits(), s, s + task.duration))?;
                self.commit(t, s);
                continue 'rescan;
            }
            return Some(());
        }
    }

    fn place_backward(&mut self) -> Option<()> {
        let inst = self.instance;
        'rescan: loop {
            for idx in (0..self.set.len()).rev() {
                let t = self.set[idx];
                if self.placed[t] || !inst.successors(t).iter().all(|&j| self.placed[j]) {
                    continue;
                }
                let (lo, hi) = self.window(t)?;
                let task = inst.task(t);
                let s =
                    (lo..=hi).rev().find(|&s| self.profile.fits(&task.demand, inst.limits(), s, s + task.duration))?;
                self.commit(t, s);
                continue 'rescan;
            }
            return Some(());
        }
    }
}

/// One-shot decode; see [`Decoder`].
pub fn decode<F: Scalar>(permutation: &[usize], instance: &Instance<F>) -> Schedule {
    Decoder::new(instance).decode(permutation)
}
